#pragma once

// Subcommands of the command-line tool. Every command builds its outputs in
// memory; nothing is written unless the whole command succeeds.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "canal/app/config.hpp"

namespace canal::app {

enum ExitCode { kExitPass = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitNumeric = 3 };

struct Artifact {
    OutputSpec spec;
    std::string content;
};

struct CommandResult {
    int exit_code = kExitPass;
    std::vector<Artifact> artifacts;
};

// %.17g
std::string format_double(double x);

CommandResult cmd_sample(const RunConfig& config);
CommandResult cmd_curvature(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_classify(const RunConfig& config);
CommandResult cmd_catenoid(const RunConfig& config);

// The verify battery as JSON: {"schema": 1, "checks": [{check, max_residual,
// tolerance, pass, required, ...}], "pass": ...}.
nlohmann::json verify_report(const RunConfig& config);

// Files are written to a temporary sibling and renamed; "-" or an empty path
// goes to `out`.
void write_artifacts(const std::vector<Artifact>& artifacts, std::ostream& out);

// Dispatches by name, writes the artifacts and maps errors to exit codes with
// a JSON error report on `err`.
int run_command(const std::string& name, const RunConfig& config, std::ostream& out, std::ostream& err);

// JSON error report for an exception escaping a command.
nlohmann::json error_report(const std::string& kind, const std::string& message);

}  // namespace canal::app
