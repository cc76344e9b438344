#pragma once

// Run configuration for the command-line front end. Parsing is strict:
// unknown keys, wrong types and out-of-range values raise ConfigError.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "canal/canal.hpp"
#include "canal/classify.hpp"
#include "canal/grid.hpp"
#include "canal/oracle.hpp"

namespace canal::app {

struct OutputSpec {
    std::string format;  // csv | json | obj
    std::string path;    // empty or "-" for stdout
};

struct CatenoidSpec {
    double a = 1.0;
    double rho0 = 1.0;
    Interval span{0.0, 2.0};
    double step = 1e-3;
    int branch = 1;
    bool verify = true;
};

// Default tolerance for every named check; `tolerances` overrides entries.
const std::map<std::string, double>& default_tolerances();

struct RunConfig {
    int n = 4;
    nlohmann::json patch_json;  // curve, radius and domain as given
    std::optional<CanalPatch> patch;
    std::optional<CatenoidProfile> catenoid_profile;  // when the radius is a catenoid
    GridSpec grid;
    int random_points = 200;
    std::uint64_t seed = 1;
    double fd_step = kDefaultRelativeStep;
    double tolerance_scale = 1.0;
    std::map<std::string, double> tolerances = default_tolerances();
    bool exact_oracle = true;
    std::vector<OutputSpec> outputs;
    std::optional<double> slice_v3;
    bool wrap = false;
    // Test fixture: closed-form K is multiplied by (1 + fault_K) before the
    // oracle comparison in verify.
    double fault_K = 0.0;
    std::optional<CatenoidSpec> catenoid;  // inputs for the catenoid command

    double tolerance(const std::string& check) const;
    const CanalPatch& require_patch() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// "20x20x20" (or "N1xN2" for n = 3)
std::vector<int> parse_grid(const std::string& text);

// Builds the patch from its JSON description (curve, radius, n, domain).
CanalPatch build_patch(const nlohmann::json& j, int n, std::optional<CatenoidProfile>* catenoid = nullptr);

}  // namespace canal::app
