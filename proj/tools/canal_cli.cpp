#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "canal/app/commands.hpp"

using canal::app::error_report;
using nlohmann::json;

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    std::string grid;
    std::optional<std::uint64_t> seed;
    std::optional<double> fd_step;
    std::optional<double> tolerance_scale;
    // catenoid
    std::optional<double> a, rho0, step;
    std::optional<int> branch;
    std::string span;
    bool no_verify = false;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw canal::ConfigError("cannot open config file \"" + path + "\"");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw canal::ConfigError("malformed JSON in \"" + path + "\": " + e.what());
    }
}

// Command-line flags override the config file.
json merged_config(const std::string& command, const Flags& f) {
    json j = f.config.empty() ? json::object() : load_json(f.config);
    if (!j.is_object()) throw canal::ConfigError("config: expected a JSON object");
    if (!f.grid.empty()) {
        j["grid"]["nodes"] = canal::app::parse_grid(f.grid);
    }
    if (f.seed) j["seed"] = *f.seed;
    if (f.fd_step) j["fd_step"] = *f.fd_step;
    if (f.tolerance_scale) j["tolerance_scale"] = *f.tolerance_scale;
    if (!f.out.empty() || !f.format.empty()) {
        std::string format = f.format;
        if (format.empty()) {
            const auto dot = f.out.rfind('.');
            format = dot == std::string::npos ? "" : f.out.substr(dot + 1);
            if (format != "csv" && format != "json" && format != "obj") {
                throw canal::ConfigError("--format is required when --out has no csv, json or obj extension");
            }
        }
        j["outputs"] = json::array({{{"format", format}, {"path", f.out.empty() ? "-" : f.out}}});
    }
    if (command == "catenoid") {
        json& k = j["catenoid"];
        if (!k.is_object()) k = json::object();
        if (f.a) k["a"] = *f.a;
        if (f.rho0) k["rho0"] = *f.rho0;
        if (f.step) k["step"] = *f.step;
        if (f.branch) k["branch"] = *f.branch;
        if (f.no_verify) k["verify"] = false;
        if (!f.span.empty()) {
            const auto colon = f.span.find(':');
            if (colon == std::string::npos) throw canal::ConfigError("--span expects lo:hi");
            try {
                k["span"] = {std::stod(f.span.substr(0, colon)), std::stod(f.span.substr(colon + 1))};
            } catch (const std::exception&) {
                throw canal::ConfigError("--span expects lo:hi");
            }
        }
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Canal hypersurfaces in E^4: sampling, curvature, verification and classification"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON run configuration");
        sub->add_option("--out", f.out, "output file (default stdout)");
        sub->add_option("--format", f.format, "csv, json or obj")->check(CLI::IsMember({"csv", "json", "obj"}));
        sub->add_option("--grid", f.grid, "lattice size N1xN2xN3");
        sub->add_option("--seed", f.seed, "seed for random points");
        sub->add_option("--fd-step", f.fd_step, "oracle step as a fraction of each axis span");
        sub->add_option("--tolerance-scale", f.tolerance_scale, "multiplies every check tolerance");
    };
    const std::pair<const char*, const char*> commands[] = {
        {"sample", "evaluate the canal map on a lattice (csv, or obj for n = 3)"},
        {"curvature", "closed-form K, H and principal curvatures on a lattice"},
        {"verify", "run the invariant battery against the numeric oracle"},
        {"classify", "flat, minimal and Weingarten verdicts"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        common(sub);
    }
    auto* cat = app.add_subcommand("catenoid", "integrate a generalized catenoid profile");
    common(cat);
    cat->add_option("--a", f.a, "throat radius");
    cat->add_option("--rho0", f.rho0, "starting radius (default a)");
    cat->add_option("--span", f.span, "v1 interval lo:hi");
    cat->add_option("--step", f.step, "RK4 step");
    cat->add_option("--branch", f.branch, "sign of rho' off the throat");
    cat->add_flag("--no-verify", f.no_verify, "skip the mean curvature check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_report("usage", e.what()).dump() << "\n";
        return canal::app::kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    canal::app::RunConfig config;
    try {
        config = canal::app::parse_config(merged_config(command, f));
    } catch (const canal::ConfigError& e) {
        std::cerr << error_report("config", e.what()).dump() << "\n";
        return canal::app::kExitConfig;
    } catch (const canal::ContractError& e) {
        std::cerr << error_report("config", e.what()).dump() << "\n";
        return canal::app::kExitConfig;
    } catch (const canal::NumericError& e) {
        std::cerr << error_report("numeric", e.what()).dump() << "\n";
        return canal::app::kExitNumeric;
    }
    return canal::app::run_command(command, config, std::cout, std::cerr);
}
