#include "canal/app/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace canal::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& item : j.items()) {
        if (!ok.count(item.key())) fail(where, "unknown key \"" + item.key() + "\"");
    }
}

const json& need(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) fail(where, std::string("missing key \"") + key + "\"");
    return j.at(key);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(where, "expected a finite number");
    return x;
}

double number_or(const json& j, const std::string& where, const char* key, double fallback) {
    return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

int integer(const json& j, const std::string& where, int lo, int hi) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    const auto x = j.get<long long>();
    if (x < lo || x > hi) {
        fail(where, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(x);
}

bool boolean(const json& j, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected true or false");
    return j.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Vec vector_of(const json& j, const std::string& where, int n) {
    const auto v = numbers(j, where);
    if (static_cast<int>(v.size()) != n) fail(where, "expected " + std::to_string(n) + " components");
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = v[i];
    return out;
}

Interval interval(const json& j, const std::string& where) {
    const auto v = numbers(j, where);
    if (v.size() != 2) fail(where, "expected [lo, hi]");
    if (!(v[1] > v[0])) fail(where, "expected lo < hi");
    return {v[0], v[1]};
}

MatN<double> matrix(const json& j, const std::string& where, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) fail(where, "expected " + std::to_string(n) + " rows");
    MatN<double> m(n, n);
    for (int r = 0; r < n; ++r) m.row(r) = vector_of(j[r], where + "[" + std::to_string(r) + "]", n).transpose();
    return m;
}

PolyTrig poly_trig(const json& j, const std::string& where) {
    allow_keys(j, where, {"poly", "trig"});
    PolyTrig out;
    if (j.contains("poly")) out.poly = numbers(j.at("poly"), where + ".poly");
    if (j.contains("trig")) {
        const json& t = j.at("trig");
        if (!t.is_array()) fail(where + ".trig", "expected an array");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string w = where + ".trig[" + std::to_string(i) + "]";
            allow_keys(t[i], w, {"omega", "cos", "sin"});
            out.trig.push_back({number(need(t[i], w, "omega"), w + ".omega"), number_or(t[i], w, "cos", 0.0),
                                number_or(t[i], w, "sin", 0.0)});
        }
    }
    return out;
}

CenterCurve build_curve(const json& j, int n) {
    const std::string where = "curve";
    if (!j.is_object()) fail(where, "expected an object");
    const json& kind_json = need(j, where, "kind");
    if (!kind_json.is_string()) fail(where + ".kind", "expected a string");
    const std::string kind = kind_json.get<std::string>();
    auto finish = [&](CenterCurve c) {
        if (j.contains("frame_override")) {
            const MatN<double> f = matrix(j.at("frame_override"), where + ".frame_override", n);
            Frame frame;
            for (int r = 0; r < n; ++r) frame.push_back(f.row(r).transpose());
            c = c.with_frame_override(std::move(frame));
        }
        if (j.contains("rigid_motion")) {
            const json& m = j.at("rigid_motion");
            allow_keys(m, where + ".rigid_motion", {"rotation", "shift"});
            const MatN<double> R = m.contains("rotation") ? matrix(m.at("rotation"), where + ".rigid_motion.rotation", n)
                                                           : MatN<double>(MatN<double>::Identity(n, n));
            const Vec b = m.contains("shift") ? vector_of(m.at("shift"), where + ".rigid_motion.shift", n)
                                              : Vec(Vec::Zero(n));
            c = rigid_transform(c, R, b);
        }
        return c;
    };
    if (kind == "line") {
        allow_keys(j, where, {"kind", "point", "direction", "domain", "frame_override", "rigid_motion"});
        const Vec p = j.contains("point") ? vector_of(j.at("point"), where + ".point", n) : Vec(Vec::Zero(n));
        const Vec d = j.contains("direction") ? vector_of(j.at("direction"), where + ".direction", n)
                                              : basis_vector(n, 0);
        return finish(make_line(p, d, interval(need(j, where, "domain"), where + ".domain")));
    }
    if (kind == "circle") {
        allow_keys(j, where, {"kind", "radius", "domain", "frame_override", "rigid_motion"});
        const double R = number(need(j, where, "radius"), where + ".radius");
        if (!(R > 0.0)) fail(where + ".radius", "must be positive");
        const Interval dom = j.contains("domain") ? interval(j.at("domain"), where + ".domain")
                                                  : Interval{0.0, 2.0 * std::numbers::pi * R};
        return finish(make_circle(n, R, dom));
    }
    if (kind == "quad_helix") {
        allow_keys(j, where, {"kind", "a", "b", "c", "domain", "frame_override", "rigid_motion"});
        if (n != 4) fail(where, "quad_helix lives in E^4");
        return finish(make_quad_helix(number(need(j, where, "a"), where + ".a"), number(need(j, where, "b"), where + ".b"),
                                      number(need(j, where, "c"), where + ".c"),
                                      interval(need(j, where, "domain"), where + ".domain")));
    }
    if (kind == "poly_trig") {
        allow_keys(j, where, {"kind", "components", "domain", "samples", "frame_override", "rigid_motion"});
        const json& comps = need(j, where, "components");
        if (!comps.is_array() || static_cast<int>(comps.size()) != n) {
            fail(where + ".components", "expected " + std::to_string(n) + " components");
        }
        std::vector<PolyTrig> parts;
        for (int i = 0; i < n; ++i) parts.push_back(poly_trig(comps[i], where + ".components[" + std::to_string(i) + "]"));
        const int samples = j.contains("samples") ? integer(j.at("samples"), where + ".samples", 8, 1 << 16) : 256;
        const CenterCurve raw = make_poly_trig(std::move(parts), interval(need(j, where, "domain"), where + ".domain"));
        return finish(reparametrize_arclength(raw, samples));
    }
    fail(where + ".kind", "unknown curve kind \"" + kind + "\"");
}

RadiusProfile build_radius(const json& j, const Interval& v1, std::optional<CatenoidProfile>* catenoid) {
    const std::string where = "radius";
    if (!j.is_object()) fail(where, "expected an object");
    const json& kind_json = need(j, where, "kind");
    if (!kind_json.is_string()) fail(where + ".kind", "expected a string");
    const std::string kind = kind_json.get<std::string>();
    if (kind == "constant") {
        allow_keys(j, where, {"kind", "lambda"});
        const double lambda = number(need(j, where, "lambda"), where + ".lambda");
        if (!(lambda > 0.0)) fail(where + ".lambda", "must be positive");
        return RadiusProfile::constant(lambda);
    }
    if (kind == "linear") {
        allow_keys(j, where, {"kind", "slope", "intercept"});
        return RadiusProfile::linear(number(need(j, where, "slope"), where + ".slope"),
                                     number(need(j, where, "intercept"), where + ".intercept"));
    }
    if (kind == "poly_trig") {
        allow_keys(j, where, {"kind", "poly", "trig"});
        json terms = j;
        terms.erase("kind");
        return RadiusProfile::poly_trig(poly_trig(terms, where));
    }
    if (kind == "catenoid") {
        allow_keys(j, where, {"kind", "a", "rho0", "step", "branch"});
        const double a = number(need(j, where, "a"), where + ".a");
        const double rho0 = number_or(j, where, "rho0", a);
        const double step = number_or(j, where, "step", 1e-3);
        const int branch = j.contains("branch") ? integer(j.at("branch"), where + ".branch", -1, 1) : 1;
        if (branch == 0) fail(where + ".branch", "must be +1 or -1");
        if (!(step > 0.0)) fail(where + ".step", "must be positive");
        CatenoidProfile prof = solve_catenoid(a, rho0, v1, step, branch);
        RadiusProfile out = prof.profile();
        if (catenoid) *catenoid = std::move(prof);
        return out;
    }
    fail(where + ".kind", "unknown radius kind \"" + kind + "\"");
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t{
        {"identity", 1e-9},
        {"det_g_factorization", 1e-9},
        {"principal_eigen", 1e-8},
        {"trace_det_S", 1e-10},
        {"oracle_fd", 1e-4},
        {"oracle_exact", 1e-6},
        {"oracle_normal", 1e-5},
        {"oracle_identity", 5e-4},
        {"sphere_membership", 1e-10},
        {"coefficient_norm", 1e-12},
        {"normal_offset", 1e-6},
        {"weingarten", 1e-6},
        {"linear_weingarten", 1e-9},
        {"linear_weingarten_oracle", 5e-4},
        {"catenoid_H", 1e-6},
    };
    return t;
}

double RunConfig::tolerance(const std::string& check) const {
    const auto it = tolerances.find(check);
    if (it == tolerances.end()) throw ContractError("unknown tolerance \"" + check + "\"");
    return it->second * tolerance_scale;
}

const CanalPatch& RunConfig::require_patch() const {
    if (!patch) throw ConfigError("config: this command needs \"curve\" and \"radius\"");
    return *patch;
}

std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception&) {
            fail("grid", "cannot parse \"" + text + "\"");
        }
        if (used != part.size() || v < 1 || v > 4096) fail("grid", "bad node count in \"" + text + "\"");
        out.push_back(v);
    }
    if (out.size() < 2 || out.size() > 3) fail("grid", "expected N1xN2xN3 or N1xN2");
    return out;
}

CanalPatch build_patch(const json& j, int n, std::optional<CatenoidProfile>* catenoid) {
    CenterCurve curve = build_curve(need(j, "config", "curve"), n);
    std::vector<Interval> domain;
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        if (!d.is_object()) fail("domain", "expected {\"v1\": [lo, hi], ...}");
        for (const auto& item : d.items()) {
            const std::string& k = item.key();
            bool known = false;
            for (int i = 1; i < n; ++i) known = known || k == "v" + std::to_string(i);
            if (!known) fail("domain", "unknown axis \"" + k + "\"");
        }
        for (int i = 1; i < n; ++i) {
            const std::string key = "v" + std::to_string(i);
            if (d.contains(key)) {
                domain.push_back(interval(d.at(key), "domain." + key));
            } else if (i == 1) {
                domain.push_back(curve.domain());
            } else {
                domain.push_back({0.0, 2.0 * std::numbers::pi});
            }
        }
        const Interval& v1 = domain[0];
        if (v1.lo < curve.domain().lo || v1.hi > curve.domain().hi) fail("domain.v1", "outside the curve domain");
    }
    const Interval v1 = domain.empty() ? curve.domain() : domain[0];
    RadiusProfile profile = build_radius(need(j, "config", "radius"), v1, catenoid);
    return make_patch(std::move(curve), std::move(profile), std::move(domain));
}

RunConfig parse_config(const json& j) {
    allow_keys(j, "config",
               {"n", "curve", "radius", "domain", "grid", "random_points", "seed", "fd_step", "tolerance_scale",
                "tolerances", "exact_oracle", "outputs", "slice_v3", "wrap", "fault", "catenoid"});
    RunConfig c;
    c.n = j.contains("n") ? integer(j.at("n"), "n", 3, 4) : 4;

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        allow_keys(g, "grid", {"nodes", "margin"});
        if (g.contains("nodes")) {
            const json& nodes = g.at("nodes");
            if (!nodes.is_array() || nodes.size() < 2 || nodes.size() > 3) fail("grid.nodes", "expected 2 or 3 counts");
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                c.grid.nodes[i] = integer(nodes[i], "grid.nodes[" + std::to_string(i) + "]", 1, 4096);
            }
        }
        c.grid.margin = number_or(g, "grid", "margin", 0.0);
        if (c.grid.margin < 0.0 || c.grid.margin >= 0.5) fail("grid.margin", "must lie in [0, 0.5)");
    }
    if (j.contains("random_points")) c.random_points = integer(j.at("random_points"), "random_points", 1, 1000000);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) fail("seed", "expected a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.fd_step = number_or(j, "config", "fd_step", kDefaultRelativeStep);
    if (!(c.fd_step > 0.0 && c.fd_step < 0.1)) fail("fd_step", "must lie in (0, 0.1)");
    c.tolerance_scale = number_or(j, "config", "tolerance_scale", 1.0);
    if (!(c.tolerance_scale > 0.0)) fail("tolerance_scale", "must be positive");
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) fail("tolerances", "expected an object");
        for (const auto& item : t.items()) {
            if (!c.tolerances.count(item.key())) fail("tolerances", "unknown check \"" + item.key() + "\"");
            const double v = number(item.value(), "tolerances." + item.key());
            if (!(v > 0.0)) fail("tolerances." + item.key(), "must be positive");
            c.tolerances[item.key()] = v;
        }
    }
    if (j.contains("exact_oracle")) c.exact_oracle = boolean(j.at("exact_oracle"), "exact_oracle");
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        if (!o.is_array()) fail("outputs", "expected an array");
        for (std::size_t i = 0; i < o.size(); ++i) {
            const std::string w = "outputs[" + std::to_string(i) + "]";
            allow_keys(o[i], w, {"format", "path"});
            const json& f = need(o[i], w, "format");
            if (!f.is_string()) fail(w + ".format", "expected a string");
            OutputSpec spec{f.get<std::string>(), "-"};
            if (spec.format != "csv" && spec.format != "json" && spec.format != "obj") {
                fail(w + ".format", "expected csv, json or obj");
            }
            if (o[i].contains("path")) {
                if (!o[i].at("path").is_string()) fail(w + ".path", "expected a string");
                spec.path = o[i].at("path").get<std::string>();
            }
            c.outputs.push_back(spec);
        }
    }
    if (j.contains("slice_v3")) c.slice_v3 = number(j.at("slice_v3"), "slice_v3");
    if (j.contains("wrap")) c.wrap = boolean(j.at("wrap"), "wrap");
    if (j.contains("fault")) {
        const json& f = j.at("fault");
        allow_keys(f, "fault", {"closed_K_relative"});
        c.fault_K = number_or(f, "fault", "closed_K_relative", 0.0);
    }
    if (j.contains("catenoid")) {
        const json& k = j.at("catenoid");
        allow_keys(k, "catenoid", {"a", "rho0", "span", "step", "branch", "verify"});
        CatenoidSpec s;
        s.a = number_or(k, "catenoid", "a", 1.0);
        s.rho0 = number_or(k, "catenoid", "rho0", s.a);
        if (k.contains("span")) s.span = interval(k.at("span"), "catenoid.span");
        s.step = number_or(k, "catenoid", "step", 1e-3);
        if (!(s.step > 0.0)) fail("catenoid.step", "must be positive");
        if (k.contains("branch")) s.branch = integer(k.at("branch"), "catenoid.branch", -1, 1);
        if (s.branch == 0) fail("catenoid.branch", "must be +1 or -1");
        if (k.contains("verify")) s.verify = boolean(k.at("verify"), "catenoid.verify");
        c.catenoid = s;
    }

    const bool has_curve = j.contains("curve"), has_radius = j.contains("radius");
    if (has_curve != has_radius) fail("config", "\"curve\" and \"radius\" go together");
    if (has_curve) {
        c.patch_json = json::object();
        for (const char* key : {"curve", "radius", "domain"}) {
            if (j.contains(key)) c.patch_json[key] = j.at(key);
        }
        c.patch_json["n"] = c.n;
        try {
            c.patch = build_patch(j, c.n, &c.catenoid_profile);
        } catch (const ContractError& e) {
            throw ConfigError(std::string("patch: ") + e.what());
        }
    } else if (j.contains("domain")) {
        fail("domain", "given without a curve");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in \"" + path + "\": " + e.what());
    }
    return parse_config(j);
}

}  // namespace canal::app
