#include "canal/app/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "canal/curvature4.hpp"
#include "canal/oracle.hpp"
#include "canal/parallel.hpp"

namespace canal::app {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

// Outputs requested by the config, or the command default on stdout.
std::vector<OutputSpec> outputs_for(const RunConfig& c, std::initializer_list<const char*> allowed,
                                    const char* fallback) {
    std::vector<OutputSpec> out = c.outputs.empty() ? std::vector<OutputSpec>{{fallback, "-"}} : c.outputs;
    for (const auto& o : out) {
        if (std::find(allowed.begin(), allowed.end(), o.format) == allowed.end()) {
            throw ConfigError("outputs: format \"" + o.format + "\" is not available for this command");
        }
    }
    return out;
}

void require_e4(const RunConfig& c) {
    if (c.n != 4) throw ConfigError("this command needs n = 4");
}

std::string csv_row(std::initializer_list<double> values) {
    std::string s;
    bool first = true;
    for (double v : values) {
        if (!first) s += ',';
        s += format_double(v);
        first = false;
    }
    s += '\n';
    return s;
}

json point_json(const Params3& p) { return json::array({p[0], p[1], p[2]}); }

// Cell-centered nodes, or closed periodic nodes lo + j span / N when wrapping.
std::vector<double> sample_nodes(const Interval& axis, int count, bool wrap) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        out[j] = axis.lo + (wrap ? j : j + 0.5) * axis.span() / count;
    }
    return out;
}

json header(const char* command, const RunConfig& c) {
    json j;
    j["schema"] = 1;
    j["command"] = command;
    if (c.patch) j["patch"] = c.patch_json;
    return j;
}

// NaN-propagating maximum.
void take_max(double& acc, double x) {
    if (std::isnan(x) || std::isnan(acc)) {
        acc = std::numeric_limits<double>::quiet_NaN();
    } else {
        acc = std::max(acc, x);
    }
}

}  // namespace

CommandResult cmd_sample(const RunConfig& c) {
    const CanalPatch& patch = c.require_patch();
    const auto outs = outputs_for(c, {"csv", "obj"}, "csv");
    const int n = patch.n;
    const int m = patch.params();

    std::vector<std::vector<double>> axes;
    for (int i = 0; i < m; ++i) {
        const bool fixed = n == 4 && i == 2 && c.slice_v3.has_value();
        axes.push_back(fixed ? std::vector<double>{*c.slice_v3} : sample_nodes(patch.domain[i], c.grid.nodes[i], c.wrap));
    }
    std::vector<std::vector<double>> params;
    if (m == 2) {
        for (double a : axes[0]) for (double b : axes[1]) params.push_back({a, b});
    } else {
        for (double a : axes[0]) for (double b : axes[1]) for (double d : axes[2]) params.push_back({a, b, d});
    }
    std::vector<Vec> points(params.size());
    parallel_for(params.size(), [&](std::size_t i) { points[i] = canal_point(patch, params[i]); });

    if (c.wrap) {
        if (n != 3) throw ConfigError("wrap: only for n = 3 meshes");
        for (double v2 : axes[1]) {
            const std::vector<double> lo{patch.domain[0].lo, v2}, hi{patch.domain[0].hi, v2};
            const double gap = (canal_point(patch, lo) - canal_point(patch, hi)).norm();
            if (!(gap <= 1e-9 * std::max(1.0, canal_point(patch, lo).norm()))) {
                throw ConfigError("wrap: the patch does not close up along v1");
            }
        }
    }

    CommandResult res;
    for (const auto& o : outs) {
        std::string text;
        if (o.format == "csv") {
            for (int i = 1; i <= m; ++i) text += "v" + std::to_string(i) + ",";
            for (int i = 1; i <= n; ++i) text += "x" + std::to_string(i) + (i < n ? "," : "\n");
            for (std::size_t r = 0; r < params.size(); ++r) {
                for (double p : params[r]) text += format_double(p) + ",";
                for (int i = 0; i < n; ++i) text += format_double(points[r][i]) + (i + 1 < n ? "," : "\n");
            }
        } else {
            if (n != 3) throw ConfigError("obj output needs n = 3; use csv (optionally with slice_v3) for n = 4");
            const int n1 = static_cast<int>(axes[0].size()), n2 = static_cast<int>(axes[1].size());
            if (n1 < 2 || n2 < 2) throw ConfigError("obj output needs at least 2 nodes per axis");
            for (const auto& x : points) {
                text += "v " + format_double(x[0]) + " " + format_double(x[1]) + " " + format_double(x[2]) + "\n";
            }
            auto id = [n2](int i, int j) { return i * n2 + j + 1; };
            const int q1 = c.wrap ? n1 : n1 - 1, q2 = c.wrap ? n2 : n2 - 1;
            for (int i = 0; i < q1; ++i) {
                for (int j = 0; j < q2; ++j) {
                    const int a = id(i, j), b = id((i + 1) % n1, j), d = id((i + 1) % n1, (j + 1) % n2),
                              e = id(i, (j + 1) % n2);
                    text += "f " + std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(d) + "\n";
                    text += "f " + std::to_string(a) + " " + std::to_string(d) + " " + std::to_string(e) + "\n";
                }
            }
        }
        res.artifacts.push_back({o, std::move(text)});
    }
    return res;
}

CommandResult cmd_curvature(const RunConfig& c) {
    require_e4(c);
    const CanalPatch& patch = c.require_patch();
    const auto outs = outputs_for(c, {"csv", "json"}, "csv");
    const auto grid = lattice_points(patch, c.grid);
    std::vector<CurvatureReport> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { rows[i] = curvature_report(patch, grid[i]); });

    CommandResult res;
    for (const auto& o : outs) {
        std::string text;
        if (o.format == "csv") {
            text = "v1,v2,v3,K,H,kappa1,kappa2,kappa3,identity_residual\n";
            for (const auto& r : rows) {
                text += csv_row({r.location[0], r.location[1], r.location[2], r.K, r.H, r.principal.k1,
                                 r.principal.k2, r.principal.k3, r.identity_residual});
            }
        } else {
            json j = header("curvature", c);
            j["points"] = rows.size();
            auto extrema = [&](auto get) {
                json e;
                if (rows.empty()) return json(nullptr);
                std::size_t lo = 0, hi = 0;
                for (std::size_t i = 1; i < rows.size(); ++i) {
                    if (get(rows[i]) < get(rows[lo])) lo = i;
                    if (get(rows[i]) > get(rows[hi])) hi = i;
                }
                e["min"] = get(rows[lo]);
                e["argmin"] = point_json(rows[lo].location);
                e["max"] = get(rows[hi]);
                e["argmax"] = point_json(rows[hi].location);
                return e;
            };
            j["K"] = extrema([](const CurvatureReport& r) { return r.K; });
            j["H"] = extrema([](const CurvatureReport& r) { return r.H; });
            j["kappa3"] = extrema([](const CurvatureReport& r) { return r.principal.k3; });
            j["identity_residual"] = extrema([](const CurvatureReport& r) { return r.identity_residual; });
            text = j.dump(2) + "\n";
        }
        res.artifacts.push_back({o, std::move(text)});
    }
    return res;
}

namespace {

struct PointChecks {
    double identity = 0, det_g = 0, principal = 0, trace_det = 0;
    double oracle_fd = 0, oracle_exact = 0, oracle_normal = 0, oracle_identity = 0;
    double sphere = 0, coeff = 0, offset = 0;
    double K = 0, H = 0, K_oracle = 0, H_oracle = 0;
};

PointChecks check_point(const RunConfig& c, const CanalPatch& patch, const ImmersionProbe& fd,
                        const ImmersionProbe* exact, const Params3& p) {
    PointChecks out;
    const FrenetData fr = frenet_apparatus(patch.curve, p[0]);
    const RadiusJet r = patch.profile(p[0]);
    const FormsBundle fb = forms(fr, r, p[1], p[2]);
    const double K = gaussian_curvature(fr, r, p[1], p[2]);
    const double H = mean_curvature(fr, r, p[1], p[2]);
    out.K = K;
    out.H = H;
    out.identity = identity_residual(K, H, r.rho);

    out.det_g = std::abs(determinant(fb.g) - fb.det_g) / std::abs(fb.det_g);

    std::array<double, 3> closed{-1.0 / r.rho, -1.0 / r.rho, K * r.rho * r.rho};
    std::sort(closed.begin(), closed.end());
    const Eigen3 e = eig_shape3(fb.S);
    const std::array<double, 3> eig{e.k1, e.k2, e.k3};
    for (int i = 0; i < 3; ++i) take_max(out.principal, std::abs(closed[i] - eig[i]) / std::max(1.0, std::abs(eig[i])));
    out.trace_det = std::max(std::abs(fb.S.trace() - 3.0 * H) / std::max(1.0, std::abs(3.0 * H)),
                             std::abs(determinant(fb.S) - K) / std::max(1.0, std::abs(K)));

    const double Kc = K * (1.0 + c.fault_K);
    auto agreement = [&](const OracleForms& o) {
        return std::max(std::abs(o.K - Kc) / std::max(std::abs(Kc), std::pow(r.rho, -3.0)),
                        std::abs(o.H - H) / std::max(std::abs(H), 1.0 / r.rho));
    };
    const std::vector<double> at(p.begin(), p.end());
    const OracleForms o = oracle_forms(fd, at, &fb.N);
    out.K_oracle = o.K;
    out.H_oracle = o.H;
    out.oracle_fd = agreement(o);
    out.oracle_normal = (o.N - fb.N).cwiseAbs().maxCoeff();
    out.oracle_identity = identity_residual(o.K, o.H, r.rho);
    if (exact) out.oracle_exact = agreement(oracle_forms(*exact, at, &fb.N));

    const Vec X = canal_point(patch, at);
    const Vec offset = X - patch.curve.position(p[0]);
    out.sphere = std::abs(offset.squaredNorm() - r.rho * r.rho) / (r.rho * r.rho);
    const std::vector<double> angles{p[1], p[2]};
    const auto a = offset_coefficients(r, angles, 4);
    double sum = 0.0;
    for (double x : a) sum += x * x;
    out.coeff = std::abs(sum - r.rho * r.rho) / (r.rho * r.rho);
    const SurfaceJet jet = fd_jet(fd, at);
    for (const auto& d : jet.d1) take_max(out.offset, std::abs(offset.dot(d)) / (r.rho * d.norm()));
    return out;
}

json check_json(const std::string& name, double max_residual, double tolerance, bool required,
                const Params3* where = nullptr, std::size_t points = 0) {
    json j;
    j["check"] = name;
    j["max_residual"] = max_residual;
    j["tolerance"] = tolerance;
    j["pass"] = max_residual <= tolerance;
    j["required"] = required;
    if (points) j["points"] = points;
    if (where) j["argmax"] = point_json(*where);
    return j;
}

}  // namespace

json verify_report(const RunConfig& c) {
    require_e4(c);
    const CanalPatch& patch = c.require_patch();
    const double margin = std::max(c.grid.margin, 2.5 * c.fd_step);
    const auto points = random_points(patch, c.random_points, c.seed, margin);

    ImmersionProbe fd = make_probe(
        4, [&patch](std::span<const double> a) { return canal_point(patch, a); }, patch.domain, {false, true, true},
        c.fd_step);
    ImmersionProbe exact = fd;
    exact.mode = ProbeMode::ExactTaylor;
    exact.exact = [&patch](std::span<const double> a) { return canal_jet(patch, a); };

    std::vector<PointChecks> rows(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        rows[i] = check_point(c, patch, fd, c.exact_oracle ? &exact : nullptr, points[i]);
    });

    json checks = json::array();
    auto add_pointwise = [&](const std::string& name, double PointChecks::*field, bool required = true) {
        double worst = 0.0;
        std::size_t at = 0;
        bool nan = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double v = rows[i].*field;
            if (std::isnan(v)) {
                if (!nan) at = i;
                nan = true;
            } else if (!nan && v > worst) {
                worst = v;
                at = i;
            }
        }
        if (nan) worst = std::numeric_limits<double>::quiet_NaN();
        checks.push_back(check_json(name, worst, c.tolerance(name), required, rows.empty() ? nullptr : &points[at],
                                    rows.size()));
    };
    add_pointwise("identity", &PointChecks::identity);
    add_pointwise("det_g_factorization", &PointChecks::det_g);
    add_pointwise("principal_eigen", &PointChecks::principal);
    add_pointwise("trace_det_S", &PointChecks::trace_det);
    add_pointwise("oracle_fd", &PointChecks::oracle_fd);
    if (c.exact_oracle) add_pointwise("oracle_exact", &PointChecks::oracle_exact);
    add_pointwise("oracle_normal", &PointChecks::oracle_normal);
    add_pointwise("oracle_identity", &PointChecks::oracle_identity);
    add_pointwise("sphere_membership", &PointChecks::sphere);
    add_pointwise("coefficient_norm", &PointChecks::coeff);
    add_pointwise("normal_offset", &PointChecks::offset);

    const bool tubular = patch.profile.kind() == RadiusKind::Constant;
    for (auto pair : {WeingartenPair::P12, WeingartenPair::P13, WeingartenPair::P23}) {
        const double tol = c.tolerance("weingarten");
        const WeingartenResult w = weingarten_check(patch, points, pair, kWeingartenStep, tol);
        const bool required = pair == WeingartenPair::P23 || tubular;
        checks.push_back(check_json(std::string("weingarten_") + to_string(pair), w.stats.max, tol, required,
                                    &w.stats.argmax, w.stats.count));
    }
    if (tubular) {
        const double lambda = patch.profile.constant_value();
        std::vector<double> K, H, Ko, Ho;
        for (const auto& r : rows) {
            K.push_back(r.K);
            H.push_back(r.H);
            Ko.push_back(r.K_oracle);
            Ho.push_back(r.H_oracle);
        }
        const ResidualStats closed = linear_weingarten_check(lambda, K, H, points);
        const ResidualStats oracle = linear_weingarten_check(lambda, Ko, Ho, points);
        checks.push_back(check_json("linear_weingarten", closed.max, c.tolerance("linear_weingarten"), true,
                                    &closed.argmax, closed.count));
        checks.push_back(check_json("linear_weingarten_oracle", oracle.max,
                                    c.tolerance("linear_weingarten_oracle"), true, &oracle.argmax, oracle.count));
    }

    bool pass = true;
    for (const auto& ch : checks) {
        if (ch["required"].get<bool>() && !ch["pass"].get<bool>()) pass = false;
    }
    json j = header("verify", c);
    j["seed"] = c.seed;
    j["random_points"] = points.size();
    j["fd_step"] = c.fd_step;
    j["tolerance_scale"] = c.tolerance_scale;
    if (c.fault_K != 0.0) j["fault_closed_K_relative"] = c.fault_K;
    j["checks"] = checks;
    j["pass"] = pass;
    return j;
}

CommandResult cmd_verify(const RunConfig& c) {
    const auto outs = outputs_for(c, {"json"}, "json");
    const json report = verify_report(c);
    CommandResult res;
    res.exit_code = report["pass"].get<bool>() ? kExitPass : kExitCheckFailed;
    for (const auto& o : outs) res.artifacts.push_back({o, report.dump(2) + "\n"});
    return res;
}

CommandResult cmd_classify(const RunConfig& c) {
    require_e4(c);
    const CanalPatch& patch = c.require_patch();
    const auto outs = outputs_for(c, {"json"}, "json");
    const auto grid = lattice_points(patch, c.grid);
    const ClassificationVerdict v = classify(patch, grid);
    json j = header("classify", c);
    j["grid"] = {{"nodes", c.grid.nodes}, {"points", grid.size()}};
    j["verdict"] = to_json(v);
    CommandResult res;
    for (const auto& o : outs) res.artifacts.push_back({o, j.dump(2) + "\n"});
    return res;
}

CommandResult cmd_catenoid(const RunConfig& c) {
    const CatenoidSpec s = c.catenoid.value_or(CatenoidSpec{});
    const auto outs = outputs_for(c, {"csv", "json"}, "csv");
    const CatenoidProfile prof = solve_catenoid(s.a, s.rho0, s.span, s.step, s.branch);

    json checks = json::array();
    checks.push_back(check_json("catenoid_ode", prof.max_ode_residual, 1e-8 * c.tolerance_scale, true));
    checks.push_back(check_json("catenoid_implicit", prof.max_implicit_error, 1e-6 * c.tolerance_scale, true));
    if (s.verify) {
        const CanalPatch patch = catenoid_patch(prof);
        const auto grid = lattice_points(patch, c.grid);
        std::vector<double> K, H;
        closed_curvatures(patch, grid, K, H);
        const ResidualStats st = residual_stats(H, grid);
        checks.push_back(check_json("catenoid_H", st.max, c.tolerance("catenoid_H"), true, &st.argmax, st.count));
    }
    bool pass = true;
    for (const auto& ch : checks) pass = pass && ch["pass"].get<bool>();

    CommandResult res;
    res.exit_code = pass ? kExitPass : kExitCheckFailed;
    for (const auto& o : outs) {
        std::string text;
        if (o.format == "csv") {
            text = "v1,rho,rho1,rho2\n";
            for (std::size_t i = 0; i < prof.v.size(); ++i) {
                text += csv_row({prof.v[i], prof.rho[i], prof.d1[i], prof.d2[i]});
            }
        } else {
            json j = header("catenoid", c);
            j["a"] = prof.a;
            j["b"] = prof.b;
            j["branch"] = prof.branch;
            j["rho0"] = s.rho0;
            j["span"] = {s.span.lo, s.span.hi};
            j["step"] = s.step;
            j["nodes"] = prof.v.size();
            j["max_first_integral"] = prof.max_first_integral;
            j["checks"] = checks;
            j["pass"] = pass;
            text = j.dump(2) + "\n";
        }
        res.artifacts.push_back({o, std::move(text)});
    }
    return res;
}

void write_artifacts(const std::vector<Artifact>& artifacts, std::ostream& out) {
    namespace fs = std::filesystem;
    std::vector<std::pair<fs::path, fs::path>> staged;
    try {
        for (const auto& a : artifacts) {
            if (a.spec.path.empty() || a.spec.path == "-") continue;
            const fs::path target(a.spec.path);
            fs::path tmp = target;
            tmp += ".partial";
            std::ofstream f(tmp, std::ios::binary);
            if (!f) throw ConfigError("cannot write \"" + a.spec.path + "\"");
            f << a.content;
            f.close();
            if (!f) throw ConfigError("cannot write \"" + a.spec.path + "\"");
            staged.emplace_back(tmp, target);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& s : staged) fs::remove(s.first, ec);
        throw;
    }
    for (const auto& s : staged) fs::rename(s.first, s.second);
    for (const auto& a : artifacts) {
        if (a.spec.path.empty() || a.spec.path == "-") out << a.content;
    }
    out.flush();
}

json error_report(const std::string& kind, const std::string& message) {
    return {{"schema", 1}, {"error", kind}, {"message", message}};
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        CommandResult res;
        if (name == "sample") {
            res = cmd_sample(config);
        } else if (name == "curvature") {
            res = cmd_curvature(config);
        } else if (name == "verify") {
            res = cmd_verify(config);
        } else if (name == "classify") {
            res = cmd_classify(config);
        } else if (name == "catenoid") {
            res = cmd_catenoid(config);
        } else {
            throw ConfigError("unknown command \"" + name + "\"");
        }
        write_artifacts(res.artifacts, out);
        return res.exit_code;
    } catch (const ConfigError& e) {
        err << error_report("config", e.what()).dump() << "\n";
        return kExitConfig;
    } catch (const ContractError& e) {
        err << error_report("config", e.what()).dump() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        err << error_report("numeric", e.what()).dump() << "\n";
        return kExitNumeric;
    }
}

}  // namespace canal::app
