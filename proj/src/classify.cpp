#include "canal/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "canal/curvature4.hpp"
#include "canal/grid.hpp"
#include "canal/parallel.hpp"

namespace canal {

ResidualStats residual_stats(std::span<const double> values, std::span<const Params3> where) {
    if (values.size() != where.size()) throw ContractError("residual_stats: size mismatch");
    ResidualStats s;
    s.count = values.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double a = std::abs(values[i]);
        sum += a;
        if (i == 0 || a > s.max) {
            s.max = a;
            s.argmax = where[i];
        }
    }
    s.mean = values.empty() ? 0.0 : sum / static_cast<double>(values.size());
    return s;
}

const char* to_string(FlatKind kind) {
    switch (kind) {
        case FlatKind::No: return "No";
        case FlatKind::Hypercylinder: return "Hypercylinder";
        case FlatKind::Hypercone: return "Hypercone";
    }
    return "unknown";
}

const char* to_string(MinimalKind kind) {
    switch (kind) {
        case MinimalKind::No: return "No";
        case MinimalKind::GeneralizedCatenoid: return "GeneralizedCatenoid";
    }
    return "unknown";
}

const char* to_string(WeingartenPair pair) {
    switch (pair) {
        case WeingartenPair::P12: return "12";
        case WeingartenPair::P13: return "13";
        case WeingartenPair::P23: return "23";
    }
    return "unknown";
}

std::array<int, 2> axes_of(WeingartenPair pair) {
    switch (pair) {
        case WeingartenPair::P12: return {0, 1};
        case WeingartenPair::P13: return {0, 2};
        case WeingartenPair::P23: return {1, 2};
    }
    return {1, 2};
}

namespace {

void require_e4(const CanalPatch& patch, const char* who) {
    if (patch.n != 4) throw ContractError(std::string(who) + ": E^4 patches only");
}

struct AxisSample {
    double k1;
    RadiusJet r;
};

std::vector<AxisSample> sample_axis(const CanalPatch& patch) {
    const auto v = axis_nodes(patch.domain[0], kAnalyticSamples, 0.0);
    std::vector<AxisSample> out(v.size());
    parallel_for(v.size(), [&](std::size_t i) {
        out[i] = {frenet_apparatus(patch.curve, v[i]).curvatures[0], patch.profile(v[i])};
    });
    return out;
}

}  // namespace

void closed_curvatures(const CanalPatch& patch, std::span<const Params3> grid, std::vector<double>& K,
                       std::vector<double>& H) {
    require_e4(patch, "closed_curvatures");
    K.assign(grid.size(), 0.0);
    H.assign(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t i) {
        const Params3& p = grid[i];
        const FrenetData fr = frenet_apparatus(patch.curve, p[0]);
        const RadiusJet r = patch.profile(p[0]);
        K[i] = gaussian_curvature(fr, r, p[1], p[2]);
        H[i] = mean_curvature(fr, r, p[1], p[2]);
    });
}

namespace {

FlatVerdict flat_from(const CanalPatch& patch, const std::vector<AxisSample>& axis, std::span<const Params3> grid,
                      const std::vector<double>& K) {
    FlatVerdict out;
    for (const auto& a : axis) {
        out.max_abs_k1 = std::max(out.max_abs_k1, std::abs(a.k1));
        out.max_abs_rho2 = std::max(out.max_abs_rho2, std::abs(a.r.d2));
        out.max_abs_rho1 = std::max(out.max_abs_rho1, std::abs(a.r.d1));
    }
    std::vector<double> kappa3(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rho = patch.profile(grid[i][0]).rho;
        kappa3[i] = K[i] * rho * rho;
    }
    out.K = residual_stats(K, grid);
    out.kappa3 = residual_stats(kappa3, grid);

    const bool analytic = out.max_abs_k1 <= kCurvatureZero && out.max_abs_rho2 <= kCurvatureZero;
    const bool numeric = out.K.max <= kFlatBound && out.kappa3.max <= kFlatBound;
    if (analytic != numeric) {
        std::ostringstream os;
        os << "classify_flat: analytic route says " << (analytic ? "flat" : "not flat") << " (max|k1| = "
           << out.max_abs_k1 << ", max|rho''| = " << out.max_abs_rho2 << ") but max|K| = " << out.K.max;
        throw InconsistencyError(os.str());
    }
    if (analytic) {
        out.kind = out.max_abs_rho1 <= kCurvatureZero ? FlatKind::Hypercylinder : FlatKind::Hypercone;
    }
    return out;
}

MinimalVerdict minimal_from(const std::vector<AxisSample>& axis, std::span<const Params3> grid,
                            const std::vector<double>& H) {
    MinimalVerdict out;
    for (const auto& a : axis) {
        out.max_abs_k1 = std::max(out.max_abs_k1, std::abs(a.k1));
        const double res = 2.0 - 2.0 * a.r.d1 * a.r.d1 - 3.0 * a.r.rho * a.r.d2;
        out.max_ode_residual = std::max(out.max_ode_residual, std::abs(res));
    }
    out.H = residual_stats(H, grid);
    const bool analytic = out.max_abs_k1 <= kCurvatureZero && out.max_ode_residual <= kCatenoidOdeBound;
    const bool numeric = out.H.max <= kMinimalBound;
    if (analytic != numeric) {
        std::ostringstream os;
        os << "classify_minimal: analytic route says " << (analytic ? "minimal" : "not minimal")
           << " (max|k1| = " << out.max_abs_k1 << ", ODE residual = " << out.max_ode_residual
           << ") but max|H| = " << out.H.max;
        throw InconsistencyError(os.str());
    }
    if (analytic) out.kind = MinimalKind::GeneralizedCatenoid;
    return out;
}

}  // namespace

FlatVerdict classify_flat(const CanalPatch& patch, std::span<const Params3> grid) {
    require_e4(patch, "classify_flat");
    std::vector<double> K, H;
    closed_curvatures(patch, grid, K, H);
    return flat_from(patch, sample_axis(patch), grid, K);
}

MinimalVerdict classify_minimal(const CanalPatch& patch, std::span<const Params3> grid) {
    require_e4(patch, "classify_minimal");
    std::vector<double> K, H;
    closed_curvatures(patch, grid, K, H);
    return minimal_from(sample_axis(patch), grid, H);
}

double catenoid_integral(double a, double rho) {
    if (!(a > 0.0) || !(rho >= a)) throw DomainError("catenoid_integral: need 0 < a <= rho");
    const double wmax = std::sqrt(rho / a - 1.0);
    if (wmax == 0.0) return 0.0;
    auto f = [a](double w) {
        const double w2 = w * w;
        if (w2 < 1e-300) return std::sqrt(3.0) * a;
        const double den = -std::expm1(-(4.0 / 3.0) * std::log1p(w2));
        return 2.0 * a * w / std::sqrt(den);
    };
    return adaptive_simpson(f, 0.0, wmax, 1e-13 * std::max(1.0, rho));
}

namespace {

struct State {
    double r, p;
};

State rhs(const State& y) { return {y.p, (2.0 - 2.0 * y.p * y.p) / (3.0 * y.r)}; }

State rk4(const State& y, double h) {
    auto add = [](const State& u, const State& k, double s) { return State{u.r + s * k.r, u.p + s * k.p}; };
    const State k1 = rhs(y);
    const State k2 = rhs(add(y, k1, 0.5 * h));
    const State k3 = rhs(add(y, k2, 0.5 * h));
    const State k4 = rhs(add(y, k3, h));
    return {y.r + h / 6.0 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r), y.p + h / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p)};
}

double first_integral(double a, double r, double p) { return p * p - 1.0 + std::pow(a / r, 4.0 / 3.0); }

// Fourth-order derivative of uniformly sampled f at node i.
double fd4(const std::vector<double>& f, std::size_t i, double h) {
    const std::size_t n = f.size();
    if (i >= 2 && i + 2 < n) return (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
    if (i == 0) return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
    if (i == 1) return (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
    const std::size_t m = n - 1;
    if (i == m) return (25 * f[m] - 48 * f[m - 1] + 36 * f[m - 2] - 16 * f[m - 3] + 3 * f[m - 4]) / (12 * h);
    return (3 * f[m] + 10 * f[m - 1] - 18 * f[m - 2] + 6 * f[m - 3] - f[m - 4]) / (12 * h);
}

}  // namespace

CatenoidProfile solve_catenoid(double a, double rho0, Interval span, double step, int branch) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("solve_catenoid: a must be positive");
    if (!(rho0 >= a) || !std::isfinite(rho0)) {
        std::ostringstream os;
        os << "solve_catenoid: rho0 = " << rho0 << " is below the throat radius a = " << a;
        throw DomainError(os.str());
    }
    if (branch != 1 && branch != -1) throw ContractError("solve_catenoid: branch must be +1 or -1");
    if (!(span.hi > span.lo) || !(step > 0.0)) throw ContractError("solve_catenoid: empty span or step");
    const long steps = std::max(4L, std::lround(std::ceil(span.span() / step - 1e-9)));
    const double h = span.span() / static_cast<double>(steps);

    CatenoidProfile out;
    out.a = a;
    out.branch = branch;
    const bool throat = rho0 - a <= 1e-15 * a;
    State y{throat ? a : rho0, throat ? 0.0 : branch * std::sqrt(-first_integral(a, rho0, 0.0))};
    const std::size_t nodes = static_cast<std::size_t>(steps) + 1;
    out.v.reserve(nodes);
    out.rho.reserve(nodes);
    out.d1.reserve(nodes);
    out.d2.reserve(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double v = i + 1 == nodes ? span.hi : span.lo + static_cast<double>(i) * h;
        if (!std::isfinite(y.r) || !std::isfinite(y.p) || !(y.r >= a * (1.0 - 1e-9))) {
            std::ostringstream os;
            os << "solve_catenoid: solution left rho >= a at v1 = " << v;
            throw IntegrationError(os.str());
        }
        const double drift = std::abs(first_integral(a, y.r, y.p));
        out.max_first_integral = std::max(out.max_first_integral, drift);
        if (drift > 1e-8) {
            std::ostringstream os;
            os << "solve_catenoid: first integral drifted by " << drift << " at v1 = " << v
               << "; reduce the step";
            throw IntegrationError(os.str());
        }
        out.v.push_back(v);
        out.rho.push_back(y.r);
        out.d1.push_back(y.p);
        out.d2.push_back(rhs(y).p);
        if (i + 1 < nodes) y = rk4(y, h);
    }

    for (std::size_t i = 0; i < nodes; ++i) {
        const double rho2 = fd4(out.d1, i, h);
        const double res = 2.0 - 2.0 * out.d1[i] * out.d1[i] - 3.0 * out.rho[i] * rho2;
        out.max_ode_residual = std::max(out.max_ode_residual, std::abs(res));
    }

    // sign(rho') I(rho) is v_1 + b along the whole solution
    auto signed_integral = [&](std::size_t i) {
        const double I = catenoid_integral(a, std::max(out.rho[i], a));
        return out.d1[i] < 0.0 ? -I : I;
    };
    out.b = signed_integral(0) - out.v[0];
    out.checkpoints = 10;
    for (int c = 1; c <= out.checkpoints; ++c) {
        const std::size_t i = (nodes - 1) * static_cast<std::size_t>(c) / static_cast<std::size_t>(out.checkpoints);
        const double err = std::abs(signed_integral(i) - (out.v[i] + out.b));
        out.max_implicit_error = std::max(out.max_implicit_error, err);
    }
    return out;
}

RadiusProfile CatenoidProfile::profile() const {
    return RadiusProfile::tabulated(RadiusKind::Catenoid, v, rho, d1, d2);
}

CanalPatch catenoid_patch(const CatenoidProfile& profile) {
    const Interval span{profile.v.front(), profile.v.back()};
    CenterCurve line = make_line(Vec::Zero(4), basis_vector(4, 0), span);
    return make_patch(std::move(line), profile.profile());
}

WeingartenResult weingarten_residual(const Lattice& K, const Lattice& H, WeingartenPair pair, double bound) {
    if (K.shape != H.shape || K.step != H.step) throw ContractError("weingarten_residual: lattices differ");
    for (int d = 0; d < 3; ++d) {
        if (K.shape[d] < 5) {
            std::ostringstream os;
            os << "weingarten_residual: axis " << d + 1 << " has " << K.shape[d] << " nodes, need at least 5";
            throw ResolutionError(os.str());
        }
    }
    const std::size_t total = static_cast<std::size_t>(K.shape[0]) * K.shape[1] * K.shape[2];
    if (K.values.size() != total || H.values.size() != total) {
        throw ContractError("weingarten_residual: lattice value count does not match its shape");
    }
    const auto [ax, bx] = axes_of(pair);
    auto diff = [](const Lattice& L, int axis, int i, int j, int k) {
        std::array<int, 3> up{i, j, k}, dn{i, j, k};
        ++up[axis];
        --dn[axis];
        return (L.at(up[0], up[1], up[2]) - L.at(dn[0], dn[1], dn[2])) / (2.0 * L.step[axis]);
    };
    WeingartenResult out;
    out.pair = pair;
    for (int i = 1; i + 1 < K.shape[0]; ++i) {
        for (int j = 1; j + 1 < K.shape[1]; ++j) {
            for (int k = 1; k + 1 < K.shape[2]; ++k) {
                const double a = diff(H, ax, i, j, k) * diff(K, bx, i, j, k);
                const double b = diff(H, bx, i, j, k) * diff(K, ax, i, j, k);
                const double res = a - b;
                const double scale = std::max({std::abs(a), std::abs(b), 1.0});
                out.ratio.push_back(std::abs(res) / scale);
                out.where.push_back(K.point(i, j, k));
                out.max_abs_residual = std::max(out.max_abs_residual, std::abs(res));
            }
        }
    }
    out.stats = residual_stats(out.ratio, out.where);
    out.weingarten = out.stats.max <= bound;
    return out;
}

WeingartenResult weingarten_check(const CanalPatch& patch, std::span<const Params3> base, WeingartenPair pair,
                                  double step, double bound) {
    require_e4(patch, "weingarten_check");
    if (!(step > 0.0)) throw ContractError("weingarten_check: step must be positive");
    constexpr int kNodes = 5;
    std::vector<WeingartenResult> parts(base.size());
    parallel_for(base.size(), [&](std::size_t b) {
        Lattice K, H;
        K.shape = {kNodes, kNodes, kNodes};
        K.step = {step, step, step};
        for (int d = 0; d < 3; ++d) K.origin[d] = base[b][d] - 2.0 * step;
        H.shape = K.shape;
        H.step = K.step;
        H.origin = K.origin;
        K.values.resize(kNodes * kNodes * kNodes);
        H.values.resize(K.values.size());
        for (int i = 0; i < kNodes; ++i) {
            const double v1 = K.origin[0] + i * step;
            const FrenetData fr = frenet_apparatus(patch.curve, v1);
            const RadiusJet r = patch.profile(v1);
            for (int j = 0; j < kNodes; ++j) {
                for (int k = 0; k < kNodes; ++k) {
                    const Params3 p = K.point(i, j, k);
                    const std::size_t idx = (static_cast<std::size_t>(i) * kNodes + j) * kNodes + k;
                    K.values[idx] = gaussian_curvature(fr, r, p[1], p[2]);
                    H.values[idx] = mean_curvature(fr, r, p[1], p[2]);
                }
            }
        }
        parts[b] = weingarten_residual(K, H, pair, bound);
    });
    WeingartenResult out;
    out.pair = pair;
    for (auto& p : parts) {
        out.ratio.insert(out.ratio.end(), p.ratio.begin(), p.ratio.end());
        out.where.insert(out.where.end(), p.where.begin(), p.where.end());
        out.max_abs_residual = std::max(out.max_abs_residual, p.max_abs_residual);
    }
    out.stats = residual_stats(out.ratio, out.where);
    out.weingarten = out.stats.max <= bound;
    return out;
}

ResidualStats linear_weingarten_check(double lambda, std::span<const double> K, std::span<const double> H,
                                      std::span<const Params3> where) {
    if (!(lambda > 0.0)) throw DomainError("linear_weingarten_check: lambda must be positive");
    if (K.size() != H.size()) throw ContractError("linear_weingarten_check: size mismatch");
    std::vector<double> res(K.size());
    for (std::size_t i = 0; i < K.size(); ++i) {
        res[i] = -3.0 * lambda * H[i] + lambda * lambda * lambda * K[i] - 2.0;
    }
    return residual_stats(res, where);
}

ClassificationVerdict classify(const CanalPatch& patch, std::span<const Params3> grid, double weingarten_step) {
    require_e4(patch, "classify");
    std::vector<double> K, H;
    closed_curvatures(patch, grid, K, H);
    const auto axis = sample_axis(patch);
    ClassificationVerdict out;
    out.flat = flat_from(patch, axis, grid, K);
    out.minimal = minimal_from(axis, grid, H);
    for (auto pair : {WeingartenPair::P12, WeingartenPair::P13, WeingartenPair::P23}) {
        out.weingarten.push_back(weingarten_check(patch, grid, pair, weingarten_step));
    }
    if (patch.profile.kind() == RadiusKind::Constant) {
        const double lambda = patch.profile.constant_value();
        out.linear = LinearWeingarten{-3.0 * lambda, lambda * lambda * lambda, 2.0,
                                      linear_weingarten_check(lambda, K, H, grid)};
    }
    return out;
}

nlohmann::json to_json(const ResidualStats& s) {
    return {{"max", s.max},
            {"mean", s.mean},
            {"argmax", {s.argmax[0], s.argmax[1], s.argmax[2]}},
            {"count", s.count}};
}

nlohmann::json to_json(const ClassificationVerdict& v) {
    nlohmann::json j;
    j["flat"] = {{"verdict", to_string(v.flat.kind)},
                 {"max_abs_k1", v.flat.max_abs_k1},
                 {"max_abs_rho2", v.flat.max_abs_rho2},
                 {"max_abs_rho1", v.flat.max_abs_rho1},
                 {"abs_K", to_json(v.flat.K)},
                 {"abs_kappa3", to_json(v.flat.kappa3)}};
    j["minimal"] = {{"verdict", to_string(v.minimal.kind)},
                    {"max_abs_k1", v.minimal.max_abs_k1},
                    {"max_ode_residual", v.minimal.max_ode_residual},
                    {"abs_H", to_json(v.minimal.H)}};
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& w : v.weingarten) {
        pairs.push_back({{"pair", to_string(w.pair)},
                         {"weingarten", w.weingarten},
                         {"bound", kWeingartenBound},
                         {"max_abs_residual", w.max_abs_residual},
                         {"scaled_residual", to_json(w.stats)}});
    }
    j["weingarten_pairs"] = pairs;
    if (v.linear) {
        j["linear_weingarten"] = {{"a", v.linear->a},
                                  {"b", v.linear->b},
                                  {"c", v.linear->c},
                                  {"residual", to_json(v.linear->residual)}};
    } else {
        j["linear_weingarten"] = nullptr;
    }
    return j;
}

}  // namespace canal
