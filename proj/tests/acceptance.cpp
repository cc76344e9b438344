// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "canal/classify.hpp"
#include "canal/curvature4.hpp"
#include "canal/grid.hpp"
#include "canal/oracle.hpp"
#include "fixtures.hpp"

using namespace canal;

namespace {

// Pinned tolerances.
constexpr double kIdentityTol = 1e-9;
constexpr double kOracleFdTol = 1e-4;
constexpr double kOracleExactTol = 1e-6;
constexpr double kFlatTol = 1e-8;
constexpr double kCatenoidOdeTol = 1e-8;
constexpr double kCatenoidImplicitTol = 1e-6;
constexpr double kCatenoidHTol = 1e-6;
constexpr double kPrincipalTol = 1e-8;
constexpr double kTraceDetTol = 1e-10;
constexpr double kDetGTol = 1e-9;
constexpr double kPoleCut = 1e-3;
constexpr double kWeingartenTol = 1e-6;
constexpr double kLinearClosedTol = 1e-9;
constexpr double kLinearOracleTol = 5e-4;
constexpr double kSphereTol = 1e-10;
constexpr double kCoefficientTol = 1e-12;
constexpr double kOffsetTol = 1e-6;
constexpr double kTimeLimit = 60.0;

constexpr int kRandomPoints = 200;
constexpr int kInvariantPoints = 500;
constexpr int kWeingartenBase = 20;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Tracker {
    double worst = 0.0;
    std::string where;
    void take(double value, const std::string& label) {
        if (!(value <= worst)) {
            worst = value;
            where = label;
        }
    }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string summary(const Tracker& t, double tol) {
    return "max " + fmt(t.worst) + " (tol " + fmt(tol) + (t.where.empty() ? "" : ", at " + t.where) + ")";
}

std::vector<double> vec(const Params3& x) { return {x[0], x[1], x[2]}; }

ImmersionProbe canal_probe(const CanalPatch& p, ProbeMode mode) {
    ImmersionProbe probe = make_probe(
        4, [p](std::span<const double> v) { return canal_point(p, v); }, p.domain, {false, true, true});
    probe.exact = [p](std::span<const double> v) { return canal_jet(p, v); };
    probe.mode = mode;
    return probe;
}

struct Closed {
    FrenetData fr;
    RadiusJet r;
    FormsBundle fb;
    double K, H;
};

Closed closed_at(const CanalPatch& p, const Params3& x) {
    Closed c{frenet_apparatus(p.curve, x[0]), p.profile(x[0]), {}, 0.0, 0.0};
    c.fb = forms(c.fr, c.r, x[1], x[2]);
    c.K = gaussian_curvature(c.fr, c.r, x[1], x[2]);
    c.H = mean_curvature(c.fr, c.r, x[1], x[2]);
    return c;
}

const std::vector<std::string> kIdentityPatches{"straight tube", "cone", "circle tube", "circle canal", "catenoid"};

std::vector<fixtures::Named> patches_named(const std::vector<std::string>& names) {
    std::vector<fixtures::Named> out;
    for (auto& np : fixtures::all_patches())
        if (std::find(names.begin(), names.end(), np.name) != names.end()) out.push_back(np);
    return out;
}

Outcome curvature_identity() {
    Tracker t;
    for (const auto& np : patches_named(kIdentityPatches)) {
        for (const auto& x : random_points(np.patch, kRandomPoints, 101)) {
            const CurvatureReport rep = curvature_report(np.patch, x);
            t.take(identity_residual(rep.K, rep.H, np.patch.profile(x[0]).rho), np.name);
        }
    }
    return {t.worst <= kIdentityTol, summary(t, kIdentityTol) + ", 5 patches x 200 points"};
}

// Relative error with floors rho^-3 for K and 1/rho for H.
Outcome oracle_agreement() {
    Tracker fd, exact;
    for (const auto& np : fixtures::all_patches()) {
        const ImmersionProbe pf = canal_probe(np.patch, ProbeMode::CentralFD);
        const ImmersionProbe pe = canal_probe(np.patch, ProbeMode::ExactTaylor);
        for (const auto& x : random_points(np.patch, kRandomPoints, 202)) {
            const Closed c = closed_at(np.patch, x);
            const double ks = std::max(std::abs(c.K), std::pow(c.r.rho, -3)), hs = std::max(std::abs(c.H), 1 / c.r.rho);
            const OracleForms of = oracle_forms(pf, vec(x), &c.fb.N);
            const OracleForms oe = oracle_forms(pe, vec(x), &c.fb.N);
            fd.take(std::max(std::abs(of.K - c.K) / ks, std::abs(of.H - c.H) / hs), np.name);
            exact.take(std::max(std::abs(oe.K - c.K) / ks, std::abs(oe.H - c.H) / hs), np.name);
        }
    }
    return {fd.worst <= kOracleFdTol && exact.worst <= kOracleExactTol,
            "fd " + summary(fd, kOracleFdTol) + "; exact " + summary(exact, kOracleExactTol) + ", 8 patches x 200 points"};
}

Outcome flatness() {
    const GridSpec grid{{20, 20, 20}, 0.0};
    const CanalPatch cyl = fixtures::straight_tube(), cone = fixtures::cone();
    const FlatVerdict a = classify_flat(cyl, lattice_points(cyl, grid));
    const FlatVerdict b = classify_flat(cone, lattice_points(cone, grid));
    const CanalPatch bent = make_patch(make_line(Vec::Zero(4), basis_vector(4, 0), {0.0, 2.0}),
                                       RadiusProfile::poly_trig(PolyTrig{{1.0, 0.5, 0.05}, {}}));
    const FlatVerdict c = classify_flat(bent, lattice_points(bent, grid));
    const bool pass = a.kind == FlatKind::Hypercylinder && b.kind == FlatKind::Hypercone && a.K.max <= kFlatTol &&
                      b.K.max <= kFlatTol && c.kind == FlatKind::No;
    return {pass, std::string("cylinder ") + to_string(a.kind) + " max|K| " + fmt(a.K.max) + "; cone " + to_string(b.kind) +
                      " max|K| " + fmt(b.K.max) + "; nonlinear rho " + to_string(c.kind) + " max|K| " + fmt(c.K.max) +
                      " (tol " + fmt(kFlatTol) + ")"};
}

Outcome minimality() {
    const CatenoidProfile prof = solve_catenoid(1.0, 1.0, {0.0, 2.0}, 1e-3);
    const CanalPatch p = catenoid_patch(prof);
    const auto grid = lattice_points(p, GridSpec{{20, 20, 20}, 0.0});
    std::vector<double> K, H;
    closed_curvatures(p, grid, K, H);
    double maxH = 0.0;
    for (double h : H) maxH = std::max(maxH, std::abs(h));
    const MinimalVerdict v = classify_minimal(p, grid);
    const bool pass = prof.max_ode_residual <= kCatenoidOdeTol && prof.max_implicit_error <= kCatenoidImplicitTol &&
                      prof.checkpoints >= 10 && maxH <= kCatenoidHTol && v.kind == MinimalKind::GeneralizedCatenoid;
    return {pass, "ode " + fmt(prof.max_ode_residual) + " (tol " + fmt(kCatenoidOdeTol) + "), implicit " +
                      fmt(prof.max_implicit_error) + " at " + std::to_string(prof.checkpoints) + " checkpoints (tol " +
                      fmt(kCatenoidImplicitTol) + "), max|H| " + fmt(maxH) + " over " + std::to_string(grid.size()) +
                      " nodes (tol " + fmt(kCatenoidHTol) + "), verdict " + to_string(v.kind)};
}

Outcome principal() {
    Tracker eig, trdet;
    for (const auto& np : fixtures::all_patches()) {
        for (const auto& x : random_points(np.patch, kRandomPoints, 303)) {
            const Closed c = closed_at(np.patch, x);
            const Mat3d S = shape_operator_closed(c.fr, c.r, x[1], x[2]);
            Eigen::EigenSolver<Mat3d> es(S, false);
            std::vector<double> got;
            for (int i = 0; i < 3; ++i) got.push_back(es.eigenvalues()[i].real());
            std::vector<double> want{-1 / c.r.rho, -1 / c.r.rho, c.K * c.r.rho * c.r.rho};
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            for (int i = 0; i < 3; ++i) {
                eig.take(std::abs(got[i] - want[i]) / std::max(1.0, std::abs(want[i])), np.name);
                eig.take(std::abs(es.eigenvalues()[i].imag()), np.name);
            }
            trdet.take(std::abs(S.trace() - 3 * c.H) / std::max(1.0, std::abs(c.H)), np.name);
            trdet.take(std::abs(S.determinant() - c.K) / std::max(1.0, std::abs(c.K)), np.name);
        }
    }
    return {eig.worst <= kPrincipalTol && trdet.worst <= kTraceDetTol,
            "eigen " + summary(eig, kPrincipalTol) + "; tr/det " + summary(trdet, kTraceDetTol)};
}

Outcome det_g_factorization() {
    Tracker t;
    int used = 0;
    for (const auto& np : fixtures::all_patches()) {
        for (const auto& x : random_points(np.patch, kRandomPoints, 404)) {
            if (std::abs(std::cos(x[2])) <= kPoleCut) continue;
            const FirstForm f = first_form(frenet_apparatus(np.patch.curve, x[0]), np.patch.profile(x[0]), x[1], x[2]);
            t.take(std::abs(f.g.determinant() - f.det_g) / std::abs(f.det_g), np.name);
            ++used;
        }
    }
    return {t.worst <= kDetGTol, summary(t, kDetGTol) + ", " + std::to_string(used) + " points"};
}

Outcome weingarten() {
    bool pass = true;
    std::string detail;
    const std::vector<std::string> tubes{"straight tube", "circle tube", "helix tube"};
    double worst23 = 0.0, worst_tube = 0.0;
    for (const auto& np : fixtures::all_patches()) {
        const auto base = random_points(np.patch, kWeingartenBase, 505, 0.01);
        const WeingartenResult w23 = weingarten_check(np.patch, base, WeingartenPair::P23, kWeingartenStep, kWeingartenTol);
        pass = pass && w23.weingarten;
        worst23 = std::max(worst23, w23.stats.max);
        if (std::find(tubes.begin(), tubes.end(), np.name) != tubes.end()) {
            for (auto pair : {WeingartenPair::P12, WeingartenPair::P13}) {
                const WeingartenResult w = weingarten_check(np.patch, base, pair, kWeingartenStep, kWeingartenTol);
                pass = pass && w.weingarten;
                worst_tube = std::max(worst_tube, w.stats.max);
            }
        }
    }
    const CanalPatch canal = fixtures::circle_canal();
    const WeingartenResult neg =
        weingarten_check(canal, random_points(canal, kWeingartenBase, 505, 0.01), WeingartenPair::P12, kWeingartenStep,
                         kWeingartenTol);
    pass = pass && !neg.weingarten;
    detail = "{23} max " + fmt(worst23) + " on 8 patches; {12},{13} max " + fmt(worst_tube) + " on 3 tubes (tol " +
             fmt(kWeingartenTol) + "); control {12} on circle canal " + fmt(neg.stats.max) +
             (neg.weingarten ? " passed (unexpected)" : " fails as expected");
    return {pass, detail};
}

Outcome linear_weingarten() {
    Tracker closed, oracle;
    for (const auto& np : patches_named({"straight tube", "circle tube", "helix tube"})) {
        const double lambda = np.patch.profile.constant_value();
        const ImmersionProbe pf = canal_probe(np.patch, ProbeMode::CentralFD);
        for (const auto& x : random_points(np.patch, kRandomPoints, 606)) {
            const Closed c = closed_at(np.patch, x);
            closed.take(std::abs(-3 * lambda * c.H + std::pow(lambda, 3) * c.K - 2), np.name);
            const OracleForms o = oracle_forms(pf, vec(x), &c.fb.N);
            oracle.take(std::abs(-3 * lambda * o.H + std::pow(lambda, 3) * o.K - 2), np.name);
        }
    }
    return {closed.worst <= kLinearClosedTol && oracle.worst <= kLinearOracleTol,
            "closed " + summary(closed, kLinearClosedTol) + "; oracle " + summary(oracle, kLinearOracleTol)};
}

Outcome construction() {
    Tracker sphere, coeff, offset;
    for (const auto& np : fixtures::all_patches()) {
        const ImmersionProbe pf = canal_probe(np.patch, ProbeMode::CentralFD);
        for (const auto& x : random_points(np.patch, kInvariantPoints, 707)) {
            const RadiusJet r = np.patch.profile(x[0]);
            const Vec d = canal_point(np.patch, vec(x)) - np.patch.curve.position(x[0]);
            sphere.take(std::abs(d.squaredNorm() - r.rho * r.rho) / (r.rho * r.rho), np.name);
            const std::vector<double> angles{x[1], x[2]};
            double sum = 0.0;
            for (double a : offset_coefficients(r, angles, 4)) sum += a * a;
            coeff.take(std::abs(sum - r.rho * r.rho) / (r.rho * r.rho), np.name);
            const SurfaceJet jet = fd_jet(pf, vec(x));
            for (const auto& t : jet.d1) offset.take(std::abs(d.dot(t)) / (r.rho * t.norm()), np.name);
        }
    }
    return {sphere.worst <= kSphereTol && coeff.worst <= kCoefficientTol && offset.worst <= kOffsetTol,
            "sphere " + summary(sphere, kSphereTol) + "; coefficients " + summary(coeff, kCoefficientTol) + "; offset " +
                summary(offset, kOffsetTol) + ", 8 patches x 500 points"};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "canal_acceptance";
    std::filesystem::create_directories(dir);
    const std::string config = (dir / "canal.json").string();
    std::ofstream(config) << R"({"curve": {"kind": "quad_helix", "a": 2, "b": 1, "c": 3, "domain": [-3, 3]},
        "radius": {"kind": "poly_trig", "poly": [0.3, 0.02], "trig": [{"omega": 1, "sin": 0.05}]},
        "random_points": 200, "seed": 7})";
    std::vector<std::string> reports;
    int bad_exit = 0;
    for (const char* threads : {"1", "1", "8", "8"}) {
        const std::string out = (dir / ("report_" + std::to_string(reports.size()) + ".json")).string();
        const std::string cmd = std::string("CANAL_THREADS=") + threads + " " + CANAL_CLI_PATH + " verify --config " +
                                config + " --out " + out + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ++bad_exit;
        reports.push_back(read_file(out));
    }
    std::filesystem::remove_all(dir);
    bool same = !reports[0].empty();
    for (const auto& r : reports) same = same && r == reports[0];
    return {same && bad_exit == 0, std::string(same ? "4 reports bitwise identical" : "reports differ") + " (" +
                                       std::to_string(reports[0].size()) + " bytes, threads 1,1,8,8, " +
                                       std::to_string(bad_exit) + " nonzero exits)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"curvature identity", curvature_identity},
        {"oracle agreement", oracle_agreement},
        {"flatness theorem", flatness},
        {"minimality theorem", minimality},
        {"principal curvatures", principal},
        {"det g factorization", det_g_factorization},
        {"Weingarten verdicts", weingarten},
        {"linear Weingarten", linear_weingarten},
        {"construction invariants", construction},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > kTimeLimit) {
            o.pass = false;
            o.detail += "; exceeded time limit";
        }
        if (!o.pass) ++failures;
        std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
