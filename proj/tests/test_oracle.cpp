#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "canal/curvature4.hpp"
#include "canal/oracle.hpp"
#include "fixtures.hpp"

using namespace canal;
using fixtures::kPi;

namespace {

Vec at4(double a, double b, double c, double d) {
    Vec v(4);
    v << a, b, c, d;
    return v;
}

ImmersionProbe probe_of(std::function<Vec(std::span<const double>)> f, double lo = -1.0, double hi = 1.0) {
    return make_probe(4, std::move(f), {{lo, hi}, {lo, hi}, {lo, hi}}, {false, false, false});
}

Vec sphere(std::span<const double> v, double r) {
    const double c2 = std::cos(v[1]), c3 = std::cos(v[2]);
    return at4(r * std::cos(v[0]) * c2 * c3, r * std::sin(v[0]) * c2 * c3, r * std::sin(v[1]) * c3, r * std::sin(v[2]));
}

// Canal map probe with the closed-form normal available for orientation.
ImmersionProbe canal_probe(const CanalPatch& p, ProbeMode mode) {
    ImmersionProbe probe = make_probe(
        4, [p](std::span<const double> v) { return canal_point(p, v); }, p.domain, {false, true, true});
    probe.exact = [p](std::span<const double> v) { return canal_jet(p, v); };
    probe.mode = mode;
    return probe;
}

Vec closed_normal(const CanalPatch& p, const Params3& x) {
    return unit_normal(frenet_apparatus(p.curve, x[0]), p.profile(x[0]), x[1], x[2]);
}

}  // namespace

TEST(FdJet, AffineMapIsExact) {
    const auto f = [](std::span<const double> v) { return at4(1 + 2 * v[0] - v[2], v[1], 3 * v[2] + v[0], 0.5); };
    const std::vector<double> x{0.1, 0.2, -0.3};
    const SurfaceJet jet = fd_jet(probe_of(f), x);
    EXPECT_LT((jet.d1[0] - at4(2, 0, 1, 0)).norm(), 1e-9);
    EXPECT_LT((jet.d1[2] - at4(-1, 0, 3, 0)).norm(), 1e-9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_LT(jet.d2[i][j].norm(), 1e-4);
}

TEST(FdJet, QuadraticSecondDerivatives) {
    const auto f = [](std::span<const double> v) { return at4(v[0] * v[0], v[0] * v[1], v[2] * v[2] * 0.5, v[1]); };
    const std::vector<double> x{0.3, -0.2, 0.4};
    const SurfaceJet jet = fd_jet(probe_of(f), x);
    EXPECT_LT((jet.d2[0][0] - at4(2, 0, 0, 0)).norm(), 1e-4);
    EXPECT_LT((jet.d2[0][1] - at4(0, 1, 0, 0)).norm(), 1e-4);
    EXPECT_LT((jet.d2[1][0] - at4(0, 1, 0, 0)).norm(), 1e-4);
    EXPECT_LT((jet.d2[2][2] - at4(0, 0, 1, 0)).norm(), 1e-4);
    EXPECT_LT((jet.d1[0] - at4(0.6, -0.2, 0, 0)).norm(), 1e-9);
}

TEST(OracleForms, Hyperplane) {
    const auto f = [](std::span<const double> v) { return at4(v[0], v[1], v[2], 2.0); };
    const OracleForms o = oracle_forms(probe_of(f), std::vector<double>{0.1, 0.2, 0.3});
    EXPECT_NEAR(o.K, 0.0, 1e-8);
    EXPECT_NEAR(o.H, 0.0, 1e-8);
    EXPECT_NEAR(std::abs(o.N[3]), 1.0, 1e-12);
    EXPECT_NEAR(o.gram_ratio, 1.0, 1e-12);
}

TEST(OracleForms, RoundSphere) {
    for (double r : {0.5, 1.0, 2.0}) {
        const auto f = [r](std::span<const double> v) { return sphere(v, r); };
        const std::vector<double> x{0.4, 0.3, -0.2};
        const OracleForms o = oracle_forms(probe_of(f), x);
        EXPECT_NEAR(std::abs(o.K), 1 / (r * r * r), 1e-5 / (r * r * r));
        EXPECT_NEAR(std::abs(o.H), 1 / r, 1e-5 / r);
        // outward orientation gives H = -1/r
        const Vec out = sphere(x, r);
        const OracleForms oriented = oracle_forms(probe_of(f), x, &out);
        EXPECT_NEAR(oriented.H, -1 / r, 1e-5 / r);
        EXPECT_GT(oriented.N.dot(out), 0.0);
    }
}

TEST(OracleForms, DomainBoundary) {
    const auto f = [](std::span<const double> v) { return at4(v[0], v[1], v[2], 0.0); };
    const ImmersionProbe probe = probe_of(f);
    EXPECT_THROW(fd_jet(probe, std::vector<double>{1.0, 0.0, 0.0}), DomainError);
    EXPECT_THROW(fd_jet(probe, std::vector<double>{0.0, -1.0 + probe.fd_step[1], 0.0}), DomainError);
    EXPECT_NO_THROW(fd_jet(probe, std::vector<double>{0.0, -1.0 + 3 * probe.fd_step[1], 0.0}));
}

TEST(OracleForms, PeriodicAxisSkipsBoundary) {
    const auto f = [](std::span<const double> v) { return sphere(v, 1.0); };
    const ImmersionProbe probe = make_probe(4, f, {{0, 2 * kPi}, {-1, 1}, {-1, 1}}, {true, false, false});
    EXPECT_NO_THROW(fd_jet(probe, std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(OracleForms, RankDeficient) {
    const auto f = [](std::span<const double> v) { return at4(v[0], v[1], v[0] + v[1], 0.0); };
    EXPECT_THROW(oracle_forms(probe_of(f), std::vector<double>{0.0, 0.0, 0.0}), RankError);
}

TEST(OracleForms, ExactModeNeedsJet) {
    ImmersionProbe probe = probe_of([](std::span<const double> v) { return at4(v[0], v[1], v[2], 0.0); });
    probe.mode = ProbeMode::ExactTaylor;
    EXPECT_THROW(probe_jet(probe, std::vector<double>{0.0, 0.0, 0.0}), ContractError);
}

TEST(OracleForms, CircleTubeHandValues) {
    const CanalPatch p = fixtures::circle_tube();
    const Params3 x{1e-2, 0.0, 0.0};
    for (ProbeMode mode : {ProbeMode::CentralFD, ProbeMode::ExactTaylor}) {
        const Vec N = closed_normal(p, x);
        const OracleForms o = oracle_forms(canal_probe(p, mode), std::vector<double>{x[0], x[1], x[2]}, &N);
        const KH ref = tubular_curvatures(0.5, 0.5, 0.0, 0.0);
        EXPECT_NEAR(o.K, ref.K, 1e-5 * std::abs(ref.K));
        EXPECT_NEAR(o.H, ref.H, 1e-5 * std::abs(ref.H));
        EXPECT_NEAR(ref.K, 8.0 / 3.0, 1e-14);
    }
}

TEST(OracleForms, AgreesWithClosedFormsOnAllPatches) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& np : fixtures::all_patches()) {
        const auto& d = np.patch.domain[0];
        const ImmersionProbe fd = canal_probe(np.patch, ProbeMode::CentralFD);
        const ImmersionProbe exact = canal_probe(np.patch, ProbeMode::ExactTaylor);
        int tested = 0;
        while (tested < 10) {
            const Params3 x{d.lo + (0.05 + 0.9 * u(rng)) * d.span(), 2 * kPi * u(rng), 2 * kPi * u(rng)};
            if (!admissible(np.patch, x) || std::abs(std::cos(x[2])) < 0.1) continue;
            const FrenetData fr = frenet_apparatus(np.patch.curve, x[0]);
            const RadiusJet r = np.patch.profile(x[0]);
            if (std::abs(q_factor(fr, r, x[1], x[2])) < 0.05) continue;
            ++tested;
            const FormsBundle fb = forms(fr, r, x[1], x[2]);
            const double K = gaussian_curvature(fr, r, x[1], x[2]);
            const double H = mean_curvature(fr, r, x[1], x[2]);
            const std::vector<double> at{x[0], x[1], x[2]};
            const OracleForms of = oracle_forms(fd, at, &fb.N);
            const OracleForms oe = oracle_forms(exact, at, &fb.N);
            const double kscale = std::max(std::abs(K), std::pow(r.rho, -3));
            const double hscale = std::max(std::abs(H), 1 / r.rho);
            EXPECT_NEAR(of.K, K, 1e-4 * kscale) << np.name;
            EXPECT_NEAR(of.H, H, 1e-4 * hscale) << np.name;
            EXPECT_NEAR(oe.K, K, 1e-9 * kscale) << np.name;
            EXPECT_NEAR(oe.H, H, 1e-9 * hscale) << np.name;
            EXPECT_LT((of.N - fb.N).norm(), 1e-5) << np.name;
            EXPECT_NEAR(of.K, oe.K, 1e-4 * kscale) << np.name;
            // g is symmetric positive definite
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(of.g);
            EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << np.name;
            EXPECT_LT((of.g - of.g.transpose()).norm(), 1e-15) << np.name;
        }
    }
}
