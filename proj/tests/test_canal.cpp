#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "canal/canal.hpp"
#include "fixtures.hpp"

using namespace canal;
using fixtures::kPi;

namespace {

Vec at4(double a, double b, double c, double d) {
    Vec v(4);
    v << a, b, c, d;
    return v;
}

Vec point(const CanalPatch& p, double v1, double v2, double v3) {
    const std::vector<double> x{v1, v2, v3};
    return canal_point(p, x);
}

// Central-difference partial along axis k with step h.
Vec fd_partial(const CanalPatch& p, Params3 x, int k, double h) {
    Params3 a = x, b = x;
    a[k] += h;
    b[k] -= h;
    return (point(p, a[0], a[1], a[2]) - point(p, b[0], b[1], b[2])) / (2 * h);
}

}  // namespace

TEST(OffsetCoefficients, ZeroAnglesUnitRadius) {
    const std::vector<double> angles{0.0, 0.0};
    const auto a = offset_coefficients(RadiusJet{1.0, 0.0, 0.0, 0.0}, angles, 4);
    EXPECT_EQ(a, (std::vector<double>{0.0, 1.0, 0.0, 0.0}));
}

TEST(OffsetCoefficients, HandEvaluatedPoleAngle) {
    const std::vector<double> angles{0.0, kPi / 2};
    const auto a = offset_coefficients(RadiusJet{2.0, 0.6, 0.0, 0.0}, angles, 4);
    EXPECT_NEAR(a[0], -1.2, 1e-15);
    EXPECT_NEAR(a[1], 0.0, 1e-15);
    EXPECT_NEAR(a[2], 0.0, 1e-15);
    EXPECT_NEAR(a[3], 1.6, 1e-15);
    EXPECT_NEAR(a[0] * a[0] + a[3] * a[3], 4.0, 1e-14);
}

TEST(OffsetCoefficients, SquaresSumToRadiusSquared) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 3; n <= 7; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            const double rho = 0.1 + 3 * u(rng), rp = 1.8 * u(rng) - 0.9;
            std::vector<double> angles;
            for (int k = 0; k < n - 2; ++k) angles.push_back(2 * kPi * u(rng));
            const auto a = offset_coefficients(RadiusJet{rho, rp, 0.0, 0.0}, angles, n);
            double sum = 0;
            for (double x : a) sum += x * x;
            EXPECT_NEAR(sum / (rho * rho), 1.0, 1e-12);
            EXPECT_DOUBLE_EQ(a[0], -rho * rp);
        }
    }
}

TEST(OffsetCoefficients, ThreeDimensionalLadder) {
    const std::vector<double> angles{0.4};
    const auto a = offset_coefficients(RadiusJet{1.5, 0.2, 0.0, 0.0}, angles, 3);
    const double w = 1.5 * std::sqrt(1 - 0.04);
    EXPECT_NEAR(a[1], w * std::cos(0.4), 1e-15);
    EXPECT_NEAR(a[2], w * std::sin(0.4), 1e-15);
}

TEST(OffsetCoefficients, SteepRadiusIsRegularityError) {
    const std::vector<double> angles{0.0, 0.0};
    EXPECT_THROW(offset_coefficients(RadiusJet{1.0, 1.0, 0.0, 0.0}, angles, 4), RegularityError);
    EXPECT_THROW(offset_coefficients(RadiusJet{1.0, 1.0 - 1e-8, 0.0, 0.0}, angles, 4), RegularityError);
    EXPECT_THROW(offset_coefficients(RadiusJet{-1.0, 0.0, 0.0, 0.0}, angles, 4), DomainError);
}

TEST(CanalPoint, LineTubeExamples) {
    const CanalPatch p = make_patch(make_line(Vec::Zero(4), basis_vector(4, 0), {0.0, 3.0}), RadiusProfile::constant(1.0));
    EXPECT_TRUE(point(p, 1.3, 0.0, 0.0).isApprox(at4(1.3, 1, 0, 0), 1e-15));
    EXPECT_LT((point(p, 1.3, 0.0, kPi / 2) - at4(1.3, 0, 0, 1)).norm(), 1e-15);
}

TEST(CanalPoint, RevolutionFormAroundLine) {
    const CanalPatch p = fixtures::cone();
    for (double v1 : {0.2, 1.0, 1.7}) {
        const RadiusJet r = p.profile(v1);
        const double w = r.rho * std::sqrt(1 - r.d1 * r.d1);
        const double v2 = 0.8, v3 = -0.3;
        const Vec expect = at4(v1 - r.rho * r.d1, w * std::cos(v2) * std::cos(v3), w * std::sin(v2) * std::cos(v3),
                               w * std::sin(v3));
        EXPECT_LT((point(p, v1, v2, v3) - expect).norm(), 1e-14);
    }
}

TEST(CanalPoint, SphereMembership) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& np : fixtures::all_patches()) {
        const auto& d = np.patch.domain;
        for (int i = 0; i < 100; ++i) {
            const double v1 = d[0].lo + u(rng) * d[0].span();
            const Vec x = point(np.patch, v1, 2 * kPi * u(rng), 2 * kPi * u(rng));
            const double rho = np.patch.profile(v1).rho;
            EXPECT_NEAR((x - np.patch.curve.position(v1)).squaredNorm(), rho * rho, 1e-10 * rho * rho) << np.name;
        }
    }
}

TEST(CanalPoint, CircleTubeDistance) {
    const CanalPatch p = fixtures::circle_tube();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 5; ++k) {
                const double v1 = i * 2.5;
                EXPECT_NEAR((point(p, v1, j * 1.2, k * 1.2) - p.curve.position(v1)).norm(), 0.5, 1e-12);
            }
}

TEST(TubularPoint, AgreesWithCanalPoint) {
    const CanalPatch p = fixtures::circle_tube();
    const std::vector<double> x{0.0, 0.0, 0.0};
    const FrenetData fr = frenet_apparatus(p.curve, 0.0);
    EXPECT_LT((tubular_point(p, x) - (p.curve.position(0.0) + 0.5 * fr.frame[1])).norm(), 1e-15);
    for (double v2 : {0.3, 2.0})
        for (double v3 : {-1.0, 0.7}) {
            const std::vector<double> y{3.1, v2, v3};
            EXPECT_LT((tubular_point(p, y) - canal_point(p, y)).norm(), 1e-12);
        }
    EXPECT_THROW(tubular_point(fixtures::cone(), x), ContractError);
}

TEST(ClosedPartials, LineUnitTube) {
    const CanalPatch p = make_patch(make_line(Vec::Zero(4), basis_vector(4, 0), {0.0, 3.0}), RadiusProfile::constant(1.0));
    const double v2 = 0.7, v3 = 0.4;
    const auto c = canal_partials_closed(p, {1.0, v2, v3});
    EXPECT_LT((c[1] - at4(0, -std::sin(v2) * std::cos(v3), std::cos(v2) * std::cos(v3), 0)).norm(), 1e-15);
    const auto c0 = canal_partials_closed(p, {1.0, 0.0, 0.0});
    EXPECT_LT((c0[2] - at4(0, 0, 0, 1)).norm(), 1e-15);
}

TEST(ClosedPartials, MatchFiniteDifferences) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& np : fixtures::all_patches()) {
        const auto& d = np.patch.domain;
        for (int i = 0; i < 20; ++i) {
            const Params3 x{d[0].lo + (0.05 + 0.9 * u(rng)) * d[0].span(), 2 * kPi * u(rng), 2 * kPi * u(rng)};
            const auto c = canal_partials_closed(np.patch, x);
            for (int k = 0; k < 3; ++k) {
                const Vec fd = fd_partial(np.patch, x, k, 1e-5);
                EXPECT_LT((c[k] - fd).norm(), 1e-6 * std::max(1.0, fd.norm())) << np.name << " axis " << k;
            }
        }
    }
}

TEST(CanalJet, MatchesFiniteDifferences) {
    for (const auto& np : fixtures::all_patches()) {
        const auto& d = np.patch.domain;
        const Params3 x{d[0].lo + 0.43 * d[0].span(), 1.1, 0.4};
        const std::vector<double> xs(x.begin(), x.end());
        const SurfaceJet jet = canal_jet(np.patch, xs);
        EXPECT_LT((jet.x - canal_point(np.patch, xs)).norm(), 1e-14) << np.name;
        const auto c = canal_partials_closed(np.patch, x);
        for (int k = 0; k < 3; ++k) EXPECT_LT((jet.d1[k] - c[k]).norm(), 1e-12) << np.name;
        const double h = 1e-4;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                Params3 xp = x, xm = x;
                xp[b] += h;
                xm[b] -= h;
                const Vec second = (fd_partial(np.patch, xp, a, h) - fd_partial(np.patch, xm, a, h)) / (2 * h);
                EXPECT_LT((jet.d2[a][b] - second).norm(), 1e-5 * std::max(1.0, second.norm())) << np.name;
            }
        }
    }
}

TEST(CanalJet, ThreeDimensionalTorus) {
    const CanalPatch p = make_patch(make_circle(3, 2.0, {0.0, 4 * kPi}), RadiusProfile::constant(0.5));
    const std::vector<double> x{1.0, 0.3};
    const SurfaceJet jet = canal_jet(p, x);
    EXPECT_LT((jet.x - canal_point(p, x)).norm(), 1e-14);
    EXPECT_NEAR(jet.d1[1].norm(), 0.5, 1e-14);
}

TEST(TabulatedRadius, QuinticHermiteIsExactOnQuintics) {
    auto f = [](double v) { return 1.0 + 0.1 * v - 0.05 * v * v + 0.01 * std::pow(v, 5); };
    auto f1 = [](double v) { return 0.1 - 0.1 * v + 0.05 * std::pow(v, 4); };
    auto f2 = [](double v) { return -0.1 + 0.2 * std::pow(v, 3); };
    std::vector<double> v, r, d1, d2;
    for (int i = 0; i <= 4; ++i) {
        const double x = 0.5 * i;
        v.push_back(x);
        r.push_back(f(x));
        d1.push_back(f1(x));
        d2.push_back(f2(x));
    }
    const RadiusProfile p = RadiusProfile::tabulated(RadiusKind::Table, v, r, d1, d2);
    for (double x : {0.0, 0.13, 0.77, 1.5, 1.99, 2.0}) {
        const RadiusJet j = p(x);
        EXPECT_NEAR(j.rho, f(x), 1e-13);
        EXPECT_NEAR(j.d1, f1(x), 1e-12);
        EXPECT_NEAR(j.d2, f2(x), 1e-11);
        EXPECT_NEAR(j.d3, 0.6 * x * x, 1e-9);
    }
    EXPECT_THROW(p(2.5), DomainError);
    EXPECT_THROW(RadiusProfile::tabulated(RadiusKind::Table, {0.0, 0.0}, {1, 1}, {0, 0}, {0, 0}), ContractError);
}

TEST(MakePatch, DefaultDomainAndChecks) {
    const CanalPatch p = fixtures::straight_tube();
    ASSERT_EQ(p.domain.size(), 3u);
    EXPECT_EQ(p.domain[0].lo, 0.0);
    EXPECT_EQ(p.domain[0].hi, 2.0);
    EXPECT_NEAR(p.domain[1].hi, 2 * kPi, 1e-15);
    EXPECT_THROW(make_patch(fixtures::quad_helix(), RadiusProfile::constant(1.0), {{0.0, 1.0}}), ContractError);
    EXPECT_THROW(RadiusProfile::constant(0.0), DomainError);
}

TEST(MakePatch, ConeSlopeAtRegularityLimit) {
    const CenterCurve line = make_line(Vec::Zero(4), basis_vector(4, 0), {0.0, 2.0});
    EXPECT_THROW(make_patch(line, RadiusProfile::linear(1.0, 1.0)), RegularityError);
    EXPECT_THROW(make_patch(line, RadiusProfile::linear(-0.5, 0.5)), DomainError);
    EXPECT_NO_THROW(make_patch(line, RadiusProfile::linear(0.999, 1.0)));
}
