#pragma once

// Radius profiles and pointwise construction of canal and tubular
// hypersurfaces around a unit-speed center curve.
//
//   X(v_1..v_{n-1}) = alpha(v_1) + sum_i a_i F_i(v_1)
//
// with a_1 = -rho rho' and a_2..a_n the sin/cos ladder over the angles
// v_2..v_{n-1} scaled by rho sqrt(1 - rho'^2). Only the "+" branch is built.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "canal/curve.hpp"
#include "canal/jet.hpp"
#include "canal/linalg.hpp"

namespace canal {

inline constexpr double kRegularityMargin = 1e-6;

// rho and its first three derivatives at one v_1.
struct RadiusJet {
    double rho = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    double root() const;  // sqrt(1 - rho'^2), after check_regular
};

// Throws DomainError if rho <= 0 and RegularityError if 1 - rho'^2 < eps.
void check_regular(const RadiusJet& r, double eps = kRegularityMargin);

enum class RadiusKind { Constant, Linear, PolyTrig, Catenoid, Table };

const char* to_string(RadiusKind kind);

class RadiusProfile {
public:
    static RadiusProfile constant(double lambda);
    static RadiusProfile linear(double slope, double intercept);
    static RadiusProfile poly_trig(PolyTrig terms);
    // Quintic Hermite interpolation of (rho, rho', rho'') samples at
    // increasing nodes; rho''' comes from the interpolant.
    static RadiusProfile tabulated(RadiusKind kind, std::vector<double> nodes, std::vector<double> rho,
                                   std::vector<double> d1, std::vector<double> d2);

    RadiusJet operator()(double v1) const { return eval_(v1); }
    RadiusKind kind() const { return kind_; }
    // Constant: {lambda, 0}; Linear: {intercept, slope}.
    double constant_value() const { return c0_; }
    double slope() const { return c1_; }

private:
    RadiusProfile(RadiusKind kind, std::function<RadiusJet(double)> eval, double c0 = 0, double c1 = 0)
        : kind_(kind), eval_(std::move(eval)), c0_(c0), c1_(c1) {}

    RadiusKind kind_;
    std::function<RadiusJet(double)> eval_;
    double c0_;
    double c1_;
};

struct CanalPatch {
    CenterCurve curve;       // unit speed
    RadiusProfile profile;
    int n = 4;               // ambient dimension
    std::vector<Interval> domain;  // v_1 .. v_{n-1}

    int params() const { return n - 1; }
};

// Checks n against the curve, unit speed and the domain size. When `domain`
// is empty, v_1 spans the curve domain and every angle spans [0, 2 pi).
CanalPatch make_patch(CenterCurve curve, RadiusProfile profile, std::vector<Interval> domain = {});

// a_1..a_n; angles are v_2..v_{n-1}.
template <class T>
std::vector<T> offset_coefficients(const T& rho, const T& drho, std::span<const T> angles, int n) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    if (static_cast<int>(angles.size()) != n - 2) {
        throw ContractError("offset_coefficients: expected n-2 angles");
    }
    if (!(1.0 - value_of(drho) * value_of(drho) > 0.0)) {
        throw RegularityError("offset_coefficients: |rho'| >= 1");
    }
    // v_k lives at angles[k - 2]
    auto v = [&](int k) -> const T& { return angles[static_cast<std::size_t>(k - 2)]; };
    const T w = rho * sqrt(T(1.0) - drho * drho);
    std::vector<T> a(static_cast<std::size_t>(n), T(0.0));
    a[0] = -(rho * drho);
    T prod = w;
    for (int k = 2; k <= n - 1; ++k) prod = prod * cos(v(k));
    a[1] = prod;
    for (int i = 3; i <= n - 1; ++i) {
        T term = w * sin(v(n + 1 - i));
        for (int k = n + 2 - i; k <= n - 1; ++k) term = term * cos(v(k));
        a[static_cast<std::size_t>(i - 1)] = term;
    }
    a[static_cast<std::size_t>(n - 1)] = w * sin(v(n - 1));
    return a;
}

std::vector<double> offset_coefficients(const RadiusJet& r, std::span<const double> angles, int n);

// X = alpha(v_1) + sum a_i F_i(v_1).
Vec canal_point(const CanalPatch& patch, std::span<const double> params);

// alpha(v_1) + lambda [ladder]; requires a constant profile.
Vec tubular_point(const CanalPatch& patch, std::span<const double> params);

// First partials C_{v1}, C_{v2}, C_{v3} of the E^4 canal map from their
// Frenet-coordinate closed forms, returned in ambient coordinates.
std::array<Vec, 3> canal_partials_closed(const CanalPatch& patch, const Params3& params);

// Exact first and second partials of canal_point by second-order automatic
// differentiation through the Frenet construction (n = 3 or 4).
SurfaceJet canal_jet(const CanalPatch& patch, std::span<const double> params);

}  // namespace canal
