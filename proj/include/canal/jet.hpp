#pragma once

// Second-order forward-mode automatic differentiation.
//
// Jet2<N> carries a value together with its gradient and Hessian with respect
// to N independent variables. Evaluating a point map on Jet2<3> arguments
// yields the map, its three first partials and its six distinct second
// partials in one sweep, exact up to rounding.

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "canal/linalg.hpp"

namespace canal {

template <int N>
struct Jet2 {
    using Grad = Eigen::Matrix<double, N, 1>;
    using Hess = Eigen::Matrix<double, N, N>;

    double a = 0.0;
    Grad g = Grad::Zero();
    Hess h = Hess::Zero();

    Jet2() = default;
    Jet2(double value) : a(value) {}  // NOLINT: implicit lift of constants
    Jet2(double value, const Grad& grad, const Hess& hess) : a(value), g(grad), h(hess) {}

    // Independent variable number k at value x.
    static Jet2 variable(double x, int k) {
        Jet2 j(x);
        j.g[k] = 1.0;
        return j;
    }

    Jet2& operator+=(const Jet2& o) { a += o.a; g += o.g; h += o.h; return *this; }
    Jet2& operator-=(const Jet2& o) { a -= o.a; g -= o.g; h -= o.h; return *this; }
    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
    Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

    friend Jet2 operator+(Jet2 x, const Jet2& y) { return x += y; }
    friend Jet2 operator-(Jet2 x, const Jet2& y) { return x -= y; }
    friend Jet2 operator-(const Jet2& x) { return Jet2(-x.a, -x.g, -x.h); }
    friend Jet2 operator+(const Jet2& x) { return x; }

    friend Jet2 operator*(const Jet2& x, const Jet2& y) {
        const Hess cross = x.g * y.g.transpose();
        return Jet2(x.a * y.a, x.a * y.g + y.a * x.g,
                    x.a * y.h + y.a * x.h + cross + cross.transpose());
    }
    friend Jet2 operator*(const Jet2& x, double s) { return Jet2(x.a * s, x.g * s, x.h * s); }
    friend Jet2 operator*(double s, const Jet2& x) { return x * s; }
    friend Jet2 operator/(const Jet2& x, double s) { return x * (1.0 / s); }
    friend Jet2 operator/(const Jet2& x, const Jet2& y) { return x * reciprocal(y); }

    // phi(x) given phi, phi', phi'' at x.a
    friend Jet2 chain(const Jet2& x, double f0, double f1, double f2) {
        return Jet2(f0, f1 * x.g, f1 * x.h + f2 * (x.g * x.g.transpose()));
    }
    friend Jet2 reciprocal(const Jet2& x) {
        const double r = 1.0 / x.a;
        return chain(x, r, -r * r, 2.0 * r * r * r);
    }
    friend Jet2 sin(const Jet2& x) {
        const double s = std::sin(x.a), c = std::cos(x.a);
        return chain(x, s, c, -s);
    }
    friend Jet2 cos(const Jet2& x) {
        const double s = std::sin(x.a), c = std::cos(x.a);
        return chain(x, c, -s, -c);
    }
    friend Jet2 sqrt(const Jet2& x) {
        const double r = std::sqrt(x.a);
        return chain(x, r, 0.5 / r, -0.25 / (r * x.a));
    }
    friend Jet2 abs(const Jet2& x) { return x.a < 0.0 ? -x : x; }

    friend bool operator<(const Jet2& x, const Jet2& y) { return x.a < y.a; }
    friend bool operator>(const Jet2& x, const Jet2& y) { return x.a > y.a; }
};

using Jet3 = Jet2<3>;

// Scalar-generic helpers so templated geometry reads the same for double and jets.
inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet2<N>& x) {
    return x.a;
}

}  // namespace canal

namespace Eigen {

template <int N>
struct NumTraits<canal::Jet2<N>> : NumTraits<double> {
    using Real = canal::Jet2<N>;
    using NonInteger = canal::Jet2<N>;
    using Nested = canal::Jet2<N>;
    using Literal = canal::Jet2<N>;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1 + N + N * N,
        AddCost = 1 + N + N * N,
        MulCost = 3 + 3 * N + 4 * N * N,
    };
    static inline Real epsilon() { return Real(NumTraits<double>::epsilon()); }
    static inline Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
    static inline Real highest() { return Real(NumTraits<double>::highest()); }
    static inline Real lowest() { return Real(NumTraits<double>::lowest()); }
    static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <int N, typename BinaryOp>
struct ScalarBinaryOpTraits<canal::Jet2<N>, double, BinaryOp> {
    using ReturnType = canal::Jet2<N>;
};
template <int N, typename BinaryOp>
struct ScalarBinaryOpTraits<double, canal::Jet2<N>, BinaryOp> {
    using ReturnType = canal::Jet2<N>;
};

}  // namespace Eigen

namespace canal {

// Position of an immersion (v_1..v_m) -> E^n with its first and second
// partial derivatives at one parameter point.
struct SurfaceJet {
    Vec x;
    std::vector<Vec> d1;               // m
    std::vector<std::vector<Vec>> d2;  // m x m, symmetric
};

}  // namespace canal
