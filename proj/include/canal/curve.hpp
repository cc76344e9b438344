#pragma once

// Center curves in E^n and their Frenet apparatus.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "canal/jet.hpp"
#include "canal/linalg.hpp"

namespace canal {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double span() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t <= hi; }
};

// Orthonormal list of n vectors in E^n.
using Frame = std::vector<Vec>;

// Returns position and derivatives d^j alpha / dt^j for j = 0..order.
using CurveEvaluator = std::function<std::vector<Vec>(double t, int order)>;

// Immutable, cheaply copyable handle to a regular curve in E^n.
class CenterCurve {
public:
    CenterCurve(int dim, Interval domain, CurveEvaluator eval, bool unit_speed,
                std::optional<Frame> frame_override = std::nullopt);

    int dim() const { return dim_; }
    const Interval& domain() const { return domain_; }
    bool unit_speed() const { return unit_speed_; }
    const std::optional<Frame>& frame_override() const { return override_; }

    // order + 1 vectors, each of dimension dim().
    std::vector<Vec> derivatives(double t, int order) const;
    Vec position(double t) const { return derivatives(t, 0)[0]; }

    // Constant orthonormal basis used to complete the Frenet frame when a
    // curvature k_i vanishes (straight lines, planar circles in E^4).
    CenterCurve with_frame_override(Frame frame) const;
    CenterCurve without_frame_override() const;

private:
    int dim_;
    Interval domain_;
    std::shared_ptr<const CurveEvaluator> eval_;
    bool unit_speed_;
    std::optional<Frame> override_;
};

// One coordinate of a poly/trig curve: sum_k c_k t^k + sum_j (a_j cos w_j t + b_j sin w_j t).
struct TrigTerm {
    double omega = 0.0;
    double cos_coef = 0.0;
    double sin_coef = 0.0;
};

struct PolyTrig {
    std::vector<double> poly;
    std::vector<TrigTerm> trig;

    // d^order/dt^order at t.
    double derivative(double t, int order) const;
};

// Built-in curve library. All but make_poly_trig are unit speed.
CenterCurve make_line(const Vec& point, const Vec& direction, Interval domain);
CenterCurve make_circle(int n, double radius, Interval domain);
// (a cos t, a sin t, b cos ct, b sin ct) in E^4, traversed at unit speed.
CenterCurve make_quad_helix(double a, double b, double c, Interval domain);
CenterCurve make_poly_trig(std::vector<PolyTrig> components, Interval t_domain);

// x -> rotation * x + shift applied to the curve (and to its frame override).
CenterCurve rigid_transform(const CenterCurve& curve, const MatN<double>& rotation, const Vec& shift);

// Arc-length reparametrization. Arc length is tabulated by adaptive Simpson
// quadrature at `samples` knots and inverted by monotone cubic interpolation,
// polished by Newton's method. Derivatives of the reparametrized curve follow
// from Taylor-series composition alpha(t(s)) with dt/ds = 1/|alpha'(t)|.
// The new parameter runs over [0, L].
CenterCurve reparametrize_arclength(const CenterCurve& curve, int samples = 256);

// Adaptive Simpson quadrature of f over [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 48);

inline constexpr double kFrenetThreshold = 1e-10;

template <class T>
struct GramSchmidtFrame {
    std::vector<VecN<T>> frame;          // F_1..F_n
    std::vector<double> residual_norms;  // |e_1|, |e_2|, ... for vectors built from derivatives
    int degenerate_at = 0;               // index i of the first vanishing k_i, 0 if none
};

// Frenet frame from alpha', ..., alpha^{(n-1)} (n-1 vectors, any parametrization).
// Gram-Schmidt builds F_1..F_{n-1}; F_n closes the frame through cross_n with
// det[F_1..F_n] = +1. If some k_i (i <= n-2) is below kFrenetThreshold, the
// remaining vectors are taken from `completion` (projected against the frame
// built so far); without a completion basis that is a DegeneracyError.
template <class T>
GramSchmidtFrame<T> gram_schmidt_frame(std::span<const VecN<T>> derivs, int n,
                                       const std::optional<Frame>& completion) {
    using std::sqrt;
    if (static_cast<int>(derivs.size()) < n - 1) {
        throw ContractError("gram_schmidt_frame: need derivatives up to order n-1");
    }
    GramSchmidtFrame<T> out;
    auto project_out = [&](VecN<T> e) {
        // two passes keep the frame orthonormal to rounding
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& f : out.frame) e -= dot<T>(e, f) * f;
        }
        return e;
    };
    const double speed = value_of(norm<T>(derivs[0]));
    for (int j = 0; j < n - 1; ++j) {
        VecN<T> e = project_out(derivs[static_cast<std::size_t>(j)]);
        const T len = norm<T>(e);
        const double lv = value_of(len);
        if (j == 0 && !(lv > 1e-8)) throw DegeneracyError("gram_schmidt_frame: curve is not regular");
        if (j > 0) {
            const double k = lv / (out.residual_norms.back() * speed);
            if (!(k > kFrenetThreshold)) {
                out.degenerate_at = j;
                break;
            }
        }
        out.residual_norms.push_back(lv);
        out.frame.push_back(e / len);
    }
    if (out.degenerate_at != 0) {
        if (!completion) {
            throw DegeneracyError("Frenet curvature k_" + std::to_string(out.degenerate_at) +
                                  " vanishes and no frame override is available");
        }
        for (const Vec& o : *completion) {
            if (static_cast<int>(out.frame.size()) == n) break;
            VecN<T> c(n);
            for (int i = 0; i < n; ++i) c[i] = T(o[i]);
            c = project_out(c);
            const T len = norm<T>(c);
            if (value_of(len) > 1e-6) out.frame.push_back(c / len);
        }
        if (static_cast<int>(out.frame.size()) != n) {
            throw DegeneracyError("gram_schmidt_frame: frame override does not complete the frame");
        }
        return out;
    }
    VecN<T> last = cross_n<T>(std::span<const VecN<T>>(out.frame.data(), out.frame.size()));
    if ((n - 1) % 2 == 1) last = -last;
    out.frame.push_back(last / norm<T>(last));
    return out;
}

struct FrenetData {
    double s = 0.0;
    Frame frame;                       // F_1..F_n
    std::vector<double> curvatures;    // k_1..k_{n-1}
    std::vector<double> curvature_derivs;  // k_i', empty unless requested

    int dim() const { return static_cast<int>(frame.size()); }
};

// Frame and curvatures at arc length s. k_i = |e_{i+1}| / |e_i| from the
// Gram-Schmidt residuals (k_{n-1} signed through F_n); curvatures past a
// vanishing one are zero. With `with_derivatives`, k_i' by central differences
// with step max(1e-5, 1e-5 |s|).
FrenetData frenet_apparatus(const CenterCurve& curve, double s, bool with_derivatives = false);

// Central-difference step used for frame and curvature derivatives.
inline double frenet_fd_step(double s) { return std::max(1e-5, 1e-5 * std::abs(s)); }

}  // namespace canal
