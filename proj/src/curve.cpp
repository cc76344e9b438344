#include "canal/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace canal {

namespace {

void check_orthonormal(const Frame& f, int n, double tol) {
    if (static_cast<int>(f.size()) != n) throw ContractError("frame override must hold n vectors");
    for (int i = 0; i < n; ++i) {
        if (f[i].size() != n) throw ContractError("frame override vector has wrong dimension");
        for (int j = 0; j < n; ++j) {
            const double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(dot<double>(f[i], f[j]) - expect) > tol) {
                throw ContractError("frame override is not orthonormal");
            }
        }
    }
}

double falling(int k, int order) {
    // k (k-1) ... (k-order+1)
    double r = 1.0;
    for (int i = 0; i < order; ++i) r *= static_cast<double>(k - i);
    return r;
}

// Completes {d} to an orthonormal basis with det = +1, d first.
Frame basis_from_direction(const Vec& d) {
    const int n = static_cast<int>(d.size());
    Frame f{d};
    for (int k = 0; k < n && static_cast<int>(f.size()) < n; ++k) {
        Vec e = basis_vector(n, k);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : f) e -= dot<double>(e, v) * v;
        }
        if (norm<double>(e) > 1e-6) f.push_back(e / norm<double>(e));
    }
    MatN<double> m(n, n);
    for (int i = 0; i < n; ++i) m.row(i) = f[i].transpose();
    if (determinant<double>(m) < 0.0) f.back() = -f.back();
    return f;
}

// ---- truncated Taylor series -------------------------------------------------

using Series = std::vector<double>;  // coefficients c_0..c_m

Series mul(const Series& a, const Series& b, int m) {
    Series r(m + 1, 0.0);
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; i + j <= m; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// u^p for u_0 > 0.
Series power(const Series& u, double p, int m) {
    Series w(m + 1, 0.0);
    w[0] = std::pow(u[0], p);
    for (int k = 1; k <= m; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * u[j] * w[k - j];
        w[k] = s / (k * u[0]);
    }
    return w;
}

// f(tau(eps)) where tau_0 = 0.
Series compose(const Series& f, const Series& tau, int m) {
    Series r(m + 1, 0.0);
    r[0] = f[m];
    for (int j = m - 1; j >= 0; --j) {
        r = mul(r, tau, m);
        r[0] += f[j];
    }
    return r;
}

class ArcLengthMap {
public:
    ArcLengthMap(CenterCurve base, int samples) : base_(std::move(base)) {
        if (samples < 2) throw ContractError("reparametrize_arclength: need at least 2 samples");
        const Interval dom = base_.domain();
        const int n_knots = samples;
        t_.resize(n_knots);
        s_.resize(n_knots);
        slope_.resize(n_knots);
        for (int i = 0; i < n_knots; ++i) {
            t_[i] = dom.lo + dom.span() * i / (n_knots - 1);
        }
        t_.back() = dom.hi;
        s_[0] = 0.0;
        for (int i = 0; i < n_knots; ++i) {
            const double sp = checked_speed(t_[i]);
            slope_[i] = 1.0 / sp;
            if (i > 0) s_[i] = s_[i - 1] + integrate(t_[i - 1], t_[i]);
        }
        // Fritsch-Carlson limiter keeps the cubic inverse monotone.
        for (int i = 0; i + 1 < n_knots; ++i) {
            const double delta = (t_[i + 1] - t_[i]) / (s_[i + 1] - s_[i]);
            const double a = slope_[i] / delta, b = slope_[i + 1] / delta;
            const double r = a * a + b * b;
            if (r > 9.0) {
                const double tau = 3.0 / std::sqrt(r);
                slope_[i] = tau * a * delta;
                slope_[i + 1] = tau * b * delta;
            }
        }
    }

    double length() const { return s_.back(); }
    const CenterCurve& base() const { return base_; }

    double speed(double t) const { return norm<double>(base_.derivatives(t, 1)[1]); }

    double checked_speed(double t) const {
        const double sp = speed(t);
        if (!(sp > 1e-8)) {
            std::ostringstream os;
            os << "curve is not regular at t = " << t << " (speed " << sp << ")";
            throw DegeneracyError(os.str());
        }
        return sp;
    }

    double integrate(double a, double b) const {
        if (a == b) return 0.0;
        return adaptive_simpson([this](double t) { return checked_speed(t); }, a, b,
                                1e-14 * std::max(1.0, std::abs(b - a)));
    }

    double t_of_s(double s) const {
        const auto it = std::upper_bound(s_.begin(), s_.end(), s);
        std::size_t i = (it == s_.begin()) ? 0 : static_cast<std::size_t>(it - s_.begin()) - 1;
        i = std::min(i, s_.size() - 2);
        const double h = s_[i + 1] - s_[i];
        const double x = (s - s_[i]) / h;
        // cubic Hermite guess
        const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
        const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
        double t = h00 * t_[i] + h10 * h * slope_[i] + h01 * t_[i + 1] + h11 * h * slope_[i + 1];
        const bool inside = x >= 0.0 && x <= 1.0;
        double lo = t_[i], hi = t_[i + 1];
        if (inside) t = std::clamp(t, lo, hi);
        // Safeguarded Newton on  s_i + int_{t_i}^{t} |alpha'| - s = 0
        const double eps = std::numeric_limits<double>::epsilon();
        for (int iter = 0; iter < 100; ++iter) {
            const double f = s_[i] + integrate(t_[i], t) - s;
            if (std::abs(f) <= 2.0 * eps * std::max(1.0, std::abs(s))) break;
            double next = t - f / checked_speed(t);
            if (inside) {
                if (f > 0.0) hi = t; else lo = t;
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            }
            const bool done = std::abs(next - t) <= 4.0 * eps * std::max(1.0, std::abs(t));
            t = next;
            if (done) break;
        }
        return t;
    }

    // Derivatives of alpha(t(s)) up to `order` by series composition.
    std::vector<Vec> derivatives(double s, int order) const {
        const double t0 = t_of_s(s);
        const int m = order;
        const std::vector<Vec> d = base_.derivatives(t0, m + 1);
        const int n = base_.dim();
        // alpha(t0 + delta) coefficients per component
        std::vector<Series> alpha(n, Series(m + 1, 0.0));
        std::vector<Series> velocity(n, Series(m + 1, 0.0));
        double fact = 1.0;
        for (int j = 0; j <= m; ++j) {
            if (j > 0) fact *= j;
            for (int c = 0; c < n; ++c) {
                alpha[c][j] = d[j][c] / fact;
                velocity[c][j] = d[j + 1][c] / fact;
            }
        }
        Series speed_sq(m + 1, 0.0);
        for (int c = 0; c < n; ++c) {
            const Series sq = mul(velocity[c], velocity[c], m);
            for (int j = 0; j <= m; ++j) speed_sq[j] += sq[j];
        }
        const Series inv_speed = power(speed_sq, -0.5, m);
        // tau' = inv_speed(tau), tau(0) = 0; each pass fixes one more coefficient.
        Series tau(m + 1, 0.0);
        for (int k = 1; k <= m; ++k) {
            const Series rhs = compose(inv_speed, tau, m);
            for (int j = 1; j <= k; ++j) tau[j] = rhs[j - 1] / j;
        }
        std::vector<Vec> out(m + 1, Vec::Zero(n));
        for (int c = 0; c < n; ++c) {
            const Series comp = compose(alpha[c], tau, m);
            double f = 1.0;
            for (int j = 0; j <= m; ++j) {
                if (j > 0) f *= j;
                out[j][c] = comp[j] * f;
            }
        }
        return out;
    }

private:
    CenterCurve base_;
    std::vector<double> t_, s_, slope_;
};

}  // namespace

// ---- CenterCurve -------------------------------------------------------------

CenterCurve::CenterCurve(int dim, Interval domain, CurveEvaluator eval, bool unit_speed,
                         std::optional<Frame> frame_override)
    : dim_(dim),
      domain_(domain),
      eval_(std::make_shared<const CurveEvaluator>(std::move(eval))),
      unit_speed_(unit_speed) {
    if (dim < 3 || dim > kMaxDim) throw ContractError("CenterCurve: dimension out of range");
    if (!(domain.hi > domain.lo)) throw ContractError("CenterCurve: empty domain");
    if (frame_override) {
        check_orthonormal(*frame_override, dim, 1e-12);
        override_ = std::move(frame_override);
    }
}

std::vector<Vec> CenterCurve::derivatives(double t, int order) const {
    if (order < 0) throw ContractError("CenterCurve::derivatives: negative order");
    if (!std::isfinite(t)) throw DomainError("CenterCurve::derivatives: non-finite parameter");
    std::vector<Vec> d = (*eval_)(t, order);
    if (static_cast<int>(d.size()) != order + 1) {
        throw ContractError("curve evaluator returned the wrong number of derivatives");
    }
    for (const auto& v : d) {
        if (v.size() != dim_) throw ContractError("curve evaluator returned the wrong dimension");
    }
    return d;
}

CenterCurve CenterCurve::with_frame_override(Frame frame) const {
    CenterCurve c = *this;
    check_orthonormal(frame, dim_, 1e-12);
    c.override_ = std::move(frame);
    return c;
}

CenterCurve CenterCurve::without_frame_override() const {
    CenterCurve c = *this;
    c.override_.reset();
    return c;
}

double PolyTrig::derivative(double t, int order) const {
    double v = 0.0;
    for (std::size_t k = static_cast<std::size_t>(order); k < poly.size(); ++k) {
        v += poly[k] * falling(static_cast<int>(k), order) *
             std::pow(t, static_cast<int>(k) - order);
    }
    for (const auto& term : trig) {
        // d^order cos(wt) = w^order cos(wt + order pi/2)
        const double w = std::pow(term.omega, order);
        const double phase = term.omega * t + order * M_PI / 2.0;
        v += w * (term.cos_coef * std::cos(phase) + term.sin_coef * std::sin(phase));
    }
    return v;
}

// ---- built-in curves ---------------------------------------------------------

CenterCurve make_line(const Vec& point, const Vec& direction, Interval domain) {
    if (point.size() != direction.size()) throw ContractError("make_line: dimension mismatch");
    const double len = norm<double>(direction);
    if (!(len > 0.0)) throw DegeneracyError("make_line: zero direction");
    const Vec d = direction / len;
    const int n = static_cast<int>(point.size());
    auto eval = [point, d, n](double s, int order) {
        std::vector<Vec> out(order + 1, Vec::Zero(n));
        out[0] = point + s * d;
        if (order >= 1) out[1] = d;
        return out;
    };
    return CenterCurve(n, domain, eval, true, basis_from_direction(d));
}

CenterCurve make_circle(int n, double radius, Interval domain) {
    if (!(radius > 0.0)) throw DomainError("make_circle: radius must be positive");
    auto eval = [n, radius](double s, int order) {
        std::vector<Vec> out(order + 1, Vec::Zero(n));
        for (int j = 0; j <= order; ++j) {
            const double scale = radius * std::pow(1.0 / radius, j);
            const double phase = s / radius + j * M_PI / 2.0;
            out[j][0] = scale * std::cos(phase);
            out[j][1] = scale * std::sin(phase);
        }
        return out;
    };
    Frame identity;
    for (int k = 0; k < n; ++k) identity.push_back(basis_vector(n, k));
    return CenterCurve(n, domain, eval, true, identity);
}

CenterCurve make_quad_helix(double a, double b, double c, Interval domain) {
    const double speed = std::sqrt(a * a + b * b * c * c);
    if (!(speed > 0.0)) throw DegeneracyError("make_quad_helix: zero speed");
    std::vector<PolyTrig> comps(4);
    comps[0].trig = {{1.0 / speed, a, 0.0}};
    comps[1].trig = {{1.0 / speed, 0.0, a}};
    comps[2].trig = {{c / speed, b, 0.0}};
    comps[3].trig = {{c / speed, 0.0, b}};
    auto eval = [comps](double s, int order) {
        std::vector<Vec> out(order + 1, Vec::Zero(4));
        for (int j = 0; j <= order; ++j) {
            for (int k = 0; k < 4; ++k) out[j][k] = comps[k].derivative(s, j);
        }
        return out;
    };
    return CenterCurve(4, domain, eval, true);
}

CenterCurve make_poly_trig(std::vector<PolyTrig> components, Interval t_domain) {
    const int n = static_cast<int>(components.size());
    auto eval = [components, n](double t, int order) {
        std::vector<Vec> out(order + 1, Vec::Zero(n));
        for (int j = 0; j <= order; ++j) {
            for (int k = 0; k < n; ++k) out[j][k] = components[k].derivative(t, j);
        }
        return out;
    };
    return CenterCurve(n, t_domain, eval, false);
}

CenterCurve rigid_transform(const CenterCurve& curve, const MatN<double>& rotation, const Vec& shift) {
    const int n = curve.dim();
    if (rotation.rows() != n || rotation.cols() != n || shift.size() != n) {
        throw ContractError("rigid_transform: dimension mismatch");
    }
    if (!(rotation.transpose() * rotation - MatN<double>::Identity(n, n)).isZero(1e-12)) {
        throw ContractError("rigid_transform: matrix is not orthogonal");
    }
    auto eval = [curve, rotation, shift](double t, int order) {
        std::vector<Vec> d = curve.derivatives(t, order);
        for (int j = 0; j <= order; ++j) {
            d[j] = rotation * d[j];
            if (j == 0) d[j] += shift;
        }
        return d;
    };
    std::optional<Frame> ov;
    if (curve.frame_override()) {
        Frame f;
        for (const auto& v : *curve.frame_override()) f.push_back(rotation * v);
        ov = std::move(f);
    }
    return CenterCurve(n, curve.domain(), eval, curve.unit_speed(), std::move(ov));
}

CenterCurve reparametrize_arclength(const CenterCurve& curve, int samples) {
    auto map = std::make_shared<const ArcLengthMap>(curve, samples);
    auto eval = [map](double s, int order) { return map->derivatives(s, order); };
    return CenterCurve(curve.dim(), Interval{0.0, map->length()}, eval, true, curve.frame_override());
}

// ---- quadrature --------------------------------------------------------------

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// ---- Frenet ------------------------------------------------------------------

namespace {

std::vector<double> curvatures_at(const CenterCurve& curve, double s, Frame* frame_out) {
    const int n = curve.dim();
    const std::vector<Vec> d = curve.derivatives(s, n);
    const auto gs = gram_schmidt_frame<double>(std::span<const Vec>(d.data() + 1, n - 1), n,
                                               curve.frame_override());
    const double speed = norm<double>(d[1]);
    std::vector<double> k(n - 1, 0.0);
    const int built = gs.degenerate_at == 0 ? n - 1 : gs.degenerate_at;
    for (int i = 1; i < built; ++i) {
        k[i - 1] = gs.residual_norms[i] / (gs.residual_norms[i - 1] * speed);
    }
    if (gs.degenerate_at == 0) {
        Vec e = d[n];
        for (int m = 0; m < n - 1; ++m) e -= dot<double>(e, gs.frame[m]) * gs.frame[m];
        k[n - 2] = dot<double>(e, gs.frame[n - 1]) / (gs.residual_norms[n - 2] * speed);
    }
    if (frame_out) *frame_out = gs.frame;
    return k;
}

}  // namespace

FrenetData frenet_apparatus(const CenterCurve& curve, double s, bool with_derivatives) {
    if (!curve.unit_speed()) {
        throw ContractError("frenet_apparatus: curve must be arc-length parametrized");
    }
    FrenetData out;
    out.s = s;
    out.curvatures = curvatures_at(curve, s, &out.frame);
    if (with_derivatives) {
        const double h = frenet_fd_step(s);
        const auto kp = curvatures_at(curve, s + h, nullptr);
        const auto km = curvatures_at(curve, s - h, nullptr);
        out.curvature_derivs.resize(kp.size());
        for (std::size_t i = 0; i < kp.size(); ++i) out.curvature_derivs[i] = (kp[i] - km[i]) / (2 * h);
    }
    return out;
}

}  // namespace canal
