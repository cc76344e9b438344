#include "canal/canal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace canal {

double RadiusJet::root() const { return std::sqrt(1.0 - d1 * d1); }

void check_regular(const RadiusJet& r, double eps) {
    if (!std::isfinite(r.rho) || !std::isfinite(r.d1) || !std::isfinite(r.d2)) {
        throw DomainError("radius profile: non-finite value");
    }
    if (!(r.rho > 0.0)) {
        std::ostringstream os;
        os << "radius profile: rho = " << r.rho << " is not positive";
        throw DomainError(os.str());
    }
    if (!(1.0 - r.d1 * r.d1 >= eps)) {
        std::ostringstream os;
        os << "radius profile: 1 - rho'^2 = " << 1.0 - r.d1 * r.d1 << " below regularity margin " << eps;
        throw RegularityError(os.str());
    }
}

const char* to_string(RadiusKind kind) {
    switch (kind) {
        case RadiusKind::Constant: return "constant";
        case RadiusKind::Linear: return "linear";
        case RadiusKind::PolyTrig: return "poly_trig";
        case RadiusKind::Catenoid: return "catenoid";
        case RadiusKind::Table: return "table";
    }
    return "unknown";
}

RadiusProfile RadiusProfile::constant(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("constant radius must be positive");
    return RadiusProfile(RadiusKind::Constant, [lambda](double) { return RadiusJet{lambda, 0, 0, 0}; },
                         lambda, 0.0);
}

RadiusProfile RadiusProfile::linear(double slope, double intercept) {
    return RadiusProfile(
        RadiusKind::Linear,
        [slope, intercept](double v) { return RadiusJet{slope * v + intercept, slope, 0, 0}; },
        intercept, slope);
}

RadiusProfile RadiusProfile::poly_trig(PolyTrig terms) {
    return RadiusProfile(RadiusKind::PolyTrig, [terms](double v) {
        return RadiusJet{terms.derivative(v, 0), terms.derivative(v, 1), terms.derivative(v, 2),
                         terms.derivative(v, 3)};
    });
}

RadiusProfile RadiusProfile::tabulated(RadiusKind kind, std::vector<double> nodes, std::vector<double> rho,
                                       std::vector<double> d1, std::vector<double> d2) {
    const std::size_t m = nodes.size();
    if (m < 2 || rho.size() != m || d1.size() != m || d2.size() != m) {
        throw ContractError("tabulated radius: inconsistent table sizes");
    }
    for (std::size_t i = 1; i < m; ++i) {
        if (!(nodes[i] > nodes[i - 1])) throw ContractError("tabulated radius: nodes must increase");
    }
    struct Table {
        std::vector<double> v, r, r1, r2;
    };
    auto t = std::make_shared<const Table>(Table{std::move(nodes), std::move(rho), std::move(d1), std::move(d2)});
    auto eval = [t](double v) {
        const auto& x = t->v;
        const double slack = 1e-12 * std::max(1.0, x.back() - x.front());
        if (!(v >= x.front() - slack && v <= x.back() + slack)) {
            std::ostringstream os;
            os << "tabulated radius: v1 = " << v << " outside [" << x.front() << ", " << x.back() << "]";
            throw DomainError(os.str());
        }
        auto it = std::upper_bound(x.begin(), x.end(), v);
        std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
        i = std::min(i, x.size() - 2);
        const double h = x[i + 1] - x[i];
        const double u = (v - x[i]) / h;
        const double c0 = t->r[i], c1 = h * t->r1[i], c2 = 0.5 * h * h * t->r2[i];
        const double P = t->r[i + 1] - (c0 + c1 + c2);
        const double D = h * t->r1[i + 1] - (c1 + 2.0 * c2);
        const double A = h * h * t->r2[i + 1] - 2.0 * c2;
        const double c3 = 10.0 * P - 4.0 * D + 0.5 * A;
        const double c4 = -15.0 * P + 7.0 * D - A;
        const double c5 = 6.0 * P - 3.0 * D + 0.5 * A;
        RadiusJet r;
        r.rho = c0 + u * (c1 + u * (c2 + u * (c3 + u * (c4 + u * c5))));
        r.d1 = (c1 + u * (2 * c2 + u * (3 * c3 + u * (4 * c4 + u * 5 * c5)))) / h;
        r.d2 = (2 * c2 + u * (6 * c3 + u * (12 * c4 + u * 20 * c5))) / (h * h);
        r.d3 = (6 * c3 + u * (24 * c4 + u * 60 * c5)) / (h * h * h);
        return r;
    };
    return RadiusProfile(kind, eval);
}

CanalPatch make_patch(CenterCurve curve, RadiusProfile profile, std::vector<Interval> domain) {
    if (!curve.unit_speed()) throw ContractError("make_patch: center curve must be unit speed");
    const int n = curve.dim();
    if (domain.empty()) {
        domain.push_back(curve.domain());
        for (int k = 2; k < n; ++k) domain.push_back({0.0, 2.0 * std::numbers::pi});
    }
    if (static_cast<int>(domain.size()) != n - 1) {
        throw ContractError("make_patch: domain must have n-1 axes");
    }
    for (const auto& iv : domain) {
        if (!(iv.hi > iv.lo)) throw ContractError("make_patch: empty parameter interval");
    }
    // Constant and linear radii are monotone, so the endpoints decide regularity.
    if (profile.kind() == RadiusKind::Constant || profile.kind() == RadiusKind::Linear) {
        check_regular(profile(domain[0].lo));
        check_regular(profile(domain[0].hi));
    }
    return CanalPatch{std::move(curve), std::move(profile), n, std::move(domain)};
}

std::vector<double> offset_coefficients(const RadiusJet& r, std::span<const double> angles, int n) {
    check_regular(r);
    return offset_coefficients<double>(r.rho, r.d1, angles, n);
}

namespace {

void check_params(const CanalPatch& patch, std::span<const double> params) {
    if (static_cast<int>(params.size()) != patch.n - 1) {
        throw ContractError("canal map expects n-1 parameters");
    }
    for (double p : params) {
        if (!std::isfinite(p)) throw DomainError("canal map: non-finite parameter");
    }
}

template <int M>
SurfaceJet canal_jet_impl(const CanalPatch& patch, std::span<const double> params) {
    using J = Jet2<M>;
    const int n = patch.n;
    const double v1 = params[0];
    const std::vector<Vec> d = patch.curve.derivatives(v1, n + 1);
    auto lift = [&](int j) {
        VecN<J> out(n);
        for (int c = 0; c < n; ++c) {
            typename J::Grad g = J::Grad::Zero();
            typename J::Hess h = J::Hess::Zero();
            g[0] = d[j + 1][c];
            h(0, 0) = d[j + 2][c];
            out[c] = J(d[j][c], g, h);
        }
        return out;
    };
    const VecN<J> alpha = lift(0);
    std::vector<VecN<J>> derivs;
    for (int j = 1; j <= n - 1; ++j) derivs.push_back(lift(j));
    const auto gs = gram_schmidt_frame<J>(derivs, n, patch.curve.frame_override());

    const RadiusJet r = patch.profile(v1);
    check_regular(r);
    typename J::Grad g = J::Grad::Zero();
    typename J::Hess h = J::Hess::Zero();
    g[0] = r.d1;
    h(0, 0) = r.d2;
    const J rho(r.rho, g, h);
    g[0] = r.d2;
    h(0, 0) = r.d3;
    const J drho(r.d1, g, h);

    std::vector<J> angles;
    for (int k = 1; k < M; ++k) angles.push_back(J::variable(params[k], k));
    const std::vector<J> a = offset_coefficients<J>(rho, drho, angles, n);
    VecN<J> x = alpha;
    for (int i = 0; i < n; ++i) x += a[i] * gs.frame[i];

    SurfaceJet out;
    out.x = Vec(n);
    out.d1.assign(M, Vec(n));
    out.d2.assign(M, std::vector<Vec>(M, Vec(n)));
    for (int c = 0; c < n; ++c) {
        out.x[c] = x[c].a;
        for (int i = 0; i < M; ++i) {
            out.d1[i][c] = x[c].g[i];
            for (int j = 0; j < M; ++j) out.d2[i][j][c] = x[c].h(i, j);
        }
    }
    return out;
}

}  // namespace

Vec canal_point(const CanalPatch& patch, std::span<const double> params) {
    check_params(patch, params);
    const FrenetData fr = frenet_apparatus(patch.curve, params[0]);
    const RadiusJet r = patch.profile(params[0]);
    const std::vector<double> a = offset_coefficients(r, params.subspan(1), patch.n);
    Vec x = patch.curve.position(params[0]);
    for (int i = 0; i < patch.n; ++i) x += a[i] * fr.frame[i];
    return x;
}

Vec tubular_point(const CanalPatch& patch, std::span<const double> params) {
    if (patch.profile.kind() != RadiusKind::Constant) {
        throw ContractError("tubular_point: profile must be constant");
    }
    check_params(patch, params);
    const double lambda = patch.profile.constant_value();
    const FrenetData fr = frenet_apparatus(patch.curve, params[0]);
    const std::vector<double> a = offset_coefficients<double>(lambda, 0.0, params.subspan(1), patch.n);
    Vec x = patch.curve.position(params[0]);
    for (int i = 1; i < patch.n; ++i) x += a[i] * fr.frame[i];
    return x;
}

std::array<Vec, 3> canal_partials_closed(const CanalPatch& patch, const Params3& params) {
    if (patch.n != 4) throw ContractError("canal_partials_closed: E^4 only");
    const FrenetData fr = frenet_apparatus(patch.curve, params[0]);
    const RadiusJet r = patch.profile(params[0]);
    check_regular(r);
    const double k1 = fr.curvatures[0], k2 = fr.curvatures[1], k3 = fr.curvatures[2];
    const double rho = r.rho, rp = r.d1, rpp = r.d2, w = r.root();
    const double c2 = std::cos(params[1]), s2 = std::sin(params[1]);
    const double c3 = std::cos(params[2]), s3 = std::sin(params[2]);
    const double radial = rp * w - rho * rp * rpp / w;  // d/dv1 of rho sqrt(1 - rho'^2)

    const std::array<double, 4> cv1{
        1.0 - rp * rp - k1 * rho * w * c2 * c3 - rho * rpp,
        -k1 * rho * rp - k2 * rho * w * s2 * c3 + radial * c2 * c3,
        rho * w * (k2 * c2 * c3 - k3 * s3) + radial * s2 * c3,
        k3 * rho * w * s2 * c3 + radial * s3,
    };
    const std::array<double, 4> cv2{0.0, -rho * w * s2 * c3, rho * w * c2 * c3, 0.0};
    const std::array<double, 4> cv3{0.0, -rho * w * c2 * s3, -rho * w * s2 * s3, rho * w * c3};

    auto ambient = [&](const std::array<double, 4>& c) {
        Vec v = Vec::Zero(4);
        for (int i = 0; i < 4; ++i) v += c[i] * fr.frame[i];
        return v;
    };
    return {ambient(cv1), ambient(cv2), ambient(cv3)};
}

SurfaceJet canal_jet(const CanalPatch& patch, std::span<const double> params) {
    check_params(patch, params);
    switch (patch.n) {
        case 3: return canal_jet_impl<2>(patch, params);
        case 4: return canal_jet_impl<3>(patch, params);
        default: throw ContractError("canal_jet: exact derivatives are available for n = 3 and 4");
    }
}

}  // namespace canal
