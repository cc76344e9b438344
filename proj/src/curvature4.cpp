#include "canal/curvature4.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace canal {

namespace {

struct Terms {
    double rho, rp, rpp, w, om;  // om = 1 - rho'^2, w = sqrt(om)
    double k1, k2, k3;
    double c2, s2, c3, s3;
    double A;  // k1 w cos v2 cos v3 + rho''
    double Q;
};

Terms terms(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    if (fr.dim() != 4) throw ContractError("curvature4: Frenet data must be in E^4");
    check_regular(r);
    Terms t{};
    t.rho = r.rho;
    t.rp = r.d1;
    t.rpp = r.d2;
    t.om = 1.0 - r.d1 * r.d1;
    t.w = std::sqrt(t.om);
    t.k1 = fr.curvatures[0];
    t.k2 = fr.curvatures[1];
    t.k3 = fr.curvatures[2];
    t.c2 = std::cos(v2);
    t.s2 = std::sin(v2);
    t.c3 = std::cos(v3);
    t.s3 = std::sin(v3);
    t.A = t.k1 * t.w * t.c2 * t.c3 + t.rpp;
    t.Q = t.rho * t.A - 1.0 + t.rp * t.rp;
    return t;
}

void require_off_focal(const Terms& t, const char* what) {
    if (!(std::abs(t.Q) > kQSingular)) {
        std::ostringstream os;
        os << what << ": focal locus, Q = " << t.Q;
        throw SingularityError(os.str());
    }
}

// numerator of K and of S_11
double gauss_numerator(const Terms& t) {
    const double cc = t.c2 * t.c3;
    return t.om * t.A -
           t.rho * (t.k1 * t.k1 * t.om * cc * cc + t.rpp * t.rpp + 2.0 * t.k1 * t.rpp * t.w * cc);
}

// Error-bound scale for a 3x3 determinant: the sum of absolute products.
double det_magnitude(const Mat3d& m) {
    const Mat3d a = m.cwiseAbs();
    return a(0, 0) * (a(1, 1) * a(2, 2) + a(1, 2) * a(2, 1)) + a(0, 1) * (a(1, 0) * a(2, 2) + a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) + a(1, 1) * a(2, 0));
}

void assert_det(double closed, const Mat3d& m, const char* what) {
    const double direct = determinant<double>(m);
    const double tol = 1e-9 * std::abs(closed) + 1e-12 * det_magnitude(m);
    if (!(std::abs(direct - closed) <= tol)) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": factorized determinant " << closed << " disagrees with direct " << direct;
        throw InconsistencyError(os.str());
    }
}

}  // namespace

double q_factor(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    return terms(fr, r, v2, v3).Q;
}

Vec unit_normal(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const Terms t = terms(fr, r, v2, v3);
    const auto& F = fr.frame;
    return -t.rp * F[0] + t.w * (t.c2 * t.c3 * F[1] + t.s2 * t.c3 * F[2] + t.s3 * F[3]);
}

FirstForm first_form(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const Terms t = terms(fr, r, v2, v3);
    const double rho = t.rho, rp = t.rp, om = t.om, w = t.w;
    const double k1 = t.k1, k2 = t.k2, k3 = t.k3;
    const double c2 = t.c2, s2 = t.s2, c3 = t.c3, s3 = t.s3;
    const double bend = rp * (rp * rp + rho * t.rpp - 1.0);

    const double p = k2 * rho * om * s2 * c3 + k1 * rho * rp * w + bend * c2 * c3;
    const double q = -k2 * rho * om * c2 * c3 + k3 * rho * om * s3 + bend * s2 * c3;
    const double u = bend * s3 - k3 * rho * om * s2 * c3;

    FirstForm out;
    out.Q = t.Q;
    Mat3d& g = out.g;
    g(0, 0) = (om * t.Q * t.Q + p * p + q * q + u * u) / om;
    g(0, 1) = rho * rho * (k1 * rp * w * s2 + k2 * om * c3 - k3 * om * c2 * s3) * c3;
    g(0, 2) = rho * rho * (k1 * rp * w * c2 * s3 + k3 * om * s2);
    g(1, 1) = rho * rho * om * c3 * c3;
    g(1, 2) = 0.0;
    g(2, 2) = rho * rho * om;
    g(1, 0) = g(0, 1);
    g(2, 0) = g(0, 2);
    g(2, 1) = g(1, 2);
    out.det_g = std::pow(rho, 4) * om * t.Q * t.Q * c3 * c3;
    out.near_singular = std::abs(t.Q) <= kQSingular || std::abs(c3) <= 1e-6;
    assert_det(out.det_g, g, "first_form");
    return out;
}

SecondForm second_form(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const Terms t = terms(fr, r, v2, v3);
    const double rho = t.rho, rp = t.rp, rpp = t.rpp, om = t.om, w = t.w;
    const double k1 = t.k1, k2 = t.k2, k3 = t.k3;
    const double c2 = t.c2, s2 = t.s2, c3 = t.c3, s3 = t.s3;

    SecondForm out;
    Mat3d& h = out.h;
    const double bracket =
        (k2 * k2 * c3 * c3 - k2 * k3 * c2 * std::sin(2.0 * v3) + k3 * k3 * (c3 * c3 * s2 * s2 + s3 * s3)) * om * om +
        k1 * k1 * om * (om * c2 * c2 * c3 * c3 + rp * rp) + rpp * rpp +
        2.0 * k1 * w * (k2 * rp * om * s2 + rpp * c2) * c3;
    h(0, 0) = rho / (rp * rp - 1.0) * bracket + k1 * w * c2 * c3 + rpp;
    h(0, 1) = rho * (-k1 * rp * w * s2 + om * (k3 * c2 * s3 - k2 * c3)) * c3;
    h(0, 2) = rho * (-k1 * rp * w * c2 * s3 - k3 * om * s2);
    h(1, 1) = -rho * om * c3 * c3;
    h(1, 2) = 0.0;
    h(2, 2) = -rho * om;
    h(1, 0) = h(0, 1);
    h(2, 0) = h(0, 2);
    h(2, 1) = h(1, 2);
    out.det_h = rho * rho * om * gauss_numerator(t) * c3 * c3;
    assert_det(out.det_h, h, "second_form");
    return out;
}

Mat3d shape_operator_closed(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const Terms t = terms(fr, r, v2, v3);
    require_off_focal(t, "shape_operator");
    const double rho = t.rho, rp = t.rp, om = t.om, w = t.w, Q = t.Q;
    const double k1 = t.k1, k2 = t.k2, k3 = t.k3;
    const double c2 = t.c2, s2 = t.s2, c3 = t.c3, s3 = t.s3;
    if (!(std::abs(c3) > 0.0)) throw SingularityError("shape_operator: coordinate pole cos v3 = 0");

    Mat3d s = Mat3d::Zero();
    s(0, 0) = gauss_numerator(t) / (Q * Q);
    s(1, 0) = (k1 * rp * w * s2 / c3 + k2 * om - k3 * om * c2 * s3 / c3) / (rho * Q);
    s(2, 0) = (Q * k3 * om * s2 +
               k1 * rp * c2 * s3 * (-om * w + rho * (k1 * om * c2 * c3 + w * t.rpp))) /
              (rho * Q * Q);
    s(1, 1) = -1.0 / rho;
    s(2, 2) = -1.0 / rho;
    return s;
}

Mat3d shape_operator(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const Mat3d closed = shape_operator_closed(fr, r, v2, v3);
    const FirstForm I = first_form(fr, r, v2, v3);
    const SecondForm II = second_form(fr, r, v2, v3);
    const Mat3d generic = inverse3(I.g) * II.h;
    const double scale = std::max(closed.cwiseAbs().maxCoeff(), 1.0 / r.rho);
    const double diff = (generic - closed).cwiseAbs().maxCoeff();
    if (!(diff <= 1e-8 * scale)) {
        std::ostringstream os;
        os << "shape_operator: g^-1 h differs from the closed entries by " << diff;
        throw InconsistencyError(os.str());
    }
    return closed;
}

FormsBundle forms(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const FirstForm I = first_form(fr, r, v2, v3);
    const SecondForm II = second_form(fr, r, v2, v3);
    return FormsBundle{I.g, I.det_g, II.h, II.det_h, unit_normal(fr, r, v2, v3),
                       shape_operator(fr, r, v2, v3), I.Q};
}

double gaussian_curvature(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const Terms t = terms(fr, r, v2, v3);
    require_off_focal(t, "gaussian_curvature");
    return gauss_numerator(t) / (t.rho * t.rho * t.Q * t.Q);
}

double mean_curvature(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const Terms t = terms(fr, r, v2, v3);
    require_off_focal(t, "mean_curvature");
    const double cc = t.c2 * t.c3;
    const double sq = t.k1 * t.k1 * t.om * cc * cc + 2.0 * t.k1 * t.rpp * t.w * cc + t.rpp * t.rpp;
    const double num = -3.0 * t.rho * t.rho * sq - 2.0 * t.om * t.om + 5.0 * t.rho * t.om * t.A;
    return num / (3.0 * t.rho * t.Q * t.Q);
}

Principal principal_curvatures(const FrenetData& fr, const RadiusJet& r, double v2, double v3) {
    const double K = gaussian_curvature(fr, r, v2, v3);
    const Principal p{-1.0 / r.rho, -1.0 / r.rho, K * r.rho * r.rho};
    const Eigen3 e = eig_shape3(shape_operator(fr, r, v2, v3));
    std::array<double, 3> mine{p.k1, p.k2, p.k3};
    std::sort(mine.begin(), mine.end());
    const std::array<double, 3> theirs{e.k1, e.k2, e.k3};
    for (int i = 0; i < 3; ++i) {
        if (!(std::abs(mine[i] - theirs[i]) <= 1e-8 * std::max(1.0, std::abs(theirs[i])))) {
            throw InconsistencyError("principal_curvatures: closed values differ from eigenvalues of S");
        }
    }
    return p;
}

KH tubular_curvatures(double k1, double lambda, double v2, double v3) {
    if (!(lambda > 0.0)) throw DomainError("tubular_curvatures: lambda must be positive");
    const double x = k1 * lambda * std::cos(v2) * std::cos(v3);
    if (!(std::abs(1.0 - x) > kQSingular)) {
        throw SingularityError("tubular_curvatures: focal condition k1 lambda cos v2 cos v3 = 1");
    }
    const double K = k1 * std::cos(v2) * std::cos(v3) / (lambda * lambda * (1.0 - x));
    const double H = (2.0 - 3.0 * x) / (3.0 * lambda * (-1.0 + x));
    return {K, H};
}

double identity_residual(double K, double H, double rho) {
    return std::abs(3.0 * H * rho - K * rho * rho * rho + 2.0);
}

CurvatureReport curvature_report(const CanalPatch& patch, const Params3& at) {
    const FrenetData fr = frenet_apparatus(patch.curve, at[0]);
    const RadiusJet r = patch.profile(at[0]);
    CurvatureReport rep;
    rep.K = gaussian_curvature(fr, r, at[1], at[2]);
    rep.H = mean_curvature(fr, r, at[1], at[2]);
    rep.principal = principal_curvatures(fr, r, at[1], at[2]);
    rep.identity_residual = identity_residual(rep.K, rep.H, r.rho);
    rep.location = at;
    return rep;
}

bool admissible(const CanalPatch& patch, const Params3& at) {
    if (patch.n != 4) return false;
    if (!(std::abs(std::cos(at[2])) > kPoleBand)) return false;
    const RadiusJet r = patch.profile(at[0]);
    if (!(r.rho > 0.0) || !(1.0 - r.d1 * r.d1 >= kRegularityMargin)) return false;
    const FrenetData fr = frenet_apparatus(patch.curve, at[0]);
    return std::abs(q_factor(fr, r, at[1], at[2])) > kFocalBand;
}

}  // namespace canal
