#include "canal/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace canal {

namespace {

void require_finite(const Mat3d& m, const char* what) {
    if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite matrix entry");
}

Eigen3 sorted(double a, double b, double c) {
    std::array<double, 3> v{a, b, c};
    std::sort(v.begin(), v.end());
    return {v[0], v[1], v[2]};
}

}  // namespace

Mat3d inverse3(const Mat3d& m) {
    require_finite(m, "inverse3");
    Mat3d adj;
    adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(std::abs(det) > 1e-300) || std::abs(det) <= 1e-14 * scale * scale * scale) {
        throw SingularityError("inverse3: singular matrix (det = " + std::to_string(det) + ")");
    }
    return adj / det;
}

Eigen3 eig_shape3(const Mat3d& s) {
    require_finite(s, "eig_shape3");
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double tol = 1e-12 * scale;
    if (std::abs(s(0, 1)) > tol || std::abs(s(0, 2)) > tol || std::abs(s(1, 2)) > tol ||
        std::abs(s(2, 1)) > tol) {
        throw ContractError("eig_shape3: matrix lacks the S_12 = S_13 = S_23 = S_32 = 0 pattern");
    }
    return sorted(s(0, 0), s(1, 1), s(2, 2));
}

Eigen3 symmetric_eigenvalues3(const Mat3d& a) {
    require_finite(a, "symmetric_eigenvalues3");
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off == 0.0) return sorted(a(0, 0), a(1, 1), a(2, 2));

    const double q = a.trace() / 3.0;
    const double d0 = a(0, 0) - q, d1 = a(1, 1) - q, d2 = a(2, 2) - q;
    const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off;
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return {q, q, q};
    const Mat3d b = (a - q * Mat3d::Identity()) / p;
    const double r = std::clamp(determinant<double>(b) / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    return sorted(e1, e2, e3);
}

Eigen3 shape_eigenvalues(const Mat3d& g, const Mat3d& h) {
    require_finite(g, "shape_eigenvalues");
    require_finite(h, "shape_eigenvalues");
    // Cholesky factor of g by hand: g = L L^T.
    Mat3d l = Mat3d::Zero();
    for (int j = 0; j < 3; ++j) {
        double d = g(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw SingularityError("shape_eigenvalues: metric is not positive definite");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < 3; ++i) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    const Mat3d linv = inverse3(l);
    Mat3d c = linv * h * linv.transpose();
    c = 0.5 * (c + c.transpose()).eval();
    return symmetric_eigenvalues3(c);
}

}  // namespace canal
