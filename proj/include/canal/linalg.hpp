#pragma once

// Dimension-generic Euclidean primitives.
//
// Vectors live in E^n with 3 <= n <= kMaxDim and are stored inline (no heap).
// Everything is templated on the scalar so the same code runs on doubles and
// on the second-order jets of jet.hpp.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "canal/errors.hpp"

namespace canal {

inline constexpr int kMaxDim = 8;

template <class T>
using VecN = Eigen::Matrix<T, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
template <class T>
using MatN = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
template <class T>
using Mat3 = Eigen::Matrix<T, 3, 3>;

using Vec = VecN<double>;
using Mat3d = Mat3<double>;
using Params3 = std::array<double, 3>;

// Standard basis vector e_{k+1} of E^n.
inline Vec basis_vector(int n, int k) {
    Vec e = Vec::Zero(n);
    e[k] = 1.0;
    return e;
}

template <class T>
T dot(const VecN<T>& u, const VecN<T>& v) {
    if (u.size() != v.size()) {
        throw ContractError("dot: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()) + ")");
    }
    T s(0.0);
    for (Eigen::Index i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

template <class T>
T norm(const VecN<T>& u) {
    using std::sqrt;
    return sqrt(dot(u, u));
}

// Laplace expansion along the first row. Exact for the tiny sizes used here
// (n <= kMaxDim); no pivoting, so conditioning is that of the raw cofactor sum.
template <class T>
T determinant(const MatN<T>& m) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw ContractError("determinant: matrix is not square");
    if (n == 0) return T(1.0);
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (n == 3) {
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
    T det(0.0);
    MatN<T> minor(n - 1, n - 1);
    for (Eigen::Index col = 0; col < n; ++col) {
        for (Eigen::Index r = 1; r < n; ++r) {
            for (Eigen::Index c = 0, mc = 0; c < n; ++c) {
                if (c != col) minor(r - 1, mc++) = m(r, c);
            }
        }
        const T term = m(0, col) * determinant<T>(minor);
        det = (col % 2 == 0) ? det + term : det - term;
    }
    return det;
}

template <class T>
T determinant(const Mat3<T>& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Generalized vector product of n-1 vectors in E^n: the formal determinant
// whose FIRST row holds the basis vectors e_1..e_n and whose remaining rows are
// the inputs. Component i is (-1)^i times the minor obtained by deleting
// column i. With this orientation cross_n(e_1, ..., e_{n-1}) = (-1)^{n+1} e_n,
// e.g. e_3 in E^3 and -e_4 in E^4.
template <class T>
VecN<T> cross_n(std::span<const VecN<T>> vs) {
    if (vs.empty()) throw ContractError("cross_n: no input vectors");
    const Eigen::Index n = vs.front().size();
    if (n < 3 || n > kMaxDim) throw ContractError("cross_n: ambient dimension out of range");
    if (static_cast<Eigen::Index>(vs.size()) != n - 1) {
        throw ContractError("cross_n: expected " + std::to_string(n - 1) + " vectors, got " +
                            std::to_string(vs.size()));
    }
    for (const auto& v : vs) {
        if (v.size() != n) throw ContractError("cross_n: mixed dimensions");
    }
    VecN<T> out(n);
    MatN<T> minor(n - 1, n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index r = 0; r < n - 1; ++r) {
            for (Eigen::Index c = 0, mc = 0; c < n; ++c) {
                if (c != i) minor(r, mc++) = vs[static_cast<std::size_t>(r)][c];
            }
        }
        const T d = determinant<T>(minor);
        out[i] = (i % 2 == 0) ? d : -d;
    }
    return out;
}

template <class T>
VecN<T> cross_n(std::initializer_list<VecN<T>> vs) {
    return cross_n<T>(std::span<const VecN<T>>(vs.begin(), vs.size()));
}

// Adjugate inverse; throws SingularityError when |det| <= tiny * scale.
Mat3d inverse3(const Mat3d& m);

struct Eigen3 {
    double k1, k2, k3;  // ascending
};

// Eigenvalues of a shape operator with the block pattern
// S_12 = S_13 = S_23 = S_32 = 0 and S_22 = S_33: S_22 (twice) and S_11.
Eigen3 eig_shape3(const Mat3d& s);

// Eigenvalues of a symmetric 3x3 matrix by the trigonometric solution of the
// characteristic cubic.
Eigen3 symmetric_eigenvalues3(const Mat3d& a);

// Eigenvalues of g^{-1} h for symmetric h and symmetric positive-definite g,
// through the Cholesky reduction L^{-1} h L^{-T}. Serves shape operators that
// lack the closed-form zero pattern.
Eigen3 shape_eigenvalues(const Mat3d& g, const Mat3d& h);

}  // namespace canal
