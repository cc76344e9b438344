#include "canal/oracle.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace canal {

ImmersionProbe make_probe(int n, std::function<Vec(std::span<const double>)> eval,
                          std::vector<Interval> domain, std::vector<bool> periodic, double relative_step) {
    if (n < 3 || n > kMaxDim) throw ContractError("make_probe: dimension out of range");
    const std::size_t m = static_cast<std::size_t>(n - 1);
    if (domain.size() != m || periodic.size() != m) throw ContractError("make_probe: need n-1 axes");
    if (!(relative_step > 0.0)) throw ContractError("make_probe: step must be positive");
    ImmersionProbe p;
    p.n = n;
    p.eval = std::move(eval);
    p.domain = std::move(domain);
    p.periodic = std::move(periodic);
    for (const auto& iv : p.domain) p.fd_step.push_back(relative_step * iv.span());
    return p;
}

SurfaceJet fd_jet(const ImmersionProbe& probe, std::span<const double> at) {
    const int m = probe.params();
    if (static_cast<int>(at.size()) != m) throw ContractError("fd_jet: wrong parameter count");
    for (int i = 0; i < m; ++i) {
        const double h = probe.fd_step[i];
        if (probe.periodic[i]) continue;
        const Interval& iv = probe.domain[i];
        if (at[i] - iv.lo < 2.0 * h || iv.hi - at[i] < 2.0 * h) {
            std::ostringstream os;
            os << "fd_jet: parameter " << i + 1 << " = " << at[i] << " within 2 fd_step of the boundary";
            throw DomainError(os.str());
        }
    }
    std::vector<double> p(at.begin(), at.end());
    auto f = [&](int i, double di, int j, double dj) {
        std::vector<double> q = p;
        if (i >= 0) q[i] += di;
        if (j >= 0) q[j] += dj;
        return probe.eval(q);
    };
    SurfaceJet jet;
    jet.x = f(-1, 0, -1, 0);
    jet.d1.resize(m);
    jet.d2.assign(m, std::vector<Vec>(m));
    for (int i = 0; i < m; ++i) {
        const double h = probe.fd_step[i];
        const Vec fp = f(i, h, -1, 0), fm = f(i, -h, -1, 0);
        jet.d1[i] = (fp - fm) / (2.0 * h);
        jet.d2[i][i] = (fp - 2.0 * jet.x + fm) / (h * h);
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double hi = probe.fd_step[i], hj = probe.fd_step[j];
            const Vec mixed = (f(i, hi, j, hj) - f(i, hi, j, -hj) - f(i, -hi, j, hj) + f(i, -hi, j, -hj)) /
                              (4.0 * hi * hj);
            // the 4-point stencil is symmetric in (i, j), so both orders coincide
            jet.d2[i][j] = mixed;
            jet.d2[j][i] = mixed;
        }
    }
    return jet;
}

SurfaceJet probe_jet(const ImmersionProbe& probe, std::span<const double> at) {
    if (probe.mode == ProbeMode::ExactTaylor) {
        if (!probe.exact) throw ContractError("probe_jet: exact mode needs an analytic jet");
        return probe.exact(at);
    }
    return fd_jet(probe, at);
}

OracleForms forms_from_jet(const SurfaceJet& jet, const Vec* orientation) {
    const int m = static_cast<int>(jet.d1.size());
    const int n = static_cast<int>(jet.x.size());
    if (m != n - 1) throw ContractError("forms_from_jet: need n-1 tangent vectors");

    OracleForms out;
    out.g = MatN<double>(m, m);
    out.h = MatN<double>(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) out.g(i, j) = dot<double>(jet.d1[i], jet.d1[j]);
    }
    out.det_g = determinant<double>(out.g);
    double diag = 1.0;
    for (int i = 0; i < m; ++i) diag *= out.g(i, i);
    out.gram_ratio = diag > 0.0 ? out.det_g / diag : 0.0;
    if (!(out.gram_ratio > 1e-12)) {
        std::ostringstream os;
        os << "oracle: tangent vectors are linearly dependent (Gram ratio " << out.gram_ratio << ")";
        throw RankError(os.str());
    }
    Vec c = cross_n<double>(std::span<const Vec>(jet.d1));
    out.N = c / norm<double>(c);
    if (orientation && dot<double>(out.N, *orientation) < 0.0) out.N = -out.N;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) out.h(i, j) = dot<double>(jet.d2[i][j], out.N);
    }
    out.h = (0.5 * (out.h + out.h.transpose())).eval();
    out.det_h = determinant<double>(out.h);
    out.S = out.g.inverse() * out.h;
    out.K = out.det_h / out.det_g;
    out.H = out.S.trace() / m;
    return out;
}

OracleForms oracle_forms(const ImmersionProbe& probe, std::span<const double> at, const Vec* orientation) {
    return forms_from_jet(probe_jet(probe, at), orientation);
}

}  // namespace canal
