#pragma once

// Black-box numeric differential geometry of a hypersurface
// Psi: (v_1..v_m) -> E^n, m = n - 1.
//
// Only the point map (or, in exact mode, its second-order jet) is used; no
// Frenet data and no closed forms. g_ij = <Psi_i, Psi_j>,
// h_ij = <Psi_ij, N>, N = cross_n(Psi_1..Psi_m) / |.|, S = g^{-1} h,
// K = det S, H = tr S / m.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "canal/curve.hpp"
#include "canal/jet.hpp"
#include "canal/linalg.hpp"

namespace canal {

enum class ProbeMode { CentralFD, ExactTaylor };

inline constexpr double kDefaultRelativeStep = 1e-4;

struct ImmersionProbe {
    int n = 4;
    std::function<Vec(std::span<const double>)> eval;
    // Analytic jet; required for ProbeMode::ExactTaylor.
    std::function<SurfaceJet(std::span<const double>)> exact;
    std::vector<Interval> domain;  // m axes
    std::vector<bool> periodic;    // periodic axes skip the boundary check
    std::vector<double> fd_step;   // m steps
    ProbeMode mode = ProbeMode::CentralFD;

    int params() const { return n - 1; }
};

// fd_step = relative_step * axis span on every axis.
ImmersionProbe make_probe(int n, std::function<Vec(std::span<const double>)> eval,
                          std::vector<Interval> domain, std::vector<bool> periodic,
                          double relative_step = kDefaultRelativeStep);

// Central differences: (f(+h) - f(-h)) / 2h, (f(+h) - 2f + f(-h)) / h^2 and
// the 4-point mixed stencil. Throws DomainError within 2 fd_step of a
// non-periodic boundary.
SurfaceJet fd_jet(const ImmersionProbe& probe, std::span<const double> at);

// fd_jet or the analytic jet, according to probe.mode.
SurfaceJet probe_jet(const ImmersionProbe& probe, std::span<const double> at);

struct OracleForms {
    MatN<double> g;
    MatN<double> h;
    MatN<double> S;
    double det_g = 0.0;
    double det_h = 0.0;
    double gram_ratio = 0.0;  // det g / prod g_ii, 1 for orthogonal tangents
    Vec N;
    double K = 0.0;
    double H = 0.0;
};

// When `orientation` is given the normal is flipped to have a non-negative
// inner product with it (h, S, H and, in odd parameter count, K follow).
OracleForms forms_from_jet(const SurfaceJet& jet, const Vec* orientation = nullptr);

OracleForms oracle_forms(const ImmersionProbe& probe, std::span<const double> at,
                         const Vec* orientation = nullptr);

}  // namespace canal
