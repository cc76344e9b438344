#pragma once

// Flatness, minimality and Weingarten verdicts for E^4 canal hypersurfaces,
// and the generalized catenoid profile. Each theorem is checked by an
// analytic condition on (alpha, rho) and by a numeric curvature bound; the
// two routes must agree.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "canal/canal.hpp"

namespace canal {

inline constexpr int kAnalyticSamples = 64;
inline constexpr double kCurvatureZero = 1e-9;   // k_1 and rho'' "identically zero"
inline constexpr double kFlatBound = 1e-8;       // max |K| for a flat verdict
inline constexpr double kMinimalBound = 1e-6;    // max |H| for a minimal verdict
inline constexpr double kCatenoidOdeBound = 1e-7;
inline constexpr double kWeingartenBound = 1e-6;
inline constexpr double kWeingartenStep = 1e-4;

struct ResidualStats {
    double max = 0.0;
    double mean = 0.0;
    Params3 argmax{};
    std::size_t count = 0;
};

// Statistics of |values[i]| with argmax taken from `where`.
ResidualStats residual_stats(std::span<const double> values, std::span<const Params3> where);

enum class FlatKind { No, Hypercylinder, Hypercone };
enum class MinimalKind { No, GeneralizedCatenoid };

const char* to_string(FlatKind kind);
const char* to_string(MinimalKind kind);

struct FlatVerdict {
    FlatKind kind = FlatKind::No;
    double max_abs_k1 = 0.0;    // over the v_1 samples
    double max_abs_rho2 = 0.0;  // max |rho''| over the v_1 samples
    double max_abs_rho1 = 0.0;  // max |rho'| over the v_1 samples
    ResidualStats K;            // closed-form |K| over the grid
    ResidualStats kappa3;       // |K rho^2| over the grid
};

// Analytic route: k_1 = 0 and rho'' = 0 on kAnalyticSamples values of v_1,
// cylinder if rho' = 0 as well. Numeric route: max |K| <= kFlatBound.
// Throws InconsistencyError when the routes disagree.
FlatVerdict classify_flat(const CanalPatch& patch, std::span<const Params3> grid);

struct MinimalVerdict {
    MinimalKind kind = MinimalKind::No;
    double max_abs_k1 = 0.0;
    double max_ode_residual = 0.0;  // |2 - 2 rho'^2 - 3 rho rho''| over the v_1 samples
    ResidualStats H;                // closed-form |H| over the grid
};

// Analytic route: k_1 = 0 and the catenoid ODE residual <= kCatenoidOdeBound.
// Numeric route: max |H| <= kMinimalBound. Throws InconsistencyError when the
// routes disagree.
MinimalVerdict classify_minimal(const CanalPatch& patch, std::span<const Params3> grid);

// Solution of 2 - 2 rho'^2 - 3 rho rho'' = 0 with first integral
// rho'^2 = 1 - (a / rho)^{4/3}, tabulated on a uniform v_1 lattice.
struct CatenoidProfile {
    double a = 1.0;
    double b = 0.0;   // throat parameter: sign(rho') I(rho) = v_1 + b
    int branch = 1;   // sign of rho' at the start when it is off the throat
    std::vector<double> v, rho, d1, d2;
    double max_ode_residual = 0.0;       // with rho'' by finite differences of rho'
    double max_first_integral = 0.0;     // |rho'^2 - 1 + (a/rho)^{4/3}|
    double max_implicit_error = 0.0;     // integral relation at the checkpoints
    int checkpoints = 0;

    RadiusProfile profile() const;
};

// I(rho) = integral from a to rho of dr / sqrt(1 - (a/r)^{4/3}), by quadrature
// in w with r = a (1 + w^2), which removes the endpoint singularity.
double catenoid_integral(double a, double rho);

// RK4 integration of the regular system (rho, rho')' = (rho', (2 - 2 rho'^2) / (3 rho))
// from v_1 = span.lo. At rho0 = a the start is the throat. Throws DomainError for
// a <= 0 or rho0 < a and IntegrationError when the first integral drifts or the
// solution leaves rho >= a.
CatenoidProfile solve_catenoid(double a, double rho0, Interval span, double step, int branch = 1);

// Line (v_1, 0, 0, 0) with the standard frame and the tabulated catenoid radius.
CanalPatch catenoid_patch(const CatenoidProfile& profile);

enum class WeingartenPair { P12, P13, P23 };

const char* to_string(WeingartenPair pair);
std::array<int, 2> axes_of(WeingartenPair pair);

// Values on a uniform lattice, index (i, j, k) -> (i * n2 + j) * n3 + k.
struct Lattice {
    std::array<int, 3> shape{};
    std::array<double, 3> step{};
    Params3 origin{};
    std::vector<double> values;

    double at(int i, int j, int k) const {
        return values[(static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k];
    }
    Params3 point(int i, int j, int k) const {
        return {origin[0] + i * step[0], origin[1] + j * step[1], origin[2] + k * step[2]};
    }
};

struct WeingartenResult {
    WeingartenPair pair = WeingartenPair::P23;
    // H_{v_i} K_{v_j} - H_{v_j} K_{v_i} per interior node, over its scale
    // max(|H_{v_i} K_{v_j}|, |H_{v_j} K_{v_i}|, 1).
    std::vector<double> ratio;
    std::vector<Params3> where;
    ResidualStats stats;  // of ratio
    double max_abs_residual = 0.0;
    bool weingarten = false;
};

// Central differences on the lattice interior. Throws ResolutionError when an
// axis has fewer than 5 nodes.
WeingartenResult weingarten_residual(const Lattice& K, const Lattice& H, WeingartenPair pair,
                                     double bound = kWeingartenBound);

// Closed-form K and H on a 5x5x5 lattice of spacing `step` around every base
// point, merged into one result.
WeingartenResult weingarten_check(const CanalPatch& patch, std::span<const Params3> base, WeingartenPair pair,
                                  double step = kWeingartenStep, double bound = kWeingartenBound);

// max and mean of |-3 lambda H + lambda^3 K - 2|.
ResidualStats linear_weingarten_check(double lambda, std::span<const double> K, std::span<const double> H,
                                      std::span<const Params3> where);

struct LinearWeingarten {
    double a, b, c;  // a H + b K = c
    ResidualStats residual;
};

struct ClassificationVerdict {
    FlatVerdict flat;
    MinimalVerdict minimal;
    std::vector<WeingartenResult> weingarten;
    std::optional<LinearWeingarten> linear;
};

// Closed-form K and H over the grid (parallel).
void closed_curvatures(const CanalPatch& patch, std::span<const Params3> grid, std::vector<double>& K,
                       std::vector<double>& H);

ClassificationVerdict classify(const CanalPatch& patch, std::span<const Params3> grid,
                               double weingarten_step = kWeingartenStep);

nlohmann::json to_json(const ResidualStats& s);
nlohmann::json to_json(const ClassificationVerdict& v);

}  // namespace canal
