#pragma once

// Closed-form curvature apparatus of canal hypersurfaces in E^4.
//
// Every function takes the Frenet data of the center curve at v_1, the radius
// jet at v_1 and the two angles. Q is the helper scalar
//
//   Q = rho (k_1 sqrt(1 - rho'^2) cos v2 cos v3 + rho'') - 1 + rho'^2,
//
// whose zeros are the focal loci of the parametrization; cos v3 = 0 is a
// coordinate pole. Both are excluded from sampling grids.

#include <array>

#include "canal/canal.hpp"
#include "canal/curve.hpp"
#include "canal/linalg.hpp"

namespace canal {

inline constexpr double kPoleBand = 1e-3;    // |cos v3| <= this is excluded from grids
inline constexpr double kFocalBand = 1e-6;   // |Q| <= this is excluded from grids
inline constexpr double kQSingular = 1e-10;  // K, H refuse to evaluate below this

double q_factor(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

Vec unit_normal(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

struct FirstForm {
    Mat3d g;
    double det_g = 0.0;  // factorized value rho^4 (1 - rho'^2) Q^2 cos^2 v3
    double Q = 0.0;
    bool near_singular = false;  // |Q| <= 1e-10 or |cos v3| <= 1e-6
};

// Throws InconsistencyError if the factorized determinant disagrees with the
// direct 3x3 determinant.
FirstForm first_form(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

struct SecondForm {
    Mat3d h;
    double det_h = 0.0;  // closed product form
};

SecondForm second_form(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

// The closed entries: S_11, S_21, S_31 in the first column, -1/rho on the
// rest of the diagonal, zeros elsewhere.
Mat3d shape_operator_closed(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

// S = g^{-1} h checked against the closed entries (relative 1e-8); returns the
// closed entries.
Mat3d shape_operator(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

struct FormsBundle {
    Mat3d g;
    double det_g = 0.0;
    Mat3d h;
    double det_h = 0.0;
    Vec N;
    Mat3d S;
    double Q = 0.0;
};

FormsBundle forms(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

double gaussian_curvature(const FrenetData& fr, const RadiusJet& r, double v2, double v3);
double mean_curvature(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

struct Principal {
    double k1, k2, k3;  // k1 = k2 = -1/rho, k3 = K rho^2
};

// Checked against the eigenvalues of the closed shape operator (1e-8).
Principal principal_curvatures(const FrenetData& fr, const RadiusJet& r, double v2, double v3);

struct KH {
    double K, H;
};

// Tube of radius lambda around a curve with first curvature k1.
KH tubular_curvatures(double k1, double lambda, double v2, double v3);

// |3 H rho - K rho^3 + 2|
double identity_residual(double K, double H, double rho);

struct CurvatureReport {
    double K = 0.0;
    double H = 0.0;
    Principal principal{};
    double identity_residual = 0.0;
    Params3 location{};
};

CurvatureReport curvature_report(const CanalPatch& patch, const Params3& at);

// Off the pole band and the focal band, with a regular radius.
bool admissible(const CanalPatch& patch, const Params3& at);

}  // namespace canal
