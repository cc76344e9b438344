#pragma once

// Patches shared by the unit and acceptance tests.

#include <numbers>
#include <string>
#include <vector>

#include "canal/canal.hpp"
#include "canal/classify.hpp"

namespace canal::fixtures {

inline constexpr double kPi = std::numbers::pi;

inline CanalPatch straight_tube(double lambda = 0.5) {
    return make_patch(make_line(Vec::Zero(4), basis_vector(4, 0), {0.0, 2.0}), RadiusProfile::constant(lambda));
}

inline CanalPatch cone(double slope = 0.5, double intercept = 1.0) {
    return make_patch(make_line(Vec::Zero(4), basis_vector(4, 0), {0.0, 2.0}), RadiusProfile::linear(slope, intercept));
}

inline CanalPatch circle_tube(double R = 2.0, double lambda = 0.5) {
    return make_patch(make_circle(4, R, {0.0, 2.0 * kPi * R}), RadiusProfile::constant(lambda));
}

// rho = 1 + 0.1 sin v1 around the circle of radius 2
inline CanalPatch circle_canal() {
    return make_patch(make_circle(4, 2.0, {0.0, 4.0 * kPi}),
                      RadiusProfile::poly_trig(PolyTrig{{1.0}, {{1.0, 0.0, 0.1}}}));
}

inline const CatenoidProfile& unit_catenoid() {
    static const CatenoidProfile p = solve_catenoid(1.0, 1.0, {0.0, 2.0}, 1e-3);
    return p;
}

inline CanalPatch catenoid() { return catenoid_patch(unit_catenoid()); }

inline CenterCurve quad_helix() { return make_quad_helix(2.0, 1.0, 3.0, {-3.0, 3.0}); }

inline CanalPatch helix_tube(double lambda = 0.2) { return make_patch(quad_helix(), RadiusProfile::constant(lambda)); }

// rho = 0.3 + 0.02 v1 + 0.05 sin v1
inline CanalPatch helix_canal() {
    return make_patch(quad_helix(), RadiusProfile::poly_trig(PolyTrig{{0.3, 0.02}, {{1.0, 0.0, 0.05}}}));
}

// (t, t^2 / 2, t^3 / 6, t^4 / 40) reparametrized by arc length
inline CenterCurve poly_curve() {
    return reparametrize_arclength(make_poly_trig(
        {PolyTrig{{0.0, 1.0}, {}}, PolyTrig{{0.0, 0.0, 0.5}, {}}, PolyTrig{{0.0, 0.0, 0.0, 1.0 / 6.0}, {}},
         PolyTrig{{0.0, 0.0, 0.0, 0.0, 1.0 / 40.0}, {}}},
        {-1.0, 1.0}));
}

inline CanalPatch poly_canal() {
    return make_patch(poly_curve(), RadiusProfile::poly_trig(PolyTrig{{0.25, 0.01}, {{2.0, 0.02, 0.0}}}));
}

struct Named {
    std::string name;
    CanalPatch patch;
};

inline std::vector<Named> all_patches() {
    return {{"straight tube", straight_tube()}, {"cone", cone()},
            {"circle tube", circle_tube()},     {"circle canal", circle_canal()},
            {"catenoid", catenoid()},           {"helix tube", helix_tube()},
            {"helix canal", helix_canal()},     {"poly canal", poly_canal()}};
}

}  // namespace canal::fixtures
