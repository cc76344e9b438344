#pragma once

// Parameter sampling over E^4 canal patches: cell-centered lattices and
// seeded random points, both restricted to admissible points (off the
// coordinate pole band and the focal band) and kept away from the v_1 ends.

#include <array>
#include <cstdint>
#include <vector>

#include "canal/canal.hpp"

namespace canal {

struct GridSpec {
    std::array<int, 3> nodes{20, 20, 20};
    // Extra inset from each end of every axis, as a fraction of the axis span.
    double margin = 0.0;
};

// Smallest allowed inset: 2.5 oracle steps of kDefaultRelativeStep.
double minimum_inset(const Interval& axis);

// Node j of an axis sits at lo + inset + (j + 1/2) (span - 2 inset) / N.
std::vector<double> axis_nodes(const Interval& axis, int count, double margin);

// Admissible lattice points, v_1 outermost.
std::vector<Params3> lattice_points(const CanalPatch& patch, const GridSpec& spec);

// `count` admissible points drawn uniformly from the inset box with a
// mt19937_64 stream; identical seeds give identical points on every platform.
std::vector<Params3> random_points(const CanalPatch& patch, int count, std::uint64_t seed,
                                   double margin = 0.0);

}  // namespace canal
