#include "canal/grid.hpp"

#include <algorithm>
#include <random>

#include "canal/curvature4.hpp"
#include "canal/oracle.hpp"

namespace canal {

double minimum_inset(const Interval& axis) { return 2.5 * kDefaultRelativeStep * axis.span(); }

namespace {

double inset_of(const Interval& axis, double margin) {
    return std::max(minimum_inset(axis), margin * axis.span());
}

}  // namespace

std::vector<double> axis_nodes(const Interval& axis, int count, double margin) {
    if (count < 1) throw ContractError("axis_nodes: need at least one node");
    const double inset = inset_of(axis, margin);
    const double width = axis.span() - 2.0 * inset;
    if (!(width > 0.0)) throw ContractError("axis_nodes: margin leaves an empty axis");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) out[j] = axis.lo + inset + (j + 0.5) * width / count;
    return out;
}

std::vector<Params3> lattice_points(const CanalPatch& patch, const GridSpec& spec) {
    if (patch.n != 4) throw ContractError("lattice_points: E^4 patches only");
    const auto a = axis_nodes(patch.domain[0], spec.nodes[0], spec.margin);
    const auto b = axis_nodes(patch.domain[1], spec.nodes[1], spec.margin);
    const auto c = axis_nodes(patch.domain[2], spec.nodes[2], spec.margin);
    std::vector<Params3> out;
    out.reserve(a.size() * b.size() * c.size());
    for (double v1 : a) {
        for (double v2 : b) {
            for (double v3 : c) {
                const Params3 p{v1, v2, v3};
                if (admissible(patch, p)) out.push_back(p);
            }
        }
    }
    return out;
}

std::vector<Params3> random_points(const CanalPatch& patch, int count, std::uint64_t seed, double margin) {
    if (patch.n != 4) throw ContractError("random_points: E^4 patches only");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::array<double, 3> lo{}, width{};
    for (int i = 0; i < 3; ++i) {
        const double inset = inset_of(patch.domain[i], margin);
        lo[i] = patch.domain[i].lo + inset;
        width[i] = patch.domain[i].span() - 2.0 * inset;
    }
    std::vector<Params3> out;
    out.reserve(static_cast<std::size_t>(count));
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 1000L * std::max(count, 1)) {
            throw DomainError("random_points: patch has too few admissible points");
        }
        Params3 p;
        for (int i = 0; i < 3; ++i) p[i] = lo[i] + uniform() * width[i];
        if (admissible(patch, p)) out.push_back(p);
    }
    return out;
}

}  // namespace canal
