// Independent reference implementations used only by tests. Each oracle takes
// a different route than the library code it checks: cliques by exhaustive
// subset enumeration, chord conflicts by 2-D segment intersection, schedules
// by candidate-time scanning.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dim/clique.hpp"

namespace oracles {

// Every maximum clique of g, found by trying all 2^n subsets.
inline std::vector<std::vector<int>> brute_force_max_cliques(const dim::AdjacencyGraph& g) {
    const int n = g.n_nodes;
    if (n == 0) return {};
    std::vector<std::vector<int>> best;
    int best_size = 0;
    for (uint32_t mask = 1; mask < (uint32_t{1} << n); ++mask) {
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (mask & (uint32_t{1} << v)) members.push_back(v);
        bool clique = true;
        for (size_t i = 0; i < members.size() && clique; ++i)
            for (size_t j = i + 1; j < members.size() && clique; ++j)
                if (!g.has_edge(members[i], members[j])) clique = false;
        if (!clique) continue;
        const int size = static_cast<int>(members.size());
        if (size > best_size) {
            best_size = size;
            best.clear();
        }
        if (size == best_size) best.push_back(members);
    }
    std::sort(best.begin(), best.end());
    return best;
}

// Geometric conflict test: place the chord endpoints on the unit circle
// (angles clockwise from north) and check proper segment intersection via
// orientation signs.
inline bool segments_cross(double ax, double ay, double bx, double by, double cx, double cy,
                           double dx, double dy) {
    auto orient = [](double px, double py, double qx, double qy, double rx, double ry) {
        const double v = (qx - px) * (ry - py) - (qy - py) * (rx - px);
        if (v > 1e-12) return 1;
        if (v < -1e-12) return -1;
        return 0;
    };
    const int o1 = orient(ax, ay, bx, by, cx, cy);
    const int o2 = orient(ax, ay, bx, by, dx, dy);
    const int o3 = orient(cx, cy, dx, dy, ax, ay);
    const int o4 = orient(cx, cy, dx, dy, bx, by);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

inline bool geometric_conflict(const dim::Maneuver& m1, const dim::Maneuver& m2, int n_arms) {
    if (m1.entry == m2.entry) return true;
    if (dim::exit_arm(m1, n_arms) == dim::exit_arm(m2, n_arms)) return true;

    constexpr double kPi = 3.14159265358979323846;
    auto point = [&](double deg) {
        const double rad = deg * kPi / 180.0;
        // clockwise from north
        return std::pair<double, double>{std::sin(rad), std::cos(rad)};
    };
    const auto [ax, ay] = point(dim::entry_point_angle(m1.entry, n_arms));
    const auto [bx, by] = point(dim::exit_point_angle(dim::exit_arm(m1, n_arms), n_arms));
    const auto [cx, cy] = point(dim::entry_point_angle(m2.entry, n_arms));
    const auto [dx, dy] = point(dim::exit_point_angle(dim::exit_arm(m2, n_arms), n_arms));
    return segments_cross(ax, ay, bx, by, cx, cy, dx, dy);
}

} // namespace oracles
