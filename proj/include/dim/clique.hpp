#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dim/harmony.hpp"

namespace dim {

// Small undirected graph over at most 64 nodes, adjacency as bitmasks.
struct AdjacencyGraph {
    explicit AdjacencyGraph(int n = 0) : n_nodes(n), adj(static_cast<size_t>(n), 0) {}

    int n_nodes = 0;
    std::vector<uint64_t> adj;

    void add_edge(int u, int v) {
        adj[u] |= uint64_t{1} << v;
        adj[v] |= uint64_t{1} << u;
    }
    bool has_edge(int u, int v) const { return (adj[u] >> v) & 1; }
};

// All maximum-cardinality cliques, each a sorted list of node indices.
// Bron-Kerbosch with pivoting over the maximal cliques, filtered to the
// maximum size. Empty graph yields an empty list.
std::vector<std::vector<int>> max_cliques(const AdjacencyGraph& g);

// Total order over arms; rank_of(arm) == 0 is the highest priority.
struct PriorityOrder {
    std::vector<int> rank; // rank[arm index] = position in the order

    static PriorityOrder alphabetical(int n_arms);
    // Arms sorted by descending demand, ties broken alphabetically.
    static PriorityOrder by_demand(std::span<const double> per_arm_demand);

    int rank_of(int arm) const { return rank[arm]; }
    int n_arms() const { return static_cast<int>(rank.size()); }
};

// One declared intent: a vehicle waiting at the junction plus its maneuver.
struct IntentEntry {
    int vehicle_id = -1;
    Maneuver maneuver;
};

// Per-step graph over intent-declaring vehicles, at most one per arm.
// Edges connect harmonious maneuvers.
struct ConflictGraph {
    std::vector<IntentEntry> nodes;
    AdjacencyGraph adj;
};

ConflictGraph build_graph(std::span<const IntentEntry> intents, const HarmonyMatrix& H);

struct RightOfWaySet {
    std::vector<int> vehicle_ids;
    std::vector<Maneuver> maneuvers;

    bool empty() const { return vehicle_ids.empty(); }
    bool contains(int vehicle_id) const;
};

// Among equal-size cliques, the winner is the one whose sorted arm-priority
// key is lexicographically smallest.
RightOfWaySet select_priority_clique(const ConflictGraph& g,
                                     const std::vector<std::vector<int>>& cliques,
                                     const PriorityOrder& priority);

// build_graph -> max_cliques -> select_priority_clique. Pure and
// deterministic: every caller with the same inputs gets the same winners.
RightOfWaySet decide(std::span<const IntentEntry> intents, const HarmonyMatrix& H,
                     const PriorityOrder& priority);

} // namespace dim
