#include "dim/clique.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace dim {

namespace {

void bron_kerbosch(const AdjacencyGraph& g, uint64_t r, uint64_t p, uint64_t x,
                   std::vector<uint64_t>& out) {
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    // Pivot: vertex of P|X with the most neighbours in P.
    uint64_t px = p | x;
    int pivot = -1, best = -1;
    for (uint64_t s = px; s; s &= s - 1) {
        const int v = std::countr_zero(s);
        const int deg = std::popcount(p & g.adj[v]);
        if (deg > best) { best = deg; pivot = v; }
    }
    uint64_t cand = p & ~g.adj[pivot];
    for (uint64_t s = cand; s; s &= s - 1) {
        const int v = std::countr_zero(s);
        const uint64_t vb = uint64_t{1} << v;
        bron_kerbosch(g, r | vb, p & g.adj[v], x & g.adj[v], out);
        p &= ~vb;
        x |= vb;
    }
}

} // namespace

std::vector<std::vector<int>> max_cliques(const AdjacencyGraph& g) {
    if (g.n_nodes == 0) return {};
    const uint64_t all = g.n_nodes == 64 ? ~uint64_t{0} : (uint64_t{1} << g.n_nodes) - 1;
    std::vector<uint64_t> maximal;
    bron_kerbosch(g, 0, all, 0, maximal);

    int best = 0;
    for (uint64_t m : maximal) best = std::max(best, std::popcount(m));

    std::vector<std::vector<int>> result;
    for (uint64_t m : maximal) {
        if (std::popcount(m) != best) continue;
        std::vector<int> clique;
        for (uint64_t s = m; s; s &= s - 1) clique.push_back(std::countr_zero(s));
        result.push_back(std::move(clique));
    }
    std::sort(result.begin(), result.end());
    return result;
}

PriorityOrder PriorityOrder::alphabetical(int n_arms) {
    PriorityOrder p;
    p.rank.resize(n_arms);
    std::iota(p.rank.begin(), p.rank.end(), 0);
    return p;
}

PriorityOrder PriorityOrder::by_demand(std::span<const double> per_arm_demand) {
    const int n = static_cast<int>(per_arm_demand.size());
    std::vector<int> arms(n);
    std::iota(arms.begin(), arms.end(), 0);
    std::stable_sort(arms.begin(), arms.end(), [&](int a, int b) {
        return per_arm_demand[a] > per_arm_demand[b];
    });
    PriorityOrder p;
    p.rank.resize(n);
    for (int pos = 0; pos < n; ++pos) p.rank[arms[pos]] = pos;
    return p;
}

ConflictGraph build_graph(std::span<const IntentEntry> intents, const HarmonyMatrix& H) {
    ConflictGraph g;
    g.nodes.assign(intents.begin(), intents.end());
    g.adj = AdjacencyGraph(static_cast<int>(g.nodes.size()));

    uint32_t arms_seen = 0;
    for (const auto& e : g.nodes) {
        require_valid(e.maneuver, H.n_arms());
        const uint32_t bit = uint32_t{1} << e.maneuver.entry;
        if (arms_seen & bit)
            throw EngineInvariantError("two intents declared on arm " +
                                       std::string(1, arm_label(e.maneuver.entry)));
        arms_seen |= bit;
    }
    for (size_t i = 0; i < g.nodes.size(); ++i)
        for (size_t j = i + 1; j < g.nodes.size(); ++j)
            if (H.harmonious(g.nodes[i].maneuver, g.nodes[j].maneuver))
                g.adj.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
}

bool RightOfWaySet::contains(int vehicle_id) const {
    return std::find(vehicle_ids.begin(), vehicle_ids.end(), vehicle_id) != vehicle_ids.end();
}

RightOfWaySet select_priority_clique(const ConflictGraph& g,
                                     const std::vector<std::vector<int>>& cliques,
                                     const PriorityOrder& priority) {
    if (cliques.empty()) return {};

    auto key_of = [&](const std::vector<int>& clique) {
        std::vector<int> key;
        key.reserve(clique.size());
        for (int node : clique) key.push_back(priority.rank_of(g.nodes[node].maneuver.entry));
        std::sort(key.begin(), key.end());
        return key;
    };

    const std::vector<int>* winner = &cliques.front();
    std::vector<int> winner_key = key_of(cliques.front());
    for (size_t i = 1; i < cliques.size(); ++i) {
        std::vector<int> key = key_of(cliques[i]);
        if (key < winner_key) {
            winner_key = std::move(key);
            winner = &cliques[i];
        }
    }

    RightOfWaySet row;
    for (int node : *winner) {
        row.vehicle_ids.push_back(g.nodes[node].vehicle_id);
        row.maneuvers.push_back(g.nodes[node].maneuver);
    }
    return row;
}

RightOfWaySet decide(std::span<const IntentEntry> intents, const HarmonyMatrix& H,
                     const PriorityOrder& priority) {
    if (intents.empty()) return {};
    const ConflictGraph g = build_graph(intents, H);
    return select_priority_clique(g, max_cliques(g.adj), priority);
}

} // namespace dim
