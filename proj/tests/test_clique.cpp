#include <doctest.h>

#include <random>

#include "dim/clique.hpp"
#include "oracles.hpp"

using namespace dim;

namespace {

Maneuver mv(const char* name) { return maneuver_from_name(name, 4); }

AdjacencyGraph random_graph(std::mt19937& rng, int n, double p) {
    AdjacencyGraph g(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) g.add_edge(u, v);
    return g;
}

} // namespace

TEST_CASE("max_cliques equals brute force on random graphs") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> size(0, 12);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const AdjacencyGraph g = random_graph(rng, size(rng), density(rng));
        CHECK(max_cliques(g) == oracles::brute_force_max_cliques(g));
    }
}

TEST_CASE("adding an edge never shrinks the maximum clique") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        AdjacencyGraph g = random_graph(rng, 9, 0.35);
        const auto before = max_cliques(g);
        const size_t size_before = before.empty() ? 0 : before.front().size();

        std::uniform_int_distribution<int> pick(0, 8);
        int u = pick(rng), v = pick(rng);
        if (u == v) continue;
        g.add_edge(u, v);
        const auto after = max_cliques(g);
        const size_t size_after = after.empty() ? 0 : after.front().size();
        CHECK(size_after >= size_before);
    }
}

TEST_CASE("worst-case four-cycle yields the four paired cliques") {
    AdjacencyGraph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 0);
    const auto cliques = max_cliques(g);
    CHECK(cliques == std::vector<std::vector<int>>{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
}

TEST_CASE("complete graph has a single maximum clique") {
    AdjacencyGraph g(4);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) g.add_edge(u, v);
    CHECK(max_cliques(g) == std::vector<std::vector<int>>{{0, 1, 2, 3}});
    CHECK(max_cliques(AdjacencyGraph(0)).empty());
}

TEST_CASE("conflict graph for the four-vehicle scenario") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    const std::vector<IntentEntry> intents = {
        {0, mv("Va1")}, {1, mv("Vb2")}, {2, mv("Vc2")}, {3, mv("Vd2")}};
    const ConflictGraph g = build_graph(intents, H);

    CHECK(g.adj.has_edge(0, 2)); // (Vc2, Va1)
    CHECK(g.adj.has_edge(0, 1)); // (Va1, Vb2)
    CHECK(g.adj.has_edge(1, 3)); // (Vb2, Vd2)
    CHECK_FALSE(g.adj.has_edge(0, 3));
    CHECK_FALSE(g.adj.has_edge(1, 2));
    CHECK_FALSE(g.adj.has_edge(2, 3));
}

TEST_CASE("single intent and left-turn quartet graphs") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    const ConflictGraph solo = build_graph(std::vector<IntentEntry>{{7, mv("Va1")}}, H);
    CHECK(solo.nodes.size() == 1);
    CHECK(solo.adj.adj[0] == 0);

    const std::vector<IntentEntry> lefts = {
        {0, mv("Va1")}, {1, mv("Vb1")}, {2, mv("Vc1")}, {3, mv("Vd1")}};
    const auto cliques = max_cliques(build_graph(lefts, H).adj);
    REQUIRE(cliques.size() == 1);
    CHECK(cliques.front().size() == 4);
}

TEST_CASE("two intents on one arm break the engine contract") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    const std::vector<IntentEntry> bad = {{0, mv("Va1")}, {1, mv("Va2")}};
    CHECK_THROWS_AS(build_graph(bad, H), EngineInvariantError);
}

TEST_CASE("priority selection favors the highest-priority arms") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    const PriorityOrder alpha = PriorityOrder::alphabetical(4);

    // Abstract 4-cycle relabelled onto arms a..d.
    ConflictGraph g;
    g.nodes = {{0, mv("Va1")}, {1, mv("Vb1")}, {2, mv("Vc1")}, {3, mv("Vd1")}};
    g.adj = AdjacencyGraph(4);
    g.adj.add_edge(0, 1);
    g.adj.add_edge(1, 2);
    g.adj.add_edge(2, 3);
    g.adj.add_edge(3, 0);
    const RightOfWaySet row = select_priority_clique(g, max_cliques(g.adj), alpha);
    CHECK(row.vehicle_ids == std::vector<int>{0, 1}); // [A, B]

    // Single clique selects itself.
    ConflictGraph single;
    single.nodes = {{5, mv("Va1")}, {6, mv("Vb1")}};
    single.adj = AdjacencyGraph(2);
    single.adj.add_edge(0, 1);
    const RightOfWaySet only = select_priority_clique(single, max_cliques(single.adj), alpha);
    CHECK(only.vehicle_ids == std::vector<int>{5, 6});

    CHECK(select_priority_clique(g, {}, alpha).empty());
}

TEST_CASE("decide resolves the four-vehicle scenario to {Va1, Vb2}") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    const PriorityOrder alpha = PriorityOrder::alphabetical(4);
    const std::vector<IntentEntry> intents = {
        {10, mv("Va1")}, {11, mv("Vb2")}, {12, mv("Vc2")}, {13, mv("Vd2")}};

    const RightOfWaySet row = decide(intents, H, alpha);
    CHECK(row.vehicle_ids == std::vector<int>{10, 11});
    CHECK(row.contains(10));
    CHECK_FALSE(row.contains(12));

    CHECK(decide(std::vector<IntentEntry>{}, H, alpha).empty());
}

TEST_CASE("decide is perspective-independent and returns harmonious winners") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    const PriorityOrder alpha = PriorityOrder::alphabetical(4);
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> offset(0, 3); // 0 = absent

    for (int trial = 0; trial < 300; ++trial) {
        std::vector<IntentEntry> intents;
        for (int arm = 0; arm < 4; ++arm) {
            const int k = offset(rng);
            if (k > 0) intents.push_back({100 + arm, Maneuver{arm, k}});
        }
        const RightOfWaySet row = decide(intents, H, alpha);
        if (intents.empty()) {
            CHECK(row.empty());
            continue;
        }
        CHECK_FALSE(row.empty());
        for (size_t i = 0; i < intents.size(); ++i) {
            const RightOfWaySet replay = decide(intents, H, alpha);
            CHECK(replay.vehicle_ids == row.vehicle_ids);
        }
        for (size_t i = 0; i < row.maneuvers.size(); ++i)
            for (size_t j = i + 1; j < row.maneuvers.size(); ++j)
                CHECK(harmony(row.maneuvers[i], row.maneuvers[j], H));
    }
}

TEST_CASE("demand-ordered priorities break ties alphabetically") {
    const std::vector<double> demand = {400.0, 100.0, 400.0, 100.0};
    const PriorityOrder p = PriorityOrder::by_demand(demand);
    CHECK(p.rank_of(0) == 0);
    CHECK(p.rank_of(2) == 1);
    CHECK(p.rank_of(1) == 2);
    CHECK(p.rank_of(3) == 3);
}
