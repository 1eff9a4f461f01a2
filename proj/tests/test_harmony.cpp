#include <doctest.h>

#include <sstream>

#include "dim/harmony.hpp"
#include "oracles.hpp"

using namespace dim;

namespace {

// Canonical 4-way table, transcribed row by row (Va1..Vd3). Kept as a
// second, test-local copy so an accidental edit of the shipped table cannot
// go unnoticed.
constexpr int kTable4[12][12] = {
    {0, 0, 0, 1, 1, 1, 1, 1, 0, 1, 0, 1}, // Va1
    {0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 0}, // Va2
    {0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0}, // Va3
    {1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0}, // Vb1
    {1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0}, // Vb2
    {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}, // Vb3
    {1, 1, 0, 1, 0, 1, 0, 0, 0, 1, 1, 1}, // Vc1
    {1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}, // Vc2
    {0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0}, // Vc3
    {1, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 0}, // Vd1
    {0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0}, // Vd2
    {1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0}, // Vd3
};

// 3-way instance, hand-checked against the chord geometry for all 15 pairs.
constexpr int kTable3[6][6] = {
    {0, 0, 1, 1, 1, 0}, // Va1
    {0, 0, 0, 0, 1, 0}, // Va2
    {1, 0, 0, 0, 1, 1}, // Vb1
    {1, 0, 0, 0, 0, 0}, // Vb2
    {1, 1, 1, 0, 0, 0}, // Vc1
    {0, 0, 1, 0, 0, 0}, // Vc2
};

Maneuver mv(const char* name, int n = 4) { return maneuver_from_name(name, n); }

} // namespace

TEST_CASE("generated 4-way matrix reproduces the canonical table exactly") {
    const HarmonyMatrix gen = HarmonyMatrix::generate(4);
    const HarmonyMatrix canon = HarmonyMatrix::canonical_4way();
    REQUIRE(gen.size() == 12);
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c) {
            CHECK(gen.at(r, c) == kTable4[r][c]);
            CHECK(canon.at(r, c) == kTable4[r][c]);
        }
    CHECK(gen == canon);
    CHECK(HarmonyMatrix::for_intersection(4) == canon);
}

TEST_CASE("canonical table spot checks") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    CHECK(harmony(mv("Va1"), mv("Vb2"), H));
    CHECK_FALSE(harmony(mv("Va1"), mv("Vc3"), H)); // both exit arm b: merge conflict
    CHECK_FALSE(harmony(mv("Va2"), mv("Vb2"), H)); // crossing straights
    CHECK_FALSE(harmony(mv("Vb3"), mv("Vd1"), H));
    for (int r = 0; r < H.size(); ++r)
        CHECK_FALSE(harmony(H.maneuver_at(r), H.maneuver_at(r), H));
}

TEST_CASE("all four left turns coexist") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    const Maneuver lefts[] = {mv("Va1"), mv("Vb1"), mv("Vc1"), mv("Vd1")};
    for (const auto& a : lefts)
        for (const auto& b : lefts)
            if (!(a == b)) CHECK(harmony(a, b, H));
}

TEST_CASE("harmony is not transitive") {
    const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    CHECK(harmony(mv("Va1"), mv("Vc2"), H));
    CHECK(harmony(mv("Va1"), mv("Vb2"), H));
    CHECK_FALSE(harmony(mv("Vc2"), mv("Vb2"), H));
}

TEST_CASE("generated matrices match the geometric oracle for n in [3,8]") {
    for (int n = 3; n <= 8; ++n) {
        const HarmonyMatrix H = HarmonyMatrix::generate(n);
        REQUIRE(H.size() == n * (n - 1));
        for (int r = 0; r < H.size(); ++r) {
            for (int c = 0; c < H.size(); ++c) {
                const Maneuver a = H.maneuver_at(r);
                const Maneuver b = H.maneuver_at(c);
                CHECK(H.at(r, c) == H.at(c, r));
                if (r == c) {
                    CHECK(H.at(r, c) == 0);
                    continue;
                }
                const bool expect_conflict = oracles::geometric_conflict(a, b, n);
                CHECK(H.at(r, c) == (expect_conflict ? 0 : 1));
                if (a.entry == b.entry) CHECK(H.at(r, c) == 0);
            }
        }
    }
}

TEST_CASE("3-way matrix equals the hand-checked instance") {
    const HarmonyMatrix H = HarmonyMatrix::generate(3);
    REQUIRE(H.size() == 6);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c)
            CHECK(H.at(r, c) == kTable3[r][c]);
}

TEST_CASE("maneuver index is a bijection") {
    for (int n = 3; n <= 8; ++n) {
        const HarmonyMatrix H = HarmonyMatrix::generate(n);
        for (int idx = 0; idx < H.size(); ++idx) {
            const Maneuver m = H.maneuver_at(idx);
            CHECK(H.index_of(m) == idx);
        }
        CHECK_THROWS_AS(H.index_of(Maneuver{n, 1}), InvalidManeuverError);
        CHECK_THROWS_AS(H.maneuver_at(H.size()), InvalidManeuverError);
    }
}

TEST_CASE("matrix text round-trips bit-exact") {
    for (int n : {4, 5}) {
        const HarmonyMatrix H = HarmonyMatrix::for_intersection(n);
        const std::string text = H.to_text();
        const HarmonyMatrix back = HarmonyMatrix::parse(text);
        CHECK(back == H);
        CHECK(back.to_text() == text);
    }
    CHECK_THROWS_AS(HarmonyMatrix::parse("bogus"), IoError);
    CHECK_THROWS_AS(HarmonyMatrix::parse("n=4\nVa1 Va2\n"), IoError);
}

TEST_CASE("generator rejects degenerate intersections") {
    CHECK_THROWS_AS(HarmonyMatrix::generate(2), InvalidGeometryError);
    CHECK_THROWS_AS(HarmonyMatrix::generate(0), InvalidGeometryError);
}
