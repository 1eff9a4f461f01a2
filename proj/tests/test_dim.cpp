#include <doctest.h>

#include "dim/dim_controller.hpp"

using namespace dim;

namespace {

Maneuver mv(const char* name) { return maneuver_from_name(name, 4); }

struct Fixture {
    HarmonyMatrix H = HarmonyMatrix::canonical_4way();
    PriorityOrder alpha = PriorityOrder::alphabetical(4);
    IntersectionSpec spec;

    VehicleView vehicle(int id, const char* m, double pos, double speed = 5.0) const {
        const Maneuver man = mv(m);
        return {id, man.entry, man, pos, speed, 4.0};
    }
};

} // namespace

TEST_CASE("deadlock enumeration finds a winner in every state") {
    SUBCASE("4-way: 255 states") {
        const HarmonyMatrix H = HarmonyMatrix::canonical_4way();
        const DeadlockReport r = verify_deadlock_free(4, H, PriorityOrder::alphabetical(4));
        CHECK(r.states_checked == 255);
        CHECK(r.violations.empty());
        CHECK(r.ok());
    }
    SUBCASE("3-way: 26 states") {
        const HarmonyMatrix H = HarmonyMatrix::generate(3);
        const DeadlockReport r = verify_deadlock_free(3, H, PriorityOrder::alphabetical(3));
        CHECK(r.states_checked == 26);
        CHECK(r.ok());
    }
    SUBCASE("5-way: 3124 states") {
        const HarmonyMatrix H = HarmonyMatrix::generate(5);
        const DeadlockReport r = verify_deadlock_free(5, H, PriorityOrder::alphabetical(5));
        CHECK(r.states_checked == 3124);
        CHECK(r.ok());
    }
    SUBCASE("report text names the outcome") {
        const HarmonyMatrix H = HarmonyMatrix::generate(3);
        const DeadlockReport r = verify_deadlock_free(3, H, PriorityOrder::alphabetical(3));
        CHECK(r.to_text().find("violations=0") != std::string::npos);
    }
}

TEST_CASE("red zone caps speed and respects the observation slot") {
    Fixture f;
    const VehicleView v = f.vehicle(1, "Va2", 20.0, 11.0);

    SUBCASE("free slot: slow to the zone speed, stay stoppable short of the box") {
        const Directive d = dim_controller_step(v, {}, {}, f.H, f.alpha, f.spec);
        CHECK(d.speed_cap == doctest::Approx(f.spec.red_zone_speed));
        REQUIRE(d.stop_at.has_value());
        CHECK(*d.stop_at < f.spec.green_start());
        CHECK(*d.stop_at > 0.0);
    }
    SUBCASE("occupied slot: wait short of the yellow boundary") {
        const std::vector<IntentEntry> pool = {{9, mv("Va1")}};
        const Directive d = dim_controller_step(v, pool, {}, f.H, f.alpha, f.spec);
        REQUIRE(d.stop_at.has_value());
        CHECK(*d.stop_at > f.spec.yellow_start());
    }
}

TEST_CASE("four-vehicle decision drives proceed/hold") {
    Fixture f;
    const std::vector<IntentEntry> pool = {
        {0, mv("Va1")}, {1, mv("Vb2")}, {2, mv("Vc2")}, {3, mv("Vd2")}};

    const Directive winner = dim_controller_step(f.vehicle(0, "Va1", 5.0), pool, {}, f.H,
                                                 f.alpha, f.spec);
    CHECK_FALSE(winner.stop_at.has_value());

    const Directive loser = dim_controller_step(f.vehicle(2, "Vc2", 5.0), pool, {}, f.H,
                                                f.alpha, f.spec);
    REQUIRE(loser.stop_at.has_value());
    CHECK(*loser.stop_at == doctest::Approx(f.spec.green_start()));
}

TEST_CASE("crossing gate blocks only conflicting traffic by default") {
    Fixture f;
    const std::vector<IntentEntry> pool = {{0, mv("Vc1")}};
    const VehicleView v = f.vehicle(0, "Vc1", 4.0);

    SUBCASE("conflicting crosser holds the winner") {
        const std::vector<CrossingInfo> crossing = {{8, 0, mv("Va3")}}; // conflicts Vc1
        const Directive d = dim_controller_step(v, pool, crossing, f.H, f.alpha, f.spec);
        CHECK(d.stop_at.has_value());
    }
    SUBCASE("harmonious crosser does not") {
        const std::vector<CrossingInfo> crossing = {{8, 0, mv("Va1")}};
        const Directive d = dim_controller_step(v, pool, crossing, f.H, f.alpha, f.spec);
        CHECK_FALSE(d.stop_at.has_value());
    }
    SUBCASE("strict gate serializes everything") {
        DimSettings strict;
        strict.strict_crossing_gate = true;
        const std::vector<CrossingInfo> crossing = {{8, 0, mv("Va1")}};
        const Directive d = dim_controller_step(v, pool, crossing, f.H, f.alpha, f.spec, strict);
        CHECK(d.stop_at.has_value());
    }
}

TEST_CASE("commitment grants the crossing unconditionally") {
    Fixture f;
    // Default geometry: committed once the front passes the entry line.
    CHECK_FALSE(dim_committed(f.vehicle(0, "Va2", 0.5), f.spec));
    CHECK(dim_committed(f.vehicle(0, "Va2", -0.1), f.spec));

    const std::vector<CrossingInfo> crossing = {{8, 1, mv("Vb2")}}; // conflicts Va2
    const Directive d = dim_controller_step(f.vehicle(0, "Va2", -0.5), {}, crossing, f.H,
                                            f.alpha, f.spec);
    CHECK_FALSE(d.stop_at.has_value());
    CHECK(d.speed_cap == doctest::Approx(f.spec.speed_limit));
}

TEST_CASE("denied vehicle already past the hold point stops before the box") {
    Fixture f;
    const std::vector<IntentEntry> pool = {{0, mv("Vc2")}, {1, mv("Vb1")}, {2, mv("Va3")}};
    // Vc2 in the green zone, uncommitted, and outranked.
    const RightOfWaySet row = decide(pool, f.H, f.alpha);
    REQUIRE_FALSE(row.contains(0));
    const Directive d = dim_controller_step(f.vehicle(0, "Vc2", 1.2), pool, {}, f.H, f.alpha,
                                            f.spec);
    REQUIRE(d.stop_at.has_value());
    CHECK(*d.stop_at < 1.2);
    CHECK(*d.stop_at > 0.0);
}

TEST_CASE("approach keeps the road limit") {
    Fixture f;
    const Directive d = dim_controller_step(f.vehicle(0, "Va1", 200.0, 11.1), {}, {}, f.H,
                                            f.alpha, f.spec);
    CHECK(d.speed_cap == doctest::Approx(f.spec.speed_limit));
    CHECK_FALSE(d.stop_at.has_value());
}
