#include <doctest.h>

#include <cmath>

#include "dim/topology.hpp"

using namespace dim;

TEST_CASE("zone boundaries at the default geometry") {
    IntersectionSpec spec;
    CHECK(zone_of(100.0, spec) == ZoneTag::Approach);
    CHECK(zone_of(38.5, spec) == ZoneTag::Approach); // red zone starts at 2+6+30=38
    CHECK(zone_of(38.0, spec) == ZoneTag::Approach);
    CHECK(zone_of(37.9, spec) == ZoneTag::Red);
    CHECK(zone_of(8.0, spec) == ZoneTag::Red);
    CHECK(zone_of(5.0, spec) == ZoneTag::Yellow);
    CHECK(zone_of(2.0, spec) == ZoneTag::Yellow);
    CHECK(zone_of(1.0, spec) == ZoneTag::Green);
    CHECK(zone_of(0.0, spec) == ZoneTag::Green);
    CHECK(zone_of(-5.0, spec) == ZoneTag::InsideIntersection);
    CHECK(zone_of(-3.0, spec, 18.0) == ZoneTag::InsideIntersection);
    CHECK(zone_of(-25.0, spec) == ZoneTag::Outbound);
    CHECK(zone_of(-20.0 - 499.9, spec) == ZoneTag::Outbound);
    CHECK(zone_of(-20.0 - 500.0, spec) == ZoneTag::Exited);
}

TEST_CASE("zone partition is exhaustive and consistent for arbitrary specs") {
    IntersectionSpec spec;
    spec.red_len = 17.0;
    spec.yellow_len = 4.5;
    spec.green_len = 3.25;
    spec.arm_length = 120.0;
    spec.validate();

    CHECK(zone_of(spec.green_len + spec.yellow_len, spec) == ZoneTag::Red); // red inner edge
    CHECK(zone_of(spec.green_len + spec.yellow_len - 1e-9, spec) == ZoneTag::Yellow);
    CHECK(zone_of(spec.green_len, spec) == ZoneTag::Yellow);
    CHECK(zone_of(spec.green_len - 1e-9, spec) == ZoneTag::Green);

    // Sweep: every position maps to exactly one tag and tags only move
    // forward as the position decreases.
    int last = -1;
    for (double pos = 200.0; pos > -700.0; pos -= 0.01) {
        const int tag = static_cast<int>(zone_of(pos, spec));
        if (last >= 0) {
            CHECK(tag >= last);
            CHECK(tag - last <= 1);
        }
        last = tag;
    }
    CHECK(last == static_cast<int>(ZoneTag::Exited));
}

TEST_CASE("exit arms wrap clockwise") {
    CHECK(exit_arm(Maneuver{0, 1}, 4) == 1); // left turn from north exits east
    CHECK(exit_arm(Maneuver{3, 1}, 4) == 0);
    CHECK(exit_arm(Maneuver{2, 2}, 4) == 0);
    CHECK(exit_arm(Maneuver{1, 3}, 4) == 0);

    for (int n = 3; n <= 8; ++n)
        for (int arm = 0; arm < n; ++arm)
            for (int k = 1; k < n; ++k)
                CHECK(exit_arm(Maneuver{arm, k}, n) != arm);

    CHECK_THROWS_AS(exit_arm(Maneuver{0, 0}, 4), InvalidManeuverError);
    CHECK_THROWS_AS(exit_arm(Maneuver{0, 4}, 4), InvalidManeuverError);
    CHECK_THROWS_AS(exit_arm(Maneuver{4, 1}, 4), InvalidManeuverError);
}

TEST_CASE("maneuver names round-trip") {
    for (int n = 3; n <= 6; ++n)
        for (int arm = 0; arm < n; ++arm)
            for (int k = 1; k < n; ++k) {
                const Maneuver m{arm, k};
                CHECK(maneuver_from_name(maneuver_name(m), n) == m);
            }
    CHECK(maneuver_name(Maneuver{0, 1}) == "Va1");
    CHECK(maneuver_name(Maneuver{2, 3}) == "Vc3");
    CHECK_THROWS(maneuver_from_name("Xa1", 4));
}

TEST_CASE("box chords use the entry/exit point geometry") {
    IntersectionSpec spec;
    // 4-way: entry at arm angle + 22.5 deg, exit at arm angle - 22.5 deg.
    const double pi = 3.14159265358979323846;
    const double left = box_path_length(Maneuver{0, 1}, spec);
    const double straight = box_path_length(Maneuver{0, 2}, spec);
    CHECK(left == doctest::Approx(2 * 10.0 * std::sin(22.5 * pi / 180.0)));
    CHECK(straight == doctest::Approx(2 * 10.0 * std::sin(67.5 * pi / 180.0)));
    // Same chord class on every arm by symmetry.
    for (int arm = 0; arm < 4; ++arm) {
        CHECK(box_path_length(Maneuver{arm, 1}, spec) == doctest::Approx(left));
        CHECK(box_path_length(Maneuver{arm, 2}, spec) == doctest::Approx(straight));
    }
}

TEST_CASE("spec validation rejects broken geometry") {
    IntersectionSpec spec;
    CHECK_NOTHROW(spec.validate());

    IntersectionSpec bad = spec;
    bad.arm_length = 30.0;
    CHECK_THROWS_AS(bad.validate(), InvalidGeometryError);

    bad = spec;
    bad.red_zone_speed = bad.speed_limit;
    CHECK_THROWS_AS(bad.validate(), InvalidGeometryError);

    bad = spec;
    bad.n_arms = 2;
    CHECK_THROWS_AS(bad.validate(), InvalidGeometryError);
}
