#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dim/clique.hpp"

namespace dim {

// What a controller asks of the speed planner for one step: an upper speed
// bound plus, optionally, a front-bumper position to stop at.
struct Directive {
    double speed_cap = 0.0;
    std::optional<double> stop_at;
};

struct DimSettings {
    // When set, any vehicle inside the conflict box blocks a release; by
    // default only conflicting maneuvers do.
    bool strict_crossing_gate = false;
    // Stand-off from the conflict-box edge for emergency holds, metres.
    double box_stand_margin = 0.3;
};

// Controller-facing slice of one vehicle's state.
struct VehicleView {
    int id = -1;
    int arm = 0;
    Maneuver maneuver;
    double position = 0.0; // front bumper, signed distance to entry line
    double speed = 0.0;
    double length = 4.0;
};

// A vehicle that is traversing the conflict box or can no longer avoid
// entering it (committed, or past its full-braking stop point).
struct CrossingInfo {
    int vehicle_id = -1;
    int arm = 0;
    Maneuver maneuver;
};

// Committed vehicles have pushed more than half their length past the
// green-zone start; from there the crossing cannot be revoked.
bool dim_committed(const VehicleView& v, const IntersectionSpec& spec);

// One decision step of the zone state machine. `pool` holds the per-arm
// pending intents (at most one per arm), `crossing` the conflict-box
// occupants, both taken from the same world snapshot the caller evaluates
// every other vehicle against.
Directive dim_controller_step(const VehicleView& v, std::span<const IntentEntry> pool,
                              std::span<const CrossingInfo> crossing, const HarmonyMatrix& H,
                              const PriorityOrder& priority, const IntersectionSpec& spec,
                              const DimSettings& settings = {});

struct DeadlockViolation {
    std::vector<int> offsets_per_arm; // 0 = arm empty
    std::string description;
};

struct DeadlockReport {
    int n_arms = 0;
    long states_checked = 0;
    std::vector<DeadlockViolation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_text() const;
};

// Enumerates every assignment of {absent, offset 1..n-1} over the arms
// (minus the all-absent state) and checks that the decision rule always
// yields a non-empty, perspective-independent, pairwise-harmonious winner
// set. For a 4-way junction that is 4^4 - 1 = 255 states.
DeadlockReport verify_deadlock_free(int n_arms, const HarmonyMatrix& H,
                                    const PriorityOrder& priority);

} // namespace dim
