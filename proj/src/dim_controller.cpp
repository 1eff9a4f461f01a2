#include "dim/dim_controller.hpp"

#include <algorithm>
#include <sstream>

namespace dim {

bool dim_committed(const VehicleView& v, const IntersectionSpec& spec) {
    return v.position < spec.green_len - v.length / 2.0;
}

namespace {

bool gate_open(const VehicleView& v, std::span<const CrossingInfo> crossing,
               const HarmonyMatrix& H, const DimSettings& settings) {
    for (const auto& c : crossing) {
        if (c.vehicle_id == v.id) continue;
        if (c.arm == v.arm) continue; // same-lane spacing is car-following's job
        if (settings.strict_crossing_gate) return false;
        if (!H.harmonious(v.maneuver, c.maneuver)) return false;
    }
    return true;
}

} // namespace

Directive dim_controller_step(const VehicleView& v, std::span<const IntentEntry> pool,
                              std::span<const CrossingInfo> crossing, const HarmonyMatrix& H,
                              const PriorityOrder& priority, const IntersectionSpec& spec,
                              const DimSettings& settings) {
    const double pos = v.position;

    if (pos >= spec.red_start())
        return {spec.speed_limit, std::nullopt};

    // Past the commit point the crossing is granted unconditionally; the
    // vehicle accelerates out along its maneuver path and never stops inside.
    if (dim_committed(v, spec)) return {spec.speed_limit, std::nullopt};

    if (pos >= spec.yellow_start()) {
        // Red zone: slow to the zone speed; wait short of the zone boundary
        // while another vehicle holds this arm's observation slot. Without a
        // slot conflict the vehicle still plans to be able to stop short of
        // the commit point until a decision grants the crossing.
        for (const auto& e : pool)
            if (e.maneuver.entry == v.arm && e.vehicle_id != v.id)
                return {spec.red_zone_speed, spec.yellow_start() + settings.box_stand_margin};
        const double commit_line = std::max(0.0, spec.green_len - v.length / 2.0);
        return {spec.red_zone_speed, commit_line + settings.box_stand_margin};
    }

    // Pending: in the yellow zone, or in the green zone short of the commit
    // point. Re-evaluate the unanimous decision every step.
    const RightOfWaySet row = decide(pool, H, priority);
    if (row.contains(v.id) && gate_open(v, crossing, H, settings))
        return {spec.red_zone_speed, std::nullopt};

    // Denied: hold at the yellow/green boundary; a vehicle already past it
    // stops short of both the conflict box and the commit point.
    const double commit_line = std::max(0.0, spec.green_len - v.length / 2.0);
    const double hold = pos > spec.green_start()
                            ? spec.green_start()
                            : commit_line + settings.box_stand_margin;
    return {spec.red_zone_speed, hold};
}

DeadlockReport verify_deadlock_free(int n_arms, const HarmonyMatrix& H,
                                    const PriorityOrder& priority) {
    DeadlockReport report;
    report.n_arms = n_arms;

    const int choices = n_arms; // absent + offsets 1..n-1
    std::vector<int> state(n_arms, 0);

    auto advance = [&]() {
        for (int i = 0; i < n_arms; ++i) {
            if (++state[i] < choices) return true;
            state[i] = 0;
        }
        return false;
    };

    // Skip the all-absent state by starting from the first increment.
    while (advance()) {
        ++report.states_checked;
        std::vector<IntentEntry> intents;
        for (int arm = 0; arm < n_arms; ++arm)
            if (state[arm] != 0) intents.push_back({arm, Maneuver{arm, state[arm]}});

        const RightOfWaySet row = decide(intents, H, priority);
        auto fail = [&](const std::string& what) {
            report.violations.push_back({state, what});
        };

        if (row.empty()) {
            fail("no vehicle received right of way");
            continue;
        }
        // Each present vehicle re-derives the decision from its own
        // perspective; all must agree.
        for (const auto& e : intents) {
            const RightOfWaySet again = decide(intents, H, priority);
            if (again.vehicle_ids != row.vehicle_ids) {
                fail("decision differs from perspective of arm " +
                     std::string(1, arm_label(e.maneuver.entry)));
                break;
            }
        }
        for (size_t i = 0; i < row.maneuvers.size(); ++i)
            for (size_t j = i + 1; j < row.maneuvers.size(); ++j)
                if (!H.harmonious(row.maneuvers[i], row.maneuvers[j]))
                    fail("winners " + maneuver_name(row.maneuvers[i]) + " and " +
                         maneuver_name(row.maneuvers[j]) + " conflict");
    }
    return report;
}

std::string DeadlockReport::to_text() const {
    std::ostringstream out;
    out << "deadlock verifier: n=" << n_arms << ", states checked=" << states_checked
        << ", violations=" << violations.size() << '\n';
    for (const auto& v : violations) {
        out << "  state [";
        for (size_t i = 0; i < v.offsets_per_arm.size(); ++i)
            out << (i ? " " : "") << arm_label(static_cast<int>(i)) << '='
                << v.offsets_per_arm[i];
        out << "]: " << v.description << '\n';
    }
    if (violations.empty()) out << "  all states have a unique non-empty harmonious winner set\n";
    return out.str();
}

} // namespace dim
