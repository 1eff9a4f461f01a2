#pragma once

#include <span>
#include <vector>

#include "dim/harmony.hpp"

namespace dim {

enum class SignalState { Green, Amber, Red };

// One phase serves a single arm; every movement from that arm is allowed
// during its green.
struct SignalPhase {
    int arm = 0;
    double green_s = 0.0;
    double amber_s = 2.0;
};

struct SignalPlan {
    std::vector<SignalPhase> phases;

    double cycle_s() const;
    void validate() const;
};

struct WebsterInputs {
    double lost_time_s = 8.0;            // L = 2n
    std::vector<double> critical_ratios; // y per phase, observed volume / saturation flow
    double saturation_flow = 1500.0;     // PCU/hr
};

// y_a = density_a / saturation_flow, one phase per arm, L = 2n.
WebsterInputs webster_inputs(std::span<const double> per_arm_density_pcu_hr,
                             double saturation_flow = 1500.0);

// Optimal cycle Co = (1.5 L + 5) / (1 - Y); per-phase green (y_a / Y)(Co - L).
// Degenerate zero-volume phases share the available green equally and are
// floored at 1 s. Throws OversaturationError when Y >= 1.
SignalPlan webster_plan(const WebsterInputs& inputs);

// Cyclic fixed-time lookup; per-arm state at simulation time t.
std::vector<SignalState> fts_states(const SignalPlan& plan, double t);

// Delay-based adaptive signal, a simplified reimplementation: green runs at
// least min_factor x base and extends one second at a time while the served
// arm still has a queue, up to max_factor x base.
class AtsController {
public:
    explicit AtsController(SignalPlan base, double min_factor = 0.5, double max_factor = 2.0);

    std::vector<SignalState> step(double dt, std::span<const int> queue_by_arm);

    int current_phase() const { return phase_; }
    double current_allotment() const { return allotment_; }
    double min_green(int phase) const { return base_.phases[phase].green_s * min_factor_; }
    double max_green(int phase) const { return base_.phases[phase].green_s * max_factor_; }

private:
    std::vector<SignalState> states() const;
    void enter_phase(int phase);

    SignalPlan base_;
    double min_factor_, max_factor_;
    int phase_ = 0;
    double elapsed_ = 0.0;   // within the current phase (green + amber)
    double allotment_ = 0.0; // granted green for the current phase
    bool in_amber_ = false;
};

struct Reservation {
    enum class Status { Pending, Confirmed, Completed };

    int vehicle_id = -1;
    double entry_time = 0.0;    // assigned conflict-box entry, seconds
    double crossing_time = 0.0; // occupancy duration
    Maneuver maneuver;
    Status status = Status::Pending;

    double end_time() const { return entry_time + crossing_time; }
};

// Arrival-time coordinator, a simplified reimplementation of V2I-based
// management: each vehicle gets the earliest conflict-box slot at or after
// its estimated arrival such that conflicting confirmed reservations never
// overlap in time; harmonious ones may.
class V2icScheduler {
public:
    explicit V2icScheduler(HarmonyMatrix H) : harmony_(std::move(H)) {}

    Reservation request(int vehicle_id, double eta, const Maneuver& m, double crossing_time);
    void cancel(int vehicle_id);
    void complete(int vehicle_id);

    const std::vector<Reservation>& reservations() const { return confirmed_; }

private:
    HarmonyMatrix harmony_;
    std::vector<Reservation> confirmed_;
};

struct ApproachingVehicle {
    int vehicle_id = -1;
    double eta = 0.0;
    Maneuver maneuver;
    double crossing_time = 0.0;
};

// Batch coordination: vehicles are processed in eta order against the
// running schedule.
std::vector<Reservation> v2ic_coordinate(std::span<const ApproachingVehicle> approaching,
                                         V2icScheduler& schedule);

} // namespace dim
