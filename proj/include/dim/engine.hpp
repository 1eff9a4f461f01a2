#pragma once

#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "dim/baselines.hpp"
#include "dim/dim_controller.hpp"
#include "dim/rng.hpp"
#include "dim/scenario.hpp"

namespace dim {

struct Vehicle {
    enum class Stage { Inbound, Crossing, Outbound };

    int id = -1;
    int arm = 0;
    Maneuver maneuver;
    double length = 4.0;
    double position = 0.0; // front bumper, signed distance to entry line
    double speed = 0.0;
    double max_accel = 2.0;
    double max_decel = 2.0;

    double spawn_time = 0.0; // scheduled arrival instant
    double entry_time = -1.0;
    double exit_time = -1.0;
    double cumulative_wait = 0.0;

    Stage stage = Stage::Inbound;
    bool committed = false;
    double box_path = 0.0; // chord length of its maneuver
};

// Largest speed that can still stop within dist at the given deceleration
// after one more step of travel. The -decel*dt term keeps the discrete
// update on the braking parabola instead of lagging it.
double admissible_speed(double dist, double decel, double dt);

struct FollowResult {
    double speed = 0.0;
    double advance = 0.0;
};

// One kinematic step toward target speed: accelerate or brake at the given
// limits, switching to constant speed mid-step once the target is reached.
FollowResult follow_step(double speed, double target, double accel, double decel, double dt);

// Free-flow time over dist starting at v0, accelerating toward vmax.
double free_travel_time(double dist, double v0, double vmax, double accel);

// Poisson arrivals realized as an exponential inter-arrival stream, so the
// per-step counts are exactly Poisson(rate*dt) and the arrival instants do
// not depend on the step size.
class ArrivalStream {
public:
    ArrivalStream() : rng_(0) {}
    ArrivalStream(double rate_per_s, uint64_t stream_seed, double start_time);

    // Consume and return all arrival instants <= t_end.
    std::vector<double> drain_until(double t_end);
    int count_until(double t_end);

    double rate() const { return rate_; }

private:
    double rate_ = 0.0;
    RngStream rng_;
    double next_time_ = std::numeric_limits<double>::infinity();
};

// Samples an exit offset from weights over offsets 1..n-1. Weights must sum
// to 1 (within 1e-6).
Maneuver sample_maneuver(int arm, int n_arms, std::span<const double> offset_weights,
                         RngStream& rng);

struct SafetyCounters {
    long negative_gaps = 0;
    long box_conflicts = 0;
    long yellow_overflows = 0;
    long conservation_breaks = 0;

    bool clean() const {
        return negative_gaps == 0 && box_conflicts == 0 && yellow_overflows == 0 &&
               conservation_breaks == 0;
    }
};

struct CompletedVehicle {
    int id = -1;
    int arm = 0;
    Maneuver maneuver;
    double spawn_time = 0.0;
    double entry_time = 0.0;
    double exit_time = 0.0;
    double wait = 0.0;
};

struct RunResult {
    std::vector<CompletedVehicle> completed;
    long spawned = 0; // arrivals generated, including still-queued demand
    int active_at_end = 0;
    int queued_at_end = 0;
    SafetyCounters safety;
    long v2ic_rerequests = 0;
    double horizon_s = 0.0;
    double warmup_s = 0.0;
    int n_arms = 0;
};

struct TraceRow {
    double time = 0.0;
    int id = -1;
    int arm = 0;
    double position = 0.0;
    double speed = 0.0;
    ZoneTag zone = ZoneTag::Approach;
};
using TraceSink = std::function<void(const TraceRow&)>;

// Snapshot the per-step decisions are made against: published once per step,
// every vehicle's controller reads the same copy.
struct WorldSnapshot {
    double time = 0.0;
    std::vector<IntentEntry> pool;        // per-arm pending intents
    std::vector<CrossingInfo> crossing;   // conflict-box occupants
    std::vector<SignalState> signals;     // per arm; empty for DIM / V2IC
};

// Deterministic fixed-step traffic engine: Poisson arrivals, safe-distance
// car following, zone and conflict-box transit, controller dispatch.
class Engine {
public:
    explicit Engine(ScenarioConfig cfg);

    void set_trace_sink(TraceSink sink) { trace_ = std::move(sink); }

    void step();
    RunResult run(); // advance to the horizon and collect the result

    double time() const { return time_; }
    const HarmonyMatrix& harmony_matrix() const { return harmony_; }
    const ScenarioConfig& config() const { return cfg_; }
    const SafetyCounters& safety() const { return safety_; }
    std::span<const Vehicle> active_vehicles() const { return fleet_; }
    const Vehicle* find_vehicle(int id) const;
    long completed_count() const { return static_cast<long>(completed_.size()); }

    // Places a vehicle directly on an approach; test scaffolding for staged
    // scenarios. Returns its id.
    int inject_vehicle(int arm, const Maneuver& m, double position, double speed);

private:
    Directive directive_for(const Vehicle& v, const WorldSnapshot& snap) const;
    Directive signal_directive(const Vehicle& v, const WorldSnapshot& snap) const;
    Directive v2ic_directive(const Vehicle& v, const WorldSnapshot& snap) const;
    std::optional<double> same_arm_box_clearance(const Vehicle& v) const;
    std::optional<double> crossing_clearance(const Vehicle& v) const;
    void integrate(Vehicle& v, const Directive& d, std::optional<double> leader_clear);
    void apply_transitions();
    void run_safety_checks();
    void process_arrivals();
    void advance_controllers();
    void request_reservation(Vehicle& v);
    void despawn(int id);
    double outbound_progress(const Vehicle& v) const { return -(v.position + v.box_path); }

    Vehicle& at(int id);
    const Vehicle& at(int id) const;

    ScenarioConfig cfg_;
    HarmonyMatrix harmony_;
    PriorityOrder priority_;
    DimSettings dim_settings_;

    double time_ = 0.0;
    long step_index_ = 0;
    int next_id_ = 0;

    std::vector<Vehicle> fleet_;
    std::unordered_map<int, int> slot_of_;
    std::vector<std::vector<int>> inbound_;  // per arm, front first
    std::vector<int> box_residents_;         // rear not yet clear, entry order
    std::vector<std::vector<int>> outbound_; // per exit arm, front first

    std::vector<ArrivalStream> arrivals_;
    std::vector<RngStream> turn_rng_;
    struct QueuedArrival {
        double scheduled = 0.0;
        Maneuver maneuver;
    };
    std::vector<std::deque<QueuedArrival>> spawn_queue_;

    SignalPlan signal_plan_;
    std::optional<AtsController> ats_;
    std::vector<SignalState> signal_states_;

    std::optional<V2icScheduler> v2ic_;
    std::unordered_map<int, Reservation> reservation_of_;
    std::unordered_map<int, bool> crawl_hold_;
    long v2ic_rerequests_ = 0;

    std::vector<CompletedVehicle> completed_;
    long spawned_ = 0;
    SafetyCounters safety_;
    TraceSink trace_;
};

} // namespace dim
