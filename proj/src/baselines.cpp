#include "dim/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "dim/errors.hpp"

namespace dim {

double SignalPlan::cycle_s() const {
    double total = 0.0;
    for (const auto& p : phases) total += p.green_s + p.amber_s;
    return total;
}

void SignalPlan::validate() const {
    if (phases.empty()) throw ConfigError("signal plan has no phases");
    for (const auto& p : phases)
        if (p.green_s <= 0 || p.amber_s <= 0)
            throw ConfigError("signal phase durations must be positive");
}

WebsterInputs webster_inputs(std::span<const double> per_arm_density_pcu_hr,
                             double saturation_flow) {
    if (saturation_flow <= 0) throw ConfigError("saturation flow must be positive");
    WebsterInputs in;
    in.saturation_flow = saturation_flow;
    in.lost_time_s = 2.0 * static_cast<double>(per_arm_density_pcu_hr.size());
    for (double d : per_arm_density_pcu_hr) {
        if (d < 0) throw ConfigError("negative traffic density");
        in.critical_ratios.push_back(d / saturation_flow);
    }
    return in;
}

SignalPlan webster_plan(const WebsterInputs& inputs) {
    const int n = static_cast<int>(inputs.critical_ratios.size());
    if (n == 0) throw ConfigError("webster needs at least one phase");

    double y_sum = 0.0;
    for (double y : inputs.critical_ratios) y_sum += y;
    if (y_sum >= 1.0)
        throw OversaturationError("sum of critical ratios " + std::to_string(y_sum) +
                                  " >= 1: signals cannot serve this demand");

    const double L = inputs.lost_time_s;
    const double cycle = (1.5 * L + 5.0) / (1.0 - y_sum);
    const double usable = cycle - L;

    SignalPlan plan;
    for (int a = 0; a < n; ++a) {
        const double share = y_sum > 0 ? inputs.critical_ratios[a] / y_sum : 1.0 / n;
        SignalPhase phase;
        phase.arm = a;
        phase.green_s = std::max(1.0, share * usable);
        phase.amber_s = 2.0;
        plan.phases.push_back(phase);
    }
    return plan;
}

std::vector<SignalState> fts_states(const SignalPlan& plan, double t) {
    const int n = static_cast<int>(plan.phases.size());
    std::vector<SignalState> states(static_cast<size_t>(n), SignalState::Red);
    const double cycle = plan.cycle_s();
    double local = std::fmod(t, cycle);
    if (local < 0) local += cycle;
    for (const auto& p : plan.phases) {
        if (local < p.green_s) {
            states[p.arm] = SignalState::Green;
            break;
        }
        local -= p.green_s;
        if (local < p.amber_s) {
            states[p.arm] = SignalState::Amber;
            break;
        }
        local -= p.amber_s;
    }
    return states;
}

AtsController::AtsController(SignalPlan base, double min_factor, double max_factor)
    : base_(std::move(base)), min_factor_(min_factor), max_factor_(max_factor) {
    base_.validate();
    if (min_factor_ <= 0 || max_factor_ < min_factor_)
        throw ConfigError("ats green factors must satisfy 0 < min <= max");
    enter_phase(0);
}

void AtsController::enter_phase(int phase) {
    phase_ = phase;
    elapsed_ = 0.0;
    allotment_ = min_green(phase);
    in_amber_ = false;
}

std::vector<SignalState> AtsController::states() const {
    std::vector<SignalState> s(base_.phases.size(), SignalState::Red);
    s[base_.phases[phase_].arm] = in_amber_ ? SignalState::Amber : SignalState::Green;
    return s;
}

std::vector<SignalState> AtsController::step(double dt, std::span<const int> queue_by_arm) {
    elapsed_ += dt;
    if (!in_amber_) {
        // At each exhausted allotment, grant one more second while the
        // served arm still queues, up to the upper bound.
        while (elapsed_ >= allotment_ && queue_by_arm[base_.phases[phase_].arm] > 0 &&
               allotment_ + 1.0 <= max_green(phase_) + 1e-9)
            allotment_ += 1.0;
        if (elapsed_ >= allotment_) {
            in_amber_ = true;
            elapsed_ = 0.0;
        }
    } else if (elapsed_ >= base_.phases[phase_].amber_s) {
        enter_phase((phase_ + 1) % static_cast<int>(base_.phases.size()));
    }
    return states();
}

Reservation V2icScheduler::request(int vehicle_id, double eta, const Maneuver& m,
                                   double crossing_time) {
    require_valid(m, harmony_.n_arms());
    if (crossing_time <= 0) throw ConfigError("crossing time must be positive");

    std::vector<const Reservation*> conflicting;
    for (const auto& r : confirmed_)
        if (r.status == Reservation::Status::Confirmed && !harmony_.harmonious(m, r.maneuver))
            conflicting.push_back(&r);
    std::sort(conflicting.begin(), conflicting.end(),
              [](const Reservation* a, const Reservation* b) {
                  return a->entry_time < b->entry_time;
              });

    double entry = eta;
    for (const Reservation* r : conflicting)
        if (r->entry_time < entry + crossing_time && r->end_time() > entry)
            entry = r->end_time();

    Reservation res;
    res.vehicle_id = vehicle_id;
    res.entry_time = entry;
    res.crossing_time = crossing_time;
    res.maneuver = m;
    res.status = Reservation::Status::Confirmed;
    confirmed_.push_back(res);
    return res;
}

void V2icScheduler::cancel(int vehicle_id) {
    std::erase_if(confirmed_, [&](const Reservation& r) { return r.vehicle_id == vehicle_id; });
}

void V2icScheduler::complete(int vehicle_id) {
    for (auto& r : confirmed_)
        if (r.vehicle_id == vehicle_id) r.status = Reservation::Status::Completed;
}

std::vector<Reservation> v2ic_coordinate(std::span<const ApproachingVehicle> approaching,
                                         V2icScheduler& schedule) {
    std::vector<ApproachingVehicle> order(approaching.begin(), approaching.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const ApproachingVehicle& a, const ApproachingVehicle& b) {
                         return a.eta < b.eta;
                     });
    std::vector<Reservation> out;
    for (const auto& a : order)
        out.push_back(schedule.request(a.vehicle_id, a.eta, a.maneuver, a.crossing_time));
    return out;
}

} // namespace dim
