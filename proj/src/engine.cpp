#include "dim/engine.hpp"

#include <algorithm>
#include <cmath>

namespace dim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWaitSpeed = 0.1;   // below this a vehicle counts as waiting
constexpr double kGapTolerance = 1e-6;
constexpr double kClearMargin = 0.3; // s between a tail clearing and the next nose

enum StreamPurpose : uint64_t { kArrivalStream = 1, kTurnStream = 2 };
} // namespace

double admissible_speed(double dist, double decel, double dt) {
    if (dist <= 0) return 0.0;
    return std::max(0.0, -decel * dt + std::sqrt(decel * decel * dt * dt + 2.0 * decel * dist));
}

FollowResult follow_step(double speed, double target, double accel, double decel, double dt) {
    target = std::max(0.0, target);
    FollowResult r;
    if (speed > target) {
        const double tb = std::min(dt, (speed - target) / decel);
        r.speed = speed - decel * tb;
        r.advance = speed * tb - 0.5 * decel * tb * tb + r.speed * (dt - tb);
    } else if (speed < target) {
        const double ta = std::min(dt, (target - speed) / accel);
        r.speed = speed + accel * ta;
        r.advance = speed * ta + 0.5 * accel * ta * ta + r.speed * (dt - ta);
    } else {
        r.speed = speed;
        r.advance = speed * dt;
    }
    return r;
}

double free_travel_time(double dist, double v0, double vmax, double accel) {
    if (dist <= 0) return 0.0;
    const double d_acc = (vmax * vmax - v0 * v0) / (2.0 * accel);
    if (d_acc >= dist)
        return (std::sqrt(v0 * v0 + 2.0 * accel * dist) - v0) / accel;
    return (vmax - v0) / accel + (dist - d_acc) / vmax;
}

ArrivalStream::ArrivalStream(double rate_per_s, uint64_t stream_seed, double start_time)
    : rate_(rate_per_s), rng_(stream_seed) {
    next_time_ = rate_ > 0 ? start_time + rng_.next_exponential(rate_) : kInf;
}

std::vector<double> ArrivalStream::drain_until(double t_end) {
    std::vector<double> out;
    while (next_time_ <= t_end) {
        out.push_back(next_time_);
        next_time_ += rng_.next_exponential(rate_);
    }
    return out;
}

int ArrivalStream::count_until(double t_end) {
    int k = 0;
    while (next_time_ <= t_end) {
        ++k;
        next_time_ += rng_.next_exponential(rate_);
    }
    return k;
}

Maneuver sample_maneuver(int arm, int n_arms, std::span<const double> offset_weights,
                         RngStream& rng) {
    if (static_cast<int>(offset_weights.size()) != n_arms - 1)
        throw ConfigError("turn distribution needs n-1 weights");
    double sum = 0.0;
    for (double w : offset_weights) {
        if (w < 0) throw ConfigError("turn weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw ConfigError("turn weights must sum to 1, got " + std::to_string(sum));

    const double u = rng.next_double();
    double acc = 0.0;
    for (int k = 1; k < n_arms; ++k) {
        acc += offset_weights[k - 1];
        if (u < acc) return Maneuver{arm, k};
    }
    return Maneuver{arm, n_arms - 1};
}

Engine::Engine(ScenarioConfig cfg)
    : cfg_(std::move(cfg)),
      harmony_(HarmonyMatrix::for_intersection(cfg_.intersection.n_arms)),
      priority_(cfg_.priority()) {
    cfg_.validate();
    dim_settings_.strict_crossing_gate = cfg_.strict_crossing_gate;
    dim_settings_.box_stand_margin = cfg_.stand_margin;

    const int n = cfg_.intersection.n_arms;
    inbound_.resize(n);
    outbound_.resize(n);
    spawn_queue_.resize(n);

    const std::vector<double> demand = cfg_.per_arm_density();
    for (int arm = 0; arm < n; ++arm) {
        arrivals_.emplace_back(demand[arm] / 3600.0,
                               derive_stream_seed(cfg_.seed, kArrivalStream, arm), 0.0);
        turn_rng_.emplace_back(derive_stream_seed(cfg_.seed, kTurnStream, arm));
    }

    if (cfg_.controller == ControllerKind::FTS || cfg_.controller == ControllerKind::ATS) {
        signal_plan_ = webster_plan(webster_inputs(demand, cfg_.saturation_flow));
        if (cfg_.controller == ControllerKind::ATS) {
            ats_.emplace(signal_plan_, cfg_.ats_min_factor, cfg_.ats_max_factor);
            signal_states_.assign(static_cast<size_t>(n), SignalState::Red);
            signal_states_[signal_plan_.phases[0].arm] = SignalState::Green;
        } else {
            signal_states_ = fts_states(signal_plan_, 0.0);
        }
    }
    if (cfg_.controller == ControllerKind::V2IC) v2ic_.emplace(harmony_);
}

Vehicle& Engine::at(int id) { return fleet_[slot_of_.at(id)]; }
const Vehicle& Engine::at(int id) const { return fleet_[slot_of_.at(id)]; }

const Vehicle* Engine::find_vehicle(int id) const {
    auto it = slot_of_.find(id);
    return it == slot_of_.end() ? nullptr : &fleet_[it->second];
}

int Engine::inject_vehicle(int arm, const Maneuver& m, double position, double speed) {
    require_valid(m, cfg_.intersection.n_arms);
    if (m.entry != arm) throw InvalidManeuverError("maneuver entry does not match arm");

    Vehicle v;
    v.id = next_id_++;
    v.arm = arm;
    v.maneuver = m;
    v.length = cfg_.vehicle_length;
    v.position = position;
    v.speed = speed;
    v.max_accel = cfg_.max_accel;
    v.max_decel = cfg_.max_decel;
    v.spawn_time = time_;
    v.box_path = box_path_length(m, cfg_.intersection);

    slot_of_[v.id] = static_cast<int>(fleet_.size());
    fleet_.push_back(v);
    ++spawned_;

    auto& chain = inbound_[arm];
    auto it = std::find_if(chain.begin(), chain.end(),
                           [&](int id) { return at(id).position > position; });
    chain.insert(it, v.id);

    if (cfg_.controller == ControllerKind::V2IC) request_reservation(fleet_.back());
    return v.id;
}

void Engine::request_reservation(Vehicle& v) {
    double eta = time_ + free_travel_time(std::max(0.0, v.position), v.speed,
                                          cfg_.intersection.speed_limit, v.max_accel);
    // Vehicles cannot overtake within a lane: never book ahead of a vehicle
    // physically in front on the same arm.
    for (const auto& r : v2ic_->reservations()) {
        if (r.vehicle_id == v.id || r.maneuver.entry != v.arm) continue;
        const Vehicle* ahead = find_vehicle(r.vehicle_id);
        if (!ahead || ahead->position >= v.position) continue;
        eta = std::max(eta, r.entry_time +
                                (v.length + cfg_.headway) / cfg_.intersection.red_zone_speed);
    }
    // Book an at-speed transit plus a spacing buffer. Slower entries overhang
    // the slot; the projected-clearance check on approach absorbs that.
    const double crossing = (v.box_path + v.length) / cfg_.intersection.speed_limit;
    reservation_of_[v.id] = v2ic_->request(v.id, eta, v.maneuver, crossing + cfg_.v2ic_slot_buffer);
}

Directive Engine::directive_for(const Vehicle& v, const WorldSnapshot& snap) const {
    switch (cfg_.controller) {
    case ControllerKind::DIM: {
        VehicleView view{v.id, v.arm, v.maneuver, v.position, v.speed, v.length};
        return dim_controller_step(view, snap.pool, snap.crossing, harmony_, priority_,
                                   cfg_.intersection, dim_settings_);
    }
    case ControllerKind::FTS:
    case ControllerKind::ATS:
        return signal_directive(v, snap);
    case ControllerKind::V2IC:
        return v2ic_directive(v, snap);
    }
    return {};
}

namespace {

bool conflicting_resident(const Vehicle& v, std::span<const CrossingInfo> crossing,
                          const HarmonyMatrix& H) {
    for (const auto& c : crossing) {
        if (c.vehicle_id == v.id || c.arm == v.arm) continue;
        if (!H.harmonious(v.maneuver, c.maneuver)) return true;
    }
    return false;
}

} // namespace

Directive Engine::signal_directive(const Vehicle& v, const WorldSnapshot& snap) const {
    const auto& spec = cfg_.intersection;
    if (v.position <= 0) return {spec.speed_limit, std::nullopt};

    Directive d{spec.speed_limit, std::nullopt};
    const SignalState state = snap.signals[v.arm];
    if (state == SignalState::Red) {
        d.stop_at = cfg_.stand_margin;
    } else if (state == SignalState::Amber) {
        // Dilemma rule: stop on amber only if a full-braking stop (plus one
        // step of reaction) still ends before the line.
        if (v.speed * v.speed / (2.0 * v.max_decel) + v.speed * cfg_.dt <=
            v.position - cfg_.stand_margin)
            d.stop_at = cfg_.stand_margin;
    }
    // Never enter the box across a conflicting occupant, green or not.
    if (conflicting_resident(v, snap.crossing, harmony_))
        d.stop_at = std::min(d.stop_at.value_or(kInf), cfg_.stand_margin);
    return d;
}

Directive Engine::v2ic_directive(const Vehicle& v, const WorldSnapshot& snap) const {
    const auto& spec = cfg_.intersection;
    if (v.position <= 0) return {spec.speed_limit, std::nullopt};

    Directive d{spec.speed_limit, std::nullopt};
    auto it = reservation_of_.find(v.id);
    if (it == reservation_of_.end()) return d;

    // Booked slot, slid behind (a) the booked ends of conflicting slots
    // served before this one and (b) the projected clearance of traffic
    // already crossing. Pacing toward the slid slot is what turns queueing
    // into a slowdown instead of a stop.
    const double booked_entry = it->second.entry_time;
    double target_entry = booked_entry;
    double clear_at = snap.time;
    if (v.position < 150.0) {
        // Conflicting slots booked ahead of this one and held by vehicles
        // that are also near the junction serve first; project when they
        // will have cleared from where they are now.
        for (const auto& r : v2ic_->reservations()) {
            if (r.vehicle_id == v.id || r.status != Reservation::Status::Confirmed) continue;
            if (r.maneuver.entry == v.arm) continue;
            if (r.entry_time >= booked_entry - 1e-9) continue;
            if (harmony_.harmonious(v.maneuver, r.maneuver)) continue;
            const Vehicle* p = find_vehicle(r.vehicle_id);
            if (!p || p->position <= 0 || p->position > 150.0) continue;
            const double to_line = p->position / std::max(p->speed, 1.0);
            const double transit = free_travel_time(p->box_path + p->length,
                                                    std::max(p->speed, 1.0),
                                                    spec.speed_limit, p->max_accel);
            target_entry = std::max(target_entry, snap.time + to_line + transit + kClearMargin);
        }
        // Traffic already in (or certain to enter) the box.
        for (const auto& c : snap.crossing) {
            if (c.vehicle_id == v.id || c.arm == v.arm) continue;
            if (harmony_.harmonious(v.maneuver, c.maneuver)) continue;
            const Vehicle* r = find_vehicle(c.vehicle_id);
            if (!r) continue;
            const double left = r->position + r->box_path + r->length; // to rear-clear
            if (left <= 0) continue;
            clear_at = std::max(clear_at, snap.time + left / std::max(r->speed, 1.0));
        }
        target_entry = std::max(target_entry, clear_at + kClearMargin);
    }

    const double remaining = target_entry - snap.time;
    if (remaining > 0) {
        const double required = v.position / remaining;
        if (required < cfg_.v2ic_min_crawl) {
            // Unreachable above the crawl floor against the booked slot:
            // stop and re-request. Slid targets just crawl.
            if (booked_entry - snap.time > 0 &&
                v.position / (booked_entry - snap.time) < cfg_.v2ic_min_crawl)
                d.stop_at = v.position;
            else
                d.speed_cap = cfg_.v2ic_min_crawl;
        } else {
            d.speed_cap = std::min(spec.speed_limit, required);
        }
    }

    // Running early against the target: ride the stoppable profile so a
    // late-breaking slide never arrives faster than braking allows.
    const double arrival = snap.time + v.position / std::max(v.speed, cfg_.v2ic_min_crawl);
    if (arrival + 0.2 < target_entry)
        d.speed_cap = std::min(
            d.speed_cap,
            std::max(cfg_.v2ic_min_crawl,
                     admissible_speed(v.position - cfg_.stand_margin, v.max_decel, cfg_.dt)));
    // Last resort: never run into traffic that cannot clear in time.
    if (arrival < clear_at + kClearMargin / 2.0)
        d.stop_at = std::min(d.stop_at.value_or(kInf), cfg_.stand_margin);
    return d;
}

std::optional<double> Engine::same_arm_box_clearance(const Vehicle& v) const {
    // A box resident from the same arm constrains a follower while its tail
    // hangs onto the approach, or for the whole crossing when both run the
    // same chord.
    std::optional<double> best;
    for (int id : box_residents_) {
        const Vehicle& ld = at(id);
        if (ld.arm != v.arm || ld.id == v.id || ld.position >= v.position) continue;
        const bool same_chord = ld.maneuver == v.maneuver;
        const bool tail_on_approach = ld.position > -ld.length;
        if (!same_chord && !tail_on_approach) continue;
        const double clear = v.position - (ld.position + ld.length) - cfg_.headway;
        if (!best || clear < *best) best = clear;
    }
    return best;
}

std::optional<double> Engine::crossing_clearance(const Vehicle& v) const {
    std::optional<double> best = same_arm_box_clearance(v);
    const auto& out = outbound_[exit_arm(v.maneuver, cfg_.intersection.n_arms)];
    if (!out.empty()) {
        const Vehicle& ld = at(out.back());
        const double clear = (outbound_progress(ld) - ld.length) - outbound_progress(v) - cfg_.headway;
        if (!best || clear < *best) best = clear;
    }
    return best;
}

void Engine::integrate(Vehicle& v, const Directive& d, std::optional<double> leader_clear) {
    double target = std::min(d.speed_cap, cfg_.intersection.speed_limit);
    if (d.stop_at)
        target = std::min(target, admissible_speed(v.position - *d.stop_at, v.max_decel, cfg_.dt));
    if (leader_clear)
        target = std::min(target, admissible_speed(*leader_clear, v.max_decel, cfg_.dt));

    const FollowResult r = follow_step(v.speed, target, v.max_accel, v.max_decel, cfg_.dt);
    v.speed = r.speed;
    v.position -= r.advance;
    if (v.speed < kWaitSpeed) v.cumulative_wait += cfg_.dt;
}

void Engine::apply_transitions() {
    const auto& spec = cfg_.intersection;
    const double t_now = time_ + cfg_.dt;

    for (auto& v : fleet_)
        if (!v.committed && v.position < spec.green_len - v.length / 2.0) v.committed = true;

    // Inbound -> Crossing: the chain front passes the entry line.
    for (int arm = 0; arm < spec.n_arms; ++arm) {
        auto& chain = inbound_[arm];
        while (!chain.empty() && at(chain.front()).position < 0) {
            Vehicle& v = at(chain.front());
            v.stage = Vehicle::Stage::Crossing;
            v.entry_time = t_now;
            box_residents_.push_back(v.id);
            chain.erase(chain.begin());
        }
    }

    // Crossing -> Outbound: the front clears the box.
    for (auto& v : fleet_) {
        if (v.stage == Vehicle::Stage::Crossing && v.position <= -v.box_path) {
            v.stage = Vehicle::Stage::Outbound;
            outbound_[exit_arm(v.maneuver, spec.n_arms)].push_back(v.id);
            if (v2ic_) v2ic_->complete(v.id);
        }
    }

    // Box residency ends once the rear clears the box.
    std::erase_if(box_residents_, [&](int id) {
        const Vehicle& v = at(id);
        return v.position <= -(v.box_path + v.length);
    });

    // Despawn at the far end of the exit arm.
    for (int arm = 0; arm < spec.n_arms; ++arm) {
        auto& chain = outbound_[arm];
        while (!chain.empty() &&
               at(chain.front()).position <= -(at(chain.front()).box_path + spec.arm_length)) {
            Vehicle v = at(chain.front());
            v.exit_time = t_now;
            completed_.push_back(
                {v.id, v.arm, v.maneuver, v.spawn_time, v.entry_time, v.exit_time, v.cumulative_wait});
            chain.erase(chain.begin());
            despawn(v.id);
        }
    }
}

void Engine::despawn(int id) {
    if (v2ic_) {
        v2ic_->cancel(id);
        reservation_of_.erase(id);
        crawl_hold_.erase(id);
    }
    const int slot = slot_of_.at(id);
    const int last = static_cast<int>(fleet_.size()) - 1;
    if (slot != last) {
        fleet_[slot] = fleet_[last];
        slot_of_[fleet_[slot].id] = slot;
    }
    fleet_.pop_back();
    slot_of_.erase(id);
}

void Engine::run_safety_checks() {
    const auto& spec = cfg_.intersection;

    // Conflicting maneuvers from different arms must never share the box.
    for (size_t i = 0; i < box_residents_.size(); ++i) {
        for (size_t j = i + 1; j < box_residents_.size(); ++j) {
            const Vehicle& a = at(box_residents_[i]);
            const Vehicle& b = at(box_residents_[j]);
            if (a.arm != b.arm && !harmony_.harmonious(a.maneuver, b.maneuver))
                ++safety_.box_conflicts;
        }
    }

    // The yellow zone holds one vehicle per arm under the zone discipline.
    if (cfg_.controller == ControllerKind::DIM) {
        for (int arm = 0; arm < spec.n_arms; ++arm) {
            int in_yellow = 0;
            for (int id : inbound_[arm]) {
                const double p = at(id).position;
                if (p >= spec.green_start() && p < spec.yellow_start()) ++in_yellow;
            }
            if (in_yellow > 1) ++safety_.yellow_overflows;
        }
    }

    // No overlaps along any shared path.
    auto check_chain_gaps = [&](const std::vector<int>& chain, bool outbound) {
        for (size_t i = 1; i < chain.size(); ++i) {
            const Vehicle& ld = at(chain[i - 1]);
            const Vehicle& fo = at(chain[i]);
            const double gap = outbound
                ? (outbound_progress(ld) - ld.length) - outbound_progress(fo)
                : fo.position - (ld.position + ld.length);
            if (gap < -kGapTolerance) ++safety_.negative_gaps;
        }
    };
    for (int arm = 0; arm < spec.n_arms; ++arm) {
        check_chain_gaps(inbound_[arm], false);
        check_chain_gaps(outbound_[arm], true);
    }
    for (size_t i = 0; i < box_residents_.size(); ++i) {
        for (size_t j = i + 1; j < box_residents_.size(); ++j) {
            const Vehicle& a = at(box_residents_[i]);
            const Vehicle& b = at(box_residents_[j]);
            if (a.arm != b.arm || !(a.maneuver == b.maneuver)) continue;
            const Vehicle& lead = a.position < b.position ? a : b;
            const Vehicle& follow = a.position < b.position ? b : a;
            if (follow.position - (lead.position + lead.length) < -kGapTolerance)
                ++safety_.negative_gaps;
        }
    }

    long queued = 0;
    for (const auto& q : spawn_queue_) queued += static_cast<long>(q.size());
    if (spawned_ != static_cast<long>(completed_.size()) + static_cast<long>(fleet_.size()) + queued)
        ++safety_.conservation_breaks;
}

void Engine::process_arrivals() {
    const auto& spec = cfg_.intersection;
    const double t_end = time_ + cfg_.dt;
    std::vector<double> uniform(static_cast<size_t>(spec.n_arms - 1),
                                1.0 / (spec.n_arms - 1));

    for (int arm = 0; arm < spec.n_arms; ++arm) {
        for (double when : arrivals_[arm].drain_until(t_end)) {
            ++spawned_;
            spawn_queue_[arm].push_back({when, sample_maneuver(arm, spec.n_arms, uniform,
                                                               turn_rng_[arm])});
        }

        // Spillback: queued arrivals enter as soon as the spawn cell frees.
        while (!spawn_queue_[arm].empty()) {
            const auto& chain = inbound_[arm];
            double clear = kInf;
            if (!chain.empty()) {
                const Vehicle& tail = at(chain.back());
                clear = spec.arm_length - (tail.position + tail.length);
            }
            if (clear < cfg_.headway) break;

            const QueuedArrival q = spawn_queue_[arm].front();
            spawn_queue_[arm].pop_front();

            Vehicle v;
            v.id = next_id_++;
            v.arm = arm;
            v.maneuver = q.maneuver;
            v.length = cfg_.vehicle_length;
            v.position = spec.arm_length;
            v.speed = std::min(spec.speed_limit,
                               admissible_speed(clear - cfg_.headway, cfg_.max_decel, cfg_.dt));
            v.max_accel = cfg_.max_accel;
            v.max_decel = cfg_.max_decel;
            v.spawn_time = q.scheduled;
            v.cumulative_wait = std::max(0.0, t_end - q.scheduled);
            v.box_path = box_path_length(q.maneuver, spec);

            slot_of_[v.id] = static_cast<int>(fleet_.size());
            fleet_.push_back(v);
            inbound_[arm].push_back(v.id);
            if (cfg_.controller == ControllerKind::V2IC) request_reservation(fleet_.back());
        }
    }
}

void Engine::advance_controllers() {
    const auto& spec = cfg_.intersection;
    const double t_now = time_ + cfg_.dt;

    if (cfg_.controller == ControllerKind::ATS) {
        std::vector<int> queues(static_cast<size_t>(spec.n_arms), 0);
        for (int arm = 0; arm < spec.n_arms; ++arm)
            for (int id : inbound_[arm]) {
                const Vehicle& v = at(id);
                if (v.position > 0 && v.position <= cfg_.queue_detect_range &&
                    v.speed < cfg_.queue_speed_threshold)
                    ++queues[arm];
            }
        signal_states_ = ats_->step(cfg_.dt, queues);
    } else if (cfg_.controller == ControllerKind::FTS) {
        signal_states_ = fts_states(signal_plan_, t_now);
    } else if (cfg_.controller == ControllerKind::V2IC) {
        // A vehicle that cannot reach its slot above the crawl floor stops
        // and asks for a fresh assignment, once per episode. Late vehicles
        // keep their slot: the service order is the assignment order.
        for (int arm = 0; arm < spec.n_arms; ++arm) {
            for (int id : inbound_[arm]) {
                Vehicle& v = at(id);
                if (v.position <= 0) continue;
                auto it = reservation_of_.find(id);
                if (it == reservation_of_.end()) continue;
                const double remaining = it->second.entry_time - t_now;
                const bool too_early =
                    remaining > 0 && v.position / remaining < cfg_.v2ic_min_crawl;
                bool& latched = crawl_hold_[id];
                if (too_early && !latched) {
                    latched = true;
                    v2ic_->cancel(id);
                    request_reservation(v);
                    ++v2ic_rerequests_;
                } else if (!too_early) {
                    latched = false;
                }
            }
        }
    }
}

void Engine::step() {
    const auto& spec = cfg_.intersection;

    WorldSnapshot snap;
    snap.time = time_;
    for (int arm = 0; arm < spec.n_arms; ++arm) {
        if (inbound_[arm].empty()) continue;
        const Vehicle& v = at(inbound_[arm].front());
        if (v.position < spec.yellow_start() && !v.committed)
            snap.pool.push_back({v.id, v.maneuver});
    }
    for (int id : box_residents_) snap.crossing.push_back({id, at(id).arm, at(id).maneuver});
    // Approaching vehicles that can no longer stop short of the commit point
    // are crossings-in-waiting: releases and yields must treat them as inside.
    for (int arm = 0; arm < spec.n_arms; ++arm)
        for (int id : inbound_[arm]) {
            const Vehicle& v = at(id);
            if (v.position <= 0) continue;
            const double commit_line = std::max(0.0, spec.green_len - v.length / 2.0);
            const bool unstoppable =
                v.speed * v.speed / (2.0 * v.max_decel) > v.position - commit_line;
            if (v.committed || unstoppable) snap.crossing.push_back({v.id, v.arm, v.maneuver});
        }
    snap.signals = signal_states_;

    std::vector<Directive> directives(fleet_.size());
    for (size_t i = 0; i < fleet_.size(); ++i) directives[i] = directive_for(fleet_[i], snap);

    // Integrate leaders before followers: outbound chains, then box, then
    // the inbound chains front-to-back.
    auto integrate_id = [&](int id, std::optional<double> clear) {
        const int slot = slot_of_.at(id);
        integrate(fleet_[slot], directives[slot], clear);
    };
    for (int arm = 0; arm < spec.n_arms; ++arm) {
        const auto& chain = outbound_[arm];
        for (size_t i = 0; i < chain.size(); ++i) {
            std::optional<double> clear;
            if (i > 0) {
                const Vehicle& ld = at(chain[i - 1]);
                clear = (outbound_progress(ld) - ld.length) - outbound_progress(at(chain[i])) -
                        cfg_.headway;
            }
            integrate_id(chain[i], clear);
        }
    }
    for (int id : box_residents_)
        if (at(id).stage == Vehicle::Stage::Crossing) integrate_id(id, crossing_clearance(at(id)));
    for (int arm = 0; arm < spec.n_arms; ++arm) {
        const auto& chain = inbound_[arm];
        for (size_t i = 0; i < chain.size(); ++i) {
            std::optional<double> clear;
            if (i > 0) {
                const Vehicle& ld = at(chain[i - 1]);
                clear = at(chain[i]).position - (ld.position + ld.length) - cfg_.headway;
            } else {
                clear = same_arm_box_clearance(at(chain[i]));
            }
            integrate_id(chain[i], clear);
        }
    }

    apply_transitions();
    run_safety_checks();
    process_arrivals();
    advance_controllers();

    time_ += cfg_.dt;
    ++step_index_;

    if (trace_ && cfg_.trace_every > 0 && step_index_ % cfg_.trace_every == 0) {
        for (int arm = 0; arm < spec.n_arms; ++arm)
            for (int id : inbound_[arm]) {
                const Vehicle& v = at(id);
                trace_({time_, v.id, v.arm, v.position, v.speed, zone_of(v.position, spec, v.box_path)});
            }
        for (int id : box_residents_) {
            const Vehicle& v = at(id);
            trace_({time_, v.id, v.arm, v.position, v.speed, zone_of(v.position, spec, v.box_path)});
        }
        for (int arm = 0; arm < spec.n_arms; ++arm)
            for (int id : outbound_[arm]) {
                const Vehicle& v = at(id);
                if (v.position <= -(v.box_path + v.length))
                    trace_({time_, v.id, v.arm, v.position, v.speed,
                            zone_of(v.position, spec, v.box_path)});
            }
    }
}

RunResult Engine::run() {
    while (time_ < cfg_.horizon_s - 1e-9) step();

    RunResult r;
    r.completed = completed_;
    r.spawned = spawned_;
    r.active_at_end = static_cast<int>(fleet_.size());
    for (const auto& q : spawn_queue_) r.queued_at_end += static_cast<int>(q.size());
    r.safety = safety_;
    r.v2ic_rerequests = v2ic_rerequests_;
    r.horizon_s = cfg_.horizon_s;
    r.warmup_s = cfg_.warmup_s;
    r.n_arms = cfg_.intersection.n_arms;
    return r;
}

} // namespace dim
