#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dim/clique.hpp"
#include "dim/topology.hpp"

namespace dim {

enum class ControllerKind { DIM, FTS, ATS, V2IC };

const char* controller_name(ControllerKind c);
ControllerKind controller_from_name(const std::string& name);

// Full description of one simulation run. The defaults reproduce the
// balanced 4-way reference setup.
struct ScenarioConfig {
    IntersectionSpec intersection;

    ControllerKind controller = ControllerKind::DIM;
    double density = 250.0;    // PCU/hr/lane (nominal)
    std::vector<double> ratio; // per-arm demand weights; empty = balanced

    // Unbalanced semantics: by default weights redistribute the same total
    // (sum of per-arm densities = n * density); when ratio_scaled is set the
    // heaviest arm gets the nominal density and the rest scale down.
    bool ratio_scaled = false;

    std::string priority_mode = "alphabetical"; // or "by-demand"

    uint64_t seed = 1;
    double horizon_s = 3600.0;
    double warmup_s = 300.0;
    double dt = 0.1;

    double vehicle_length = 4.0;
    double headway = 2.0;
    double max_accel = 2.0;
    double max_decel = 2.0;

    bool strict_crossing_gate = false;
    double stand_margin = 0.3; // stop-line stand-off, m

    double saturation_flow = 1500.0;
    double ats_min_factor = 0.5;
    double ats_max_factor = 2.0;
    double queue_detect_range = 100.0;
    double queue_speed_threshold = 1.0;

    double v2ic_min_crawl = 1.0;   // m/s
    double v2ic_slot_buffer = 0.5; // spacing added to each booked crossing, s

    int trace_every = 5; // steps between trace rows; <=0 disables

    void validate() const;
    std::vector<double> per_arm_density() const;
    PriorityOrder priority() const;
};

// Plain key=value file, one pair per line, '#' comments.
ScenarioConfig load_config_file(const std::string& path);
void apply_config_line(ScenarioConfig& cfg, const std::string& key, const std::string& value);

} // namespace dim
