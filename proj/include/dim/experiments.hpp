#pragma once

#include <string>
#include <vector>

#include "dim/engine.hpp"

namespace dim {

// Aggregates over one finished run. Vehicles spawned during warmup are
// excluded; vehicles still in the network at the horizon are counted but do
// not enter the means.
struct Metrics {
    int counted = 0;
    double mean_travel_s = 0.0;
    double mean_wait_s = 0.0;
    std::vector<double> lane_mean_wait;
    std::vector<int> lane_count;
    double throughput_per_hr = 0.0;
    int excluded_in_network = 0;
    long spawned = 0;
    SafetyCounters safety;
    long v2ic_rerequests = 0;
};

Metrics compute_metrics(const RunResult& result);

// Deterministic for a given config + seed.
Metrics run_scenario(const ScenarioConfig& cfg);

struct SweepRow {
    ControllerKind controller = ControllerKind::DIM;
    int n_arms = 4;
    double density = 0.0;
    std::string ratio_label = "balanced";
    uint64_t seed = 0;
    bool failed = false;
    std::string error;
    Metrics metrics;
};

struct SweepSpec {
    ScenarioConfig base;
    std::vector<ControllerKind> controllers;
    std::vector<double> densities;
    std::vector<std::string> ratios = {"balanced"}; // "balanced" or colon-separated weights
    int seeds = 5;
};

// Cross-product of controllers x densities x ratios x seeds. Failures are
// recorded per row and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Delimited results table, one row per sweep cell. Stable format: repeated
// runs of the same sweep produce byte-identical text.
std::string results_table(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_results_table(const std::string& text);

// Human-readable comparison summary: per-cell mean +/- stddev across seeds,
// the V2IC/DIM ratio at the heaviest density, lane-wise waiting tables, and
// the deadlock-verifier reports.
std::string summary_report(const std::vector<SweepRow>& rows);

// Writes results.tsv, summary.txt, and deadlock.txt under out_dir.
void emit_report(const std::vector<SweepRow>& rows, const std::string& out_dir);

std::string metrics_text(const Metrics& m, const ScenarioConfig& cfg);

} // namespace dim
