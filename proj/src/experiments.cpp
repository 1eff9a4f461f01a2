#include "dim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace dim {

namespace {

std::string fmt(double v, int digits = 4) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

std::vector<double> ratio_from_label(const std::string& label) {
    if (label == "balanced") return {};
    std::vector<double> weights;
    std::istringstream in(label);
    std::string token;
    while (std::getline(in, token, ':')) weights.push_back(std::stod(token));
    return weights;
}

} // namespace

Metrics compute_metrics(const RunResult& result) {
    Metrics m;
    m.lane_mean_wait.assign(static_cast<size_t>(result.n_arms), 0.0);
    m.lane_count.assign(static_cast<size_t>(result.n_arms), 0);
    m.spawned = result.spawned;
    m.safety = result.safety;
    m.v2ic_rerequests = result.v2ic_rerequests;
    m.excluded_in_network = result.active_at_end + result.queued_at_end;

    double travel_sum = 0.0, wait_sum = 0.0;
    std::vector<double> lane_wait(static_cast<size_t>(result.n_arms), 0.0);
    for (const auto& v : result.completed) {
        if (v.spawn_time < result.warmup_s) continue;
        ++m.counted;
        travel_sum += v.exit_time - v.spawn_time;
        wait_sum += v.wait;
        lane_wait[v.arm] += v.wait;
        ++m.lane_count[v.arm];
    }
    if (m.counted > 0) {
        m.mean_travel_s = travel_sum / m.counted;
        m.mean_wait_s = wait_sum / m.counted;
    }
    for (int a = 0; a < result.n_arms; ++a)
        if (m.lane_count[a] > 0) m.lane_mean_wait[a] = lane_wait[a] / m.lane_count[a];
    const double window = result.horizon_s - result.warmup_s;
    if (window > 0) m.throughput_per_hr = m.counted * 3600.0 / window;
    return m;
}

Metrics run_scenario(const ScenarioConfig& cfg) {
    Engine engine(cfg);
    return compute_metrics(engine.run());
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    std::vector<SweepRow> rows;
    for (ControllerKind controller : spec.controllers) {
        for (const std::string& ratio : spec.ratios) {
            for (double density : spec.densities) {
                for (int k = 0; k < spec.seeds; ++k) {
                    SweepRow row;
                    row.controller = controller;
                    row.n_arms = spec.base.intersection.n_arms;
                    row.density = density;
                    row.ratio_label = ratio;
                    row.seed = spec.base.seed + static_cast<uint64_t>(k);
                    try {
                        ScenarioConfig cfg = spec.base;
                        cfg.controller = controller;
                        cfg.density = density;
                        cfg.ratio = ratio_from_label(ratio);
                        cfg.seed = row.seed;
                        row.metrics = run_scenario(cfg);
                    } catch (const std::exception& e) {
                        row.failed = true;
                        row.error = e.what();
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

std::string results_table(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "controller\tn_arms\tdensity\tratio\tseed\tstatus\tcounted\tmean_wait_s\t"
           "mean_travel_s\tthroughput_vph\tin_network\tspawned\tnegative_gaps\t"
           "box_conflicts\tyellow_overflows\tconservation_breaks\tv2ic_rerequests";
    for (int a = 0; a < 5; ++a) out << "\twait_" << arm_label(a);
    out << '\n';
    for (const auto& r : rows) {
        out << controller_name(r.controller) << '\t' << r.n_arms << '\t' << fmt(r.density, 1)
            << '\t' << r.ratio_label << '\t' << r.seed << '\t' << (r.failed ? "error" : "ok");
        if (r.failed) {
            out << "\t0\t-\t-\t-\t0\t0\t0\t0\t0\t0\t0";
            for (int a = 0; a < 5; ++a) out << "\t-";
        } else {
            const Metrics& m = r.metrics;
            out << '\t' << m.counted << '\t' << fmt(m.mean_wait_s) << '\t'
                << fmt(m.mean_travel_s) << '\t' << fmt(m.throughput_per_hr, 1) << '\t'
                << m.excluded_in_network << '\t' << m.spawned << '\t'
                << m.safety.negative_gaps << '\t' << m.safety.box_conflicts << '\t'
                << m.safety.yellow_overflows << '\t' << m.safety.conservation_breaks << '\t'
                << m.v2ic_rerequests;
            for (int a = 0; a < 5; ++a) {
                if (a < r.n_arms && m.lane_count[a] > 0)
                    out << '\t' << fmt(m.lane_mean_wait[a]);
                else
                    out << "\t-";
            }
        }
        out << '\n';
    }
    return out.str();
}

std::vector<SweepRow> parse_results_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty results table");

    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, '\t')) f.push_back(tok);
        if (f.size() < 22) throw IoError("short results row: " + line);

        SweepRow r;
        r.controller = controller_from_name(f[0]);
        r.n_arms = std::stoi(f[1]);
        r.density = std::stod(f[2]);
        r.ratio_label = f[3];
        r.seed = std::stoull(f[4]);
        r.failed = f[5] != "ok";
        if (!r.failed) {
            Metrics& m = r.metrics;
            m.counted = std::stoi(f[6]);
            m.mean_wait_s = std::stod(f[7]);
            m.mean_travel_s = std::stod(f[8]);
            m.throughput_per_hr = std::stod(f[9]);
            m.excluded_in_network = std::stoi(f[10]);
            m.spawned = std::stol(f[11]);
            m.safety.negative_gaps = std::stol(f[12]);
            m.safety.box_conflicts = std::stol(f[13]);
            m.safety.yellow_overflows = std::stol(f[14]);
            m.safety.conservation_breaks = std::stol(f[15]);
            m.v2ic_rerequests = std::stol(f[16]);
            m.lane_mean_wait.assign(static_cast<size_t>(r.n_arms), 0.0);
            m.lane_count.assign(static_cast<size_t>(r.n_arms), 0);
            for (int a = 0; a < r.n_arms && a < 5; ++a) {
                if (f[17 + a] != "-") {
                    m.lane_mean_wait[a] = std::stod(f[17 + a]);
                    m.lane_count[a] = 1; // presence marker after round-trip
                }
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

struct CellStats {
    int n = 0;
    double wait_sum = 0, wait_sq = 0;
    double travel_sum = 0, travel_sq = 0;

    void add(const Metrics& m) {
        ++n;
        wait_sum += m.mean_wait_s;
        wait_sq += m.mean_wait_s * m.mean_wait_s;
        travel_sum += m.mean_travel_s;
        travel_sq += m.mean_travel_s * m.mean_travel_s;
    }
    double wait_mean() const { return n ? wait_sum / n : 0; }
    double travel_mean() const { return n ? travel_sum / n : 0; }
    double wait_std() const {
        if (n < 2) return 0;
        const double m = wait_mean();
        return std::sqrt(std::max(0.0, wait_sq / n - m * m));
    }
    double travel_std() const {
        if (n < 2) return 0;
        const double m = travel_mean();
        return std::sqrt(std::max(0.0, travel_sq / n - m * m));
    }
};

const char* controller_note(ControllerKind c) {
    return (c == ControllerKind::ATS || c == ControllerKind::V2IC)
               ? " (simplified reimplementation)"
               : "";
}

} // namespace

std::string summary_report(const std::vector<SweepRow>& rows) {
    // key: ratio -> n_arms -> controller -> density -> stats
    std::map<std::string, std::map<int, std::map<ControllerKind, std::map<double, CellStats>>>> cells;
    for (const auto& r : rows) {
        if (r.failed) continue;
        cells[r.ratio_label][r.n_arms][r.controller][r.density].add(r.metrics);
    }

    std::ostringstream out;
    out << "Comparative study summary\n";
    out << "=========================\n";
    int failures = 0;
    for (const auto& r : rows)
        if (r.failed) ++failures;
    if (failures) out << "note: " << failures << " run(s) failed; see results table\n";

    for (const auto& [ratio, by_arms] : cells) {
        for (const auto& [n_arms, by_controller] : by_arms) {
            out << "\n--- " << n_arms << "-way, traffic ratio " << ratio << " ---\n";
            for (const auto& [controller, by_density] : by_controller) {
                out << controller_name(controller) << controller_note(controller) << ":\n";
                for (const auto& [density, stats] : by_density) {
                    out << "  density " << fmt(density, 0) << ": waiting " << fmt(stats.wait_mean())
                        << " +/- " << fmt(stats.wait_std()) << " s, travel "
                        << fmt(stats.travel_mean()) << " +/- " << fmt(stats.travel_std())
                        << " s (" << stats.n << " seed" << (stats.n == 1 ? "" : "s") << ")\n";
                }
            }

            // Headline ratio at the heaviest shared density.
            auto dim_it = by_controller.find(ControllerKind::DIM);
            auto v2ic_it = by_controller.find(ControllerKind::V2IC);
            if (dim_it != by_controller.end() && v2ic_it != by_controller.end() &&
                !dim_it->second.empty()) {
                const double top = dim_it->second.rbegin()->first;
                auto v = v2ic_it->second.find(top);
                if (v != v2ic_it->second.end()) {
                    const double dim_w = dim_it->second.rbegin()->second.wait_mean();
                    const double v2_w = v->second.wait_mean();
                    out << "at density " << fmt(top, 0) << ": V2IC waiting is "
                        << (v2_w > 1e-9 ? fmt(dim_w / v2_w, 1) + "x lower than DIM"
                                        : std::string("effectively zero vs DIM ") + fmt(dim_w))
                        << "\n";
                }
            }
        }
    }

    // Lane-wise waiting, heaviest density, DIM rows only.
    bool lane_header = false;
    for (const auto& [ratio, by_arms] : cells) {
        for (const auto& [n_arms, by_controller] : by_arms) {
            auto dim_it = by_controller.find(ControllerKind::DIM);
            if (dim_it == by_controller.end() || dim_it->second.empty()) continue;
            const double top = dim_it->second.rbegin()->first;

            std::vector<double> lane_sum(static_cast<size_t>(n_arms), 0.0);
            std::vector<int> lane_n(static_cast<size_t>(n_arms), 0);
            for (const auto& r : rows) {
                if (r.failed || r.controller != ControllerKind::DIM || r.n_arms != n_arms ||
                    r.ratio_label != ratio || r.density != top)
                    continue;
                for (int a = 0; a < n_arms; ++a) {
                    if (r.metrics.lane_count[a] > 0) {
                        lane_sum[a] += r.metrics.lane_mean_wait[a];
                        ++lane_n[a];
                    }
                }
            }
            if (!lane_header) {
                out << "\nLane-wise mean waiting (s), DIM, heaviest density per cell\n";
                lane_header = true;
            }
            out << n_arms << "-way, ratio " << ratio << ", density " << fmt(top, 0) << ":";
            for (int a = 0; a < n_arms; ++a)
                out << "  " << arm_label(a) << "="
                    << (lane_n[a] ? fmt(lane_sum[a] / lane_n[a]) : std::string("-"));
            out << '\n';
        }
    }
    return out.str();
}

void emit_report(const std::vector<SweepRow>& rows, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    {
        std::ofstream out(out_dir + "/results.tsv");
        if (!out) throw IoError("cannot write results.tsv");
        out << results_table(rows);
    }
    {
        std::ofstream out(out_dir + "/summary.txt");
        if (!out) throw IoError("cannot write summary.txt");
        out << summary_report(rows);
    }
    {
        std::ofstream out(out_dir + "/deadlock.txt");
        if (!out) throw IoError("cannot write deadlock.txt");
        for (int n : {3, 4, 5}) {
            const HarmonyMatrix H = HarmonyMatrix::for_intersection(n);
            out << verify_deadlock_free(n, H, PriorityOrder::alphabetical(n)).to_text();
        }
    }
}

std::string metrics_text(const Metrics& m, const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "controller:      " << controller_name(cfg.controller)
        << controller_note(cfg.controller) << '\n';
    out << "intersection:    " << cfg.intersection.n_arms << "-way\n";
    out << "density:         " << fmt(cfg.density, 1) << " PCU/hr/lane\n";
    out << "seed:            " << cfg.seed << '\n';
    out << "vehicles:        " << m.counted << " counted, " << m.excluded_in_network
        << " still in network, " << m.spawned << " spawned\n";
    out << "mean waiting:    " << fmt(m.mean_wait_s) << " s\n";
    out << "mean travel:     " << fmt(m.mean_travel_s) << " s\n";
    out << "throughput:      " << fmt(m.throughput_per_hr, 1) << " veh/hr\n";
    out << "lane waiting:   ";
    for (int a = 0; a < cfg.intersection.n_arms; ++a)
        out << ' ' << arm_label(a) << '=' << fmt(m.lane_mean_wait[a]);
    out << '\n';
    out << "safety:          negative_gaps=" << m.safety.negative_gaps
        << " box_conflicts=" << m.safety.box_conflicts
        << " yellow_overflows=" << m.safety.yellow_overflows
        << " conservation_breaks=" << m.safety.conservation_breaks << '\n';
    if (cfg.controller == ControllerKind::V2IC)
        out << "v2ic rerequests: " << m.v2ic_rerequests << '\n';
    return out.str();
}

} // namespace dim
