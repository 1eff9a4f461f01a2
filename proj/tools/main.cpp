#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dim/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config_file;
    std::vector<std::string> overrides; // key=value pairs from flags
};

dim::ScenarioConfig resolve_config(const CommonFlags& flags) {
    dim::ScenarioConfig cfg;
    if (!flags.config_file.empty()) cfg = dim::load_config_file(flags.config_file);
    for (const auto& kv : flags.overrides) {
        const size_t eq = kv.find('=');
        dim::apply_config_line(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

void add_scenario_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_file, "scenario config file (key=value lines)");
    auto push = [&flags](const std::string& key) {
        return [&flags, key](const std::string& v) { flags.overrides.push_back(key + "=" + v); };
    };
    cmd->add_option_function<std::string>("--seed", push("seed"), "rng seed");
    cmd->add_option_function<std::string>("--density", push("density"), "PCU/hr/lane");
    cmd->add_option_function<std::string>("--controller", push("controller"), "DIM|FTS|ATS|V2IC");
    cmd->add_option_function<std::string>("--ratio", push("ratio"),
                                          "per-arm demand weights, e.g. 4:3:2:1 or balanced");
    cmd->add_option_function<std::string>("--priority", push("priority"),
                                          "alphabetical | by-demand");
    cmd->add_option_function<std::string>("--dt", push("dt"), "step size, s");
    cmd->add_option_function<std::string>("--horizon", push("horizon"), "simulated duration, s");
    cmd->add_option_function<std::string>("--warmup", push("warmup"), "warmup excluded from metrics, s");
    cmd->add_option_function<std::string>("--n-arms", push("n_arms"), "number of arms (3..)");
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<std::string> split(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(tok);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimsim - decentralized intersection management simulator"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run a single scenario and print its metrics");
    CommonFlags run_flags;
    add_scenario_flags(run_cmd, run_flags);
    std::string trace_path;
    int trace_every = 0;
    std::string run_out;
    run_cmd->add_option("--trace", trace_path, "write a per-step vehicle trace (TSV)");
    run_cmd->add_option("--trace-every", trace_every, "steps between trace rows (default 5)");
    run_cmd->add_option("--out", run_out, "also append a one-row results table to this file");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a controller x density grid");
    CommonFlags sweep_flags;
    add_scenario_flags(sweep_cmd, sweep_flags);
    std::string densities_csv = "150,200,250,300,350";
    std::string controllers_csv = "DIM,FTS,ATS,V2IC";
    std::string ratios_csv = "balanced";
    int seeds = 5;
    std::string sweep_out = "results.tsv";
    sweep_cmd->add_option("--densities", densities_csv, "comma list of PCU/hr/lane");
    sweep_cmd->add_option("--controllers", controllers_csv, "comma list of controllers");
    sweep_cmd->add_option("--ratios", ratios_csv, "comma list of ratio labels");
    sweep_cmd->add_option("--seeds", seeds, "seeds per cell (default 5)");
    sweep_cmd->add_option("--out", sweep_out, "results table path (default results.tsv)");

    // verify-deadlock
    auto* verify_cmd = app.add_subcommand("verify-deadlock",
                                          "enumerate all intent states and check the decision rule");
    int verify_n = 4;
    verify_cmd->add_option("--n", verify_n, "number of arms (default 4)");

    // gen-harmony
    auto* gen_cmd = app.add_subcommand("gen-harmony", "write a harmony matrix file");
    int gen_n = 4;
    std::string gen_out;
    gen_cmd->add_option("--n", gen_n, "number of arms (default 4)");
    gen_cmd->add_option("--out", gen_out, "output path (stdout when omitted)");

    // report
    auto* report_cmd = app.add_subcommand("report", "summarize one or more results tables");
    std::vector<std::string> report_in = {"results.tsv"};
    std::string report_dir = "report";
    report_cmd->add_option("--in", report_in, "results table(s) from 'sweep'")
        ->expected(-1);
    report_cmd->add_option("--out-dir", report_dir, "directory for summary files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            dim::ScenarioConfig cfg = resolve_config(run_flags);
            if (trace_every > 0) cfg.trace_every = trace_every;

            dim::Engine engine(cfg);
            std::ofstream trace_file;
            if (!trace_path.empty()) {
                trace_file.open(trace_path);
                if (!trace_file) throw dim::IoError("cannot write " + trace_path);
                trace_file << "time\tid\tarm\tposition\tspeed\tzone\n";
                engine.set_trace_sink([&](const dim::TraceRow& row) {
                    trace_file << row.time << '\t' << row.id << '\t' << dim::arm_label(row.arm)
                               << '\t' << row.position << '\t' << row.speed << '\t'
                               << dim::zone_name(row.zone) << '\n';
                });
            }

            const dim::Metrics metrics = dim::compute_metrics(engine.run());
            std::cout << dim::metrics_text(metrics, cfg);

            if (!run_out.empty()) {
                dim::SweepRow row;
                row.controller = cfg.controller;
                row.n_arms = cfg.intersection.n_arms;
                row.density = cfg.density;
                row.ratio_label = cfg.ratio.empty() ? "balanced" : "custom";
                row.seed = cfg.seed;
                row.metrics = metrics;
                std::ofstream out(run_out);
                if (!out) throw dim::IoError("cannot write " + run_out);
                out << dim::results_table({row});
            }
        } else if (*sweep_cmd) {
            dim::SweepSpec spec;
            spec.base = resolve_config(sweep_flags);
            spec.densities = parse_list(densities_csv);
            for (const auto& name : split(controllers_csv))
                spec.controllers.push_back(dim::controller_from_name(name));
            spec.ratios = split(ratios_csv);
            spec.seeds = seeds;

            const auto rows = dim::run_sweep(spec);
            std::ofstream out(sweep_out);
            if (!out) throw dim::IoError("cannot write " + sweep_out);
            out << dim::results_table(rows);

            int failed = 0;
            for (const auto& r : rows)
                if (r.failed) ++failed;
            std::cout << rows.size() << " runs -> " << sweep_out;
            if (failed) std::cout << " (" << failed << " failed)";
            std::cout << '\n';
        } else if (*verify_cmd) {
            const dim::HarmonyMatrix H = dim::HarmonyMatrix::for_intersection(verify_n);
            const auto report =
                dim::verify_deadlock_free(verify_n, H, dim::PriorityOrder::alphabetical(verify_n));
            std::cout << report.to_text();
            return report.ok() ? 0 : 1;
        } else if (*gen_cmd) {
            const dim::HarmonyMatrix H = dim::HarmonyMatrix::for_intersection(gen_n);
            if (gen_out.empty())
                std::cout << H.to_text();
            else
                H.save_file(gen_out);
        } else if (*report_cmd) {
            std::vector<dim::SweepRow> rows;
            for (const auto& path : report_in) {
                std::ifstream in(path);
                if (!in) throw dim::IoError("cannot read " + path);
                std::stringstream buffer;
                buffer << in.rdbuf();
                auto parsed = dim::parse_results_table(buffer.str());
                rows.insert(rows.end(), parsed.begin(), parsed.end());
            }
            dim::emit_report(rows, report_dir);
            std::cout << "wrote " << report_dir << "/{results.tsv,summary.txt,deadlock.txt}\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
