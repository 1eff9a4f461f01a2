#include "dim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dim {

const char* controller_name(ControllerKind c) {
    switch (c) {
    case ControllerKind::DIM: return "DIM";
    case ControllerKind::FTS: return "FTS";
    case ControllerKind::ATS: return "ATS";
    case ControllerKind::V2IC: return "V2IC";
    }
    return "?";
}

ControllerKind controller_from_name(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(), ::toupper);
    if (up == "DIM") return ControllerKind::DIM;
    if (up == "FTS") return ControllerKind::FTS;
    if (up == "ATS") return ControllerKind::ATS;
    if (up == "V2IC") return ControllerKind::V2IC;
    throw ConfigError("unknown controller '" + name + "' (expected DIM/FTS/ATS/V2IC)");
}

void ScenarioConfig::validate() const {
    intersection.validate();
    if (density < 0) throw ConfigError("density must be non-negative");
    if (!ratio.empty()) {
        if (static_cast<int>(ratio.size()) != intersection.n_arms)
            throw ConfigError("ratio needs one weight per arm");
        for (double w : ratio)
            if (w <= 0) throw ConfigError("ratio weights must be positive");
    }
    if (priority_mode != "alphabetical" && priority_mode != "by-demand")
        throw ConfigError("priority must be 'alphabetical' or 'by-demand'");
    if (dt <= 0 || horizon_s <= 0) throw ConfigError("dt and horizon must be positive");
    if (warmup_s < 0 || warmup_s >= horizon_s) throw ConfigError("need 0 <= warmup < horizon");
    if (density * dt / 3600.0 >= 0.5)
        throw ConfigError("dt too coarse for this density (expected arrivals per step >= 0.5)");
    if (vehicle_length <= 0 || headway < 0 || max_accel <= 0 || max_decel <= 0)
        throw ConfigError("vehicle kinematics must be positive");
    if (stand_margin < 0 || stand_margin >= intersection.green_len)
        throw ConfigError("stand margin must be in [0, green_len)");
}

std::vector<double> ScenarioConfig::per_arm_density() const {
    const int n = intersection.n_arms;
    if (ratio.empty()) return std::vector<double>(static_cast<size_t>(n), density);

    std::vector<double> out(static_cast<size_t>(n));
    if (ratio_scaled) {
        const double top = *std::max_element(ratio.begin(), ratio.end());
        for (int a = 0; a < n; ++a) out[a] = density * ratio[a] / top;
    } else {
        double sum = 0.0;
        for (double w : ratio) sum += w;
        for (int a = 0; a < n; ++a) out[a] = density * n * ratio[a] / sum;
    }
    return out;
}

PriorityOrder ScenarioConfig::priority() const {
    if (priority_mode == "by-demand") {
        const std::vector<double> demand = per_arm_density();
        return PriorityOrder::by_demand(demand);
    }
    return PriorityOrder::alphabetical(intersection.n_arms);
}

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on") return true;
    if (value == "0" || value == "false" || value == "off") return false;
    throw ConfigError("bad boolean for " + key + ": '" + value + "'");
}

std::vector<double> parse_ratio(const std::string& value) {
    std::vector<double> weights;
    std::string token;
    std::istringstream in(value);
    while (std::getline(in, token, ':')) weights.push_back(to_double("ratio", token));
    return weights;
}

} // namespace

void apply_config_line(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "n_arms") cfg.intersection.n_arms = static_cast<int>(to_double(key, value));
    else if (key == "arm_length") cfg.intersection.arm_length = to_double(key, value);
    else if (key == "red_len") cfg.intersection.red_len = to_double(key, value);
    else if (key == "yellow_len") cfg.intersection.yellow_len = to_double(key, value);
    else if (key == "green_len") cfg.intersection.green_len = to_double(key, value);
    else if (key == "speed_limit") cfg.intersection.speed_limit = to_double(key, value);
    else if (key == "red_zone_speed") cfg.intersection.red_zone_speed = to_double(key, value);
    else if (key == "conflict_box_radius") cfg.intersection.conflict_box_radius = to_double(key, value);
    else if (key == "controller") cfg.controller = controller_from_name(value);
    else if (key == "density") cfg.density = to_double(key, value);
    else if (key == "ratio") cfg.ratio = value == "balanced" ? std::vector<double>{} : parse_ratio(value);
    else if (key == "ratio_scaled") cfg.ratio_scaled = to_bool(key, value);
    else if (key == "priority") cfg.priority_mode = value;
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(std::stoull(value));
    else if (key == "horizon") cfg.horizon_s = to_double(key, value);
    else if (key == "warmup") cfg.warmup_s = to_double(key, value);
    else if (key == "dt") cfg.dt = to_double(key, value);
    else if (key == "vehicle_length") cfg.vehicle_length = to_double(key, value);
    else if (key == "headway") cfg.headway = to_double(key, value);
    else if (key == "max_accel") cfg.max_accel = to_double(key, value);
    else if (key == "max_decel") cfg.max_decel = to_double(key, value);
    else if (key == "strict_crossing_gate") cfg.strict_crossing_gate = to_bool(key, value);
    else if (key == "stand_margin") cfg.stand_margin = to_double(key, value);
    else if (key == "saturation_flow") cfg.saturation_flow = to_double(key, value);
    else if (key == "ats_min_factor") cfg.ats_min_factor = to_double(key, value);
    else if (key == "ats_max_factor") cfg.ats_max_factor = to_double(key, value);
    else if (key == "queue_detect_range") cfg.queue_detect_range = to_double(key, value);
    else if (key == "queue_speed_threshold") cfg.queue_speed_threshold = to_double(key, value);
    else if (key == "v2ic_min_crawl") cfg.v2ic_min_crawl = to_double(key, value);
    else if (key == "v2ic_slot_buffer") cfg.v2ic_slot_buffer = to_double(key, value);
    else if (key == "trace_every") cfg.trace_every = static_cast<int>(to_double(key, value));
    else throw ConfigError("unknown config key '" + key + "'");
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);

    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        auto trim = [](std::string s) {
            const size_t b = s.find_first_not_of(" \t\r");
            const size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

} // namespace dim
