#include "dim/topology.hpp"

#include <cmath>

namespace dim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

int arm_from_label(char label, int n_arms) {
    const int idx = label - 'a';
    if (idx < 0 || idx >= n_arms)
        throw InvalidGeometryError(std::string("unknown arm label '") + label + "'");
    return idx;
}

int exit_arm(const Maneuver& m, int n_arms) {
    require_valid(m, n_arms);
    return (m.entry + m.offset) % n_arms;
}

bool maneuver_valid(const Maneuver& m, int n_arms) {
    return n_arms >= 3 && m.entry >= 0 && m.entry < n_arms && m.offset >= 1 &&
           m.offset <= n_arms - 1;
}

void require_valid(const Maneuver& m, int n_arms) {
    if (!maneuver_valid(m, n_arms))
        throw InvalidManeuverError("illegal maneuver " + std::to_string(m.entry) + "+" +
                                   std::to_string(m.offset) + " at n=" + std::to_string(n_arms));
}

std::string maneuver_name(const Maneuver& m) {
    std::string s = "V";
    s += arm_label(m.entry);
    s += std::to_string(m.offset);
    return s;
}

Maneuver maneuver_from_name(const std::string& name, int n_arms) {
    if (name.size() < 3 || name[0] != 'V')
        throw InvalidManeuverError("bad maneuver name '" + name + "'");
    Maneuver m;
    m.entry = arm_from_label(name[1], n_arms);
    m.offset = std::stoi(name.substr(2));
    require_valid(m, n_arms);
    return m;
}

void IntersectionSpec::validate() const {
    if (n_arms < 3 || n_arms > 26)
        throw InvalidGeometryError("n_arms must be in [3, 26], got " + std::to_string(n_arms));
    if (red_len <= 0 || yellow_len <= 0 || green_len <= 0 || arm_length <= 0 ||
        conflict_box_radius <= 0)
        throw InvalidGeometryError("all intersection lengths must be positive");
    if (arm_length <= red_len + yellow_len + green_len)
        throw InvalidGeometryError("arm_length must exceed the marked zones");
    if (speed_limit <= 0 || red_zone_speed <= 0 || red_zone_speed >= speed_limit)
        throw InvalidGeometryError("require 0 < red_zone_speed < speed_limit");
}

const char* zone_name(ZoneTag z) {
    switch (z) {
    case ZoneTag::Approach: return "approach";
    case ZoneTag::Red: return "red";
    case ZoneTag::Yellow: return "yellow";
    case ZoneTag::Green: return "green";
    case ZoneTag::InsideIntersection: return "inside";
    case ZoneTag::Outbound: return "outbound";
    case ZoneTag::Exited: return "exited";
    }
    return "?";
}

ZoneTag zone_of(double position, const IntersectionSpec& spec, double box_path_len) {
    if (box_path_len < 0) box_path_len = 2.0 * spec.conflict_box_radius;
    if (position >= spec.red_start()) return ZoneTag::Approach;
    if (position >= spec.yellow_start()) return ZoneTag::Red;
    if (position >= spec.green_start()) return ZoneTag::Yellow;
    if (position >= 0.0) return ZoneTag::Green;
    if (position > -box_path_len) return ZoneTag::InsideIntersection;
    if (position > -(box_path_len + spec.arm_length)) return ZoneTag::Outbound;
    return ZoneTag::Exited;
}

double entry_point_angle(int arm, int n_arms) {
    const double sector = 360.0 / n_arms;
    const double delta = 90.0 / n_arms;
    return std::fmod(arm * sector + delta + 360.0, 360.0);
}

double exit_point_angle(int arm, int n_arms) {
    const double sector = 360.0 / n_arms;
    const double delta = 90.0 / n_arms;
    return std::fmod(arm * sector - delta + 360.0, 360.0);
}

double box_path_length(const Maneuver& m, const IntersectionSpec& spec) {
    require_valid(m, spec.n_arms);
    const double a0 = entry_point_angle(m.entry, spec.n_arms);
    const double a1 = exit_point_angle(exit_arm(m, spec.n_arms), spec.n_arms);
    double sep = std::fmod(a1 - a0 + 360.0, 360.0);
    return 2.0 * spec.conflict_box_radius * std::abs(std::sin(sep * kPi / 360.0));
}

} // namespace dim
