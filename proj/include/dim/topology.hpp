#pragma once

#include <string>

#include "dim/errors.hpp"

namespace dim {

// Arms are indexed clockwise from true north and labelled 'a', 'b', ...
// A lower index means a higher right-of-way priority.
inline char arm_label(int arm) { return static_cast<char>('a' + arm); }
int arm_from_label(char label, int n_arms);

// A vehicle's intended path through the intersection: entry arm plus the
// clockwise offset to the exit arm. For a 4-way junction under left-hand
// traffic, offset 1 is a left turn, 2 straight, 3 a right turn.
struct Maneuver {
    int entry = 0;
    int offset = 1;

    bool operator==(const Maneuver&) const = default;
};

// Exit arm index of maneuver m at an n-arm intersection.
int exit_arm(const Maneuver& m, int n_arms);

// Legal-maneuver check (no U-turns, arms in range).
bool maneuver_valid(const Maneuver& m, int n_arms);
void require_valid(const Maneuver& m, int n_arms);

// "Va1", "Vc2", ...
std::string maneuver_name(const Maneuver& m);
Maneuver maneuver_from_name(const std::string& name, int n_arms);

struct IntersectionSpec {
    int n_arms = 4;
    double arm_length = 500.0;        // m, spawn line to intersection entry line
    double red_len = 30.0;            // m
    double yellow_len = 6.0;          // m
    double green_len = 2.0;           // m
    double speed_limit = 40.0 / 3.6;  // m/s
    double red_zone_speed = 20.0 / 3.6; // m/s, cap through the marked zones
    double conflict_box_radius = 10.0;  // m, abstract disc around the junction

    double green_start() const { return green_len; }                    // yellow/green boundary
    double yellow_start() const { return green_len + yellow_len; }      // red/yellow boundary
    double red_start() const { return green_len + yellow_len + red_len; }

    void validate() const;
};

enum class ZoneTag {
    Approach,
    Red,
    Yellow,
    Green,
    InsideIntersection,
    Outbound,
    Exited,
};

const char* zone_name(ZoneTag z);

// Classifies a signed front-bumper position (distance remaining to the
// intersection entry line; negative = past it). box_path_len bounds the
// InsideIntersection region for negative positions; the default uses the
// conflict-box diameter. Total over all finite inputs.
ZoneTag zone_of(double position, const IntersectionSpec& spec, double box_path_len = -1.0);

// Chord geometry for maneuver paths across the conflict box. Entry and exit
// points sit on the box circle at the arm angle +/- delta, delta = 90deg/n.
// Angles are degrees clockwise from north, normalized to [0, 360).
double entry_point_angle(int arm, int n_arms);
double exit_point_angle(int arm, int n_arms);

// Straight-line length of the maneuver's chord through the conflict box.
double box_path_length(const Maneuver& m, const IntersectionSpec& spec);

} // namespace dim
