#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dim/topology.hpp"

namespace dim {

// Binary compatibility table over every maneuver of an n-arm intersection.
// Rows and columns run arm a offsets 1..n-1, arm b offsets 1..n-1, and so
// on; entry 1 means the two maneuvers can cross the junction simultaneously,
// 0 means they conflict. Immutable once built.
class HarmonyMatrix {
public:
    // Geometric construction: each maneuver is a chord across the conflict
    // box; two maneuvers conflict when they share an entry arm, share an
    // exit arm, or their chords cross.
    static HarmonyMatrix generate(int n_arms);

    // The canonical hard-coded 4-way table.
    static HarmonyMatrix canonical_4way();

    // Canonical table for n=4, generated otherwise.
    static HarmonyMatrix for_intersection(int n_arms);

    int n_arms() const { return n_; }
    int size() const { return n_ * (n_ - 1); }

    // Row/column index of a maneuver: entry*(n-1) + offset-1.
    int index_of(const Maneuver& m) const;
    Maneuver maneuver_at(int index) const;

    uint8_t at(int row, int col) const { return cells_[row * size() + col]; }
    bool harmonious(const Maneuver& a, const Maneuver& b) const;

    bool operator==(const HarmonyMatrix&) const = default;

    // Plain-text grid: "n=<int>", a header line of maneuver names, then one
    // labelled 0/1 row per maneuver. Canonical output round-trips bit-exact.
    std::string to_text() const;
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static HarmonyMatrix parse(const std::string& text);
    static HarmonyMatrix load(std::istream& in);
    static HarmonyMatrix load_file(const std::string& path);

private:
    HarmonyMatrix(int n, std::vector<uint8_t> cells) : n_(n), cells_(std::move(cells)) {}

    int n_ = 0;
    std::vector<uint8_t> cells_;
};

// Spec-facing query helper; commutative in its maneuver arguments.
bool harmony(const Maneuver& a, const Maneuver& b, const HarmonyMatrix& H);

} // namespace dim
