#include "dim/harmony.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dim {

namespace {

// True when x lies on the clockwise arc from a to b (exclusive endpoints).
bool on_arc(double x, double a, double b) {
    const double span = std::fmod(b - a + 360.0, 360.0);
    const double off = std::fmod(x - a + 360.0, 360.0);
    return off > 1e-9 && off < span - 1e-9;
}

// Chords (a0,a1) and (b0,b1) on a circle cross iff their endpoints
// interleave: exactly one endpoint of b lies on the arc a0->a1.
bool chords_cross(double a0, double a1, double b0, double b1) {
    return on_arc(b0, a0, a1) != on_arc(b1, a0, a1);
}

// Table 1 of the 4-way junction, rows Va1..Vd3.
constexpr std::array<std::array<uint8_t, 12>, 12> kCanonical4Way = {{
    {0, 0, 0, 1, 1, 1, 1, 1, 0, 1, 0, 1}, // Va1
    {0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 0}, // Va2
    {0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0}, // Va3
    {1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0}, // Vb1
    {1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0}, // Vb2
    {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}, // Vb3
    {1, 1, 0, 1, 0, 1, 0, 0, 0, 1, 1, 1}, // Vc1
    {1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}, // Vc2
    {0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0}, // Vc3
    {1, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 0}, // Vd1
    {0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0}, // Vd2
    {1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0}, // Vd3
}};

} // namespace

HarmonyMatrix HarmonyMatrix::generate(int n_arms) {
    if (n_arms < 3)
        throw InvalidGeometryError("harmony matrix needs n >= 3, got " + std::to_string(n_arms));
    IntersectionSpec spec;
    spec.n_arms = n_arms;

    const int dim = n_arms * (n_arms - 1);
    std::vector<uint8_t> cells(static_cast<size_t>(dim) * dim, 0);

    auto maneuver = [&](int idx) {
        return Maneuver{idx / (n_arms - 1), idx % (n_arms - 1) + 1};
    };

    for (int r = 0; r < dim; ++r) {
        const Maneuver mr = maneuver(r);
        const double r0 = entry_point_angle(mr.entry, n_arms);
        const double r1 = exit_point_angle(exit_arm(mr, n_arms), n_arms);
        for (int c = 0; c < dim; ++c) {
            const Maneuver mc = maneuver(c);
            if (mr.entry == mc.entry) continue;
            if (exit_arm(mr, n_arms) == exit_arm(mc, n_arms)) continue;
            const double c0 = entry_point_angle(mc.entry, n_arms);
            const double c1 = exit_point_angle(exit_arm(mc, n_arms), n_arms);
            if (chords_cross(r0, r1, c0, c1)) continue;
            cells[static_cast<size_t>(r) * dim + c] = 1;
        }
    }
    return HarmonyMatrix(n_arms, std::move(cells));
}

HarmonyMatrix HarmonyMatrix::canonical_4way() {
    std::vector<uint8_t> cells(144);
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c)
            cells[r * 12 + c] = kCanonical4Way[r][c];
    return HarmonyMatrix(4, std::move(cells));
}

HarmonyMatrix HarmonyMatrix::for_intersection(int n_arms) {
    return n_arms == 4 ? canonical_4way() : generate(n_arms);
}

int HarmonyMatrix::index_of(const Maneuver& m) const {
    require_valid(m, n_);
    return m.entry * (n_ - 1) + (m.offset - 1);
}

Maneuver HarmonyMatrix::maneuver_at(int index) const {
    if (index < 0 || index >= size())
        throw InvalidManeuverError("maneuver index out of range: " + std::to_string(index));
    return Maneuver{index / (n_ - 1), index % (n_ - 1) + 1};
}

bool HarmonyMatrix::harmonious(const Maneuver& a, const Maneuver& b) const {
    return at(index_of(a), index_of(b)) == 1;
}

bool harmony(const Maneuver& a, const Maneuver& b, const HarmonyMatrix& H) {
    return H.harmonious(a, b);
}

std::string HarmonyMatrix::to_text() const {
    std::ostringstream out;
    out << "n=" << n_ << '\n';
    for (int c = 0; c < size(); ++c)
        out << (c ? " " : "") << maneuver_name(maneuver_at(c));
    out << '\n';
    for (int r = 0; r < size(); ++r) {
        out << maneuver_name(maneuver_at(r));
        for (int c = 0; c < size(); ++c) out << ' ' << int(at(r, c));
        out << '\n';
    }
    return out.str();
}

void HarmonyMatrix::save(std::ostream& out) const { out << to_text(); }

void HarmonyMatrix::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    save(out);
}

HarmonyMatrix HarmonyMatrix::load(std::istream& in) {
    std::string first;
    if (!std::getline(in, first) || first.rfind("n=", 0) != 0)
        throw IoError("harmony file must start with n=<int>");
    const int n = std::stoi(first.substr(2));
    if (n < 3) throw IoError("harmony file has n < 3");
    const int dim = n * (n - 1);

    std::string header;
    if (!std::getline(in, header)) throw IoError("harmony file truncated (header)");
    {
        std::istringstream hs(header);
        std::string tok;
        for (int c = 0; c < dim; ++c) {
            if (!(hs >> tok) || tok != maneuver_name(Maneuver{c / (n - 1), c % (n - 1) + 1}))
                throw IoError("harmony header mismatch at column " + std::to_string(c));
        }
    }

    std::vector<uint8_t> cells(static_cast<size_t>(dim) * dim);
    for (int r = 0; r < dim; ++r) {
        std::string line;
        if (!std::getline(in, line)) throw IoError("harmony file truncated (row " + std::to_string(r) + ")");
        std::istringstream ls(line);
        std::string label;
        ls >> label;
        if (label != maneuver_name(Maneuver{r / (n - 1), r % (n - 1) + 1}))
            throw IoError("harmony row label mismatch: " + label);
        for (int c = 0; c < dim; ++c) {
            int v;
            if (!(ls >> v) || (v != 0 && v != 1))
                throw IoError("harmony cell must be 0/1 at row " + std::to_string(r));
            cells[static_cast<size_t>(r) * dim + c] = static_cast<uint8_t>(v);
        }
    }
    return HarmonyMatrix(n, std::move(cells));
}

HarmonyMatrix HarmonyMatrix::parse(const std::string& text) {
    std::istringstream in(text);
    return load(in);
}

HarmonyMatrix HarmonyMatrix::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    return load(in);
}

} // namespace dim
