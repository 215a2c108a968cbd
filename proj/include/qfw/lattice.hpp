#pragma once

#include "qfw/error.hpp"
#include "qfw/ordinal.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qfw {

using Elem = std::uint32_t;

// Explicit finite bounded lattice with precomputed join/meet tables.
class FiniteLattice {
public:
    // Validates a full order relation (rel[i][j] means i <= j).
    // Throws NotAPoset(i,j,k) or NotALattice(i,j).
    static FiniteLattice from_relation(const std::vector<std::vector<bool>>& rel, const Caps& caps = default_caps());
    // Reflexive-transitive closure of the given pairs, then validated.
    static FiniteLattice from_pairs(std::size_t n, const std::vector<std::pair<Elem, Elem>>& pairs,
                                    const Caps& caps = default_caps());
    // Rows are bitsets of up-sets: bit j of row i set iff i <= j.
    static FiniteLattice from_up_sets(std::size_t n, std::vector<std::uint64_t> up, const Caps& caps = default_caps());

    static FiniteLattice chain(std::size_t length);
    static FiniteLattice divisor(std::uint64_t n);
    static FiniteLattice boolean(std::size_t atoms);
    static FiniteLattice diamond();   // M3
    static FiniteLattice pentagon();  // N5

    std::size_t size() const noexcept { return n_; }
    Elem bottom() const noexcept { return bottom_; }
    Elem top() const noexcept { return top_; }
    bool leq(Elem a, Elem b) const noexcept { return (up_[a * words_ + b / 64] >> (b % 64)) & 1U; }
    bool lt(Elem a, Elem b) const noexcept { return a != b && leq(a, b); }
    Elem join(Elem a, Elem b) const noexcept { return join_[a * n_ + b]; }
    Elem meet(Elem a, Elem b) const noexcept { return meet_[a * n_ + b]; }
    Elem join_all(std::span<const Elem> xs) const noexcept;
    Elem meet_all(std::span<const Elem> xs) const noexcept;
    // Bit rows: bit j of up_row(i) set iff i <= j; bit j of down_row(i) set iff j <= i.
    std::span<const std::uint64_t> up_row(Elem x) const noexcept { return {up_.data() + x * words_, words_}; }
    std::span<const std::uint64_t> down_row(Elem x) const noexcept { return {down_.data() + x * words_, words_}; }
    std::size_t words() const noexcept { return words_; }
    const std::vector<Elem>& upper_covers(Elem x) const noexcept { return upper_covers_[x]; }
    const std::vector<Elem>& lower_covers(Elem x) const noexcept { return lower_covers_[x]; }
    // Longest chain length of [0, x]; for modular lattices this is l([0,x]).
    std::size_t height(Elem x) const noexcept { return height_[x]; }
    std::size_t length() const noexcept { return height_[top_]; }
    bool is_trivial() const noexcept { return n_ == 1; }
    bool is_atom() const noexcept { return n_ == 2; }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(Elem x) const noexcept { return labels_[x]; }
    void set_labels(std::vector<std::string> labels);
    // Optional positive sizes with |[a,b]| measured by values[b] / values[a]
    // (divisor values, subgroup orders); used by primary Serre classes.
    const std::vector<std::uint64_t>& values() const noexcept { return values_; }
    void set_values(std::vector<std::uint64_t> values) { values_ = std::move(values); }
    std::optional<Elem> find_label(const std::string& label) const;

    FiniteLattice dual() const;
    // Segment [a,b] with the embedding of its elements into this lattice.
    std::pair<FiniteLattice, std::vector<Elem>> segment(Elem a, Elem b) const;
    std::vector<Elem> elements_between(Elem a, Elem b) const;

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    Elem bottom_ = 0, top_ = 0;
    std::vector<std::uint64_t> up_, down_;
    std::vector<Elem> join_, meet_;
    std::vector<std::vector<Elem>> upper_covers_, lower_covers_;
    std::vector<std::size_t> height_;
    std::vector<std::string> labels_;
    std::vector<std::uint64_t> values_;
};

struct LatticeProps {
    bool modular = true;
    bool distributive = true;
    std::optional<std::array<Elem, 3>> modular_witness;       // a <= c, b with a v (b ^ c) != (a v b) ^ c
    std::optional<std::array<Elem, 3>> distributive_witness;
    std::vector<Elem> compact_elements;                       // all elements for finite carriers
};
LatticeProps lattice_props(const FiniteLattice& L);

struct FamilyProps {
    bool join_independent = true;
    bool basis = false;
    std::optional<std::size_t> witness;  // index i with (join of others) ^ x_i != 0
};
FamilyProps family_props(const FiniteLattice& L, std::span<const Elem> family);

FiniteLattice product(std::span<const FiniteLattice* const> factors, const Caps& caps = default_caps());
FiniteLattice product(const FiniteLattice& a, const FiniteLattice& b, const Caps& caps = default_caps());

inline std::size_t length(const FiniteLattice& L) { return L.length(); }
inline std::size_t length(const FiniteLattice& L, Elem a, Elem b) { return L.height(b) - L.height(a); }

// Refines a weakly increasing chain from 0 to 1 to a composition series.
std::vector<Elem> composition_refine(const FiniteLattice& L, std::span<const Elem> chain);

struct SchreierPair {
    std::vector<Elem> first, second;  // refinements with trivial steps removed
    bool equal_length = false;
    bool perspective = false;  // matched segments are perspective to a common middle segment
};
SchreierPair schreier_refine(const FiniteLattice& L, std::span<const Elem> c1, std::span<const Elem> c2);

struct SocleSeries {
    Elem socle = 0;
    std::vector<Elem> series;  // s_0 = 0, s_1 = s(L), ... until stable
    bool semi_artinian = false;
};
SocleSeries socle_series(const FiniteLattice& L);
// Socle of the segment [0, x].
Elem socle_of(const FiniteLattice& L, Elem x);

struct ChainConditions {
    bool noetherian = true;
    bool artinian = true;
};
inline ChainConditions chain_conditions(const FiniteLattice&) { return {true, true}; }

// Symbolic chain of ordinals beta <= alpha.
enum class Orientation { standard, reversed };

struct ChainLattice {
    Ordinal alpha;
    Orientation orientation = Orientation::standard;

    // Elements are ordinals; bottom/top depend on orientation.
    Ordinal bottom() const { return orientation == Orientation::standard ? Ordinal{} : alpha; }
    Ordinal top() const { return orientation == Orientation::standard ? alpha : Ordinal{}; }
    bool contains(const Ordinal& b) const { return b <= alpha; }
    bool leq(const Ordinal& a, const Ordinal& b) const { return orientation == Orientation::standard ? a <= b : b <= a; }
    bool is_trivial() const { return alpha.is_zero(); }
    friend bool operator==(const ChainLattice&, const ChainLattice&) = default;
};

std::optional<std::uint64_t> length(const ChainLattice& C);  // nullopt means infinite

struct ChainProps {
    bool modular = true;
    bool distributive = true;
    std::string compact_rule;  // description of the compact elements
};
ChainProps lattice_props(const ChainLattice& C);
bool is_compact(const ChainLattice& C, const Ordinal& x);

struct ChainSocle {
    Ordinal socle;
    std::vector<Ordinal> series;  // finite prefix of the series, ending where it stabilises or reaches the cap
    bool semi_artinian = false;
};
ChainSocle socle_series(const ChainLattice& C, std::size_t prefix_cap = 16);
ChainConditions chain_conditions(const ChainLattice& C);

}  // namespace qfw
