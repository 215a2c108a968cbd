#pragma once

#include "qfw/hom.hpp"

#include <compare>
#include <functional>
#include <string>

namespace qfw {

struct DimensionValue {
    enum class Kind { minus_one, ordinal, infinity };
    Kind kind = Kind::minus_one;
    Ordinal value;

    static DimensionValue minus_one() { return {}; }
    static DimensionValue of(Ordinal o) { return {Kind::ordinal, std::move(o)}; }
    static DimensionValue of(std::uint64_t n) { return of(Ordinal::finite(n)); }
    static DimensionValue infinity() { return {Kind::infinity, {}}; }

    std::string to_string() const;
    friend std::strong_ordering operator<=>(const DimensionValue& a, const DimensionValue& b);
    friend bool operator==(const DimensionValue& a, const DimensionValue& b) { return (a <=> b) == 0; }
};

DimensionValue krull_dim(const FiniteLattice& L);
DimensionValue krull_dim(const ChainLattice& C);
DimensionValue gabriel_dim(const FiniteLattice& L);
DimensionValue gabriel_dim(const ChainLattice& C);
bool is_alpha_simple(const FiniteLattice& L, const Ordinal& alpha);
bool is_alpha_simple(const ChainLattice& C, const Ordinal& alpha);

// Class of segments [a,b] of a finite lattice.
struct SerreClass {
    enum class Kind { gdim_le, primary, custom };
    Kind kind = Kind::custom;
    std::string name;
    std::function<bool(const FiniteLattice&, Elem, Elem)> contains;
    Ordinal alpha;       // gdim_le
    std::uint64_t p = 0; // primary

    static SerreClass gdim_le(Ordinal alpha);
    // [a,b] belongs iff values[b] / values[a] is a power of p; needs lattice values.
    static SerreClass primary(std::uint64_t p);
    static SerreClass custom(std::string name, std::function<bool(const FiniteLattice&, Elem, Elem)> pred);
    // The paper only localizes at G.dim classes; everything else is an extension.
    bool is_extension() const { return kind != Kind::gdim_le; }
};

struct SerreReport {
    bool serre_verified = false;
    bool join_closed_verified = false;
};
// Throws NotSerre(x,y,z) or NotJoinClosed(x,y).
SerreReport serre_verify(const SerreClass& C, const FiniteLattice& L);

struct Torsion {
    Elem t = 0;  // t_C(1)
    FiniteLattice segment;
    std::vector<Elem> embed;
};
// Runs serre_verify first; a failing class surfaces as ClassNotVerified.
Torsion torsion(const FiniteLattice& L, const SerreClass& C);
// t_C(a): join of the x <= a with [0,x] in C.
Elem torsion_of(const FiniteLattice& L, const SerreClass& C, Elem a);

struct Localization {
    Congruence congruence;
    Quotient quotient;
};
Localization localize(const LatticePtr& L, const SerreClass& C);

struct PipelineReport {
    Ordinal alpha;
    std::size_t torsion_size = 0;    // |T_{alpha+1}(L)| for finite carriers
    std::size_t quotient_size = 0;   // |Q_alpha(T_{alpha+1}(L))|
    bool semi_artinian = false;
    bool socle_check = false;        // socle series of the quotient reaches 1
    std::string torsion_type;        // chains: order type of T_{alpha+1}
    std::string quotient_type;       // chains: order type of the quotient chain
};
PipelineReport torsion_localize_pipeline(const LatticePtr& L, const Ordinal& alpha);
PipelineReport torsion_localize_pipeline(const ChainLattice& C, const Ordinal& alpha);

// Chains, G.dim <= alpha class; alpha must be finite (larger alpha admit every segment).
struct ChainTorsion {
    Ordinal t;          // element t_alpha(1) of the chain
    ChainLattice segment;  // [0, t] as a chain of the same orientation
};
ChainTorsion chain_torsion(const ChainLattice& C, std::uint32_t alpha);
// Q_alpha of a chain: the quotient by R_alpha, again a chain.
ChainLattice chain_quotient(const ChainLattice& C, std::uint32_t alpha);
// Class index of an element under R_alpha (elements of one class share it).
Ordinal chain_class(const ChainLattice& C, const Ordinal& x, std::uint32_t alpha);

}  // namespace qfw
