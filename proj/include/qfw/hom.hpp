#pragma once

#include "qfw/lattice.hpp"

#include <memory>
#include <vector>

namespace qfw {

using LatticePtr = std::shared_ptr<const FiniteLattice>;

inline LatticePtr share(FiniteLattice L) { return std::make_shared<const FiniteLattice>(std::move(L)); }

// Element map between finite lattices. Construct through verify_hom unless the
// map is known to be a hom by construction (then `trusted` is fine).
struct QframeHom {
    LatticePtr source, target;
    std::vector<Elem> map;

    Elem operator()(Elem x) const { return map[x]; }
    static QframeHom trusted(LatticePtr s, LatticePtr t, std::vector<Elem> m) { return {std::move(s), std::move(t), std::move(m)}; }
    static QframeHom identity(LatticePtr L);
};

// Throws ZeroNotPreserved, NotJoinPreserving(x,y) or NotSegmentPreserving(a,b,missing).
QframeHom verify_hom(LatticePtr source, LatticePtr target, std::vector<Elem> map);
inline QframeHom verify_hom(const QframeHom& f) { return verify_hom(f.source, f.target, f.map); }
// Same clauses on `samples` random pairs; for carriers too large for the cubic scan.
// With `boundary`, every [0,x] and [x,1] is checked as well.
void verify_hom_sampled(const QframeHom& f, std::size_t samples, std::uint64_t seed, bool boundary = true);

QframeHom compose(const QframeHom& g, const QframeHom& f);  // g after f

struct HomInfo {
    Elem kernel = 0;
    bool algebraic = false;
    bool injective = false;
    bool surjective = false;
    Elem image_top = 0;  // phi(1); the image is [0, phi(1)]
};
HomInfo kernel_and_algebraicity(const QframeHom& f);

// A hom with trivial kernel that still identifies two elements.
QframeHom non_algebraic_example();

// Partition of the carrier; cls[x] is the class index of x.
struct Congruence {
    std::vector<std::uint32_t> cls;
    std::size_t classes = 0;

    static Congruence from_classes(std::size_t n, const std::vector<std::vector<Elem>>& classes);
    static Congruence equality(std::size_t n);
    static Congruence full(std::size_t n);
    std::vector<std::vector<Elem>> class_lists() const;
    bool related(Elem a, Elem b) const { return cls[a] == cls[b]; }
};

// Throws NotCongruence (witness clause, a, b, c) or NotStrongCongruence(class).
void verify_congruence(const FiniteLattice& L, const Congruence& R, bool strong = true);
// Smallest congruence containing the seed pairs (fixpoint of clauses 2 and 3).
Congruence close_relation(const FiniteLattice& L, const std::vector<std::pair<Elem, Elem>>& seed);

struct Quotient {
    LatticePtr lattice;
    QframeHom projection;
    std::vector<Elem> class_max;  // representative maximum per class
};
Quotient quotient_by_congruence(const LatticePtr& L, const Congruence& R);

}  // namespace qfw
