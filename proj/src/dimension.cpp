#include "qfw/dimension.hpp"

#include <limits>

namespace qfw {

std::string DimensionValue::to_string() const {
    switch (kind) {
        case Kind::minus_one: return "-1";
        case Kind::infinity: return "inf";
        default: return value.to_string();
    }
}

std::strong_ordering operator<=>(const DimensionValue& a, const DimensionValue& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) <=> static_cast<int>(b.kind);
    if (a.kind == DimensionValue::Kind::ordinal) return a.value <=> b.value;
    return std::strong_ordering::equal;
}

DimensionValue krull_dim(const FiniteLattice& L) {
    return L.is_trivial() ? DimensionValue::minus_one() : DimensionValue::of(0);
}

DimensionValue gabriel_dim(const FiniteLattice& L) { return DimensionValue::of(L.is_trivial() ? 0 : 1); }

// Reversed chains of type g are Noetherian with K.dim = deg(g); standard
// chains are Artinian.
DimensionValue krull_dim(const ChainLattice& C) {
    if (C.is_trivial()) return DimensionValue::minus_one();
    if (C.orientation == Orientation::standard) return DimensionValue::of(0);
    return DimensionValue::of(C.alpha.degree());
}

DimensionValue gabriel_dim(const ChainLattice& C) {
    if (C.is_trivial()) return DimensionValue::of(0);
    if (C.orientation == Orientation::standard) return DimensionValue::of(1);
    return DimensionValue::of(std::uint64_t{C.alpha.degree()} + 1);
}

bool is_alpha_simple(const FiniteLattice& L, const Ordinal& alpha) { return alpha.is_zero() && L.is_atom(); }

bool is_alpha_simple(const ChainLattice& C, const Ordinal& alpha) {
    if (C.orientation == Orientation::standard) return alpha.is_zero() && C.alpha == Ordinal::finite(1);
    if (!alpha.is_finite()) return false;
    return C.alpha == Ordinal::omega_pow(static_cast<std::uint32_t>(alpha.finite_value()));
}

SerreClass SerreClass::gdim_le(Ordinal alpha) {
    SerreClass C;
    C.kind = Kind::gdim_le;
    C.name = "gdim_le(" + alpha.to_string() + ")";
    const bool all = !alpha.is_zero();
    C.contains = [all](const FiniteLattice&, Elem a, Elem b) { return all || a == b; };
    C.alpha = std::move(alpha);
    return C;
}

namespace {

bool is_power_of(std::uint64_t q, std::uint64_t p) {
    if (q == 0) return false;
    while (q % p == 0) q /= p;
    return q == 1;
}

}  // namespace

SerreClass SerreClass::primary(std::uint64_t p) {
    if (p < 2) throw Error("BadArgument", "primary class needs p >= 2");
    SerreClass C;
    C.kind = Kind::primary;
    C.name = "primary(" + std::to_string(p) + ")";
    C.p = p;
    C.contains = [p](const FiniteLattice& L, Elem a, Elem b) {
        const auto& v = L.values();
        if (v.empty()) throw Error("MissingValues", "primary class needs lattice values");
        if (v[b] % v[a]) return false;
        return is_power_of(v[b] / v[a], p);
    };
    return C;
}

SerreClass SerreClass::custom(std::string name, std::function<bool(const FiniteLattice&, Elem, Elem)> pred) {
    SerreClass C;
    C.name = std::move(name);
    C.contains = std::move(pred);
    return C;
}

SerreReport serre_verify(const SerreClass& C, const FiniteLattice& L) {
    const auto n = static_cast<Elem>(L.size());
    for (Elem x = 0; x < n; ++x)
        for (Elem y = 0; y < n; ++y) {
            if (!L.leq(x, y)) continue;
            const bool xy = C.contains(L, x, y);
            for (Elem z = 0; z < n; ++z) {
                if (!L.leq(y, z)) continue;
                if ((xy && C.contains(L, y, z)) != C.contains(L, x, z))
                    throw Error("NotSerre", "two-out-of-three fails for x <= y <= z in class " + C.name, {x, y, z});
            }
        }
    const auto b = L.bottom();
    for (Elem x = 0; x < n; ++x) {
        if (!C.contains(L, b, x)) continue;
        for (Elem y = x + 1; y < n; ++y)
            if (C.contains(L, b, y) && !C.contains(L, b, L.join(x, y)))
                throw Error("NotJoinClosed", "[0,x], [0,y] in class but not [0, x v y]", {x, y});
    }
    return {true, true};
}

Elem torsion_of(const FiniteLattice& L, const SerreClass& C, Elem a) {
    Elem t = L.bottom();
    for (auto x : L.elements_between(L.bottom(), a))
        if (C.contains(L, L.bottom(), x)) t = L.join(t, x);
    return t;
}

Torsion torsion(const FiniteLattice& L, const SerreClass& C) {
    try {
        serre_verify(C, L);
    } catch (const Error& e) {
        throw Error("ClassNotVerified", e.what(), e.witness());
    }
    Torsion T;
    T.t = torsion_of(L, C, L.top());
    auto [seg, embed] = L.segment(L.bottom(), T.t);
    T.segment = std::move(seg);
    T.embed = std::move(embed);
    return T;
}

Localization localize(const LatticePtr& Lp, const SerreClass& C) {
    const auto& L = *Lp;
    try {
        serre_verify(C, L);
    } catch (const Error& e) {
        throw Error("ClassNotVerified", e.what(), e.witness());
    }
    const auto n = static_cast<Elem>(L.size());
    std::vector<std::vector<Elem>> classes;
    std::vector<std::int64_t> id(n, -1);
    for (Elem x = 0; x < n; ++x) {
        if (id[x] >= 0) continue;
        id[x] = static_cast<std::int64_t>(classes.size());
        classes.push_back({x});
        for (Elem y = x + 1; y < n; ++y)
            if (id[y] < 0 && C.contains(L, L.meet(x, y), L.join(x, y))) {
                id[y] = id[x];
                classes.back().push_back(y);
            }
    }
    auto R = Congruence::from_classes(n, classes);
    auto Q = quotient_by_congruence(Lp, R);
    return {std::move(R), std::move(Q)};
}

PipelineReport torsion_localize_pipeline(const LatticePtr& Lp, const Ordinal& alpha) {
    PipelineReport r;
    r.alpha = alpha;
    auto T = torsion(*Lp, SerreClass::gdim_le(alpha.successor()));
    r.torsion_size = T.segment.size();
    auto loc = localize(share(std::move(T.segment)), SerreClass::gdim_le(alpha));
    const auto& Q = *loc.quotient.lattice;
    r.quotient_size = Q.size();
    r.semi_artinian = gabriel_dim(Q) <= DimensionValue::of(1);
    r.socle_check = socle_series(Q).semi_artinian;
    return r;
}

namespace {

// Exponent bound: G.dim <= alpha admits exactly the types of degree < alpha.
std::uint32_t exponent_bound(const Ordinal& alpha) {
    if (!alpha.is_finite()) return std::numeric_limits<std::uint32_t>::max();
    const auto v = alpha.finite_value();
    return v >= std::numeric_limits<std::uint32_t>::max() ? std::numeric_limits<std::uint32_t>::max() : static_cast<std::uint32_t>(v);
}

}  // namespace

ChainTorsion chain_torsion(const ChainLattice& C, std::uint32_t alpha) {
    if (C.orientation == Orientation::standard) {
        // every nontrivial [0,x] has G.dim 1
        if (alpha == 0) return {Ordinal{}, {Ordinal{}, Orientation::standard}};
        return {C.alpha, C};
    }
    // [0,x] is the ordinal interval [x, g]; its type has degree < alpha iff x >= g's part above w^alpha
    const auto t = C.alpha.truncate_below(alpha);
    return {t, {t.left_subtract_from(C.alpha), Orientation::reversed}};
}

Ordinal chain_class(const ChainLattice& C, const Ordinal& x, std::uint32_t alpha) {
    if (!C.contains(x)) throw Error("BadElement", "ordinal outside the chain");
    if (C.orientation == Orientation::standard) return alpha == 0 ? x : Ordinal{};
    return x.truncate_below(alpha);
}

ChainLattice chain_quotient(const ChainLattice& C, std::uint32_t alpha) {
    if (C.orientation == Orientation::standard) return alpha == 0 ? C : ChainLattice{Ordinal{}, Orientation::standard};
    return {C.alpha.shift_down(alpha), Orientation::reversed};
}

PipelineReport torsion_localize_pipeline(const ChainLattice& C, const Ordinal& alpha) {
    PipelineReport r;
    r.alpha = alpha;
    const auto a = exponent_bound(alpha);
    const auto a1 = a == std::numeric_limits<std::uint32_t>::max() ? a : a + 1;
    const auto T = chain_torsion(C, a1);
    const auto Q = chain_quotient(T.segment, a);
    r.torsion_type = T.segment.alpha.to_string();
    r.quotient_type = Q.alpha.to_string();
    r.semi_artinian = gabriel_dim(Q) <= DimensionValue::of(1);
    r.socle_check = socle_series(Q).semi_artinian;
    return r;
}

}  // namespace qfw
