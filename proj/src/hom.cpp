#include "qfw/hom.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace qfw {

namespace {

std::vector<std::int64_t> wit(std::initializer_list<std::uint64_t> xs) {
    std::vector<std::int64_t> w;
    for (auto x : xs) w.push_back(static_cast<std::int64_t>(x));
    return w;
}

void check_shape(const FiniteLattice& S, const FiniteLattice& T, const std::vector<Elem>& map) {
    if (map.size() != S.size()) throw Error("BadMap", "map size differs from source size");
    for (auto y : map)
        if (y >= T.size()) throw Error("BadMap", "map value outside target", wit({y}));
    if (map[S.bottom()] != T.bottom()) throw Error("ZeroNotPreserved", "phi(0) != 0", wit({map[S.bottom()]}));
}

void check_join(const FiniteLattice& S, const FiniteLattice& T, const std::vector<Elem>& map, Elem x, Elem y) {
    if (map[S.join(x, y)] != T.join(map[x], map[y])) throw Error("NotJoinPreserving", "phi(x v y) != phi(x) v phi(y)", wit({x, y}));
}

// Image of [a,b] must fill [phi(a), phi(b)]; `stamp` is scratch of target size.
void check_segment(const FiniteLattice& S, const FiniteLattice& T, const std::vector<Elem>& map, Elem a, Elem b,
                   std::vector<std::uint32_t>& stamp, std::uint32_t tag) {
    for (auto c : S.elements_between(a, b)) stamp[map[c]] = tag;
    for (auto t : T.elements_between(map[a], map[b]))
        if (stamp[t] != tag) throw Error("NotSegmentPreserving", "image of [a,b] misses an element", wit({a, b, t}));
}

}  // namespace

QframeHom QframeHom::identity(LatticePtr L) {
    std::vector<Elem> m(L->size());
    std::iota(m.begin(), m.end(), Elem{0});
    return {L, L, std::move(m)};
}

QframeHom verify_hom(LatticePtr source, LatticePtr target, std::vector<Elem> map) {
    const auto& S = *source;
    const auto& T = *target;
    check_shape(S, T, map);
    const auto n = static_cast<Elem>(S.size());
    for (Elem x = 0; x < n; ++x)
        for (Elem y = x + 1; y < n; ++y) check_join(S, T, map, x, y);
    std::vector<std::uint32_t> stamp(T.size(), 0);
    std::uint32_t tag = 0;
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b)
            if (S.leq(a, b)) check_segment(S, T, map, a, b, stamp, ++tag);
    return {std::move(source), std::move(target), std::move(map)};
}

void verify_hom_sampled(const QframeHom& f, std::size_t samples, std::uint64_t seed, bool boundary) {
    const auto& S = *f.source;
    const auto& T = *f.target;
    check_shape(S, T, f.map);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(S.size() - 1));
    std::vector<std::uint32_t> stamp(T.size(), 0);
    std::uint32_t tag = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Elem x = pick(rng), y = pick(rng);
        check_join(S, T, f.map, x, y);
        const Elem a = S.meet(x, y), b = S.join(x, y);
        check_segment(S, T, f.map, a, b, stamp, ++tag);
    }
    // the segments [0,x] and [x,1] exercise every element at least once
    for (Elem x = 0; boundary && x < S.size(); ++x) {
        check_segment(S, T, f.map, S.bottom(), x, stamp, ++tag);
        check_segment(S, T, f.map, x, S.top(), stamp, ++tag);
    }
}

QframeHom compose(const QframeHom& g, const QframeHom& f) {
    if (f.target->size() != g.source->size()) throw Error("ShapeMismatch", "composition of incompatible homs");
    std::vector<Elem> m(f.map.size());
    for (std::size_t x = 0; x < m.size(); ++x) m[x] = g.map[f.map[x]];
    return {f.source, g.target, std::move(m)};
}

HomInfo kernel_and_algebraicity(const QframeHom& f) {
    const auto& S = *f.source;
    const auto& T = *f.target;
    HomInfo info;
    info.kernel = S.bottom();
    for (Elem x = 0; x < S.size(); ++x)
        if (f.map[x] == T.bottom()) info.kernel = S.join(info.kernel, x);
    std::vector<std::uint8_t> seen(T.size(), 0);
    info.algebraic = true;
    for (auto x : S.elements_between(info.kernel, S.top())) {
        if (seen[f.map[x]]) info.algebraic = false;
        seen[f.map[x]] = 1;
    }
    std::fill(seen.begin(), seen.end(), 0);
    info.injective = true;
    for (Elem x = 0; x < S.size(); ++x) {
        if (seen[f.map[x]]) info.injective = false;
        seen[f.map[x]] = 1;
    }
    info.surjective = std::all_of(seen.begin(), seen.end(), [](auto s) { return s != 0; });
    info.image_top = f.map[S.top()];
    return info;
}

QframeHom non_algebraic_example() {
    // 0 < m < 1 onto 0 < 1 with m, 1 -> 1: kernel 0 yet m and 1 collide
    auto src = share(FiniteLattice::chain(2));
    auto dst = share(FiniteLattice::chain(1));
    return verify_hom(src, dst, {0, 1, 1});
}

Congruence Congruence::from_classes(std::size_t n, const std::vector<std::vector<Elem>>& classes) {
    Congruence R;
    R.cls.assign(n, static_cast<std::uint32_t>(-1));
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (auto x : classes[c]) {
            if (x >= n) throw Error("BadPartition", "class member outside the carrier", wit({x}));
            if (R.cls[x] != static_cast<std::uint32_t>(-1)) throw Error("NotCongruence", "classes overlap (clause 1)", wit({1, x}));
            R.cls[x] = static_cast<std::uint32_t>(c);
        }
    for (std::size_t x = 0; x < n; ++x)
        if (R.cls[x] == static_cast<std::uint32_t>(-1)) throw Error("NotCongruence", "element in no class (clause 1)", wit({1, x}));
    R.classes = classes.size();
    return R;
}

Congruence Congruence::equality(std::size_t n) {
    Congruence R;
    R.cls.resize(n);
    std::iota(R.cls.begin(), R.cls.end(), 0U);
    R.classes = n;
    return R;
}

Congruence Congruence::full(std::size_t n) {
    Congruence R;
    R.cls.assign(n, 0);
    R.classes = n ? 1 : 0;
    return R;
}

std::vector<std::vector<Elem>> Congruence::class_lists() const {
    std::vector<std::vector<Elem>> out(classes);
    for (std::size_t x = 0; x < cls.size(); ++x) out[cls[x]].push_back(static_cast<Elem>(x));
    return out;
}

void verify_congruence(const FiniteLattice& L, const Congruence& R, bool strong) {
    if (R.cls.size() != L.size()) throw Error("BadPartition", "partition size differs from carrier");
    const auto lists = R.class_lists();
    for (std::size_t k = 0; k < lists.size(); ++k)
        if (lists[k].empty()) throw Error("BadPartition", "empty class", wit({k}));
    const auto n = static_cast<Elem>(L.size());
    for (const auto& members : lists)
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                const auto a = members[i], b = members[j];
                for (Elem c = 0; c < n; ++c) {
                    if (!R.related(L.join(a, c), L.join(b, c))) throw Error("NotCongruence", "a~b but a v c !~ b v c", wit({2, a, b, c}));
                    if (!R.related(L.meet(a, c), L.meet(b, c))) throw Error("NotCongruence", "a~b but a ^ c !~ b ^ c", wit({3, a, b, c}));
                }
            }
    if (!strong) return;
    for (std::size_t k = 0; k < lists.size(); ++k) {
        const auto top = L.join_all(lists[k]);
        if (R.cls[top] != k) throw Error("NotStrongCongruence", "class without maximum", wit({k}));
    }
}

Congruence close_relation(const FiniteLattice& L, const std::vector<std::pair<Elem, Elem>>& seed) {
    const auto n = L.size();
    std::vector<Elem> parent(n);
    std::iota(parent.begin(), parent.end(), Elem{0});
    auto find = [&](Elem x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](Elem a, Elem b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    };
    for (auto [a, b] : seed) unite(a, b);
    for (bool changed = true; changed;) {
        changed = false;
        for (Elem a = 0; a < n; ++a) {
            const Elem r = find(a);
            if (r == a) continue;
            for (Elem c = 0; c < n; ++c) {
                changed |= unite(L.join(a, c), L.join(r, c));
                changed |= unite(L.meet(a, c), L.meet(r, c));
            }
        }
    }
    Congruence R;
    R.cls.assign(n, 0);
    std::vector<std::int64_t> id(n, -1);
    for (Elem x = 0; x < n; ++x) {
        const auto r = find(x);
        if (id[r] < 0) id[r] = static_cast<std::int64_t>(R.classes++);
        R.cls[x] = static_cast<std::uint32_t>(id[r]);
    }
    return R;
}

Quotient quotient_by_congruence(const LatticePtr& Lp, const Congruence& R) {
    const auto& L = *Lp;
    verify_congruence(L, R, true);
    const auto lists = R.class_lists();
    const auto k = lists.size();
    std::vector<Elem> maxima(k);
    for (std::size_t c = 0; c < k; ++c) maxima[c] = L.join_all(lists[c]);
    const auto W = (k + 63) / 64;
    std::vector<std::uint64_t> up(k * W, 0);
    // [a] <= [b] iff a <= max[b], equivalently max[a] <= max[b]
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            if (L.leq(maxima[a], maxima[b])) up[a * W + b / 64] |= std::uint64_t{1} << (b % 64);
    Caps caps;
    caps.table_elements = std::max(caps.table_elements, k);
    auto Q = FiniteLattice::from_up_sets(k, std::move(up), caps);
    std::vector<std::string> labels;
    for (auto m : maxima) labels.push_back("[" + L.label(m) + "]");
    Q.set_labels(std::move(labels));
    auto Qp = share(std::move(Q));
    std::vector<Elem> proj(L.size());
    for (std::size_t x = 0; x < L.size(); ++x) proj[x] = R.cls[x];
    return {Qp, QframeHom::trusted(Lp, Qp, std::move(proj)), std::move(maxima)};
}

}  // namespace qfw
