#include "qfw/lattice.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace qfw {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void set_bit(std::vector<std::uint64_t>& bits, std::size_t row, std::size_t words, std::size_t j) {
    bits[row * words + j / 64] |= std::uint64_t{1} << (j % 64);
}

bool test_bit(const std::vector<std::uint64_t>& bits, std::size_t row, std::size_t words, std::size_t j) {
    return (bits[row * words + j / 64] >> (j % 64)) & 1U;
}

std::size_t popcount_row(const std::vector<std::uint64_t>& bits, std::size_t row, std::size_t words) {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += static_cast<std::size_t>(std::popcount(bits[row * words + w]));
    return c;
}

}  // namespace

FiniteLattice FiniteLattice::from_relation(const std::vector<std::vector<bool>>& rel, const Caps& caps) {
    const auto n = rel.size();
    for (const auto& r : rel)
        if (r.size() != n) throw Error("NotSquare", "relation matrix must be square");
    std::vector<std::uint64_t> up(n * words_for(n), 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rel[i][j]) set_bit(up, i, words_for(n), j);
    return from_up_sets(n, std::move(up), caps);
}

FiniteLattice FiniteLattice::from_pairs(std::size_t n, const std::vector<std::pair<Elem, Elem>>& pairs, const Caps& caps) {
    const auto W = words_for(n);
    std::vector<std::uint64_t> up(n * W, 0);
    for (std::size_t i = 0; i < n; ++i) set_bit(up, i, W, i);
    for (auto [a, b] : pairs) {
        if (a >= n || b >= n) throw Error("BadElement", "pair refers to a missing element", {a, b});
        set_bit(up, a, W, b);
    }
    // Warshall closure on bitsets
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (test_bit(up, i, W, k))
                for (std::size_t w = 0; w < W; ++w) up[i * W + w] |= up[k * W + w];
    return from_up_sets(n, std::move(up), caps);
}

FiniteLattice FiniteLattice::from_up_sets(std::size_t n, std::vector<std::uint64_t> up, const Caps& caps) {
    if (n == 0) throw Error("NotALattice", "empty carrier");
    if (n > caps.table_elements) throw Error("SizeLimitExceeded", "explicit lattice over the table cap", {static_cast<std::int64_t>(n)});
    const auto W = words_for(n);
    FiniteLattice L;
    L.n_ = n;
    L.words_ = W;
    std::vector<std::uint64_t> down(n * W, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (test_bit(up, i, W, j)) set_bit(down, j, W, i);
    // poset axioms
    for (std::size_t i = 0; i < n; ++i)
        if (!test_bit(up, i, W, i)) throw Error("NotAPoset", "not reflexive", {static_cast<std::int64_t>(i), static_cast<std::int64_t>(i), static_cast<std::int64_t>(i)});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (test_bit(up, i, W, j) && test_bit(up, j, W, i))
                throw Error("NotAPoset", "not antisymmetric", {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), static_cast<std::int64_t>(i)});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !test_bit(up, i, W, j)) continue;
            for (std::size_t w = 0; w < W; ++w) {
                const auto missing = up[j * W + w] & ~up[i * W + w];
                if (missing) {
                    const auto k = w * 64 + static_cast<std::size_t>(std::countr_zero(missing));
                    throw Error("NotAPoset", "not transitive",
                                {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), static_cast<std::int64_t>(k)});
                }
            }
        }
    std::vector<std::size_t> below(n), above(n);
    for (std::size_t i = 0; i < n; ++i) {
        below[i] = popcount_row(down, i, W);
        above[i] = popcount_row(up, i, W);
    }
    L.join_.assign(n * n, 0);
    L.meet_.assign(n * n, 0);
    std::vector<std::uint64_t> acc(W);
    auto bound = [&](const std::vector<std::uint64_t>& sets, const std::vector<std::size_t>& rank, std::size_t a, std::size_t b,
                     const char* what) -> Elem {
        std::size_t best = n;
        for (std::size_t w = 0; w < W; ++w) {
            acc[w] = sets[a * W + w] & sets[b * W + w];
            for (auto bits = acc[w]; bits; bits &= bits - 1) {
                const auto k = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                if (best == n || rank[k] < rank[best]) best = k;
            }
        }
        if (best == n) throw Error("NotALattice", std::string("pair without ") + what, {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
        for (std::size_t w = 0; w < W; ++w)
            if (acc[w] & ~sets[best * W + w])
                throw Error("NotALattice", std::string("pair without ") + what, {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
        return static_cast<Elem>(best);
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const auto j = bound(up, below, a, b, "least upper bound");
            const auto m = bound(down, above, a, b, "greatest lower bound");
            L.join_[a * n + b] = L.join_[b * n + a] = j;
            L.meet_[a * n + b] = L.meet_[b * n + a] = m;
        }
    L.bottom_ = 0;
    L.top_ = 0;
    for (std::size_t i = 1; i < n; ++i) {
        L.bottom_ = L.meet_[L.bottom_ * n + i];
        L.top_ = L.join_[L.top_ * n + i];
    }
    // covers: y covers x iff x < y and nothing strictly between
    L.upper_covers_.assign(n, {});
    L.lower_covers_.assign(n, {});
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            if (x == y || !test_bit(up, x, W, y)) continue;
            // strictly between: up(x) & down(y) minus {x, y}
            bool cover = true;
            for (std::size_t w = 0; w < W && cover; ++w) {
                auto between = up[x * W + w] & down[y * W + w];
                if (x / 64 == w) between &= ~(std::uint64_t{1} << (x % 64));
                if (y / 64 == w) between &= ~(std::uint64_t{1} << (y % 64));
                cover = between == 0;
            }
            if (cover) {
                L.upper_covers_[x].push_back(static_cast<Elem>(y));
                L.lower_covers_[y].push_back(static_cast<Elem>(x));
            }
        }
    // heights in order of increasing down-set size
    std::vector<Elem> order(n);
    std::iota(order.begin(), order.end(), Elem{0});
    std::sort(order.begin(), order.end(), [&](Elem a, Elem b) { return below[a] < below[b]; });
    L.height_.assign(n, 0);
    for (auto y : order)
        for (auto x : L.lower_covers_[y]) L.height_[y] = std::max(L.height_[y], L.height_[x] + 1);
    L.up_ = std::move(up);
    L.down_ = std::move(down);
    L.labels_.resize(n);
    for (std::size_t i = 0; i < n; ++i) L.labels_[i] = std::to_string(i);
    return L;
}

Elem FiniteLattice::join_all(std::span<const Elem> xs) const noexcept {
    Elem acc = bottom_;
    for (auto x : xs) acc = join(acc, x);
    return acc;
}

Elem FiniteLattice::meet_all(std::span<const Elem> xs) const noexcept {
    Elem acc = top_;
    for (auto x : xs) acc = meet(acc, x);
    return acc;
}

void FiniteLattice::set_labels(std::vector<std::string> labels) {
    if (labels.size() != n_) throw Error("BadLabels", "label count differs from element count");
    labels_ = std::move(labels);
}

std::optional<Elem> FiniteLattice::find_label(const std::string& label) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (labels_[i] == label) return static_cast<Elem>(i);
    return std::nullopt;
}

FiniteLattice FiniteLattice::chain(std::size_t length) {
    std::vector<std::pair<Elem, Elem>> pairs;
    for (std::size_t i = 0; i < length; ++i) pairs.emplace_back(static_cast<Elem>(i), static_cast<Elem>(i + 1));
    return from_pairs(length + 1, pairs);
}

FiniteLattice FiniteLattice::divisor(std::uint64_t n) {
    if (n == 0) throw Error("BadArgument", "divisor lattice needs n >= 1");
    std::vector<std::uint64_t> divs;
    for (std::uint64_t d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            divs.push_back(d);
            if (d * d != n) divs.push_back(n / d);
        }
    std::sort(divs.begin(), divs.end());
    const auto k = divs.size();
    const auto W = words_for(k);
    std::vector<std::uint64_t> up(k * W, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j)
            if (divs[j] % divs[i] == 0) set_bit(up, i, W, j);
    auto L = from_up_sets(k, std::move(up));
    std::vector<std::string> labels;
    for (auto d : divs) labels.push_back(std::to_string(d));
    L.set_labels(std::move(labels));
    L.set_values(divs);
    return L;
}

FiniteLattice FiniteLattice::boolean(std::size_t atoms) {
    const std::size_t n = std::size_t{1} << atoms;
    const auto W = words_for(n);
    std::vector<std::uint64_t> up(n * W, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((i & j) == i) set_bit(up, i, W, j);
    return from_up_sets(n, std::move(up));
}

FiniteLattice FiniteLattice::diamond() {
    auto L = from_pairs(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
    L.set_labels({"0", "a", "b", "c", "1"});
    return L;
}

FiniteLattice FiniteLattice::pentagon() {
    // 0 < a < c < 1, 0 < b < 1
    auto L = from_pairs(5, {{0, 1}, {1, 3}, {3, 4}, {0, 2}, {2, 4}});
    L.set_labels({"0", "a", "b", "c", "1"});
    return L;
}

FiniteLattice FiniteLattice::dual() const {
    std::vector<std::uint64_t> up(n_ * words_, 0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (leq(static_cast<Elem>(j), static_cast<Elem>(i))) set_bit(up, i, words_, j);
    Caps caps;
    caps.table_elements = std::max(caps.table_elements, n_);
    auto D = from_up_sets(n_, std::move(up), caps);
    D.labels_ = labels_;
    return D;
}

std::vector<Elem> FiniteLattice::elements_between(Elem a, Elem b) const {
    std::vector<Elem> out;
    for (std::size_t w = 0; w < words_; ++w)
        for (auto bits = up_[a * words_ + w] & down_[b * words_ + w]; bits; bits &= bits - 1)
            out.push_back(static_cast<Elem>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
    return out;
}

std::pair<FiniteLattice, std::vector<Elem>> FiniteLattice::segment(Elem a, Elem b) const {
    if (!leq(a, b)) throw Error("NotASegment", "segment endpoints must satisfy a <= b", {a, b});
    auto elems = elements_between(a, b);
    const auto k = elems.size();
    const auto W = words_for(k);
    std::vector<std::uint64_t> up(k * W, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (leq(elems[i], elems[j])) set_bit(up, i, W, j);
    Caps caps;
    caps.table_elements = std::max(caps.table_elements, k);
    auto S = from_up_sets(k, std::move(up), caps);
    std::vector<std::string> labels;
    for (auto e : elems) labels.push_back(labels_[e]);
    S.labels_ = std::move(labels);
    if (!values_.empty()) {
        std::vector<std::uint64_t> vals;
        for (auto e : elems) vals.push_back(values_[e]);
        S.values_ = std::move(vals);
    }
    return {std::move(S), std::move(elems)};
}

LatticeProps lattice_props(const FiniteLattice& L) {
    LatticeProps p;
    const auto n = static_cast<Elem>(L.size());
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b)
            for (Elem c = 0; c < n; ++c) {
                if (p.modular && L.leq(a, c) && L.join(a, L.meet(b, c)) != L.meet(L.join(a, b), c)) {
                    p.modular = false;
                    p.modular_witness = std::array<Elem, 3>{a, b, c};
                }
                if (p.distributive && L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c))) {
                    p.distributive = false;
                    p.distributive_witness = std::array<Elem, 3>{a, b, c};
                }
            }
    p.compact_elements.resize(n);
    std::iota(p.compact_elements.begin(), p.compact_elements.end(), Elem{0});
    return p;
}

FamilyProps family_props(const FiniteLattice& L, std::span<const Elem> family) {
    FamilyProps r;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (family[i] == L.bottom()) throw Error("ZeroMember", "family contains the bottom element", {static_cast<std::int64_t>(i)});
    for (std::size_t i = 0; i < family.size() && r.join_independent; ++i) {
        Elem others = L.bottom();
        for (std::size_t j = 0; j < family.size(); ++j)
            if (j != i) others = L.join(others, family[j]);
        if (L.meet(others, family[i]) != L.bottom()) {
            r.join_independent = false;
            r.witness = i;
        }
    }
    r.basis = r.join_independent && L.join_all(family) == L.top();
    return r;
}

FiniteLattice product(std::span<const FiniteLattice* const> factors, const Caps& caps) {
    std::size_t n = 1;
    for (const auto* f : factors) {
        n *= f->size();
        if (n > caps.lattice_elements || n > caps.table_elements)
            throw Error("SizeLimitExceeded", "product exceeds the element cap", {static_cast<std::int64_t>(n)});
    }
    const auto W = words_for(n);
    auto digits = [&](std::size_t x) {
        std::vector<Elem> d(factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) {
            d[i] = static_cast<Elem>(x % factors[i]->size());
            x /= factors[i]->size();
        }
        return d;
    };
    std::vector<std::vector<Elem>> tuple(n);
    for (std::size_t x = 0; x < n; ++x) tuple[x] = digits(x);
    std::vector<std::uint64_t> up(n * W, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            bool le = true;
            for (std::size_t i = 0; i < factors.size() && le; ++i) le = factors[i]->leq(tuple[x][i], tuple[y][i]);
            if (le) set_bit(up, x, W, y);
        }
    auto P = FiniteLattice::from_up_sets(n, std::move(up), caps);
    std::vector<std::string> labels(n);
    for (std::size_t x = 0; x < n; ++x) {
        std::string s = "(";
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) s += ",";
            s += factors[i]->label(tuple[x][i]);
        }
        labels[x] = s + ")";
    }
    P.set_labels(std::move(labels));
    return P;
}

FiniteLattice product(const FiniteLattice& a, const FiniteLattice& b, const Caps& caps) {
    const FiniteLattice* fs[] = {&a, &b};
    return product(std::span<const FiniteLattice* const>(fs), caps);
}

namespace {

void check_chain(const FiniteLattice& L, std::span<const Elem> chain) {
    if (chain.empty() || chain.front() != L.bottom() || chain.back() != L.top())
        throw Error("NotAChain", "chain must run from bottom to top");
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (chain[i] >= L.size() || !L.leq(chain[i], chain[i + 1]))
            throw Error("NotAChain", "chain is not weakly increasing", {static_cast<std::int64_t>(i)});
}

std::vector<Elem> drop_repeats(const std::vector<Elem>& xs) {
    std::vector<Elem> out;
    for (auto x : xs)
        if (out.empty() || out.back() != x) out.push_back(x);
    return out;
}

}  // namespace

std::vector<Elem> composition_refine(const FiniteLattice& L, std::span<const Elem> chain) {
    check_chain(L, chain);
    std::vector<Elem> out{chain.front()};
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        Elem x = chain[i];
        const Elem b = chain[i + 1];
        while (x != b) {
            Elem next = b;
            for (auto c : L.upper_covers(x))
                if (L.leq(c, b)) {
                    next = c;
                    break;
                }
            x = next;
            out.push_back(x);
        }
    }
    return out;
}

SchreierPair schreier_refine(const FiniteLattice& L, std::span<const Elem> c1, std::span<const Elem> c2) {
    check_chain(L, c1);
    check_chain(L, c2);
    SchreierPair sp;
    const auto r = c1.size() - 1, s = c2.size() - 1;
    std::vector<Elem> ra, rb;
    sp.perspective = true;
    // a_{i,j} = a_i v (a_{i+1} ^ b_j); b_{j,i} = b_j v (b_{j+1} ^ a_i)
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            const Elem lo_a = L.join(c1[i], L.meet(c1[i + 1], c2[j]));
            const Elem hi_a = L.join(c1[i], L.meet(c1[i + 1], c2[j + 1]));
            const Elem lo_b = L.join(c2[j], L.meet(c2[j + 1], c1[i]));
            const Elem hi_b = L.join(c2[j], L.meet(c2[j + 1], c1[i + 1]));
            const Elem mid_lo = L.join(L.meet(c1[i + 1], c2[j]), L.meet(c1[i], c2[j + 1]));
            const Elem mid_hi = L.meet(c1[i + 1], c2[j + 1]);
            // [mid_lo, mid_hi] transposes up onto both refinement steps
            const bool pa = L.meet(mid_hi, lo_a) == mid_lo && L.join(mid_hi, lo_a) == hi_a;
            const bool pb = L.meet(mid_hi, lo_b) == mid_lo && L.join(mid_hi, lo_b) == hi_b;
            sp.perspective = sp.perspective && pa && pb;
            ra.push_back(lo_a);
            rb.push_back(lo_b);
        }
    ra.push_back(L.top());
    rb.push_back(L.top());
    // the b-refinement is indexed (j, i); reorder it along the b chain
    std::vector<Elem> rb_sorted;
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t i = 0; i < r; ++i) rb_sorted.push_back(rb[i * s + j]);
    rb_sorted.push_back(L.top());
    sp.first = drop_repeats(ra);
    sp.second = drop_repeats(rb_sorted);
    sp.equal_length = sp.first.size() == sp.second.size();
    return sp;
}

Elem socle_of(const FiniteLattice& L, Elem x) {
    Elem s = L.bottom();
    for (auto a : L.upper_covers(L.bottom()))
        if (L.leq(a, x)) s = L.join(s, a);
    return s;
}

SocleSeries socle_series(const FiniteLattice& L) {
    SocleSeries r;
    r.series.push_back(L.bottom());
    Elem cur = L.bottom();
    while (true) {
        Elem next = cur;
        for (auto c : L.upper_covers(cur)) next = L.join(next, c);
        if (next == cur) break;
        r.series.push_back(next);
        cur = next;
    }
    r.socle = r.series.size() > 1 ? r.series[1] : L.bottom();
    r.semi_artinian = cur == L.top();
    return r;
}

std::optional<std::uint64_t> length(const ChainLattice& C) {
    if (!C.alpha.is_finite()) return std::nullopt;
    return C.alpha.finite_value();
}

ChainProps lattice_props(const ChainLattice& C) {
    ChainProps p;
    p.compact_rule = C.orientation == Orientation::standard ? "x = 0 or x a successor ordinal" : "every element";
    return p;
}

bool is_compact(const ChainLattice& C, const Ordinal& x) {
    if (!C.contains(x)) throw Error("BadElement", "ordinal outside the chain");
    if (C.orientation == Orientation::reversed) return true;  // every subset has a least ordinal
    return x.is_zero() || x.is_successor();
}

ChainSocle socle_series(const ChainLattice& C, std::size_t prefix_cap) {
    ChainSocle r;
    Ordinal cur = C.bottom();
    r.series.push_back(cur);
    if (C.orientation == Orientation::standard) {
        // every element below alpha is covered by its successor
        for (std::size_t k = 0; k < prefix_cap && cur < C.alpha; ++k) {
            cur = cur.successor();
            r.series.push_back(cur);
        }
        r.socle = C.alpha.is_zero() ? Ordinal{} : Ordinal::finite(1);
        r.semi_artinian = true;
        return r;
    }
    // reversed: bottom is alpha; the cover of x exists iff x is a successor
    for (std::size_t k = 0; k < prefix_cap && cur.is_successor(); ++k) {
        cur = cur.predecessor();
        r.series.push_back(cur);
    }
    r.socle = C.alpha.is_successor() ? C.alpha.predecessor() : C.alpha;
    r.semi_artinian = C.alpha.is_finite();
    return r;
}

ChainConditions chain_conditions(const ChainLattice& C) {
    const bool fin = C.alpha.is_finite();
    if (C.orientation == Orientation::standard) return {fin, true};
    return {true, fin};
}

}  // namespace qfw
