#include "qfw/sofic.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace qfw {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

// U+2212 MINUS SIGN to ASCII
std::string ascii_minus(std::string s) {
    const std::string u = "\xE2\x88\x92";
    for (std::size_t p; (p = s.find(u)) != std::string::npos;) s.replace(p, u.size(), "-");
    return s;
}

std::int64_t parse_int(const std::string& s) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw Error("ParseError", "not an integer: " + s);
    }
    if (used != s.size()) throw Error("ParseError", "not an integer: " + s);
    return v;
}

std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

std::int64_t mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

Perm identity_perm(std::size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0U);
    return p;
}

}  // namespace

std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& s0) {
    const auto s = trim(ascii_minus(s0));
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s));
    const auto den = parse_int(trim(s.substr(slash + 1)));
    if (den == 0) throw Error("ParseError", "zero denominator");
    return Rational(parse_int(trim(s.substr(0, slash))), den);
}

DiscreteGroup DiscreteGroup::lattice(std::size_t d) {
    if (d == 0) throw Error("BadGroup", "rank must be positive");
    DiscreteGroup G;
    G.d_ = d;
    return G;
}

DiscreteGroup DiscreteGroup::finite(FiniteGroup F) {
    DiscreteGroup G;
    G.d_ = 1;
    G.finite_ = std::move(F);
    return G;
}

const FiniteGroup& DiscreteGroup::finite_group() const {
    if (!finite_) throw Error("BadGroup", "not a finite group");
    return *finite_;
}

std::string DiscreteGroup::kind() const {
    if (finite_) return finite_->kind();
    return d_ == 1 ? "Z" : "Z^" + std::to_string(d_);
}

GroupWord DiscreteGroup::identity() const {
    if (finite_) return of(finite_->identity());
    return GroupWord(d_, 0);
}

GroupWord DiscreteGroup::mul(const GroupWord& a, const GroupWord& b) const {
    if (finite_) return of(finite_->mul(static_cast<GElem>(a[0]), static_cast<GElem>(b[0])));
    GroupWord c(d_);
    for (std::size_t i = 0; i < d_; ++i) c[i] = a[i] + b[i];
    return c;
}

GroupWord DiscreteGroup::inv(const GroupWord& a) const {
    if (finite_) return of(finite_->inv(static_cast<GElem>(a[0])));
    GroupWord c(d_);
    for (std::size_t i = 0; i < d_; ++i) c[i] = -a[i];
    return c;
}

std::vector<GroupWord> DiscreteGroup::elements() const {
    std::vector<GroupWord> out;
    for (GElem g = 0; g < finite_group().size(); ++g) out.push_back(of(g));
    return out;
}

std::string DiscreteGroup::format(const GroupWord& g) const {
    if (finite_) return finite_->name(static_cast<GElem>(g[0]));
    if (d_ == 1) return std::to_string(g[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < d_; ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + ")";
}

GroupWord DiscreteGroup::parse(const std::string& s0) const {
    const auto s = trim(ascii_minus(s0));
    if (finite_) {
        if (auto g = finite_->find(s)) return of(*g);
        throw Error("ParseError", "unknown group element: " + s);
    }
    if (d_ == 1) return {parse_int(s)};
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw Error("ParseError", "expected (a,b,...): " + s);
    const auto parts = split_top(s.substr(1, s.size() - 2));
    if (parts.size() != d_) throw Error("ParseError", "wrong rank: " + s);
    GroupWord g;
    for (const auto& p : parts) g.push_back(parse_int(p));
    return g;
}

std::vector<GroupWord> DiscreteGroup::parse_set(const std::string& s0) const {
    auto s = trim(ascii_minus(s0));
    if (!s.empty() && s.front() == '{' && s.back() == '}') s = s.substr(1, s.size() - 2);
    std::vector<GroupWord> out;
    for (const auto& p : split_top(s)) out.push_back(parse(p));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<GroupWord> DiscreteGroup::products(const std::vector<GroupWord>& A, const std::vector<GroupWord>& B) const {
    std::set<GroupWord> out;
    for (const auto& a : A)
        for (const auto& b : B) out.insert(mul(a, b));
    return {out.begin(), out.end()};
}

bool DiscreteGroup::is_symmetric(const std::vector<GroupWord>& K) const {
    const std::set<GroupWord> s(K.begin(), K.end());
    return std::all_of(K.begin(), K.end(), [&](const GroupWord& k) { return s.count(inv(k)) != 0; });
}

Rational hamming(const Perm& a, const Perm& b) {
    if (a.size() != b.size() || a.empty()) throw Error("DomainMismatch", "permutations on different sets", {static_cast<std::int64_t>(a.size()), static_cast<std::int64_t>(b.size())});
    std::int64_t diff = 0;
    for (std::size_t v = 0; v < a.size(); ++v) diff += a[v] != b[v];
    return {diff, static_cast<std::int64_t>(a.size())};
}

Perm compose(const Perm& a, const Perm& b) {
    if (a.size() != b.size()) throw Error("DomainMismatch", "permutations on different sets");
    Perm c(b.size());
    for (std::size_t v = 0; v < b.size(); ++v) c[v] = a[b[v]];
    return c;
}

void QuasiAction::set(const GroupWord& g, Perm p) {
    if (p.size() != V_) throw Error("NotAPermutation", "wrong length for " + G_.format(g), {static_cast<std::int64_t>(p.size())});
    std::vector<bool> seen(V_, false);
    for (auto x : p) {
        if (x >= V_ || seen[x]) throw Error("NotAPermutation", "not a bijection: " + G_.format(g), {x});
        seen[x] = true;
    }
    phi_[g] = std::move(p);
}

const Perm& QuasiAction::at(const GroupWord& g) const {
    auto it = phi_.find(g);
    if (it == phi_.end()) throw Error("DomainIncomplete", "phi undefined at " + G_.format(g));
    return it->second;
}

SoficCertificate verify_quasi_action(const QuasiAction& qa, const std::vector<GroupWord>& K, const Rational& eps) {
    const auto& G = qa.group();
    SoficCertificate c;
    c.eps = eps;
    c.qa1 = qa.at(G.identity()) == identity_perm(qa.size());
    for (const auto& a : K) (void)qa.at(a);
    for (const auto& a : K)
        for (const auto& b : K) {
            const auto d = hamming(qa.at(G.mul(a, b)), compose(qa.at(a), qa.at(b)));
            if (!c.mult_worst || d > c.eps_mult) {
                c.mult_worst = {a, b};
                c.eps_mult = d;
            }
        }
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = 0; j < K.size(); ++j) {
            if (i == j || K[i] == K[j]) continue;
            const auto d = Rational(1) - hamming(qa.at(K[i]), qa.at(K[j]));
            if (!c.free_worst || d > c.eps_free) {
                c.free_worst = {K[i], K[j]};
                c.eps_free = d;
            }
        }
    c.qa2 = c.eps_mult <= eps;
    c.qa3 = c.eps_free <= eps;
    c.valid = c.qa1 && c.qa2 && c.qa3;
    return c;
}

namespace {

std::vector<GroupWord> power_domain(const DiscreteGroup& G, const std::vector<GroupWord>& K) {
    std::vector<GroupWord> base = K;
    base.push_back(G.identity());
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    auto dom = base;
    for (int i = 0; i < 3; ++i) dom = G.products(dom, base);
    return dom;
}

// Translation by g on the box. Cells pushed out either wrap around or refill
// the vacated cells in reverse order.
Perm box_perm(const std::vector<std::uint64_t>& sides, const GroupWord& g, Boundary boundary) {
    std::size_t V = 1;
    for (auto s : sides) V *= s;
    const auto d = sides.size();
    Perm p(V);
    std::vector<std::uint32_t> out, vacated;
    std::vector<bool> hit(V, false);
    for (std::size_t v = 0; v < V; ++v) {
        std::size_t rest = v, target = 0, stride = 1;
        bool inside = true;
        for (std::size_t i = 0; i < d; ++i) {
            auto c = static_cast<std::int64_t>(rest % sides[i]) + g[i];
            if (boundary == Boundary::cycled) c = mod(c, static_cast<std::int64_t>(sides[i]));
            rest /= sides[i];
            if (c < 0 || c >= static_cast<std::int64_t>(sides[i])) inside = false;
            target += static_cast<std::size_t>(inside ? c : 0) * stride;
            stride *= sides[i];
        }
        if (inside) {
            p[v] = static_cast<std::uint32_t>(target);
            hit[target] = true;
        } else {
            out.push_back(static_cast<std::uint32_t>(v));
        }
    }
    for (std::size_t v = 0; v < V; ++v)
        if (!hit[v]) vacated.push_back(static_cast<std::uint32_t>(v));
    std::reverse(vacated.begin(), vacated.end());
    for (std::size_t i = 0; i < out.size(); ++i) p[out[i]] = vacated[i];
    return p;
}

QuasiAction box_action(const DiscreteGroup& G, const std::vector<std::uint64_t>& sides, const std::vector<GroupWord>& dom,
                       Boundary boundary) {
    std::size_t V = 1;
    for (auto s : sides) V *= s;
    QuasiAction qa(G, V);
    for (const auto& g : dom) qa.set(g, g == G.identity() ? identity_perm(V) : box_perm(sides, g, boundary));
    return qa;
}

}  // namespace

QuasiAction self_action(const FiniteGroup& F, std::size_t copies) {
    const auto G = DiscreteGroup::finite(F);
    const auto n = F.size();
    QuasiAction qa(G, n * copies);
    for (GElem g = 0; g < n; ++g) {
        Perm p(n * copies);
        for (std::size_t c = 0; c < copies; ++c)
            for (GElem h = 0; h < n; ++h) p[c * n + h] = static_cast<std::uint32_t>(c * n + F.mul(g, h));
        qa.set(G.of(g), std::move(p));
    }
    return qa;
}

QuasiAction perturb(const QuasiAction& qa, std::size_t swaps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    QuasiAction out(qa.group(), qa.size());
    const auto e = qa.group().identity();
    for (const auto& [g, p0] : qa.domain()) {
        auto p = p0;
        if (g != e)
            for (std::size_t s = 0; s < swaps; ++s) std::swap(p[rng() % p.size()], p[rng() % p.size()]);
        out.set(g, std::move(p));
    }
    return out;
}

QuasiAction build_quasi_action(const DiscreteGroup& G, QAKind kind, const QAParams& params) {
    const auto& K = params.K;
    if (kind == QAKind::finite_quotient) {
        if (G.is_finite()) {
            auto qa = self_action(G.finite_group(), params.dims.empty() ? 1 : params.dims[0]);
            if (!verify_quasi_action(qa, K, params.eps).valid) throw Error("Internal", "self action failed its certificate");
            return qa;
        }
        if (params.dims.size() != G.rank()) throw Error("BadParams", "one modulus per coordinate");
        std::map<GroupWord, std::size_t> seen;
        for (std::size_t i = 0; i < K.size(); ++i) {
            GroupWord r(G.rank());
            for (std::size_t c = 0; c < G.rank(); ++c) r[c] = mod(K[i][c], static_cast<std::int64_t>(params.dims[c]));
            auto [it, fresh] = seen.emplace(r, i);
            if (!fresh)
                throw Error("QuotientNotInjectiveOnK", G.format(K[it->second]) + " and " + G.format(K[i]) + " have the same image",
                            {static_cast<std::int64_t>(it->second), static_cast<std::int64_t>(i)});
        }
        std::size_t V = 1;
        for (auto n : params.dims) V *= n;
        QuasiAction qa(G, V);
        for (const auto& g : power_domain(G, K)) {
            Perm p(V);
            for (std::size_t v = 0; v < V; ++v) {
                std::size_t rest = v, target = 0, stride = 1;
                for (std::size_t c = 0; c < G.rank(); ++c) {
                    const auto n = static_cast<std::int64_t>(params.dims[c]);
                    target += static_cast<std::size_t>(mod(static_cast<std::int64_t>(rest % params.dims[c]) + g[c], n)) * stride;
                    rest /= params.dims[c];
                    stride *= params.dims[c];
                }
                p[v] = static_cast<std::uint32_t>(target);
            }
            qa.set(g, std::move(p));
        }
        if (!verify_quasi_action(qa, K, params.eps).valid) throw Error("Internal", "finite quotient failed its certificate");
        return qa;
    }
    if (G.is_finite()) throw Error("BadParams", "Folner boxes need Z^d");
    if (params.dims.size() != G.rank()) throw Error("BadParams", "one side per coordinate");
    const auto dom = power_domain(G, K);
    auto passes = [&](const std::vector<std::uint64_t>& sides) {
        return verify_quasi_action(box_action(G, sides, dom, params.boundary), K, params.eps).valid;
    };
    if (passes(params.dims)) return box_action(G, params.dims, dom, params.boundary);
    // Scale every side by the same factor until the certificate passes.
    const auto longest = *std::max_element(params.dims.begin(), params.dims.end());
    auto scaled = [&](std::uint64_t f) {
        auto s = params.dims;
        for (auto& x : s) x *= f;
        return s;
    };
    std::uint64_t hi = 2;
    auto cells = [&](std::uint64_t f) {
        std::uint64_t c = 1;
        for (auto x : scaled(f)) c *= x;
        return c;
    };
    while (cells(hi) <= (std::uint64_t{1} << 20) && !passes(scaled(hi))) hi *= 2;
    if (cells(hi) > (std::uint64_t{1} << 20))
        throw Error("BoxTooSmall", "no box up to 2^20 cells meets eps", {-1});
    std::uint64_t lo = hi / 2;
    while (hi - lo > 1) {
        const auto mid = (lo + hi) / 2;
        (passes(scaled(mid)) ? hi : lo) = mid;
    }
    throw Error("BoxTooSmall", "longest side must reach " + std::to_string(longest * hi), {static_cast<std::int64_t>(longest * hi)});
}

GoodPoints good_points(const QuasiAction& qa, const std::vector<GroupWord>& K, std::uint64_t n, std::optional<Rational> eps) {
    const auto& G = qa.group();
    if (n < 2) throw Error("BadParams", "n must be at least 2");
    if (!G.is_symmetric(K)) throw Error("NotSymmetric", "K must be symmetric");
    GoodPoints r;
    r.H = G.products(K, K);
    const auto h = static_cast<std::int64_t>(r.H.size());
    r.eps_bound = Rational(1, 2 * static_cast<std::int64_t>(n) * h * h);
    const auto measured = verify_quasi_action(qa, r.H, 0);
    r.eps = eps.value_or(std::max(measured.eps_mult, measured.eps_free));
    if (r.eps >= r.eps_bound)
        throw Error("EpsilonTooLarge", "eps must be below " + format_rational(r.eps_bound),
                    {r.eps_bound.numerator(), r.eps_bound.denominator()});
    if (!verify_quasi_action(qa, r.H, r.eps).valid) throw Error("NotCertified", "not an (H, eps)-quasi-action");

    const auto V = qa.size();
    std::vector<const Perm*> ph;
    for (const auto& x : r.H) ph.push_back(&qa.at(x));
    std::vector<std::vector<const Perm*>> prod(r.H.size());
    for (std::size_t i = 0; i < r.H.size(); ++i)
        for (std::size_t j = 0; j < r.H.size(); ++j) prod[i].push_back(&qa.at(G.mul(r.H[i], r.H[j])));
    std::vector<std::uint32_t> img(r.H.size());
    for (std::uint32_t v = 0; v < V; ++v) {
        bool good = true;
        for (std::size_t i = 0; i < r.H.size(); ++i) img[i] = (*ph[i])[v];
        auto sorted = img;
        std::sort(sorted.begin(), sorted.end());
        good = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        for (std::size_t i = 0; i < r.H.size() && good; ++i)
            for (std::size_t j = 0; j < r.H.size() && good; ++j) good = (*prod[i][j])[v] == (*ph[i])[img[j]];
        if (good) r.Vbar.push_back(v);
    }
    std::vector<const Perm*> pk;
    for (const auto& k : K) pk.push_back(&qa.at(k));
    std::vector<bool> used(V, false);
    for (auto v : r.Vbar) {
        bool free = true;
        for (const auto* p : pk) free = free && !used[(*p)[v]];
        if (!free) continue;
        r.W.push_back(v);
        for (const auto* p : pk) used[(*p)[v]] = true;
    }
    std::vector<bool> hw(V, false);
    for (auto w : r.W)
        for (const auto* p : ph) hw[(*p)[w]] = true;
    r.covering = std::all_of(r.Vbar.begin(), r.Vbar.end(), [&](std::uint32_t v) { return hw[v]; });
    const auto nn = static_cast<std::int64_t>(n), vv = static_cast<std::int64_t>(V);
    r.vbar_bound = nn * static_cast<std::int64_t>(r.Vbar.size()) >= (nn - 1) * vv;
    r.w_bound = 2 * h * static_cast<std::int64_t>(r.W.size()) >= vv;
    if (!r.vbar_bound) throw Error("LemmaViolation", "|Vbar| < (1 - 1/n)|V|", {static_cast<std::int64_t>(r.Vbar.size()), vv});
    if (!r.w_bound) throw Error("LemmaViolation", "|W| < |V| / 2|H|", {static_cast<std::int64_t>(r.W.size()), vv});
    if (!r.covering) throw Error("LemmaViolation", "HW does not contain Vbar");
    return r;
}

}  // namespace qfw
