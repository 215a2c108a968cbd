#include "qfw/engine.hpp"

#include <boost/functional/hash.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace qfw {

namespace {


[[noreturn]] void hyp_failed(const std::string& clause, const std::string& detail, std::vector<std::int64_t> w = {}) {
    throw Error("HypothesisFailed", "(" + clause + ") " + detail, std::move(w));
}

void check_hom(const QframeHom& f, std::uint64_t seed) {
    if (f.source->size() <= exhaustive_hom_check_limit)
        (void)verify_hom(f);
    else
        verify_hom_sampled(f, 20000, seed);
}

bool is_bijection(const std::vector<Elem>& map) {
    std::vector<bool> seen(map.size());
    for (auto x : map) {
        if (x >= map.size() || seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

bool symmetric(const FiniteGroup& G, const std::vector<GElem>& S) {
    for (auto g : S)
        if (std::find(S.begin(), S.end(), G.inv(g)) == S.end()) return false;
    return true;
}

Elem join_rho(const GQframe& M, const std::vector<GElem>& S, Elem y) {
    Elem j = M.M->bottom();
    for (auto g : S) j = M.M->join(j, M.rho[g](y));
    return j;
}

// Subsets of {0..n-1} by size, then lexicographically.
template <class F>
bool for_subsets_by_size(std::size_t n, F&& f) {
    for (std::size_t s = 0; s <= n; ++s) {
        std::vector<GElem> c(s);
        std::iota(c.begin(), c.end(), 0U);
        while (true) {
            if (f(c)) return true;
            std::size_t i = s;
            while (i > 0 && c[i - 1] == n - s + i - 1) --i;
            if (i == 0) break;
            ++c[i - 1];
            for (auto j = i; j < s; ++j) c[j] = c[j - 1] + 1;
        }
    }
    return false;
}

std::vector<Elem> join_irreducibles_below(const FiniteLattice& L, Elem top) {
    std::vector<Elem> out;
    for (Elem x = 0; x < L.size(); ++x)
        if (L.leq(x, top) && L.lower_covers(x).size() == 1) out.push_back(x);
    return out;
}

}  // namespace

GQframe GQframe::from_model(const LatticeModel& model) {
    GQframe M{model.C.spec().G, model.L.lattice(), model.rho};
    verify_gqframe(M);
    return M;
}

void verify_gqframe(const GQframe& M) {
    const auto& G = M.G;
    const auto n = M.M->size();
    if (M.rho.size() != G.size()) hyp_failed("rho", "one map per group element expected");
    for (GElem g = 0; g < G.size(); ++g) {
        const auto& r = M.rho[g];
        if (r.source != M.M || r.target != M.M || r.map.size() != n) hyp_failed("rho", "rho_g is not an endomap of M", {g});
        if (!is_bijection(r.map)) hyp_failed("rho", "rho_g is not bijective", {g});
        try {
            check_hom(r, g + 1);
        } catch (const Error& e) {
            hyp_failed("rho", "rho_g is not a hom: " + std::string(e.what()), {g});
        }
    }
    for (Elem x = 0; x < n; ++x)
        if (M.rho[G.identity()](x) != x) hyp_failed("rho", "rho_e != id", {x});
    for (GElem g = 0; g < G.size(); ++g)
        for (GElem h = 0; h < G.size(); ++h) {
            const auto& hg = M.rho[G.mul(h, g)];
            for (Elem x = 0; x < n; ++x)
                if (M.rho[g](M.rho[h](x)) != hg(x)) hyp_failed("rho", "rho_g rho_h != rho_{hg}", {g, h, x});
        }
}

HypothesisReport verify_main_hypotheses(const MainInstance& I) {
    const auto& M = *I.M;
    const auto& L = *M.M;
    const auto& G = M.G;
    if (I.ybar >= L.size()) hyp_failed("a", "ybar is not an element of M", {I.ybar});
    if (I.Phi.source != M.M || I.Phi.target != M.M) hyp_failed("Phi", "Phi is not an endomorphism of M");
    try {
        check_hom(I.Phi, 7);
    } catch (const Error& e) {
        hyp_failed("Phi", std::string("Phi is not a hom: ") + e.what());
    }
    for (GElem g = 0; g < G.size(); ++g)
        for (Elem x = 0; x < L.size(); ++x)
            if (I.Phi(M.rho[g](x)) != M.rho[g](I.Phi(x))) hyp_failed("equivariance", "Phi rho_g != rho_g Phi", {g, x});

    HypothesisReport rep;
    rep.l = L.height(I.ybar);
    for (GElem g = 0; g < G.size(); ++g) rep.y_g.push_back(M.rho[g](I.ybar));
    const auto fp = family_props(L, rep.y_g);
    bool distinct = true;
    if (I.ybar != L.bottom())
        for (GElem g = 0; g < G.size(); ++g)
            for (GElem h = g + 1; h < G.size(); ++h) distinct = distinct && rep.y_g[g] != rep.y_g[h];
    if (!fp.join_independent || !distinct)
        hyp_failed("b", "the translates of ybar are not join-independent", {static_cast<std::int64_t>(fp.witness.value_or(0))});
    rep.basis = L.join_all(rep.y_g) == L.top();

    auto check_set = [&](const std::vector<GElem>& S, const char* name) {
        for (auto g : S)
            if (g >= G.size()) hyp_failed("c", std::string(name) + " contains a non-element", {g});
        if (!symmetric(G, S)) hyp_failed("c", std::string(name) + " is not symmetric");
    };
    check_set(I.F, "F");
    check_set(I.K, "K");
    if (std::find(I.F.begin(), I.F.end(), G.identity()) == I.F.end()) hyp_failed("c", "e is not in F");
    for (auto f : I.F)
        if (std::find(I.K.begin(), I.K.end(), f) == I.K.end()) hyp_failed("c", "F is not contained in K", {f});
    rep.y_F = join_rho(M, I.F, I.ybar);
    if (!L.leq(I.Phi(I.ybar), rep.y_F)) hyp_failed("c", "Phi(ybar) is not below the join over F", {I.Phi(I.ybar), rep.y_F});
    return rep;
}

Exclusivity mutual_exclusivity(const MainInstance& I) {
    const auto hyp = verify_main_hypotheses(I);
    const auto& L = *I.M->M;
    Exclusivity ex;
    ex.l = hyp.l;
    ex.join_K = L.bottom();
    for (auto g : I.K) ex.join_K = L.join(ex.join_K, I.Phi(hyp.y_g[g]));
    ex.join_length = L.height(ex.join_K);
    ex.cond1 = L.leq(I.ybar, ex.join_K);
    ex.cond2 = ex.join_length + 1 <= I.K.size() * hyp.l;
    if (ex.cond1 && ex.cond2)
        throw Error("TheoremViolation", "both conditions hold for " + I.name,
                    {I.ybar, ex.join_K, static_cast<std::int64_t>(ex.join_length)});
    return ex;
}

PresentedLattice::PresentedLattice(LatticePtr base, std::size_t width, std::vector<Tuple> gens)
    : base_(std::move(base)), width_(width) {
    const Tuple zero(width_, base_->bottom());
    std::set<Tuple> seen;
    top_ = zero;
    for (auto& g : gens) {
        if (g.size() != width_) throw Error("BadParams", "generator of the wrong width");
        if (g == zero || !seen.insert(g).second) continue;
        top_ = join(top_, g);
        gens_.push_back(std::move(g));
    }
}

Tuple PresentedLattice::join(const Tuple& a, const Tuple& b) const {
    Tuple out(width_);
    for (std::size_t i = 0; i < width_; ++i) out[i] = base_->join(a[i], b[i]);
    return out;
}

bool PresentedLattice::leq(const Tuple& a, const Tuple& b) const {
    for (std::size_t i = 0; i < width_; ++i)
        if (!base_->leq(a[i], b[i])) return false;
    return true;
}

bool PresentedLattice::contains(const Tuple& x) const {
    auto j = bottom();
    for (const auto& g : gens_)
        if (leq(g, x)) j = join(j, g);
    return j == x;
}

std::size_t PresentedLattice::height(const Tuple& x, std::size_t cap) const {
    std::vector<Tuple> below;
    for (const auto& g : gens_)
        if (leq(g, x)) below.push_back(g);
    return generated_length(*base_, width_, below, cap);
}

std::optional<std::size_t> PresentedLattice::size(std::size_t cap) const {
    try {
        std::unordered_set<Tuple, boost::hash<Tuple>> seen{bottom()};
        std::vector<Tuple> queue{bottom()};
        for (std::size_t s = 0; s < queue.size(); ++s)
            for (const auto& g : gens_) {
                auto t = join(queue[s], g);
                if (seen.insert(t).second) {
                    if (seen.size() > cap) return std::nullopt;
                    queue.push_back(std::move(t));
                }
            }
        return seen.size();
    } catch (const Error&) {
        return std::nullopt;
    }
}

FamilyProps PresentedLattice::family(std::span<const Tuple> xs) const {
    FamilyProps out;
    auto all = bottom();
    for (const auto& x : xs) all = join(all, x);
    out.basis = all == top_;
    for (std::size_t i = 0; i < xs.size() && out.join_independent; ++i) {
        auto others = bottom();
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) others = join(others, xs[j]);
        for (const auto& g : gens_)
            if (leq(g, xs[i]) && leq(g, others)) {
                out.join_independent = false;
                out.witness = i;
                break;
            }
    }
    out.basis = out.basis && out.join_independent;
    return out;
}

std::size_t generated_length(const FiniteLattice& base, std::size_t width, const std::vector<Tuple>& gens, std::size_t cap) {
    auto join = [&](const Tuple& a, const Tuple& b) {
        Tuple out(width);
        for (std::size_t i = 0; i < width; ++i) out[i] = base.join(a[i], b[i]);
        return out;
    };
    auto weight = [&](const Tuple& t) {
        std::size_t w = 0;
        for (auto x : t) w += base.height(x);
        return w;
    };
    const Tuple zero(width, base.bottom());
    std::unordered_map<Tuple, std::size_t, boost::hash<Tuple>> index{{zero, 0}};
    std::vector<Tuple> elems{zero};
    for (std::size_t s = 0; s < elems.size(); ++s)
        for (const auto& g : gens) {
            auto t = join(elems[s], g);
            if (index.emplace(t, elems.size()).second) {
                if (elems.size() >= cap) throw Error("SizeLimitExceeded", "join-closure exceeds the cap", {static_cast<std::int64_t>(cap)});
                elems.push_back(std::move(t));
            }
        }
    // a strict increase raises the summed heights, so sorting by them is topological
    std::vector<std::size_t> order(elems.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> w(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) w[i] = weight(elems[i]);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
    std::vector<std::size_t> dp(elems.size(), 0);
    std::size_t best = 0;
    for (auto i : order) {
        best = std::max(best, dp[i]);
        for (const auto& g : gens) {
            const auto j = index.at(join(elems[i], g));
            if (j != i) dp[j] = std::max(dp[j], dp[i] + 1);
        }
    }
    return best;
}

Tuple PresentedHom::operator()(const Tuple& x) const {
    auto out = target.bottom();
    const auto& gens = source.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (source.leq(gens[i], x)) out = target.join(out, images[i]);
    return out;
}

std::size_t PresentedHom::image_length(std::size_t cap) const {
    return generated_length(target.base(), target.width(), images, cap);
}

KeyLemmaReport replay_key_lemma(const KeyLemmaInput& in) {
    const auto C = in.comps.size();
    const auto& Vbar = in.good.Vbar;
    if (Vbar.empty()) hyp_failed("Vbar", "no good points");
    if (in.l == 0) hyp_failed("1.2", "l must be positive");
    KeyLemmaReport rep;

    std::vector<std::vector<Tuple>> fam(C);
    for (const auto& [w, p] : in.xbar) fam[p.comp].push_back(p.x);
    rep.covering = true;
    for (std::size_t c = 0; c < C; ++c) rep.covering = rep.covering && in.comps[c].source.family(fam[c]).basis;
    if (!rep.covering) hyp_failed("1.1", "the xbar do not join to 1");
    rep.lengths = true;
    for (const auto& [w, p] : in.xbar) {
        const auto h = in.comps[p.comp].source.height(p.x, in.cap);
        if (h != in.l) hyp_failed("1.2", "l(xbar_w) != l", {w, static_cast<std::int64_t>(h)});
    }

    // l of the join of Phi(xbar_v) over a set of points, summed over components
    auto phi_length = [&](const std::vector<std::uint32_t>& pts) {
        std::vector<Tuple> j(C);
        for (std::size_t c = 0; c < C; ++c) j[c] = in.comps[c].target.bottom();
        for (auto v : pts) {
            const auto it = in.xbar.find(v);
            if (it == in.xbar.end()) hyp_failed("2", "xbar undefined at a point of K Vbar", {v});
            const auto& hom = in.comps[it->second.comp];
            j[it->second.comp] = hom.target.join(j[it->second.comp], hom(it->second.x));
        }
        std::size_t len = 0;
        for (std::size_t c = 0; c < C; ++c) len += in.comps[c].target.height(j[c], in.cap);
        return len;
    };
    const auto Kl = static_cast<std::int64_t>(in.K.size() * in.l);
    auto Korbit = [&](std::uint32_t w) {
        std::vector<std::uint32_t> out;
        for (const auto& k : in.K) out.push_back(in.qa->act(k, w));
        return out;
    };
    for (auto w : Vbar) {
        const auto len = phi_length(Korbit(w));
        rep.hyp2_max = std::max(rep.hyp2_max, len);
        if (static_cast<std::int64_t>(len) > Kl - 1) hyp_failed("2", "l(join over Kw) > |K| l - 1", {w, static_cast<std::int64_t>(len)});
    }

    std::set<std::uint32_t> KW;
    for (auto w : in.good.W)
        for (auto v : Korbit(w)) KW.insert(v);
    std::vector<std::uint32_t> outside, inside(KW.begin(), KW.end());
    for (const auto& [w, p] : in.xbar)
        if (!KW.count(w)) outside.push_back(w);
    rep.W = in.good.W.size();
    rep.len_KW = phi_length(inside);
    rep.len_outside = phi_length(outside);
    rep.est_outside = static_cast<std::int64_t>((in.xbar.size() - rep.W * in.K.size()) * in.l);
    rep.est_KW = static_cast<std::int64_t>(rep.W) * (Kl - 1);
    const auto V = static_cast<std::int64_t>(in.qa->size());
    rep.estimate = V * static_cast<std::int64_t>(in.l) - static_cast<std::int64_t>(rep.W);

    for (const auto& hom : in.comps) {
        rep.im_length += hom.image_length(in.cap);
        rep.im_top_length += hom.target.height(hom(hom.source.top()), in.cap);
    }
    const auto H = static_cast<std::int64_t>(in.good.H.size());
    const auto l = static_cast<std::int64_t>(in.l);
    rep.bound = (Rational(1) - Rational(1, 2 * H * l)) * Rational(V * l);
    const auto measured = static_cast<std::int64_t>(std::max(rep.im_length, rep.im_top_length));
    rep.holds = Rational(measured) <= rep.bound;
    if (!rep.holds)
        throw Error("LemmaViolation", "l(Im Phi) exceeds (1 - 1/(2|H|l))|V|l",
                    {measured, rep.bound.numerator(), rep.bound.denominator()});
    return rep;
}

namespace {

// One component of V-bar: Psi_v(a) = join of rho_{sigma_v(w)}(a_w) over w in Hv n Vbar.
struct Component {
    std::vector<std::uint32_t> pts;  // global points
    std::vector<std::vector<std::pair<std::size_t, GElem>>> deps;
};

struct ReplayContext {
    const GQframe& M;
    const FiniteLattice& L;
    explicit ReplayContext(const GQframe& m) : M(m), L(*m.M) {}

    Tuple psi(const Component& C, const Tuple& a) const {
        Tuple out(C.pts.size(), L.bottom());
        for (std::size_t v = 0; v < C.pts.size(); ++v)
            for (auto [w, h] : C.deps[v]) out[v] = L.join(out[v], M.rho[h](a[w]));
        return out;
    }
    Tuple join(const Tuple& a, const Tuple& b) const {
        Tuple out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = L.join(a[i], b[i]);
        return out;
    }
    Tuple meet(const Tuple& a, const Tuple& b) const {
        Tuple out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = L.meet(a[i], b[i]);
        return out;
    }
    bool leq(const Tuple& a, const Tuple& b) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!L.leq(a[i], b[i])) return false;
        return true;
    }
    Tuple phi(const QframeHom& f, const Tuple& a) const {
        Tuple out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
        return out;
    }
    // iota_w(j)
    static Tuple point(std::size_t m, std::size_t w, Elem j, Elem zero) {
        Tuple t(m, zero);
        t[w] = j;
        return t;
    }
};

// Explicit lattice of a presented one, in enumeration order, with the tuple of each element.
std::pair<LatticePtr, std::vector<Tuple>> materialize(const PresentedLattice& P) {
    std::vector<Tuple> elems{P.bottom()};
    std::unordered_map<Tuple, std::size_t, boost::hash<Tuple>> index{{P.bottom(), 0}};
    for (std::size_t s = 0; s < elems.size(); ++s)
        for (const auto& g : P.generators()) {
            auto t = P.join(elems[s], g);
            if (index.emplace(t, elems.size()).second) elems.push_back(std::move(t));
        }
    const auto n = elems.size();
    const auto words = (n + 63) / 64;
    std::vector<std::uint64_t> up(n * words, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (P.leq(elems[i], elems[j])) up[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
    return {share(FiniteLattice::from_up_sets(n, std::move(up))), std::move(elems)};
}

}  // namespace

ProofReplay proof_construction(const MainInstance& I, std::shared_ptr<const QuasiAction> qa, const ReplayOptions& opt) {
    const auto& M = *I.M;
    const auto& L = *M.M;
    const auto& G = M.G;
    const auto hyp = verify_main_hypotheses(I);
    ProofReplay out;
    out.l = hyp.l;
    if (out.l == 0) throw Error("BadParams", "the replay needs l >= 1");
    const auto& DG = qa->group();
    if (!DG.is_finite() || DG.finite_group().size() != G.size()) throw Error("BadParams", "the quasi-action is not by the instance's group");

    std::vector<GroupWord> Kw;
    for (auto k : I.K) Kw.push_back(DG.of(k));
    const auto Hw = DG.products(Kw, Kw);
    for (const auto& h : Hw) out.H.push_back(static_cast<GElem>(h[0]));
    out.n = opt.n ? opt.n : 2 * out.H.size() * out.l;
    if (out.n < 2 * out.H.size() * out.l)
        throw Error("BadParams", "n < 2|H|l", {static_cast<std::int64_t>(out.n), static_cast<std::int64_t>(2 * out.H.size() * out.l)});
    out.good = good_points(*qa, Kw, out.n, opt.eps);
    out.V = qa->size();
    out.conditions = mutual_exclusivity(I);
    const auto& Vbar = out.good.Vbar;

    // sigma_v(hv) = h
    std::vector<std::int64_t> pos(out.V, -1);
    for (std::size_t i = 0; i < Vbar.size(); ++i) pos[Vbar[i]] = static_cast<std::int64_t>(i);
    std::vector<std::vector<std::pair<std::uint32_t, GElem>>> sigma(Vbar.size());
    for (std::size_t i = 0; i < Vbar.size(); ++i) {
        std::set<std::uint32_t> seen;
        for (std::size_t j = 0; j < Hw.size(); ++j) {
            const auto w = qa->act(Hw[j], Vbar[i]);
            out.sigma_bijective = out.sigma_bijective && seen.insert(w).second;
            if (pos[w] >= 0) sigma[i].push_back({w, out.H[j]});
        }
    }
    if (opt.corrupt_sigma_at) {
        auto& s = sigma.at(*opt.corrupt_sigma_at);
        if (s.size() >= 2) std::swap(s[0].second, s[1].second);
    }

    // components: v joined with every w its Psi_v reads
    std::vector<std::size_t> parent(Vbar.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < Vbar.size(); ++i)
        for (auto [w, h] : sigma[i]) parent[find(i)] = find(static_cast<std::size_t>(pos[w]));
    std::map<std::size_t, std::size_t> root_to_comp;
    std::vector<std::size_t> comp_of(Vbar.size()), local(Vbar.size());
    std::vector<Component> comps;
    for (std::size_t i = 0; i < Vbar.size(); ++i) {
        const auto [it, fresh] = root_to_comp.emplace(find(i), comps.size());
        if (fresh) comps.emplace_back();
        comp_of[i] = it->second;
        local[i] = comps[it->second].pts.size();
        comps[it->second].pts.push_back(Vbar[i]);
    }
    for (auto& C : comps) C.deps.resize(C.pts.size());
    for (std::size_t i = 0; i < Vbar.size(); ++i)
        for (auto [w, h] : sigma[i]) comps[comp_of[i]].deps[local[i]].push_back({local[static_cast<std::size_t>(pos[w])], h});
    out.components = comps.size();

    const ReplayContext cx(M);
    const auto yH = join_rho(M, out.H, I.ybar), yK = join_rho(M, I.K, I.ybar);
    if (!L.leq(I.Phi(yK), yH)) throw Error("LemmaViolation", "Phi(ybar_K) is not below ybar_H");
    const auto JH = join_irreducibles_below(L, yH), JK = join_irreducibles_below(L, yK), Je = join_irreducibles_below(L, I.ybar);
    std::vector<Elem> belowH, belowK, below;
    for (Elem x = 0; x < L.size(); ++x) {
        if (L.leq(x, yH)) belowH.push_back(x);
        if (L.leq(x, yK)) belowK.push_back(x);
        if (L.leq(x, I.ybar)) below.push_back(x);
    }
    std::mt19937_64 rng(opt.seed);
    auto random_tuple = [&](std::size_t m, const std::vector<Elem>& from) {
        Tuple t(m);
        for (auto& x : t) x = from[rng() % from.size()];
        return t;
    };
    const auto zero = L.bottom();

    auto key = std::make_shared<KeyLemmaInput>();
    std::size_t l1_total = 0, l2_total = 0;
    bool sizes_known = true, hom_ok = true;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto& C = comps[c];
        const auto m = C.pts.size();
        std::vector<Tuple> gH, gK, gKimg;
        for (std::size_t w = 0; w < m; ++w) {
            for (auto j : JH) gH.push_back(ReplayContext::point(m, w, j, zero));
            for (auto j : JK) gK.push_back(ReplayContext::point(m, w, j, zero));
        }
        std::vector<Tuple> L2gens, L1gens;
        for (const auto& g : gH) L2gens.push_back(cx.psi(C, g));
        // Phibar on generators, checking that equal images have equal Phi-images
        std::map<Tuple, Tuple> phibar_of;
        for (const auto& g : gK) {
            auto x = cx.psi(C, g);
            auto y = cx.psi(C, cx.phi(I.Phi, g));
            const auto [it, fresh] = phibar_of.emplace(x, y);
            if (!fresh && it->second != y) out.phi_compatible = false;
        }
        for (auto& [x, y] : phibar_of) {
            L1gens.push_back(x);
            gKimg.push_back(y);
        }
        PresentedLattice L2(M.M, m, std::move(L2gens));
        PresentedLattice L1(M.M, m, L1gens);
        // keep images aligned with the generators the presented lattice kept
        std::vector<Tuple> images;
        for (const auto& g : L1.generators()) images.push_back(phibar_of.at(g));
        PresentedHom hom{L1, L2, std::move(images)};

        // sampled related pairs a ~ b = a v z with Psi(z) <= Psi(a)
        std::vector<Tuple> psiH, psiK;
        for (const auto& g : gH) psiH.push_back(cx.psi(C, g));
        for (const auto& g : gK) psiK.push_back(cx.psi(C, g));
        auto related = [&](const std::vector<Tuple>& gens, const std::vector<Tuple>& psis,
                           const std::vector<Elem>& from) -> std::optional<std::pair<Tuple, Tuple>> {
            auto a = random_tuple(m, from);
            const auto pa = cx.psi(C, a);
            std::vector<const Tuple*> cand;
            for (std::size_t i = 0; i < gens.size(); ++i)
                if (!cx.leq(gens[i], a) && cx.leq(psis[i], pa)) cand.push_back(&gens[i]);
            if (cand.empty()) return std::nullopt;
            auto b = cx.join(a, *cand[rng() % cand.size()]);
            return std::pair{std::move(a), std::move(b)};
        };
        for (std::size_t s = 0; s < opt.samples; ++s) {
            if (auto ab = related(gH, psiH, belowH)) {
                const auto& [a, b] = *ab;
                ++out.related_pairs;
                const auto z = (s % 2) ? random_tuple(m, belowH) : gH[rng() % gH.size()];
                if (cx.psi(C, cx.join(a, z)) != cx.psi(C, cx.join(b, z))) out.cong_join = false;
                if (out.cong_meet && cx.psi(C, cx.meet(a, z)) != cx.psi(C, cx.meet(b, z))) {
                    out.cong_meet = false;
                    out.cong_meet_witness = {static_cast<std::int64_t>(c)};
                    for (const auto* t : {&a, &b, &z})
                        for (auto x : *t) out.cong_meet_witness.push_back(x);
                }
            }
            if (auto ab = related(gK, psiK, belowK)) {
                const auto& [a, b] = *ab;
                if (cx.psi(C, cx.phi(I.Phi, a)) != cx.psi(C, cx.phi(I.Phi, b))) out.phi_compatible = false;
                if (hom(cx.psi(C, a)) != cx.psi(C, cx.phi(I.Phi, a))) out.phibar_commutes = false;
            }
            // the class of a has a maximum: the join of the generators it dominates
            const auto a = random_tuple(m, belowH);
            const auto pa = cx.psi(C, a);
            Tuple mx(m, zero);
            for (std::size_t i = 0; i < gH.size(); ++i)
                if (cx.leq(psiH[i], pa)) mx = cx.join(mx, gH[i]);
            out.cong_max = out.cong_max && cx.psi(C, mx) == pa;
        }

        const auto s1 = L1.size(4096), s2 = L2.size(4096);
        if (s1 && s2) {
            l1_total += *s1;
            l2_total += *s2;
            const auto [E1, t1] = materialize(L1);
            const auto [E2, t2] = materialize(L2);
            std::unordered_map<Tuple, Elem, boost::hash<Tuple>> idx2;
            for (Elem i = 0; i < t2.size(); ++i) idx2.emplace(t2[i], i);
            std::vector<Elem> map(t1.size());
            for (Elem i = 0; i < t1.size(); ++i) map[i] = idx2.at(hom(t1[i]));
            try {
                check_hom(QframeHom::trusted(E1, E2, std::move(map)), opt.seed + c);
            } catch (const Error&) {
                hom_ok = false;
            }
        } else {
            sizes_known = false;
        }
        key->comps.push_back(std::move(hom));
    }
    if (sizes_known) {
        out.L1_size = l1_total;
        out.L2_size = l2_total;
        out.phibar_hom = hom_ok;
    }

    // xbar_{kv} = Psi(iota_v(ybar_k))
    std::map<std::pair<std::size_t, Tuple>, std::pair<std::uint32_t, GElem>> by_value;
    std::map<std::uint32_t, std::pair<std::uint32_t, GElem>> origin;
    for (std::size_t i = 0; i < Vbar.size(); ++i) {
        const auto c = comp_of[i];
        const auto& C = comps[c];
        for (auto k : I.K) {
            PointElem p{c, cx.psi(C, ReplayContext::point(C.pts.size(), local[i], hyp.y_g[k], zero))};
            const auto w = qa->act(DG.of(k), Vbar[i]);
            const auto [jt, vfresh] = by_value.emplace(std::pair{c, p.x}, std::pair{Vbar[i], k});
            const auto [it, fresh] = key->xbar.emplace(w, p);
            const auto [ot, ofresh] = origin.emplace(w, std::pair{Vbar[i], k});
            if (!out.xbar_well_defined) continue;
            if (!fresh && (it->second.comp != p.comp || it->second.x != p.x)) {
                out.xbar_well_defined = false;
                out.xbar_witness = {Vbar[i], k, ot->second.first, ot->second.second};
            } else if (!vfresh && qa->act(DG.of(jt->second.second), jt->second.first) != w) {
                out.xbar_well_defined = false;
                out.xbar_witness = {Vbar[i], k, jt->second.first, jt->second.second};
            }
        }
    }
    {
        std::vector<std::vector<Tuple>> fam(comps.size());
        for (const auto& [w, p] : key->xbar) fam[p.comp].push_back(p.x);
        out.xbar_independent = out.xbar_covering = out.xbar_lengths = true;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            const auto& L1 = key->comps[c].source;
            const auto fp = L1.family(fam[c]);
            out.xbar_independent = out.xbar_independent && fp.join_independent;
            auto j = L1.bottom();
            for (const auto& x : fam[c]) j = L1.join(j, x);
            out.xbar_covering = out.xbar_covering && j == L1.top();
            for (const auto& x : fam[c]) out.xbar_lengths = out.xbar_lengths && L1.height(x, opt.cap) == out.l;
        }
    }

    // pi_2 on Q^e
    out.pi2_exhaustive = true;
    out.Qe_inside_image = true;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto& C = comps[c];
        const auto& hom = key->comps[c];
        const auto m = C.pts.size();
        std::vector<Tuple> ge;
        for (std::size_t v = 0; v < m; ++v)
            for (auto j : Je) ge.push_back(cx.psi(C, ReplayContext::point(m, v, j, zero)));
        for (const auto& g : ge) {
            // g lies in the join-closed image iff it is the join of the image generators below it
            auto j = hom.target.bottom();
            for (const auto& y : hom.images)
                if (hom.target.leq(y, g)) j = hom.target.join(j, y);
            out.Qe_inside_image = out.Qe_inside_image && j == g;
        }
        out.pi2_Qe_length += generated_length(L, m, ge, opt.cap);
        double total = 1;
        for (std::size_t i = 0; i < m; ++i) total *= static_cast<double>(below.size());
        if (total <= 65536) {
            // every tuple of Q^e, by mixed radix
            std::set<Tuple> images;
            Tuple a(m, 0);
            for (std::size_t idx = 0; idx < static_cast<std::size_t>(total); ++idx) {
                auto r = idx;
                for (std::size_t i = 0; i < m; ++i) {
                    a[i] = below[r % below.size()];
                    r /= below.size();
                }
                const auto p = cx.psi(C, a);
                images.insert(p);
                for (std::size_t v = 0; v < m; ++v) out.pi2_recovers_components = out.pi2_recovers_components && L.meet(I.ybar, p[v]) == a[v];
            }
            out.pi2_injective_on_Qe = out.pi2_injective_on_Qe && images.size() == static_cast<std::size_t>(total);
        } else {
            out.pi2_exhaustive = false;
            for (std::size_t s = 0; s < opt.samples; ++s) {
                const auto a = random_tuple(m, below);
                const auto p = cx.psi(C, a);
                for (std::size_t v = 0; v < m; ++v) out.pi2_recovers_components = out.pi2_recovers_components && L.meet(I.ybar, p[v]) == a[v];
            }
            out.pi2_injective_on_Qe = out.pi2_injective_on_Qe && out.pi2_recovers_components;
        }
    }

    for (const auto& hom : key->comps) out.im_length += hom.image_length(opt.cap);
    const auto V = static_cast<std::int64_t>(out.V);
    const auto l = static_cast<std::int64_t>(out.l);
    out.key_bound = (Rational(1) - Rational(1, 2 * static_cast<std::int64_t>(out.H.size()) * l)) * Rational(V * l);
    out.key_bound_holds = Rational(static_cast<std::int64_t>(out.im_length)) <= out.key_bound;
    out.lower_bound = (Rational(1) - Rational(1, static_cast<std::int64_t>(out.n))) * Rational(V * l);
    out.lower_bound_holds = Rational(static_cast<std::int64_t>(out.pi2_Qe_length)) >= out.lower_bound;

    key->qa = qa;
    key->K = Kw;
    key->good = out.good;
    key->l = out.l;
    key->cap = opt.cap;
    out.key_input = key;
    try {
        out.key = replay_key_lemma(*key);
    } catch (const Error& e) {
        if (e.code() == "LemmaViolation") {
            out.key_bound_holds = false;
            out.key_rejected = e.what();
        } else if (e.code() == "HypothesisFailed") {
            out.key_rejected = e.what();
        } else {
            throw;
        }
    }
    return out;
}

PrelHighWitness prel_high_witness(const GQframe& M, const QframeHom& Phi, Elem y) {
    const auto& L = *M.M;
    const auto& G = M.G;
    if (G.size() > 16) throw Error("SizeLimitExceeded", "subset search needs |G| <= 16");
    std::vector<Elem> yg;
    for (GElem g = 0; g < G.size(); ++g) yg.push_back(M.rho[g](y));
    const auto fp = family_props(L, yg);
    if (!fp.join_independent || L.join_all(yg) != L.top()) throw Error("NotABasis", "the translates of y do not form a basis");
    const auto info = kernel_and_algebraicity(Phi);
    if (!info.algebraic) throw Error("NotAlgebraic", "Phi is not algebraic");
    PrelHighWitness out;
    out.surjective = info.surjective;
    out.injective = info.injective;
    for_subsets_by_size(G.size(), [&](const std::vector<GElem>& K) {
        Elem j = L.bottom();
        for (auto g : K) j = L.join(j, Phi(yg[g]));
        if (!L.leq(y, j)) return false;
        out.surj_K = K;
        return true;
    });
    for_subsets_by_size(G.size(), [&](const std::vector<GElem>& K) {
        Elem j = L.bottom();
        for (auto g : K) j = L.join(j, yg[g]);
        const auto x = L.meet(info.kernel, j);
        if (x == L.bottom()) return false;
        out.noninj_K = K;
        out.x = x;
        return true;
    });
    out.biconditionals = out.surj_K.has_value() == info.surjective && out.noninj_K.has_value() == !info.injective;
    return out;
}

namespace {

// f restricted to [0, t] and pushed through the quotient; checks well-definedness.
struct Transport {
    const FiniteLattice& L;
    std::vector<std::int64_t> seg_of;  // element of L -> element of the segment
    const Torsion& T;
    const Quotient& Q;

    QframeHom operator()(const QframeHom& f, const char* what) const {
        const auto& S = T.segment;
        std::vector<Elem> map(Q.lattice->size());
        std::vector<bool> set(map.size());
        for (Elem x = 0; x < S.size(); ++x) {
            const auto fx = f(T.embed[x]);
            if (!L.leq(fx, T.t)) hyp_failed("transport", std::string(what) + " does not preserve the torsion part", {x});
            const auto q = Q.projection(x);
            const auto fq = Q.projection(static_cast<Elem>(seg_of[fx]));
            if (set[q] && map[q] != fq) hyp_failed("transport", std::string(what) + " does not respect the congruence", {x});
            map[q] = fq;
            set[q] = true;
        }
        return QframeHom::trusted(Q.lattice, Q.lattice, std::move(map));
    }
};

}  // namespace

HigherReport main_higher_pipeline(const GQframe& M, const QframeHom& Phi, Elem y, HigherMode mode, const std::optional<QframeHom>& psi) {
    const auto& L = *M.M;
    const auto& G = M.G;
    HigherReport out;
    const auto info = kernel_and_algebraicity(Phi);
    if (!info.surjective) hyp_failed("surjective", "Phi is not onto");
    if (!info.algebraic) hyp_failed("algebraic", "Phi is not algebraic");
    for (GElem g = 0; g < G.size(); ++g)
        for (Elem x = 0; x < L.size(); ++x)
            if (Phi(M.rho[g](x)) != M.rho[g](Phi(x))) hyp_failed("equivariant", "Phi rho_g != rho_g Phi", {g, x});
    std::vector<Elem> yg;
    for (GElem g = 0; g < G.size(); ++g) yg.push_back(M.rho[g](y));
    if (!family_props(L, yg).join_independent || L.join_all(yg) != L.top()) hyp_failed("basis", "the translates of y do not form a basis");
    if (!chain_conditions(L).noetherian) hyp_failed("Noetherian", "M is not Noetherian");
    if (mode == HigherMode::a_prime_star && !psi) throw Error("SplittingMissing", "the socle path needs psi with Phi psi = id");

    // finite carriers: the kernel has Gabriel dimension 1 unless it is 0
    const auto [kseg, kemb] = L.segment(L.bottom(), info.kernel);
    const auto gd = gabriel_dim(kseg);
    out.alpha = (gd.kind == DimensionValue::Kind::ordinal && gd.value.is_successor()) ? gd.value.predecessor() : Ordinal{};

    const auto T = torsion(L, SerreClass::gdim_le(out.alpha.successor()));
    out.torsion_size = T.segment.size();
    std::vector<std::int64_t> seg_of(L.size(), -1);
    for (Elem x = 0; x < T.embed.size(); ++x) seg_of[T.embed[x]] = x;
    const auto Tp = share(T.segment);
    const auto loc = localize(Tp, SerreClass::gdim_le(out.alpha));
    const auto& Q = loc.quotient;
    out.quotient_size = Q.lattice->size();
    const Transport tr{L, seg_of, T, Q};
    if (seg_of[y] < 0) hyp_failed("transport", "y is not torsion");
    const auto ybar = Q.projection(static_cast<Elem>(seg_of[y]));

    GQframe Mq{G, Q.lattice, {}};
    for (GElem g = 0; g < G.size(); ++g) Mq.rho.push_back(tr(M.rho[g], "rho_g"));
    try {
        verify_gqframe(Mq);
        out.transported_rho = true;
    } catch (const Error&) {
        out.transported_rho = false;
    }
    const auto Phib = tr(Phi, "Phi");
    const auto& LQ = *Q.lattice;
    out.transported_equivariant = true;
    for (GElem g = 0; g < G.size(); ++g)
        for (Elem x = 0; x < LQ.size(); ++x) out.transported_equivariant = out.transported_equivariant && Phib(Mq.rho[g](x)) == Mq.rho[g](Phib(x));
    std::vector<Elem> ybg;
    for (GElem g = 0; g < G.size(); ++g) ybg.push_back(Mq.rho[g](ybar));
    out.transported_basis = family_props(LQ, ybg).join_independent && LQ.join_all(ybg) == LQ.top();

    if (mode == HigherMode::a_star) {
        out.l = LQ.height(ybar);
    } else {
        for (Elem x = 0; x < L.size(); ++x)
            if (Phi((*psi)(x)) != x) hyp_failed("splitting", "Phi psi != id", {x});
        const auto psib = tr(*psi, "psi");
        const auto s = socle_series(LQ).socle;
        out.socle_invariant = LQ.leq(Phib(s), s) && LQ.leq(psib(s), s);
        for (const auto& r : Mq.rho) out.socle_invariant = out.socle_invariant && LQ.leq(r(s), s);
        out.splitting_on_socle = true;
        for (Elem x = 0; x < LQ.size(); ++x)
            if (LQ.leq(x, s)) out.splitting_on_socle = out.splitting_on_socle && Phib(psib(x)) == x;
        out.l = LQ.height(socle_of(LQ, ybar));
        std::vector<Elem> sg;
        for (auto v : ybg) sg.push_back(socle_of(LQ, v));
        out.socle_family_independent = family_props(LQ, sg).join_independent;
    }
    out.verdict_injective = true;
    out.direct_injective = kernel_and_algebraicity(Phib).injective && info.injective;
    out.agrees = out.verdict_injective == out.direct_injective;
    return out;
}

QframeHom socle_restriction(const QframeHom& f) {
    const auto& S = *f.source;
    const auto& T = *f.target;
    const auto ss = socle_series(S).socle, ts = socle_series(T).socle;
    if (!T.leq(f(ss), ts)) throw Error("NotFullyInvariant", "f does not map the socle into the socle", {ss, f(ss), ts});
    auto [sseg, semb] = S.segment(S.bottom(), ss);
    auto [tseg, temb] = T.segment(T.bottom(), ts);
    std::vector<std::int64_t> back(T.size(), -1);
    for (Elem x = 0; x < temb.size(); ++x) back[temb[x]] = x;
    std::vector<Elem> map(semb.size());
    for (Elem x = 0; x < semb.size(); ++x) map[x] = static_cast<Elem>(back[f(semb[x])]);
    return QframeHom::trusted(share(std::move(sseg)), share(std::move(tseg)), std::move(map));
}

std::vector<std::vector<GElem>> symmetric_sets(const FiniteGroup& G) {
    std::vector<std::vector<GElem>> out;
    if (G.size() > 16) throw Error("SizeLimitExceeded", "symmetric subsets need |G| <= 16");
    for_subsets_by_size(G.size(), [&](const std::vector<GElem>& S) {
        if (std::find(S.begin(), S.end(), G.identity()) != S.end() && symmetric(G, S)) out.push_back(S);
        return false;
    });
    return out;
}

Corpus main_instance_corpus(const CorpusOptions& opt) {
    Corpus out;
    std::vector<std::pair<std::string, CrossedProduct>> rings;
    for (std::size_t n = 1; n <= opt.max_n; ++n)
        rings.emplace_back("F_2[Z/" + std::to_string(n) + "]",
                           verify_crossed(CrossedProductSpec::group_ring(FiniteRing::zmod(2), FiniteGroup::cyclic(n))));
    {
        const auto F4 = FiniteRing::fq(2, {1, 1, 1});
        auto gal = CrossedProductSpec::group_ring(F4, FiniteGroup::cyclic(2));
        gal.sigma[1] = F4.frobenius();
        rings.emplace_back("F_4*Z/2", verify_crossed(std::move(gal)));
        auto tw = CrossedProductSpec::group_ring(FiniteRing::zmod(3), FiniteGroup::cyclic(2));
        tw.tau[3] = Row{2};
        rings.emplace_back("Z/3*Z/2 twisted", verify_crossed(std::move(tw)));
        rings.emplace_back("Z/4[Z/2]", verify_crossed(CrossedProductSpec::group_ring(FiniteRing::zmod(4), FiniteGroup::cyclic(2))));
        rings.emplace_back("F_2[Z/2xZ/2]", verify_crossed(CrossedProductSpec::group_ring(
                                               FiniteRing::zmod(2), FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)))));
    }
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const auto& [name, C] = rings[r];
        auto model = std::make_shared<const LatticeModel>(lattice_model(C, FiniteModule::regular(C.ring())));
        const auto M = std::make_shared<const GQframe>(GQframe::from_model(*model));
        const auto& L = *M->M;
        const auto& G = M->G;
        const bool group_ring = r < opt.max_n;
        auto endos = endomorphisms(model->M, group_ring ? 4096 : opt.crossed_endos, opt.seed + r);
        // ybar with independent translates
        std::vector<Elem> ys;
        for (Elem y = 1; y < L.size(); ++y) {
            std::vector<Elem> yg;
            for (GElem g = 0; g < G.size(); ++g) yg.push_back(M->rho[g](y));
            std::set<Elem> distinct(yg.begin(), yg.end());
            if (distinct.size() == G.size() && family_props(L, yg).join_independent) ys.push_back(y);
        }
        const auto sets = symmetric_sets(G);
        for (std::size_t p = 0; p < endos.size(); ++p) {
            const auto lift = model->lift(endos[p]);
            for (auto y : ys)
                for (const auto& F : sets) {
                    if (!L.leq(lift.Phi(y), join_rho(*M, F, y))) continue;
                    for (const auto& K : sets) {
                        if (!std::includes(K.begin(), K.end(), F.begin(), F.end())) continue;
                        MainInstance I;
                        I.name = name + " endo " + std::to_string(p) + " y " + L.label(y) + " |F|=" + std::to_string(F.size()) +
                                 " |K|=" + std::to_string(K.size());
                        I.M = M;
                        I.Phi = lift.Phi;
                        I.ybar = y;
                        I.F = F;
                        I.K = K;
                        out.instances.push_back(std::move(I));
                    }
                }
        }
        out.models.push_back(model);
        out.endos.push_back(std::move(endos));
    }
    return out;
}

}  // namespace qfw
