#include "qfw/suites.hpp"

#include <map>
#include <random>
#include <set>

namespace qfw::suites {

namespace {

std::string str(const Rational& r) { return format_rational(r); }

std::string describe(const Error& e) {
    std::string s = e.what();
    if (!e.witness().empty()) {
        s += " [";
        for (std::size_t i = 0; i < e.witness().size(); ++i) s += (i ? "," : "") + std::to_string(e.witness()[i]);
        s += "]";
    }
    return s;
}

// Corpus instances are shared by three suites.
const Corpus& corpus(std::uint64_t seed, std::size_t max_n) {
    static std::map<std::pair<std::uint64_t, std::size_t>, Corpus> cache;
    auto it = cache.find({seed, max_n});
    if (it == cache.end()) {
        CorpusOptions opt;
        opt.seed = seed;
        opt.max_n = max_n;
        it = cache.emplace(std::pair{seed, max_n}, main_instance_corpus(opt)).first;
    }
    return it->second;
}

FiniteModule vector_space(std::uint32_t p, std::size_t d) {
    return FiniteModule::make(FiniteRing::zmod(p), p, d, {Matrix::identity(d, p)});
}

CrossedProduct galois_f4() {
    const auto F4 = FiniteRing::fq(2, {1, 1, 1});
    auto spec = CrossedProductSpec::group_ring(F4, FiniteGroup::cyclic(2));
    spec.sigma[1] = F4.frobenius();
    return verify_crossed(std::move(spec));
}

// Elements sorted so that every cover goes forward.
std::vector<Elem> by_height(const FiniteLattice& L) {
    std::vector<Elem> order(L.size());
    for (Elem x = 0; x < L.size(); ++x) order[x] = x;
    std::stable_sort(order.begin(), order.end(), [&](Elem a, Elem b) { return L.height(a) < L.height(b); });
    return order;
}

// ---------------------------------------------------------------------------

SuiteResult jordan_holder(const SuiteContext& ctx) {
    SuiteResult r;
    const auto max_n = ctx.param<std::uint64_t>("max_n", 10000);
    std::uint64_t chains = 0, lattices = 0;
    for (std::uint64_t n = 1; n <= max_n; ++n) {
        const auto L = FiniteLattice::divisor(n);
        const auto N = L.size();
        std::vector<std::size_t> lo(N, SIZE_MAX), hi(N, 0);
        std::vector<std::uint64_t> count(N, 0);
        lo[L.bottom()] = 0;
        count[L.bottom()] = 1;
        for (auto x : by_height(L)) {
            if (!count[x]) continue;
            for (auto y : L.upper_covers(x)) {
                lo[y] = std::min(lo[y], lo[x] + 1);
                hi[y] = std::max(hi[y], hi[x] + 1);
                count[y] += count[x];
            }
        }
        const auto w = big_omega(n);
        if (lo[L.top()] != w || hi[L.top()] != w)
            r.fail("n=" + std::to_string(n) + ": maximal chains of length " + std::to_string(lo[L.top()]) + ".." +
                   std::to_string(hi[L.top()]) + ", Omega=" + std::to_string(w));
        chains += count[L.top()];
        ++lattices;
    }
    r.measured = {{"max_n", max_n}, {"lattices", lattices}, {"maximal_chains", chains}};
    return r;
}

SuiteResult length_additivity(const SuiteContext& ctx) {
    SuiteResult r;
    const auto max_d = ctx.param<std::size_t>("max_d", 4);
    const auto max_n = ctx.param<std::uint64_t>("max_n", 1000);
    std::uint64_t pairs = 0, lattices = 0;
    // values-based length: Omega of the divisor or of the subspace order
    auto run = [&](const FiniteLattice& L, const std::string& name) {
        const auto& v = L.values();
        if (v.size() != L.size()) {
            r.fail(name + ": no values");
            return;
        }
        for (Elem x = 0; x < L.size(); ++x)
            if (L.height(x) != big_omega(v[x]) - big_omega(v[L.bottom()])) r.fail(name + ": height differs from values at " + L.label(x));
        for (Elem x = 0; x < L.size(); ++x)
            for (Elem y = 0; y < L.size(); ++y) {
                ++pairs;
                if (L.height(L.join(x, y)) + L.height(L.meet(x, y)) != L.height(x) + L.height(y))
                    r.fail(name + ": additivity fails at " + L.label(x) + ", " + L.label(y));
            }
        ++lattices;
    };
    for (std::size_t d = 1; d <= max_d; ++d) run(*submodule_lattice(vector_space(2, d), ctx.caps).lattice(), "F_2^" + std::to_string(d));
    for (std::uint64_t n = 1; n <= max_n; ++n) run(FiniteLattice::divisor(n), "divisor(" + std::to_string(n) + ")");
    r.measured = {{"lattices", lattices}, {"pairs", pairs}};
    return r;
}

std::optional<FiniteLattice> random_lattice(std::size_t n, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution edge(density);
    std::vector<std::pair<Elem, Elem>> pairs;
    for (Elem i = 0; i < n; ++i) {
        if (i) pairs.emplace_back(0, i);
        if (i + 1 < n) pairs.emplace_back(i, static_cast<Elem>(n - 1));
        for (Elem j = i + 1; j + 1 < n; ++j)
            if (edge(rng)) pairs.emplace_back(i, j);
    }
    try {
        return FiniteLattice::from_pairs(n, pairs);
    } catch (const Error&) {
        return std::nullopt;
    }
}

SuiteResult quotients(const SuiteContext& ctx) {
    SuiteResult r;
    const auto want = ctx.param<std::size_t>("count", 200);
    const auto max_elements = ctx.param<std::size_t>("max_elements", 12);
    std::mt19937_64 rng(ctx.seed);
    std::size_t done = 0, trials = 0, classes = 0;
    while (done < want && trials < 100 * want) {
        ++trials;
        auto L = random_lattice(2 + rng() % (max_elements - 1), 0.3, rng);
        if (!L) continue;
        const auto Lp = share(std::move(*L));
        const auto a = static_cast<Elem>(rng() % Lp->size()), b = static_cast<Elem>(rng() % Lp->size());
        const auto R = close_relation(*Lp, {{a, b}});
        try {
            verify_congruence(*Lp, R, true);
        } catch (const Error&) {
            continue;
        }
        const auto Q = quotient_by_congruence(Lp, R);
        try {
            verify_hom(Q.projection);
            if (!kernel_and_algebraicity(Q.projection).surjective) r.fail("projection not surjective on trial " + std::to_string(trials));
            if (!lattice_props(*Q.lattice).modular && lattice_props(*Lp).modular) r.fail("modularity lost on trial " + std::to_string(trials));
        } catch (const Error& e) {
            r.fail("trial " + std::to_string(trials) + ": " + describe(e));
        }
        for (Elem x = 0; x < Lp->size(); ++x)
            for (Elem y = 0; y < Lp->size(); ++y)
                if (Q.lattice->join(R.cls[x], R.cls[y]) != R.cls[Lp->join(x, y)] || Q.lattice->meet(R.cls[x], R.cls[y]) != R.cls[Lp->meet(x, y)])
                    r.fail("class operations differ on trial " + std::to_string(trials));
        classes += R.classes;
        ++done;
    }
    if (done < want) r.fail("only " + std::to_string(done) + " strong congruences found");
    r.measured = {{"congruences", done}, {"trials", trials}, {"classes", classes}};
    return r;
}

SuiteResult dimension(const SuiteContext& ctx) {
    SuiteResult r;
    const auto max_j = ctx.param<std::uint32_t>("max_omega", 3);
    const auto max_m = ctx.param<std::uint64_t>("max_finite", 4);
    json chains = json::array();
    for (std::uint32_t j = 0; j <= max_j; ++j)
        for (std::uint64_t m = 0; m <= max_m; ++m) {
            if (j == max_j && m > 0) continue;
            std::vector<Ordinal::Term> terms;
            if (j) terms.push_back({1, j});
            if (m) terms.push_back({0, m});
            const ChainLattice C{Ordinal::from_terms(terms), Orientation::reversed};
            const auto k = krull_dim(C), g = gabriel_dim(C);
            const auto name = C.alpha.to_string();
            if (!C.is_trivial() && !(g.kind == DimensionValue::Kind::ordinal && k.kind == DimensionValue::Kind::ordinal &&
                                     g.value == k.value.successor()))
                r.fail(name + ": G.dim " + g.to_string() + " != K.dim + 1 = " + k.to_string() + " + 1");
            chains.push_back({{"alpha", name}, {"krull", k.to_string()}, {"gabriel", g.to_string()}});
        }
    // finite lattices of positive length: K.dim 0, G.dim 1
    for (std::uint64_t n : {2ULL, 12ULL, 360ULL}) {
        const auto L = FiniteLattice::divisor(n);
        if (krull_dim(L) != DimensionValue::of(0) || gabriel_dim(L) != DimensionValue::of(1)) r.fail("divisor(" + std::to_string(n) + ")");
    }
    if (krull_dim(FiniteLattice::chain(0)) != DimensionValue::minus_one()) r.fail("trivial lattice");
    r.measured = {{"chains", chains}};
    return r;
}

SuiteResult torsion_laws(const SuiteContext& ctx) {
    SuiteResult r;
    std::vector<std::pair<std::string, FiniteLattice>> Ls;
    for (std::uint64_t n : {12ULL, 36ULL, 60ULL, 72ULL, 360ULL, 720ULL})
        Ls.emplace_back("divisor(" + std::to_string(n) + ")", FiniteLattice::divisor(n));
    for (std::size_t d = 1; d <= ctx.param<std::size_t>("max_d", 3); ++d)
        Ls.emplace_back("F_2^" + std::to_string(d), *submodule_lattice(vector_space(2, d), ctx.caps).lattice());
    Ls.emplace_back("Z/4 + Z/2", *submodule_lattice(FiniteModule::make(FiniteRing::zmod(4), 4, 2, {Matrix::identity(2, 4)})).lattice());
    const std::vector<SerreClass> classes{SerreClass::primary(2), SerreClass::primary(3), SerreClass::gdim_le(Ordinal{}),
                                          SerreClass::gdim_le(Ordinal::finite(1))};
    std::uint64_t elements = 0, pairs = 0;
    for (const auto& [name, L] : Ls)
        for (const auto& C : classes) {
            const auto t1 = torsion(L, C).t;
            const auto n = static_cast<Elem>(L.size());
            std::vector<Elem> t(n);
            for (Elem a = 0; a < n; ++a) t[a] = torsion_of(L, C, a);
            for (Elem a = 0; a < n; ++a) {
                ++elements;
                if (t[a] != L.meet(a, t1)) r.fail(name + " " + C.name + ": t(a) != a ^ t(1) at " + L.label(a));
                for (Elem b = 0; b < n; ++b) {
                    if (L.meet(a, b) != L.bottom()) continue;
                    ++pairs;
                    const auto tab = t[L.join(a, b)];
                    if (!L.leq(tab, L.join(t[a], b))) r.fail(name + " " + C.name + ": t(a v b) not below t(a) v b");
                    if (tab != L.join(t[a], t[b])) r.fail(name + " " + C.name + ": t(a v b) != t(a) v t(b)");
                }
            }
        }
    r.measured = {{"lattices", Ls.size()}, {"classes", classes.size()}, {"elements", elements}, {"independent_pairs", pairs}};
    return r;
}

SuiteResult good_points_suite(const SuiteContext& ctx) {
    SuiteResult r;
    const auto Z = DiscreteGroup::lattice(1), Z2 = DiscreteGroup::lattice(2);
    const auto K1 = Z.parse_set("{-1,0,1}");
    const auto K2 = Z2.parse_set("(0,0),(1,0),(-1,0),(0,1),(0,-1)");
    struct Item {
        std::string name;
        const DiscreteGroup* G;
        QuasiAction qa;
        const std::vector<GroupWord>* K;
        std::uint64_t n;
    };
    std::vector<Item> items;
    std::mt19937_64 rng(ctx.seed);
    for (std::uint64_t V = 25; V <= 1000; V += 25)
        items.push_back({"Z/" + std::to_string(V), &Z, build_quasi_action(Z, QAKind::finite_quotient, {{V}, K1, 0}), &K1, 10});
    for (auto [a, b] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{5, 5}, {8, 8}, {10, 20}, {16, 16}, {12, 30}, {20, 25}, {31, 32}})
        items.push_back({"Z^2/(" + std::to_string(a) + "," + std::to_string(b) + ")", &Z2,
                         build_quasi_action(Z2, QAKind::finite_quotient, {{a, b}, K2, 0}), &K2, 10});
    for (std::uint64_t L = 500; L <= 1000; L += 100)
        items.push_back({"box " + std::to_string(L) + " reversed", &Z,
                         build_quasi_action(Z, QAKind::folner_box, {{L}, K1, Rational(1, 2), Boundary::reversed}), &K1, 2});
    for (std::uint64_t L : {10, 20, 30})
        items.push_back({"box " + std::to_string(L) + "^2 cycled", &Z2,
                         build_quasi_action(Z2, QAKind::folner_box, {{L, L}, K2, Rational(1, 2), Boundary::cycled}), &K2, 2});
    for (std::uint64_t V = 600; V <= 1000; V += 100) {
        const auto base = build_quasi_action(Z, QAKind::finite_quotient, {{V}, K1, 0});
        items.push_back({"Z/" + std::to_string(V) + " perturbed", &Z, perturb(base, 1, rng()), &K1, 2});
    }

    std::size_t checked = 0, skipped = 0;
    for (const auto& it : items) {
        try {
            const auto g = good_points(it.qa, *it.K, it.n);
            const auto V = static_cast<std::int64_t>(it.qa.size());
            const auto H = static_cast<std::int64_t>(g.H.size());
            const auto n = static_cast<std::int64_t>(it.n);
            if (!(g.eps < Rational(1, 2 * n * H * H))) r.fail(it.name + ": eps above the bound");
            if (Rational(static_cast<std::int64_t>(g.Vbar.size())) < Rational(V) * Rational(n - 1, n)) r.fail(it.name + ": |Vbar| too small");
            if (Rational(static_cast<std::int64_t>(g.W.size())) < Rational(V, 2 * H)) r.fail(it.name + ": |W| too small");
            if (!g.covering) r.fail(it.name + ": HW misses Vbar");
            ++checked;
        } catch (const Error& e) {
            // a perturbation may push eps past the bound, so the lemma does not apply
            if (e.code() == "EpsilonTooLarge" && it.name.ends_with("perturbed"))
                ++skipped;
            else
                r.fail(it.name + ": " + describe(e));
        }
    }
    const auto want = ctx.param<std::size_t>("min_instances", 50);
    if (checked < want) r.fail("only " + std::to_string(checked) + " quasi-actions checked");

    // Z/500, K = {-1, 0, 1}, n = 10
    const auto qa = build_quasi_action(Z, QAKind::finite_quotient, {{500}, K1, 0});
    const auto g = good_points(qa, K1, 10, Rational(1, 501));
    if (g.Vbar.size() != 500 || 10 * g.Vbar.size() < 9 * 500) r.fail("Z/500: |Vbar| = " + std::to_string(g.Vbar.size()));
    if (g.W.size() < 50) r.fail("Z/500: |W| = " + std::to_string(g.W.size()));
    r.measured = {{"quasi_actions", checked}, {"skipped", skipped}, {"z500", io::to_json(g, Z)}};
    return r;
}

SuiteResult exclusivity(const SuiteContext& ctx) {
    SuiteResult r;
    const auto& C = corpus(ctx.seed, ctx.param<std::size_t>("max_n", 4));
    std::size_t c1 = 0, c2 = 0;
    for (const auto& I : C.instances) {
        try {
            verify_main_hypotheses(I);
            const auto ex = mutual_exclusivity(I);
            c1 += ex.cond1;
            c2 += ex.cond2;
        } catch (const Error& e) {
            r.fail(I.name + ": " + describe(e));
        }
    }
    const auto want = ctx.param<std::size_t>("min_instances", 500);
    if (C.instances.size() < want) r.fail("corpus has " + std::to_string(C.instances.size()) + " instances");
    r.measured = {{"instances", C.instances.size()}, {"cond1", c1}, {"cond2", c2}, {"neither", C.instances.size() - c1 - c2}};
    return r;
}

SuiteResult replay(const SuiteContext& ctx) {
    SuiteResult r;
    const auto& C = corpus(ctx.seed, ctx.param<std::size_t>("max_n", 4));
    const auto stride = ctx.param<std::size_t>("stride", 1);
    const auto noisy = ctx.param<std::size_t>("noisy", 4);
    const auto copies = ctx.param<std::size_t>("noisy_copies", 300);
    std::map<const GQframe*, std::shared_ptr<const QuasiAction>> exact;
    std::size_t replays = 0, key_checked = 0, lower_checked = 0, noisy_done = 0, noisy_skipped = 0;
    auto check = [&](const MainInstance& I, const std::shared_ptr<const QuasiAction>& qa, const std::string& tag) {
        const auto p = proof_construction(I, qa);
        ++replays;
        if (!p.claims_hold()) r.fail(tag + I.name + ": a construction claim fails");
        if (p.key) {
            ++key_checked;
            if (!p.key_bound_holds) r.fail(tag + I.name + ": l(Im Phibar) = " + std::to_string(p.im_length) + " > " + str(p.key_bound));
        }
        if (p.conditions.cond1) {
            ++lower_checked;
            if (!p.lower_bound_holds) r.fail(tag + I.name + ": l(pi2(Q^e)) below " + str(p.lower_bound));
        }
    };
    for (std::size_t i = 0; i < C.instances.size(); i += stride) {
        const auto& I = C.instances[i];
        auto& qa = exact[I.M.get()];
        if (!qa) qa = std::make_shared<const QuasiAction>(self_action(I.M->G));
        try {
            check(I, qa, "");
        } catch (const Error& e) {
            r.fail(I.name + ": " + describe(e));
        }
    }
    // noisy actions of Z/3 spread over the Z/3 instances
    std::vector<const MainInstance*> small;
    for (const auto& I : C.instances)
        if (I.M->G.size() == 3) small.push_back(&I);
    std::mt19937_64 rng(ctx.seed);
    for (std::size_t i = 0; i < noisy && !small.empty(); ++i) {
        const auto& I = *small[i * small.size() / noisy];
        const auto qa = std::make_shared<const QuasiAction>(perturb(self_action(I.M->G, copies), 1, rng()));
        try {
            check(I, qa, "noisy ");
            ++noisy_done;
        } catch (const Error& e) {
            if (e.code() == "EpsilonTooLarge")
                ++noisy_skipped;
            else
                r.fail("noisy " + I.name + ": " + describe(e));
        }
    }
    if (noisy && !noisy_done) r.fail("no noisy replay ran");
    r.measured = {{"replays", replays},
                  {"key_bound_checked", key_checked},
                  {"lower_bound_checked", lower_checked},
                  {"noisy", noisy_done},
                  {"noisy_skipped", noisy_skipped}};
    return r;
}

SuiteResult surjunctivity(const SuiteContext& ctx) {
    SuiteResult r;
    const auto mode = ctx.param<std::string>("mode", "exhaustive") == "sample" ? ScanMode::sample : ScanMode::exhaustive;
    const auto samples = ctx.param<std::uint64_t>("samples", 1000);
    json shapes = json::array();
    std::uint64_t cas = 0;
    for (const auto& shape : standard_ca_shapes()) {
        const auto rep = surjunctivity_suite(shape, mode, samples, ctx.seed, ctx.caps);
        if (!rep.ok()) r.fail(shape.name + ": " + io::dump(io::to_json(rep)));
        if (rep.injective != rep.surjective) r.fail(shape.name + ": injective and surjective counts differ");
        if (mode == ScanMode::exhaustive && !rep.exhaustive) r.fail(shape.name + ": not exhaustive");
        cas += rep.cas;
        shapes.push_back(io::to_json(rep));
    }
    r.measured = {{"cas", cas}, {"shapes", shapes}};
    return r;
}

SuiteResult stable_finiteness(const SuiteContext& ctx) {
    SuiteResult r;
    const auto samples = ctx.param<std::uint64_t>("samples", 100000);
    const auto F4G = galois_f4().ring();
    json reports = json::array();
    auto take = [&](const StableFinitenessReport& rep, bool exhaustive) {
        if (rep.violations) r.fail(rep.ring + " k=" + std::to_string(rep.k) + ": " + std::to_string(rep.violations) + " violations");
        if (exhaustive && !rep.exhaustive) r.fail(rep.ring + " k=" + std::to_string(rep.k) + ": not exhaustive");
        reports.push_back(io::to_json(rep));
    };
    take(stable_finiteness_check(F4G, 1, ScanMode::exhaustive, 0, ctx.seed, ctx.caps), true);
    take(stable_finiteness_check(F4G, 2, ScanMode::exhaustive, 0, ctx.seed, ctx.caps), true);
    take(stable_finiteness_check(FiniteRing::zmod(4), 2, ScanMode::sample, samples, ctx.seed, ctx.caps), false);
    r.measured = {{"reports", reports}};
    return r;
}

SuiteResult duality(const SuiteContext& ctx) {
    SuiteResult r;
    const auto F2 = FiniteRing::zmod(2);
    const auto rep = end_anti_iso(F2, FiniteGroup::cyclic(2), 1);
    if (!rep.ok() || !rep.exhaustive) r.fail("End anti-isomorphism for F_2, Z/2, n = 1");
    if (rep.composition_checks != 16) r.fail("expected 16 composition checks, ran " + std::to_string(rep.composition_checks));

    const auto S = DualitySetting::of(F2);
    std::vector<DualModule> D;
    std::size_t double_duals = 0;
    for (std::size_t k = 0; k <= 3; ++k) {
        const auto M = FiniteModule::make(F2, 2, k, {Matrix::identity(k, 2)});
        if (!double_dual_check(S, M, ctx.caps).ok()) r.fail("double dual of F_2^" + std::to_string(k));
        ++double_duals;
        D.push_back(dual(S, M, ctx.caps));
    }
    auto random = [](std::size_t a, std::size_t b, std::mt19937_64& rng) {
        Matrix A(a, b, 2);
        for (auto& x : A.a) x = static_cast<std::uint32_t>(rng() % 2);
        return A;
    };
    auto mul = [](const Matrix& A, const Matrix& B) {
        Matrix C(A.rows, B.cols, 2);
        for (std::size_t i = 0; i < A.rows; ++i)
            for (std::size_t j = 0; j < B.cols; ++j) {
                std::uint32_t s = 0;
                for (std::size_t k = 0; k < A.cols; ++k) s ^= A(i, k) & B(k, j);
                C(i, j) = s;
            }
        return C;
    };
    const auto checks = ctx.param<std::size_t>("random_checks", 1000);
    std::mt19937_64 rng(ctx.seed);
    std::size_t naturality = 0;
    for (std::size_t it = 0; it < checks; ++it) {
        const auto a = 1 + rng() % 3, b = 1 + rng() % 3, c = 1 + rng() % 3;
        const auto psi = random(a, b, rng), phi = random(b, c, rng);
        // (phi psi)* = psi* phi*, maps acting on the right of rows
        if (dual_map(D[a], D[c], mul(psi, phi)) != mul(dual_map(D[b], D[c], phi), dual_map(D[a], D[b], psi)))
            r.fail("contravariance fails on check " + std::to_string(it));
        if (it % 10 == 0) {
            ++naturality;
            if (!double_dual_natural(S, D[a].source, D[b].source, psi, ctx.caps)) r.fail("naturality fails on check " + std::to_string(it));
        }
    }
    r.measured = {{"anti_iso", io::to_json(rep)}, {"double_duals", double_duals}, {"random_checks", checks}, {"naturality_checks", naturality}};
    return r;
}

SuiteResult lifts(const SuiteContext& ctx) {
    SuiteResult r;
    const auto& C = corpus(ctx.seed, ctx.param<std::size_t>("max_n", 4));
    std::size_t maps = 0, pairs = 0;
    for (std::size_t i = 0; i < C.models.size(); ++i) {
        const auto& model = *C.models[i];
        const auto name = model.C.ring().name();
        for (const auto& P : C.endos[i]) {
            const auto lift = model.lift(P);
            ++maps;
            const auto& f = lift.info;
            if (lift.linear.surjective && !(f.surjective && f.algebraic)) r.fail(name + ": onto phi with Phi not onto or not algebraic");
            if (f.injective != lift.linear.injective) r.fail(name + ": Phi 1-1 differs from phi 1-1");
            if (!lift.lemma_holds || !lift.verdict_agrees) r.fail(name + ": lift report disagrees");
            if (!model.equivariant(lift.Phi)) r.fail(name + ": Phi does not commute with rho");
        }
        const auto rho = check_rho(model);
        pairs += model.C.spec().G.size() * model.C.spec().G.size();
        if (!rho.ok()) r.fail(name + ": rho is not an anti-homomorphism of automorphisms");
    }
    r.measured = {{"models", C.models.size()}, {"endomorphisms", maps}, {"rho_pairs", pairs}};
    return r;
}

// Each entry is a deliberate fault; the suite passes when every fault is detected.
SuiteResult fault_injection(const SuiteContext&) {
    SuiteResult r;
    r.expected_failure = true;
    json entries = json::array();
    auto entry = [&](const std::string& name, const std::string& expect, const std::function<std::string()>& observe) {
        std::string got;
        try {
            got = observe();
        } catch (const Error& e) {
            got = e.code();
        }
        const bool detected = got == expect;
        if (!detected) r.fail(name + ": expected " + expect + ", observed " + (got.empty() ? "nothing" : got));
        entries.push_back({{"name", name}, {"expected_failure", true}, {"expected", expect}, {"observed", got}, {"detected", detected}});
    };
    const auto Z = DiscreteGroup::lattice(1);
    const auto K = Z.parse_set("{-1,0,1}");
    const auto qa500 = build_quasi_action(Z, QAKind::finite_quotient, {{500}, K, 0});
    entry("eps at the bound", "EpsilonTooLarge", [&] {
        (void)good_points(qa500, K, 10, Rational(1, 500));
        return std::string();
    });
    entry("non-symmetric window", "NotSymmetric", [&] {
        (void)good_points(qa500, Z.parse_set("{0,1}"), 10);
        return std::string();
    });
    entry("map that moves 0", "ZeroNotPreserved", [&] {
        (void)verify_hom(share(FiniteLattice::chain(2)), share(FiniteLattice::chain(1)), {1, 1, 1});
        return std::string();
    });
    entry("pentagon is not modular", "NotModular", [&] {
        return lattice_props(FiniteLattice::pentagon()).modular ? std::string() : std::string("NotModular");
    });

    // F_2[Z/3] with Phi = right multiplication by 1 + t and ybar = <1>
    const auto C = verify_crossed(CrossedProductSpec::group_ring(FiniteRing::zmod(2), FiniteGroup::cyclic(3)));
    const auto model = lattice_model(C, FiniteModule::regular(C.ring()));
    const auto M = std::make_shared<const GQframe>(GQframe::from_model(model));
    const auto& S = C.ring();
    MainInstance I{"F_2[Z/3] 1+t", M, model.lift(model.M.action(S.add(S.one(), C.element(Row{1}, 1)))).Phi,
                   *model.L.find(zmod::RowSpace::span({Row{1, 0, 0}}, 2, 3)), {0, 1, 2}, {0, 1, 2}};
    const auto qa = std::make_shared<const QuasiAction>(self_action(M->G));
    ReplayOptions opt;
    opt.corrupt_sigma_at = 0;
    entry("corrupted sigma", "XbarIllDefined", [&] {
        return proof_construction(I, qa, opt).xbar_well_defined ? std::string() : std::string("XbarIllDefined");
    });
    entry("relation is not meet-compatible", "CongMeetGap", [&] {
        return proof_construction(I, qa).cong_meet ? std::string() : std::string("CongMeetGap");
    });
    entry("rho ignored by a lattice automorphism", "HypothesisFailed", [&] {
        auto bad = *M;
        bad.rho[1] = bad.rho[0];
        verify_gqframe(bad);
        return std::string();
    });
    r.measured = {{"entries", entries}};
    return r;
}

}  // namespace

std::size_t big_omega(std::uint64_t n) {
    std::size_t c = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            n /= p;
            ++c;
        }
    return c + (n > 1);
}

const std::vector<SuiteInfo>& registry() {
    static const std::vector<SuiteInfo> suites{
        {"jordan-holder", "maximal chains of a modular lattice have equal length", jordan_holder},
        {"length-additivity", "l(x v y) + l(x ^ y) = l(x) + l(y) in modular lattices", length_additivity},
        {"quotients", "quotient by a strong congruence is a qframe with a surjective projection", quotients},
        {"dimension", "closed Krull/Gabriel recursion on chains, G.dim = K.dim + 1", dimension},
        {"torsion", "torsion laws for Serre classes", torsion_laws},
        {"good-points", "good-point bounds for quasi-actions", good_points_suite},
        {"exclusivity", "the two conditions of the main theorem exclude each other", exclusivity},
        {"replay", "replay of the main construction and its length bounds", replay},
        {"surjunctivity", "injective linear cellular automata are surjective", surjunctivity},
        {"stable-finiteness", "one-sided inverses in matrix rings are two-sided", stable_finiteness},
        {"duality", "double dual and the End anti-isomorphism", duality},
        {"lifts", "lifted module endomorphisms and the rho action", lifts},
        {"fault-injection", "deliberate faults are detected", fault_injection, false},
    };
    return suites;
}

SuiteResult run_suite(const std::string& name, const SuiteContext& ctx) {
    const auto& reg = registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const SuiteInfo& s) { return s.name == name; });
    if (it == reg.end()) throw Error("ConfigError", "unknown suite \"" + name + "\"");
    SuiteResult r;
    try {
        r = it->run(ctx);
    } catch (const Error& e) {
        r.fail(describe(e));
    }
    r.name = it->name;
    r.anchor = it->anchor;
    return r;
}

SuiteConfig SuiteConfig::defaults() {
    SuiteConfig c;
    for (const auto& s : registry())
        if (s.in_default) c.suites.emplace_back(s.name, json::object());
    return c;
}

SuiteConfig SuiteConfig::from_json(const json& j) {
    if (!j.is_object()) throw Error("ConfigError", "config must be an object");
    SuiteConfig c;
    try {
        c.seed = j.value("seed", c.seed);
        if (j.contains("caps")) {
            const auto& k = j.at("caps");
            c.caps.lattice_elements = k.value("lattice_elements", c.caps.lattice_elements);
            c.caps.module_order = k.value("module_order", c.caps.module_order);
            c.caps.matrix_k = k.value("matrix_k", c.caps.matrix_k);
        }
        if (j.contains("output")) c.output = j.at("output").get<std::string>();
        if (j.contains("suites")) {
            for (const auto& s : j.at("suites")) {
                if (s.is_string())
                    c.suites.emplace_back(s.get<std::string>(), json::object());
                else
                    c.suites.emplace_back(s.at("name").get<std::string>(), s.value("params", json::object()));
            }
        } else {
            c.suites = defaults().suites;
        }
        if (j.value("fault_injection", false)) c.suites.emplace_back("fault-injection", json::object());
    } catch (const json::exception& e) {
        throw Error("ConfigError", e.what());
    }
    const auto& reg = registry();
    for (const auto& [name, params] : c.suites) {
        if (std::none_of(reg.begin(), reg.end(), [&](const SuiteInfo& s) { return s.name == name; }))
            throw Error("ConfigError", "unknown suite \"" + name + "\"");
        if (!params.is_object()) throw Error("ConfigError", "params of \"" + name + "\" must be an object");
    }
    return c;
}

bool Report::ok() const {
    return std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.ok; });
}

Report run(const SuiteConfig& config, const std::function<void(const SuiteResult&)>& progress) {
    Report rep;
    rep.seed = config.seed;
    for (const auto& [name, params] : config.suites) {
        SuiteContext ctx{config.seed, config.caps, params};
        rep.results.push_back(run_suite(name, ctx));
        if (progress) progress(rep.results.back());
    }
    return rep;
}

json to_json(const SuiteResult& r) {
    return {{"name", r.name},         {"anchor", r.anchor},     {"ok", r.ok}, {"expected_failure", r.expected_failure},
            {"measured", r.measured}, {"failures", r.failures}};
}

json to_json(const Report& r) {
    json results = json::array();
    for (const auto& s : r.results) results.push_back(to_json(s));
    return {{"schema", io::schema}, {"kind", "report"}, {"seed", r.seed}, {"ok", r.ok()}, {"results", results}};
}

}  // namespace qfw::suites
