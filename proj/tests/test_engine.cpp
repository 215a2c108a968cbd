#include "util.hpp"
#include "qfw/engine.hpp"

#include <doctest.h>

#include <bit>

using namespace qfw;

namespace {

struct GroupRing {
    CrossedProduct C;
    LatticeModel model;
    std::shared_ptr<const GQframe> M;
    std::size_t n;

    explicit GroupRing(std::size_t n_)
        : C(verify_crossed(CrossedProductSpec::group_ring(FiniteRing::zmod(2), FiniteGroup::cyclic(n_)))),
          model(lattice_model(C, FiniteModule::regular(C.ring()))),
          M(std::make_shared<const GQframe>(GQframe::from_model(model))),
          n(n_) {}

    // multiplication by sum of t^i over i in `support`
    QframeHom mult(std::initializer_list<unsigned> support) const {
        Row u(n, 0);
        for (auto i : support) u[i] ^= 1;
        return model.lift(model.M.action(u)).Phi;
    }
    Elem span(std::initializer_list<std::vector<unsigned>> vecs) const {
        std::vector<Row> rows;
        for (const auto& v : vecs) {
            Row r(n, 0);
            for (auto i : v) r[i] = 1;
            rows.push_back(r);
        }
        return *model.L.find(zmod::RowSpace::span(rows, 2, n));
    }
    MainInstance instance(QframeHom Phi, Elem y, std::vector<GElem> F, std::vector<GElem> K) const {
        return {"test", M, std::move(Phi), y, std::move(F), std::move(K)};
    }
    std::vector<GElem> all() const {
        std::vector<GElem> g(n);
        for (GElem i = 0; i < n; ++i) g[i] = i;
        return g;
    }
};

// dimension over F_2 of the span of bitmask vectors
unsigned rank_f2(std::vector<unsigned> v) {
    unsigned r = 0;
    for (unsigned bit = 0; bit < 32; ++bit) {
        auto it = std::find_if(v.begin(), v.end(), [&](unsigned x) { return (x >> bit) & 1; });
        if (it == v.end()) continue;
        const auto p = *it;
        v.erase(it);
        for (auto& x : v)
            if ((x >> bit) & 1) x ^= p;
        ++r;
    }
    return r;
}

// x * y in F_2[Z/n] on bitmasks
unsigned conv(unsigned x, unsigned y, unsigned n) {
    unsigned out = 0;
    for (unsigned i = 0; i < n; ++i)
        if ((x >> i) & 1)
            for (unsigned j = 0; j < n; ++j)
                if ((y >> j) & 1) out ^= 1U << ((i + j) % n);
    return out;
}

std::shared_ptr<const QuasiAction> exact(const FiniteGroup& G, std::size_t copies = 1) {
    return std::make_shared<const QuasiAction>(self_action(G, copies));
}

}  // namespace

TEST_CASE("hypotheses on F_2[Z/3]") {
    const GroupRing R(3);
    const auto y = R.span({{0}});
    const auto rep = verify_main_hypotheses(R.instance(R.mult({0, 1}), y, {0, 1, 2}, {0, 1, 2}));
    CHECK(rep.l == 1);
    CHECK(rep.basis);
    CHECK(rep.y_F == R.M->M->top());

    const auto full = R.M->M->top();
    try {
        (void)verify_main_hypotheses(R.instance(R.mult({0}), full, {0}, {0}));
        FAIL("expected (b) to fail");
    } catch (const Error& e) {
        CHECK(e.code() == "HypothesisFailed");
        CHECK(std::string(e.what()).find("(b)") != std::string::npos);
    }
    const auto id = QframeHom::identity(R.M->M);
    CHECK(verify_main_hypotheses(R.instance(id, y, {0}, {0})).l == 1);

    CHECK_THROWS_WITH_AS(verify_main_hypotheses(R.instance(id, y, {0, 1}, {0, 1, 2})), doctest::Contains("(c) F is not symmetric"), Error);
    CHECK_THROWS_WITH_AS(verify_main_hypotheses(R.instance(id, y, {1, 2}, {0, 1, 2})), doctest::Contains("e is not in F"), Error);
    // mult by t moves span(1) to span(t), outside span(1)
    CHECK_THROWS_WITH_AS(verify_main_hypotheses(R.instance(R.mult({1}), y, {0}, {0})), doctest::Contains("(c) Phi(ybar)"), Error);
}

TEST_CASE("a lattice automorphism that ignores rho is rejected") {
    const GroupRing R(3);
    // swapping the first two coordinates is F_2-linear but does not commute with t
    Matrix P(3, 3, 2);
    P.a = {0, 1, 0, 1, 0, 0, 0, 0, 1};
    std::vector<Elem> map(R.model.L.size());
    for (Elem K = 0; K < map.size(); ++K) map[K] = R.model.L.image(P, K, R.model.L);
    const auto swap = verify_hom(R.M->M, R.M->M, map);
    CHECK_THROWS_WITH_AS(verify_main_hypotheses(R.instance(swap, R.span({{0}}), {0}, {0})), doctest::Contains("(equivariance)"), Error);
}

TEST_CASE("mutual exclusivity on the spec instances") {
    const GroupRing R(3);
    const auto y = R.span({{0}});
    const auto G = R.all();
    SUBCASE("identity") {
        for (const auto& K : std::vector<std::vector<GElem>>{{0}, {0, 1, 2}}) {
            const auto ex = mutual_exclusivity(R.instance(QframeHom::identity(R.M->M), y, {0}, K));
            CHECK(ex.cond1);
            CHECK_FALSE(ex.cond2);
            CHECK(ex.join_length == K.size());
        }
    }
    SUBCASE("multiplication by 1 + t") {
        const auto ex = mutual_exclusivity(R.instance(R.mult({0, 1}), y, G, G));
        // (1+t){1, t, t^2} spans a plane
        CHECK(rank_f2({conv(0b011, 0b001, 3), conv(0b011, 0b010, 3), conv(0b011, 0b100, 3)}) == 2);
        CHECK(ex.join_length == 2);
        CHECK(ex.cond2);
        CHECK_FALSE(ex.cond1);
    }
    SUBCASE("collapse to an atom") {
        const auto ex = mutual_exclusivity(R.instance(R.mult({0, 1, 2}), y, G, G));
        CHECK(ex.join_K == R.span({{0, 1, 2}}));
        CHECK(ex.join_length == 1);
        CHECK_FALSE(ex.cond1);
        CHECK(ex.cond2);
    }
}

TEST_CASE("exclusivity over the generated corpus") {
    const auto corpus = main_instance_corpus();
    CHECK(corpus.instances.size() >= 500);
    std::size_t c1 = 0, c2 = 0;
    for (const auto& I : corpus.instances) {
        const auto ex = mutual_exclusivity(I);
        c1 += ex.cond1;
        c2 += ex.cond2;
    }
    // both conditions occur, never together
    CHECK(c1 > 0);
    CHECK(c2 > 0);
    CHECK(c1 + c2 <= corpus.instances.size());
}

TEST_CASE("symmetric windows") {
    CHECK(symmetric_sets(FiniteGroup::cyclic(4)) == std::vector<std::vector<GElem>>{{0}, {0, 2}, {0, 1, 3}, {0, 1, 2, 3}});
    CHECK(symmetric_sets(FiniteGroup::cyclic(3)).size() == 2);
}

TEST_CASE("witness lemma") {
    const GroupRing R(3);
    const auto y = R.span({{0}});
    const auto id = prel_high_witness(*R.M, QframeHom::identity(R.M->M), y);
    CHECK(id.surj_K == std::vector<GElem>{0});
    CHECK_FALSE(id.noninj_K);
    CHECK(id.biconditionals);

    const auto t = prel_high_witness(*R.M, R.mult({1}), y);
    REQUIRE(t.surj_K);
    CHECK(*t.surj_K == std::vector<GElem>{R.M->G.inv(1)});
    CHECK(t.biconditionals);

    const auto s = prel_high_witness(*R.M, R.mult({0, 1}), y);
    CHECK_FALSE(s.surj_K);
    REQUIRE(s.noninj_K);
    CHECK(*s.noninj_K == R.all());
    CHECK(s.x == R.span({{0, 1, 2}}));
    CHECK(s.biconditionals);

    CHECK(code_of([&] { (void)prel_high_witness(*R.M, R.mult({0}), R.span({{0}, {1}})); }) == "NotABasis");
    CHECK(code_of([&] { (void)prel_high_witness(*R.M, non_algebraic_example(), y); }) != "");
}

TEST_CASE("proof replay on F_2[Z/3] with the exact action") {
    const GroupRing R(3);
    const auto y = R.span({{0}});
    const auto G = R.all();
    const auto qa = exact(R.M->G);
    SUBCASE("multiplication by 1 + t") {
        const auto r = proof_construction(R.instance(R.mult({0, 1}), y, G, G), qa);
        CHECK(r.H.size() == 3);
        CHECK(r.good.Vbar.size() == 3);
        CHECK(r.claims_hold());
        CHECK(r.pi2_exhaustive);
        CHECK(r.pi2_Qe_length == 3);
        CHECK(r.conditions.cond2);
        REQUIRE(r.key);
        CHECK(r.key->holds);
        CHECK(r.im_length == 2);
        CHECK(r.key_bound == Rational(5, 2));
        CHECK(r.L1_size == std::optional<std::size_t>(16));
        // meets are not compatible with the relation
        CHECK_FALSE(r.cong_meet);
        CHECK(r.cong_meet_witness.size() == 10);
    }
    SUBCASE("identity: condition (1), and hypothesis (2) of the key lemma fails") {
        const auto r = proof_construction(R.instance(QframeHom::identity(R.M->M), y, {0}, G), qa);
        CHECK(r.claims_hold());
        CHECK(r.conditions.cond1);
        CHECK(r.lower_bound_holds);
        CHECK(r.Qe_inside_image);
        CHECK_FALSE(r.key);
        CHECK(r.key_rejected.find("(2)") != std::string::npos);
        CHECK(code_of([&] { (void)replay_key_lemma(*r.key_input); }) == "HypothesisFailed");
        auto empty = *r.key_input;
        empty.good.Vbar.clear();
        CHECK_THROWS_WITH_AS(replay_key_lemma(empty), doctest::Contains("no good points"), Error);
    }
    SUBCASE("corrupted sigma") {
        ReplayOptions opt;
        opt.corrupt_sigma_at = 0;
        const auto r = proof_construction(R.instance(R.mult({0, 1}), y, G, G), qa, opt);
        CHECK_FALSE(r.xbar_well_defined);
        CHECK(r.xbar_witness.size() == 4);
        CHECK_FALSE(r.claims_hold());
    }
    SUBCASE("n below 2|H|l") {
        ReplayOptions opt;
        opt.n = 5;
        CHECK(code_of([&] { (void)proof_construction(R.instance(R.mult({0, 1}), y, G, G), qa, opt); }) == "BadParams");
    }
}

TEST_CASE("the relation is not meet-compatible: a hand witness") {
    // exact action of Z/3 on itself, H = G: Psi_v(a) = join over h of rho_h(a_{hv})
    const GroupRing R(3);
    const auto& L = *R.M->M;
    const auto& G = R.M->G;
    auto psi = [&](const std::vector<Elem>& a) {
        std::vector<Elem> out(3, L.bottom());
        for (GElem v = 0; v < 3; ++v)
            for (GElem h = 0; h < 3; ++h) out[v] = L.join(out[v], R.M->rho[h](a[G.mul(h, v)]));
        return out;
    };
    const auto one = R.span({{0}}), tinv = R.span({{2}});
    const std::vector<Elem> a{one, tinv, L.bottom()}, b{one, L.bottom(), L.bottom()}, c{L.bottom(), tinv, L.bottom()};
    CHECK(psi(a) == psi(b));
    std::vector<Elem> ac(3), bc(3);
    for (int i = 0; i < 3; ++i) {
        ac[i] = L.meet(a[i], c[i]);
        bc[i] = L.meet(b[i], c[i]);
    }
    CHECK(psi(ac) != psi(bc));
}

TEST_CASE("proof replay on F_2[Z/6]") {
    const GroupRing R(6);
    const auto y = R.span({{0}});
    const auto qa = exact(R.M->G);
    SUBCASE("multiplication by 1 + t^3 with K = {e, t, t^-1, t^3}") {
        const std::vector<GElem> K{0, 1, 3, 5};
        const auto r = proof_construction(R.instance(R.mult({0, 3}), y, K, K), qa);
        CHECK(r.H.size() == 6);
        CHECK(r.claims_hold());
        CHECK(r.conditions.cond2);
        CHECK(r.conditions.join_length == 3);
        REQUIRE(r.key);
        CHECK(r.key->holds);
        CHECK(r.key_bound == Rational(11, 2));
        CHECK(r.im_length <= 5);
        CHECK(static_cast<std::int64_t>(r.key->len_KW) <= r.key->est_KW);
        CHECK(static_cast<std::int64_t>(r.key->len_outside) <= r.key->est_outside);
    }
    SUBCASE("K = {e, t, t^-1}: H is not a subgroup and xbar is ambiguous") {
        const std::vector<GElem> K{0, 1, 5};
        // no nonzero Phi fits condition (c) and (2) in this window; the zero map does
        const auto zero = QframeHom::trusted(R.M->M, R.M->M, std::vector<Elem>(R.M->M->size(), R.M->M->bottom()));
        const auto r = proof_construction(R.instance(zero, y, {0}, K), qa);
        CHECK(r.H.size() == 5);
        CHECK(r.key_bound == Rational(27, 5));
        CHECK(r.key_bound_holds);
        CHECK(r.im_length == 0);
        CHECK(r.pi2_Qe_length == 6);
        CHECK_FALSE(r.xbar_well_defined);
        REQUIRE(r.xbar_witness.size() == 4);
        // kv = k'v' but the two elements differ
        const auto [v, k, v2, k2] = std::array{r.xbar_witness[0], r.xbar_witness[1], r.xbar_witness[2], r.xbar_witness[3]};
        CHECK((v + k) % 6 == (v2 + k2) % 6);
    }
}

TEST_CASE("proof replay degenerates for the trivial group") {
    const GroupRing R(1);
    const auto y = R.M->M->top();
    const auto r = proof_construction(R.instance(QframeHom::identity(R.M->M), y, {0}, {0}), exact(R.M->G));
    CHECK(r.claims_hold());
    CHECK(r.L1_size == std::optional<std::size_t>(2));
    CHECK(r.L2_size == std::optional<std::size_t>(2));
    CHECK(r.pi2_Qe_length == 1);
    CHECK(r.cong_meet);
}

TEST_CASE("noisy quasi-action: both estimates") {
    const GroupRing R(3);
    const auto y = R.span({{0}});
    const auto G = R.all();
    // eps must stay below 1/(2 n |H|^2) = 1/108
    const auto qa = std::make_shared<const QuasiAction>(perturb(self_action(R.M->G, 300), 1, 4));
    for (const auto& Phi : {R.mult({0, 1}), QframeHom::identity(R.M->M)}) {
        const auto r = proof_construction(R.instance(Phi, y, G, G), qa);
        CHECK(r.good.Vbar.size() < qa->size());
        CHECK(r.components >= 290);
        CHECK(r.claims_hold());
        CHECK(r.pi2_Qe_length == r.good.Vbar.size());
        if (r.conditions.cond1) {
            CHECK(r.lower_bound_holds);
            CHECK(r.Qe_inside_image);
        }
        if (r.key) CHECK(r.key_bound_holds);
    }
}

TEST_CASE("higher-dimensional pipeline on finite carriers") {
    const GroupRing R(3);
    const auto y = R.span({{0}});
    const auto t = R.mult({1}), t2 = R.mult({2});
    const auto a = main_higher_pipeline(*R.M, t, y, HigherMode::a_star);
    CHECK(a.alpha == Ordinal{});
    CHECK(a.torsion_size == 16);
    CHECK(a.quotient_size == 16);
    CHECK(a.transported_rho);
    CHECK(a.transported_equivariant);
    CHECK(a.transported_basis);
    CHECK(a.l == 1);
    CHECK(a.direct_injective);
    CHECK(a.agrees);

    CHECK(code_of([&] { (void)main_higher_pipeline(*R.M, t, y, HigherMode::a_prime_star); }) == "SplittingMissing");
    const auto b = main_higher_pipeline(*R.M, t, y, HigherMode::a_prime_star, t2);
    CHECK(b.socle_invariant);
    CHECK(b.splitting_on_socle);
    CHECK(b.socle_family_independent);
    CHECK(b.l == 1);
    CHECK(b.agrees);

    CHECK_THROWS_WITH_AS(main_higher_pipeline(*R.M, R.mult({0, 1}), y, HigherMode::a_star), doctest::Contains("(surjective)"), Error);
    CHECK_THROWS_WITH_AS(main_higher_pipeline(*R.M, t, y, HigherMode::a_prime_star, t), doctest::Contains("(splitting)"), Error);
}

TEST_CASE("socle restriction is functorial") {
    const auto corpus = main_instance_corpus({3, 4, 7});
    int checked = 0;
    for (std::size_t m = 0; m < corpus.models.size(); ++m) {
        const auto& model = *corpus.models[m];
        const auto& endos = corpus.endos[m];
        for (std::size_t i = 0; i < endos.size() && i < 8; ++i)
            for (std::size_t j = 0; j < endos.size() && j < 8; ++j) {
                const auto f = model.lift(endos[i]).Phi, g = model.lift(endos[j]).Phi;
                const auto gf = socle_restriction(compose(g, f));
                const auto sg = socle_restriction(g), sf = socle_restriction(f);
                CHECK(gf.map == compose(QframeHom::trusted(sf.target, sg.target, sg.map), sf).map);
                ++checked;
            }
    }
    CHECK(checked > 100);
}
