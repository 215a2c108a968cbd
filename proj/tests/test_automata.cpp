#include "qfw/automata.hpp"

#include <doctest.h>

#include <set>

using namespace qfw;

namespace {

FiniteModule f2() { return FiniteModule::regular(FiniteRing::zmod(2)); }
FiniteModule z3() { return FiniteModule::regular(FiniteRing::zmod(3)); }
FiniteModule f2sq() { return FiniteModule::make(FiniteRing::zmod(2), 2, 2, {Matrix::identity(2, 2)}); }

Matrix mat(std::size_t k, std::uint32_t m, std::vector<std::uint32_t> a) {
    Matrix A(k, k, m);
    A.a = std::move(a);
    return A;
}

std::vector<Matrix> scalars(std::size_t n, std::uint32_t m, std::vector<std::uint32_t> c) {
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(mat(1, m, {c[i]}));
    return out;
}

}  // namespace

TEST_CASE("sum and shift automata on Z/3") {
    const auto G = FiniteGroup::cyclic(3);
    const auto sum = LinearCA::make(G, z3(), {0, 1, 2}, scalars(3, 3, {1, 1, 1}));
    CHECK(apply_ca(sum, {1, 1, 1}) == Row{0, 0, 0});
    CHECK(apply_ca(sum, {1, 0, 0}) == Row{1, 1, 1});
    const auto shift = LinearCA::make(G, z3(), {1}, scalars(1, 3, {1}));
    // phi(x)(g) = x(g t): the delta at e lands on t^2
    CHECK(apply_ca(shift, {1, 0, 0}) == Row{0, 0, 1});
    for (const auto& ca : {sum, shift}) {
        CHECK(is_equivariant(ca));
        const auto P = ca.matrix();
        for (std::uint32_t x = 0; x < 27; ++x) {
            const Row v{x % 3, x / 3 % 3, x / 9};
            CHECK(apply_ca(ca, v) == zmod::apply(v, P));
        }
    }
    const auto s = inj_surj_analysis(sum);
    CHECK_FALSE(s.injective);
    CHECK_FALSE(s.surjective);
    CHECK(s.kernel_size == 9);
    CHECK(s.image_size == 3);
    CHECK(s.enumeration_agrees);
    CHECK(s.image_invariant);
    const auto t = inj_surj_analysis(shift);
    CHECK(t.injective);
    CHECK(t.surjective);
    CHECK(t.reversible);
}

TEST_CASE("translation convention") {
    const auto G = FiniteGroup::cyclic(3);
    const Row x{1, 2, 0};
    for (GElem g = 0; g < 3; ++g) {
        CHECK(translate(G, 1, g, x) == zmod::apply(x, translation_matrix(G, 1, 3, g)));
        for (GElem h = 0; h < 3; ++h)
            CHECK(translate(G, 1, g, translate(G, 1, h, x)) == translate(G, 1, G.mul(g, h), x));
    }
}

TEST_CASE("bijective automaton with a nilpotent neighbour") {
    const auto G = FiniteGroup::cyclic(2);
    const auto ca = LinearCA::make(G, f2sq(), {0, 1}, {Matrix::identity(2, 2), mat(2, 2, {0, 1, 0, 0})});
    const auto s = inj_surj_analysis(ca);
    CHECK(s.injective);
    CHECK(s.surjective);
    CHECK(s.reversible);
    const auto pm = preimage_lattice_model(ca);
    CHECK(pm.L->size() == 67);
    CHECK(pm.info.injective);
    CHECK(pm.lemma_holds);
    CHECK(pm.verdict_agrees);
    CHECK(pm.equivariant);
    CHECK(pm.rho_right_action);
    CHECK(pm.y_basis);
    CHECK_FALSE(pm.collision);
}

TEST_CASE("all linear maps on F_2^{Z/2}") {
    const auto G = FiniteGroup::cyclic(2);
    int cas = 0, non_equivariant = 0;
    std::set<std::vector<GElem>> memory_sets;
    for (std::uint32_t bits = 0; bits < 16; ++bits) {
        const auto P = mat(2, 2, {bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1});
        try {
            const auto ms = extract_memory_set(G, f2(), P);
            ++cas;
            CHECK(ms.ca.matrix() == P);
            memory_sets.insert(ms.F);
        } catch (const Error& e) {
            CHECK(e.code() == "NotEquivariant");
            ++non_equivariant;
        }
    }
    CHECK(cas == 4);
    CHECK(non_equivariant == 12);
    CHECK(memory_sets == std::set<std::vector<GElem>>{{}, {0}, {1}, {0, 1}});
}

TEST_CASE("memory set from tables") {
    const auto G = FiniteGroup::cyclic(3);
    const auto sum = LinearCA::make(G, z3(), {0, 1, 2}, scalars(3, 3, {1, 2, 0}));
    const auto M = configuration_module(G, z3());
    std::vector<std::uint64_t> table(M.order());
    for (std::uint64_t x = 0; x < table.size(); ++x) table[x] = M.index(apply_ca(sum, M.element(x)));
    const auto ms = extract_memory_set(G, z3(), table);
    CHECK(ms.F == std::vector<GElem>{0, 1});
    CHECK(ms.ca.matrix() == sum.matrix());

    auto bad = table;
    bad[1] = 0;
    try {
        (void)extract_memory_set(G, z3(), bad);
        FAIL("expected NotLinear");
    } catch (const Error& e) {
        CHECK(e.code() == "NotLinear");
        CHECK(e.witness().size() == 2);
    }
}

TEST_CASE("non-R-linear maps are rejected") {
    // Frobenius on F_4 is additive but only semilinear
    const auto F4 = FiniteRing::fq(2, {1, 1, 1});
    const auto N = FiniteModule::regular(F4);
    const auto G = FiniteGroup::cyclic(2);
    const auto frob = F4.frobenius();
    CHECK_THROWS_WITH_AS(LinearCA::make(G, N, {0}, {frob}), doctest::Contains("NotModuleHom"), Error);
    Matrix P(4, 4, 2);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) P(b * 2 + i, b * 2 + j) = frob(i, j);
    try {
        (void)extract_memory_set(G, N, P);
        FAIL("expected NotLinear");
    } catch (const Error& e) {
        CHECK(e.code() == "NotLinear");
    }
}

TEST_CASE("reverse lattice joins are intersections") {
    const auto G = FiniteGroup::cyclic(3);
    const auto L = reverse_lattice(G, f2());
    CHECK(L.size() == 16);
    const auto& lat = *L.lattice();
    const auto& fwd = L.forward();
    CHECK(fwd[lat.top()].size() == 1);
    CHECK(fwd[lat.bottom()].size() == 8);
    for (Elem a = 0; a < L.size(); ++a)
        for (Elem b = 0; b < L.size(); ++b) {
            std::set<Row> ia, ib, inter, j;
            fwd[a].for_each([&](const Row& x) { ia.insert(x); });
            fwd[b].for_each([&](const Row& x) { ib.insert(x); });
            for (const auto& x : ia)
                if (ib.count(x)) inter.insert(x);
            fwd[lat.join(a, b)].for_each([&](const Row& x) { j.insert(x); });
            CHECK(j == inter);
            CHECK(fwd[lat.meet(a, b)] == fwd[a] + fwd[b]);
        }
}

TEST_CASE("sum automaton collapses distinct preimages") {
    const auto G = FiniteGroup::cyclic(3);
    const auto ca = LinearCA::make(G, f2(), {0, 1, 2}, scalars(3, 2, {1, 1, 1}));
    const auto pm = preimage_lattice_model(ca);
    CHECK(pm.exhaustive_check);
    CHECK_FALSE(pm.info.injective);
    CHECK(pm.lemma_holds);
    CHECK(pm.verdict_agrees);
    REQUIRE(pm.collision);
    const auto [c, d] = *pm.collision;
    CHECK(c != d);
    CHECK(pm.Phi(c) == pm.Phi(d));
    CHECK(pm.Phi(pm.L->lattice()->top()) != pm.L->lattice()->top());
}

TEST_CASE("surjunctivity on small shapes") {
    for (const auto& shape : standard_ca_shapes()) {
        if (shape.G.size() * shape.N.k > 6 || shape.N.m == 4) continue;
        const auto r = surjunctivity_suite(shape);
        INFO(shape.name);
        CHECK(r.exhaustive);
        CHECK(r.cas > 0);
        CHECK(r.ok());
        CHECK(r.injective == r.surjective);
    }
}

TEST_CASE("structural path on the largest shape, sampled") {
    const auto shapes = standard_ca_shapes();
    const auto& big = shapes[7];
    REQUIRE(big.name == "G=Z/2xZ/2 N=F_2^2 F=G");
    const auto r = surjunctivity_suite(big, ScanMode::sample, 64, 3);
    CHECK(r.structural);
    CHECK(r.cas == 64);
    CHECK(r.ok());
}
