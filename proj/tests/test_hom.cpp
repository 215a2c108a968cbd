#include "oracle.hpp"
#include "util.hpp"
#include "qfw/hom.hpp"

#include <doctest.h>

#include <random>

using namespace qfw;

namespace {

// Every map S -> T passing verify_hom, by brute force.
std::vector<QframeHom> all_homs(const LatticePtr& S, const LatticePtr& T) {
    std::vector<QframeHom> out;
    std::vector<Elem> m(S->size(), 0);
    while (true) {
        try {
            out.push_back(verify_hom(S, T, m));
        } catch (const Error&) {
        }
        std::size_t i = 0;
        for (; i < m.size(); ++i) {
            if (++m[i] < T->size()) break;
            m[i] = 0;
        }
        if (i == m.size()) break;
    }
    return out;
}

}  // namespace

TEST_CASE("verify_hom examples") {
    auto D = share(FiniteLattice::divisor(12));
    CHECK_NOTHROW(verify_hom(QframeHom::identity(D)));
    auto c1 = share(FiniteLattice::chain(1));
    auto c2 = share(FiniteLattice::chain(2));
    CHECK(code_of([&] { verify_hom(c1, c2, {0, 2}); }) == "NotSegmentPreserving");
    CHECK(code_of([&] { verify_hom(c1, c2, {1, 2}); }) == "ZeroNotPreserved");
    auto m3 = share(FiniteLattice::diamond());
    // collapsing [0,c] is a hom; collapsing [0,b] and [0,c] is not
    CHECK_NOTHROW(verify_hom(m3, c1, {0, 1, 1, 0, 1}));
    CHECK(code_of([&] { verify_hom(m3, c1, {0, 1, 0, 0, 1}); }) == "NotJoinPreserving");
    CHECK(code_of([&] { verify_hom(c2, c1, {0, 1, 0}); }) == "NotJoinPreserving");
}

TEST_CASE("kernel and algebraicity") {
    auto c2 = share(FiniteLattice::chain(2));
    const auto id = kernel_and_algebraicity(QframeHom::identity(c2));
    CHECK(id.kernel == c2->bottom());
    CHECK(id.algebraic);
    CHECK(id.injective);
    const auto zero = kernel_and_algebraicity(verify_hom(c2, c2, {0, 0, 0}));
    CHECK(zero.kernel == c2->top());
    CHECK(zero.algebraic);
    const auto na = non_algebraic_example();
    const auto info = kernel_and_algebraicity(na);
    CHECK(info.kernel == na.source->bottom());
    CHECK_FALSE(info.algebraic);
    CHECK_FALSE(info.injective);
}

TEST_CASE("hom invariants over all homs between small lattices") {
    std::vector<LatticePtr> Ls{share(FiniteLattice::chain(1)), share(FiniteLattice::chain(2)), share(FiniteLattice::diamond()),
                               share(FiniteLattice::divisor(12)), share(FiniteLattice::boolean(2))};
    std::size_t count = 0;
    for (const auto& S : Ls)
        for (const auto& T : Ls) {
            const auto homs = all_homs(S, T);
            for (const auto& f : homs) {
                ++count;
                const auto info = kernel_and_algebraicity(f);
                CHECK(info.injective == (info.algebraic && info.kernel == S->bottom()));
                if (info.injective) CHECK(S->length() <= T->length());
                if (info.surjective) CHECK(T->length() <= S->length());
                if (S->length() == T->length()) CHECK(info.injective == info.surjective);
                // image is [0, phi(1)]
                std::vector<bool> hit(T->size());
                for (auto y : f.map) hit[y] = true;
                for (Elem t = 0; t < T->size(); ++t) CHECK(hit[t] == T->leq(t, info.image_top));
                CHECK(T->leq(f(socle_series(*S).socle), socle_series(*T).socle));
                for (const auto& g : all_homs(T, S)) CHECK_NOTHROW(verify_hom(compose(g, f)));
            }
        }
    CHECK(count > 20);
}

TEST_CASE("quotients by congruences") {
    auto D = share(FiniteLattice::divisor(12));
    auto id = [&](const char* s) { return *D->find_label(s); };
    const auto R = Congruence::from_classes(6, {{id("1"), id("2"), id("4")}, {id("3"), id("6"), id("12")}});
    const auto Q = quotient_by_congruence(D, R);
    CHECK(Q.lattice->size() == 2);
    CHECK(Q.lattice->length() == 1);
    CHECK_NOTHROW(verify_hom(Q.projection));
    CHECK(kernel_and_algebraicity(Q.projection).surjective);
    CHECK(quotient_by_congruence(D, Congruence::equality(6)).lattice->size() == 6);
    CHECK(quotient_by_congruence(D, Congruence::full(6)).lattice->is_trivial());
    const auto bad = Congruence::from_classes(6, {{id("1"), id("2")}, {id("3"), id("4"), id("6"), id("12")}});
    CHECK(code_of([&] { verify_congruence(*D, bad); }) == "NotCongruence");
    const auto closed = close_relation(*D, {{id("1"), id("2")}});
    CHECK_NOTHROW(verify_congruence(*D, closed));
    CHECK(closed.classes == 4);  // {1,2}, {3,6}, {4}, {12}
}

TEST_CASE("random strong congruences give verified quotients") {
    std::mt19937_64 rng(99);
    int done = 0;
    for (int trial = 0; trial < 3000 && done < 100; ++trial) {
        auto L = oracle::random_lattice(4 + rng() % 9, 0.3, rng);
        if (!L) continue;
        auto Lp = share(std::move(*L));
        const Elem a = static_cast<Elem>(rng() % Lp->size()), b = static_cast<Elem>(rng() % Lp->size());
        const auto R = close_relation(*Lp, {{a, b}});
        if (code_of([&] { verify_congruence(*Lp, R); }) != "") continue;
        const auto Q = quotient_by_congruence(Lp, R);
        CHECK_NOTHROW(verify_hom(Q.projection));
        CHECK(kernel_and_algebraicity(Q.projection).surjective);
        // [a] v [b] = [a v b] and [a] ^ [b] = [a ^ b]
        for (Elem x = 0; x < Lp->size(); ++x)
            for (Elem y = 0; y < Lp->size(); ++y) {
                CHECK(Q.lattice->join(R.cls[x], R.cls[y]) == R.cls[Lp->join(x, y)]);
                CHECK(Q.lattice->meet(R.cls[x], R.cls[y]) == R.cls[Lp->meet(x, y)]);
            }
        ++done;
    }
    CHECK(done == 100);
}
