#include "util.hpp"
#include "qfw/sofic.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace qfw;

namespace {

const auto Z = DiscreteGroup::lattice(1);
const auto Z2 = DiscreteGroup::lattice(2);

std::vector<GroupWord> ints(std::initializer_list<std::int64_t> xs) {
    std::vector<GroupWord> out;
    for (auto x : xs) out.push_back({x});
    return out;
}

std::vector<Perm> all_perms(std::size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0U);
    std::vector<Perm> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

TEST_CASE("hamming distance") {
    const Perm id{0, 1, 2, 3}, t{1, 0, 2, 3}, tt{1, 0, 3, 2};
    CHECK(hamming(t, t) == Rational(0));
    CHECK(hamming(id, t) == Rational(2, 4));
    CHECK(hamming(id, tt) == Rational(1));
    CHECK(code_of([&] { (void)hamming(id, Perm{0, 1}); }) == "DomainMismatch");
}

TEST_CASE("hamming is a metric on S_V, exhaustively for |V| <= 6") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto P = all_perms(n);
        const auto m = P.size();
        std::vector<std::uint8_t> d(m * m);
        bool ok = true;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                std::uint8_t c = 0;
                for (std::size_t v = 0; v < n; ++v) c += P[i][v] != P[j][v];
                d[i * m + j] = c;
                ok = ok && (c == 0) == (i == j);
            }
        for (std::size_t i = 0; i < m && ok; ++i)
            for (std::size_t j = 0; j < m && ok; ++j) {
                ok = d[i * m + j] == d[j * m + i];
                for (std::size_t k = 0; k < m && ok; ++k) ok = d[i * m + k] <= d[i * m + j] + d[j * m + k];
            }
        CHECK(ok);
        // the library function against the counts
        CHECK(hamming(P.front(), P.back()) == Rational(d[m - 1], static_cast<std::int64_t>(n)));
    }
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
        Perm a(40), b(40), c(40);
        std::iota(a.begin(), a.end(), 0U);
        b = c = a;
        std::shuffle(a.begin(), a.end(), rng);
        std::shuffle(b.begin(), b.end(), rng);
        std::shuffle(c.begin(), c.end(), rng);
        CHECK(hamming(a, c) <= hamming(a, b) + hamming(b, c));
    }
}

TEST_CASE("group words and parsing") {
    CHECK(Z.parse_set("{-1,0,1}") == ints({-1, 0, 1}));
    CHECK(Z.parse("\xE2\x88\x92" "3") == GroupWord{-3});
    CHECK(Z2.parse_set("(1,0),(0,-1)") == std::vector<GroupWord>{{0, -1}, {1, 0}});
    CHECK(Z2.format({2, -1}) == "(2,-1)");
    const auto C3 = DiscreteGroup::finite(FiniteGroup::cyclic(3));
    CHECK(C3.parse_set("e,t,t^2").size() == 3);
    CHECK(C3.is_symmetric(C3.parse_set("e,t,t^2")));
    CHECK_FALSE(C3.is_symmetric(C3.parse_set("e,t")));
    CHECK(parse_rational("1/500") == Rational(1, 500));
    CHECK(code_of([] { (void)parse_rational("0.25"); }) == "ParseError");
}

TEST_CASE("certificates") {
    const auto K = ints({-1, 0, 1});
    SUBCASE("translation action of Z/8") {
        const auto qa = build_quasi_action(Z, QAKind::finite_quotient, {{8}, K, 0});
        const auto c = verify_quasi_action(qa, K, Rational(1, 1000));
        CHECK(c.eps_mult == Rational(0));
        CHECK(c.eps_free == Rational(0));
        CHECK(c.valid);
    }
    SUBCASE("cycled window on Z") {
        const auto qa = build_quasi_action(Z, QAKind::folner_box, {{10}, K, Rational(2, 10)});
        CHECK(verify_quasi_action(qa, K, Rational(2, 10)).eps_mult <= Rational(2, 10));
    }
    SUBCASE("reversed refill displaces boundary points") {
        const auto qa = build_quasi_action(Z, QAKind::folner_box, {{10}, K, Rational(2, 10), Boundary::reversed});
        const auto H = Z.products(K, K);
        const auto c = verify_quasi_action(qa, H, 1);
        // phi(2)phi(2) and phi(4) disagree on the four cells pushed out
        CHECK(c.eps_mult == Rational(4, 10));
        // phi(1)phi(1) sends 8 -> 0, phi(2) sends 8 -> 1
        CHECK(verify_quasi_action(qa, K, 1).eps_mult == Rational(2, 10));
    }
    SUBCASE("constant identity map fails freeness") {
        QuasiAction qa(Z, 5);
        for (auto k : {-2, -1, 0, 1, 2}) qa.set({k}, {0, 1, 2, 3, 4});
        const auto c = verify_quasi_action(qa, K, Rational(1, 2));
        CHECK(c.qa1);
        CHECK(c.qa2);
        CHECK_FALSE(c.qa3);
        CHECK(c.eps_free == Rational(1));
    }
    SUBCASE("missing products") {
        QuasiAction qa(Z, 3);
        qa.set({0}, {0, 1, 2});
        qa.set({1}, {1, 2, 0});
        CHECK(code_of([&] { (void)verify_quasi_action(qa, ints({0, 1}), 0); }) == "DomainIncomplete");
        CHECK(code_of([&] { qa.set({2}, {0, 0, 1}); }) == "NotAPermutation");
    }
}

TEST_CASE("builders") {
    const auto K = ints({-1, 0, 1});
    const auto qa = build_quasi_action(Z, QAKind::finite_quotient, {{500}, K, 0});
    CHECK(qa.size() == 500);
    CHECK(verify_quasi_action(qa, Z.products(K, K), 0).valid);
    CHECK(code_of([&] { (void)build_quasi_action(Z, QAKind::finite_quotient, {{2}, K, 0}); }) == "QuotientNotInjectiveOnK");

    const auto ball = Z2.parse_set("(0,0),(1,0),(-1,0),(0,1),(0,-1)");
    const auto box = build_quasi_action(Z2, QAKind::folner_box, {{20, 20}, ball, Rational(1, 10), Boundary::reversed});
    const auto c = verify_quasi_action(box, ball, Rational(1, 10));
    // each shift in the ball pushes out one row of 20 cells
    CHECK(c.eps_mult <= Rational(2 * 20, 400));
    CHECK(c.valid);
    try {
        (void)build_quasi_action(Z2, QAKind::folner_box, {{20, 20}, ball, Rational(1, 50), Boundary::reversed});
        FAIL("expected BoxTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == "BoxTooSmall");
        REQUIRE(e.witness().size() == 1);
        const auto side = static_cast<std::uint64_t>(e.witness()[0]);
        CHECK(side > 20);
        CHECK(verify_quasi_action(build_quasi_action(Z2, QAKind::folner_box, {{side, side}, ball, Rational(1, 2), Boundary::reversed}),
                                  ball, Rational(1, 50))
                  .valid);
    }
    const auto self = self_action(FiniteGroup::cyclic(6), 2);
    CHECK(self.size() == 12);
    const auto G6 = DiscreteGroup::finite(FiniteGroup::cyclic(6));
    CHECK(verify_quasi_action(self, G6.elements(), 0).valid);
    const auto noisy = perturb(self, 1, 3);
    CHECK(verify_quasi_action(noisy, G6.elements(), 1).eps_mult > Rational(0));
}

TEST_CASE("good points on Z/500") {
    const auto K = ints({-1, 0, 1});
    const auto qa = build_quasi_action(Z, QAKind::finite_quotient, {{500}, K, 0});
    const auto r = good_points(qa, K, 10, Rational(1, 501));
    CHECK(r.H.size() == 5);
    CHECK(r.eps_bound == Rational(1, 500));
    CHECK(r.Vbar.size() == 500);
    CHECK(r.W.size() == 166);
    CHECK(r.W[1] == 3);
    CHECK(r.covering);
    CHECK(code_of([&] { (void)good_points(qa, K, 10, Rational(1, 500)); }) == "EpsilonTooLarge");
    CHECK(code_of([&] { (void)good_points(qa, ints({0, 1}), 10); }) == "NotSymmetric");
    // measured eps = 0
    CHECK(good_points(qa, K, 10).W.size() == 166);
}

TEST_CASE("good points for exact finite actions") {
    for (std::size_t n : {3, 5, 8}) {
        const auto G = DiscreteGroup::finite(FiniteGroup::cyclic(n));
        const auto qa = self_action(G.finite_group(), 3);
        const auto K = G.parse_set("e,t," + G.finite_group().name(G.finite_group().inv(1)));
        const auto r = good_points(qa, K, 2);
        CHECK(r.Vbar.size() == qa.size());
    }
}

TEST_CASE("good points with noise: the bounds against an independent count") {
    const auto K = ints({-1, 0, 1});
    std::mt19937_64 rng(9);
    int checked = 0;
    for (std::uint64_t V : {400, 700, 1000}) {
        const auto base = build_quasi_action(Z, QAKind::finite_quotient, {{V}, K, 0});
        for (std::size_t swaps : {0, 1}) {
            const auto qa = perturb(base, swaps, rng());
            try {
                const auto r = good_points(qa, K, 2);
                // recount bad points directly
                std::size_t bad = 0;
                for (std::uint32_t v = 0; v < V; ++v) {
                    bool ok = true;
                    for (auto a = -2; a <= 2; ++a)
                        for (auto b = -2; b <= 2; ++b) {
                            if (a != b && qa.act({a}, v) == qa.act({b}, v)) ok = false;
                            if (qa.act({a + b}, v) != qa.act({a}, qa.act({b}, v))) ok = false;
                        }
                    bad += !ok;
                }
                CHECK(r.Vbar.size() == V - bad);
                CHECK(2 * r.Vbar.size() >= V);
                ++checked;
            } catch (const Error& e) {
                CHECK(e.code() == "EpsilonTooLarge");
            }
        }
    }
    CHECK(checked >= 3);
}
