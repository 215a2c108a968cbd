#include "oracle.hpp"
#include "qfw/lattice.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace qfw;

namespace {

std::vector<std::vector<bool>> divisor_relation(const std::vector<int>& ds) {
    std::vector<std::vector<bool>> rel(ds.size(), std::vector<bool>(ds.size()));
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.size(); ++j) rel[i][j] = ds[j] % ds[i] == 0;
    return rel;
}

Elem by_label(const FiniteLattice& L, const std::string& s) { return *L.find_label(s); }

// Every maximal chain from bottom to top, by depth-first search over covers.
void maximal_chains(const FiniteLattice& L, Elem x, std::vector<Elem>& path, std::vector<std::vector<Elem>>& out) {
    path.push_back(x);
    if (x == L.top())
        out.push_back(path);
    else
        for (auto c : L.upper_covers(x)) maximal_chains(L, c, path, out);
    path.pop_back();
}

}  // namespace

TEST_CASE("verify_lattice on the divisor relation of 12") {
    const std::vector<int> ds{1, 2, 3, 4, 6, 12};
    const auto L = FiniteLattice::from_relation(divisor_relation(ds));
    CHECK(L.size() == 6);
    CHECK(L.top() == 5);
    CHECK(L.bottom() == 0);
    // lub and glb agree with lcm and gcd on every pair
    for (Elem a = 0; a < 6; ++a)
        for (Elem b = 0; b < 6; ++b) {
            CHECK(ds[L.join(a, b)] == std::lcm(ds[a], ds[b]));
            CHECK(ds[L.meet(a, b)] == std::gcd(ds[a], ds[b]));
        }
}

TEST_CASE("verify_lattice diagnostics") {
    CHECK(FiniteLattice::from_relation({{true}}).is_trivial());
    // 0 < a, b < c, d: two maximal elements
    std::vector<std::vector<bool>> rel(4, std::vector<bool>(4, false));
    for (int i = 0; i < 4; ++i) rel[i][i] = true;
    rel[0][1] = rel[0][2] = rel[0][3] = true;
    rel[1][2] = rel[1][3] = true;
    try {
        FiniteLattice::from_relation(rel);
        FAIL("expected NotALattice");
    } catch (const Error& e) {
        CHECK(e.code() == "NotALattice");
        CHECK(e.witness().size() == 2);
    }
    auto cyc = rel;
    cyc[2][1] = true;
    try {
        FiniteLattice::from_relation(cyc);
        FAIL("expected NotAPoset");
    } catch (const Error& e) {
        CHECK(e.code() == "NotAPoset");
    }
    std::vector<std::vector<bool>> nontrans{{true, true, false}, {false, true, true}, {false, false, true}};
    try {
        FiniteLattice::from_relation(nontrans);
        FAIL("expected NotAPoset");
    } catch (const Error& e) {
        CHECK(e.code() == "NotAPoset");
        CHECK(e.witness() == std::vector<std::int64_t>{0, 1, 2});
    }
}

TEST_CASE("modularity and distributivity") {
    const auto m3 = lattice_props(FiniteLattice::diamond());
    CHECK(m3.modular);
    CHECK_FALSE(m3.distributive);
    const auto n5 = lattice_props(FiniteLattice::pentagon());
    CHECK_FALSE(n5.modular);
    REQUIRE(n5.modular_witness.has_value());
    const auto P = FiniteLattice::pentagon();
    const auto [a, b, c] = *n5.modular_witness;
    CHECK(P.leq(a, c));
    CHECK(P.join(a, P.meet(b, c)) != P.meet(P.join(a, b), c));
    CHECK(lattice_props(ChainLattice{Ordinal::parse("w^2"), Orientation::reversed}).distributive);
}

TEST_CASE("modularity agrees with the pentagon characterization on random small lattices") {
    std::mt19937_64 rng(2024);
    int tested = 0;
    for (int trial = 0; trial < 4000 && tested < 400; ++trial) {
        const auto L = oracle::random_lattice(3 + rng() % 6, 0.35, rng);
        if (!L) continue;
        ++tested;
        CHECK(lattice_props(*L).modular == oracle::modular_by_pentagon(*L));
    }
    CHECK(tested >= 100);
}

TEST_CASE("family_props") {
    const auto V = oracle::subspace_lattice_f2(3);
    // coordinate lines: member masks {0, e_i}
    const std::vector<Elem> lines{by_label(V, "3"), by_label(V, "5"), by_label(V, "11")};
    const auto r = family_props(V, lines);
    CHECK(r.join_independent);
    CHECK(r.basis);
    CHECK(family_props(V, std::vector<Elem>{lines[0]}).join_independent);
    const auto D = FiniteLattice::divisor(12);
    const auto bad = family_props(D, std::vector<Elem>{by_label(D, "4"), by_label(D, "6")});
    CHECK_FALSE(bad.join_independent);
    CHECK_THROWS_AS(family_props(D, std::vector<Elem>{D.bottom()}), Error);
}

TEST_CASE("products add lengths") {
    const auto c2 = FiniteLattice::chain(2), c3 = FiniteLattice::chain(3);
    const auto P = product(c2, c3);
    CHECK(P.size() == 12);
    CHECK(P.length() == 5);
    const auto c1 = FiniteLattice::chain(1);
    const auto Q = product(c1, c2);
    CHECK(Q.size() == 6);
    CHECK(Q.length() == 3);
    const auto T = product(FiniteLattice::divisor(12), FiniteLattice::chain(0));
    CHECK(T.size() == 6);
    CHECK(T.length() == 3);
    const auto M = product(FiniteLattice::diamond(), c1);
    CHECK(M.size() == 10);
    CHECK(M.length() == 3);
    const auto props = lattice_props(M);
    CHECK(props.modular);
    CHECK_FALSE(props.distributive);
    Caps tiny;
    tiny.table_elements = 8;
    CHECK_THROWS_AS(product(FiniteLattice::diamond(), c1, tiny), Error);
}

TEST_CASE("length, composition series and Jordan-Holder on divisor lattices") {
    const auto D = FiniteLattice::divisor(12);
    CHECK(length(D) == 3);
    CHECK(length(FiniteLattice::chain(0)) == 0);
    CHECK(FiniteLattice::chain(1).is_atom());
    const std::vector<Elem> coarse{D.bottom(), D.top()};
    const auto series = composition_refine(D, coarse);
    CHECK(series.size() == 4);
    const auto again = composition_refine(D, series);
    CHECK(again == series);
    CHECK_THROWS_AS(composition_refine(D, std::vector<Elem>{D.top(), D.bottom()}), Error);
    for (std::uint64_t n : {1ULL, 12ULL, 30ULL, 64ULL, 360ULL, 1001ULL}) {
        const auto L = FiniteLattice::divisor(n);
        std::vector<std::vector<Elem>> chains;
        std::vector<Elem> path;
        maximal_chains(L, L.bottom(), path, chains);
        for (const auto& c : chains) CHECK(c.size() - 1 == oracle::big_omega(n));
    }
}

TEST_CASE("Schreier refinement of two chains") {
    const auto D = FiniteLattice::divisor(12);
    const std::vector<Elem> c1{D.bottom(), by_label(D, "2"), by_label(D, "4"), D.top()};
    const std::vector<Elem> c2{D.bottom(), by_label(D, "3"), by_label(D, "6"), D.top()};
    const auto sp = schreier_refine(D, c1, c2);
    CHECK(sp.equal_length);
    CHECK(sp.perspective);
    CHECK(sp.first.size() == 4);
    const auto V = oracle::subspace_lattice_f2(3);
    const std::vector<Elem> v1{V.bottom(), by_label(V, "3"), V.top()};
    const std::vector<Elem> v2{V.bottom(), by_label(V, "f"), V.top()};
    const auto sv = schreier_refine(V, v1, v2);
    CHECK(sv.equal_length);
    CHECK(sv.perspective);
}

TEST_CASE("length of joins and meets") {
    for (std::uint64_t n : {60ULL, 72ULL, 210ULL}) {
        const auto L = FiniteLattice::divisor(n);
        for (Elem x = 0; x < L.size(); ++x)
            for (Elem y = 0; y < L.size(); ++y) CHECK(L.height(L.join(x, y)) + L.height(L.meet(x, y)) == L.height(x) + L.height(y));
    }
}

TEST_CASE("socle series") {
    const auto D = FiniteLattice::divisor(12);
    const auto s = socle_series(D);
    CHECK(D.label(s.socle) == "6");
    CHECK(s.semi_artinian);
    const auto A = FiniteLattice::chain(1);
    CHECK(socle_series(A).socle == A.top());
    const ChainLattice rw{Ordinal::omega_pow(1), Orientation::reversed};
    const auto cs = socle_series(rw);
    CHECK(cs.socle == rw.bottom());
    CHECK_FALSE(cs.semi_artinian);
    const auto rs = socle_series(ChainLattice{Ordinal::parse("w+3"), Orientation::reversed});
    CHECK(rs.series.back() == Ordinal::omega_pow(1));
    CHECK(socle_series(ChainLattice{Ordinal::omega_pow(2), Orientation::standard}).semi_artinian);
}

TEST_CASE("socle of joins of independent families") {
    const auto V = oracle::subspace_lattice_f2(4);
    const auto n = static_cast<Elem>(V.size());
    for (Elem x = 1; x < n; ++x)
        for (Elem y = 1; y < n; ++y) {
            const auto sj = socle_of(V, V.join(x, y));
            const auto js = V.join(socle_of(V, x), socle_of(V, y));
            CHECK(V.leq(js, sj));
            if (V.meet(x, y) == V.bottom()) CHECK(sj == js);
        }
}

TEST_CASE("chain conditions") {
    CHECK(chain_conditions(FiniteLattice::divisor(12)).noetherian);
    const auto s = chain_conditions(ChainLattice{Ordinal::omega_pow(1), Orientation::standard});
    CHECK_FALSE(s.noetherian);
    CHECK(s.artinian);
    const auto r = chain_conditions(ChainLattice{Ordinal::omega_pow(1), Orientation::reversed});
    CHECK(r.noetherian);
    CHECK_FALSE(r.artinian);
    CHECK_FALSE(length(ChainLattice{Ordinal::omega_pow(1), Orientation::standard}).has_value());
    CHECK(*length(ChainLattice{Ordinal::finite(4), Orientation::standard}) == 4);
    // Noetherian iff every [0,x] compact; finite length iff semi-Artinian and Noetherian
    for (const char* a : {"3", "w", "w+2", "w^2", "w*3+1"})
        for (auto o : {Orientation::standard, Orientation::reversed}) {
            const ChainLattice C{Ordinal::parse(a), o};
            const auto cc = chain_conditions(C);
            bool all_compact = true;
            for (const auto& x : {Ordinal{}, Ordinal::finite(1), Ordinal::omega_pow(1), C.alpha})
                if (C.contains(x)) all_compact = all_compact && is_compact(C, x);
            CHECK(cc.noetherian == all_compact);
            CHECK(length(C).has_value() == (socle_series(C).semi_artinian && cc.noetherian));
        }
}
