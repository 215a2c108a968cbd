#include "qfw/error.hpp"
#include "qfw/ordinal.hpp"

#include <doctest.h>

using qfw::Ordinal;

TEST_CASE("parse and print round trip") {
    for (const char* s : {"0", "7", "w", "w+1", "w*2", "w^2*3+w+5", "w^3"}) CHECK(Ordinal::parse(s).to_string() == s);
    CHECK(Ordinal::parse("omega^2 + omega").to_string() == "w^2+w");
    CHECK(Ordinal::parse("ω*3").to_string() == "w*3");
    CHECK_THROWS_AS(Ordinal::parse("3*w"), qfw::Error);
    CHECK_THROWS_AS(Ordinal::parse("w+"), qfw::Error);
}

TEST_CASE("addition absorbs lower terms on the left") {
    const auto w = Ordinal::omega_pow(1);
    CHECK(Ordinal::finite(3) + w == w);
    CHECK(w + Ordinal::finite(3) != w);
    CHECK((w + w).to_string() == "w*2");
    CHECK((Ordinal::parse("w^2+w*4+1") + Ordinal::parse("w*2+3")).to_string() == "w^2+w*6+3");
}

TEST_CASE("left subtraction inverts addition") {
    const char* xs[] = {"0", "1", "5", "w", "w+3", "w*2", "w^2", "w^2*2+w+1", "w^3+7"};
    for (auto a : xs)
        for (auto b : xs) {
            const auto A = Ordinal::parse(a), B = Ordinal::parse(b);
            if (B < A) continue;
            const auto d = A.left_subtract_from(B);
            CHECK(A + d == B);
        }
}

TEST_CASE("comparison is a total order consistent with addition") {
    const auto a = Ordinal::parse("w^2+1"), b = Ordinal::parse("w^2+w");
    CHECK(a < b);
    CHECK(Ordinal::parse("w*5+100") < Ordinal::parse("w*6"));
    CHECK(Ordinal::finite(1000) < Ordinal::omega_pow(1));
}

TEST_CASE("successor, limit and degree") {
    const auto x = Ordinal::parse("w^2+w+2");
    CHECK(x.is_successor());
    CHECK(x.predecessor().to_string() == "w^2+w+1");
    CHECK(Ordinal::parse("w*2").is_limit());
    CHECK(x.degree() == 2);
    CHECK(x.shift_down(1).to_string() == "w+1");
    CHECK(x.truncate_below(1).to_string() == "w^2+w");
}
