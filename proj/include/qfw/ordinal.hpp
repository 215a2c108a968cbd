#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qfw {

// Ordinal below w^w in Cantor normal form: sum of w^exp * coef with strictly
// decreasing exponents and positive coefficients.
class Ordinal {
public:
    struct Term {
        std::uint32_t exp;
        std::uint64_t coef;
        friend bool operator==(const Term&, const Term&) = default;
    };

    Ordinal() = default;
    static Ordinal finite(std::uint64_t n);
    static Ordinal omega_pow(std::uint32_t e, std::uint64_t c = 1);
    static Ordinal from_terms(std::vector<Term> terms);
    // Accepts "0", "7", "w", "w^2*3+w+5", "w*2", "omega^2".
    static Ordinal parse(std::string_view text);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_finite() const noexcept { return terms_.empty() || terms_.front().exp == 0; }
    bool is_successor() const noexcept { return !terms_.empty() && terms_.back().exp == 0; }
    bool is_limit() const noexcept { return !terms_.empty() && terms_.back().exp > 0; }
    // Leading exponent; 0 for finite ordinals (including 0).
    std::uint32_t degree() const noexcept { return terms_.empty() ? 0 : terms_.front().exp; }
    std::uint64_t finite_value() const;  // requires is_finite()
    std::uint64_t finite_tail() const noexcept;

    Ordinal operator+(const Ordinal& rhs) const;
    Ordinal successor() const { return *this + finite(1); }
    Ordinal predecessor() const;  // requires is_successor()
    // The unique d with *this + d == b; requires *this <= b.
    Ordinal left_subtract_from(const Ordinal& b) const;
    // Drops the terms below w^a and lowers the remaining exponents by a.
    Ordinal shift_down(std::uint32_t a) const;
    // Terms of exponent >= a only.
    Ordinal truncate_below(std::uint32_t a) const;

    std::string to_string() const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b) = default;

private:
    std::vector<Term> terms_;
};

}  // namespace qfw
