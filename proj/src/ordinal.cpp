#include "qfw/ordinal.hpp"

#include "qfw/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace qfw {

Ordinal Ordinal::finite(std::uint64_t n) {
    Ordinal o;
    if (n > 0) o.terms_.push_back({0, n});
    return o;
}

Ordinal Ordinal::omega_pow(std::uint32_t e, std::uint64_t c) {
    Ordinal o;
    if (c > 0) o.terms_.push_back({e, c});
    return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
    Ordinal o;
    for (const auto& t : terms) {
        if (t.coef == 0) continue;
        if (!o.terms_.empty() && o.terms_.back().exp <= t.exp)
            throw Error("BadOrdinal", "exponents must be strictly decreasing");
        o.terms_.push_back(t);
    }
    return o;
}

namespace {

std::uint64_t parse_uint(std::string_view s, std::size_t& pos) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr == s.data() + pos) throw Error("BadOrdinal", "expected a number in '" + std::string(s) + "'");
    pos = static_cast<std::size_t>(ptr - s.data());
    return v;
}

}  // namespace

Ordinal Ordinal::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    // normalise spellings of omega
    for (std::string_view w : {"omega", "ω"}) {
        for (auto p = s.find(w); p != std::string::npos; p = s.find(w)) s.replace(p, w.size(), "w");
    }
    if (s.empty()) throw Error("BadOrdinal", "empty ordinal");
    Ordinal acc;
    std::size_t pos = 0;
    while (pos < s.size()) {
        Term t{0, 1};
        if (s[pos] == 'w') {
            ++pos;
            t.exp = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                t.exp = static_cast<std::uint32_t>(parse_uint(s, pos));
            }
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                t.coef = parse_uint(s, pos);
            }
        } else {
            t.coef = parse_uint(s, pos);
            if (pos < s.size() && s[pos] == '*') {
                // allow "3*w" only as a finite multiple of 1
                throw Error("BadOrdinal", "left multiplication is not supported: '" + s + "'");
            }
        }
        acc = acc + Ordinal::omega_pow(t.exp, t.coef);
        if (pos < s.size()) {
            if (s[pos] != '+') throw Error("BadOrdinal", "unexpected character in '" + s + "'");
            ++pos;
            if (pos == s.size()) throw Error("BadOrdinal", "trailing '+'");
        }
    }
    return acc;
}

std::uint64_t Ordinal::finite_value() const {
    if (!is_finite()) throw Error("NotFinite", "ordinal " + to_string() + " is infinite");
    return terms_.empty() ? 0 : terms_.front().coef;
}

std::uint64_t Ordinal::finite_tail() const noexcept {
    return is_successor() ? terms_.back().coef : 0;
}

Ordinal Ordinal::operator+(const Ordinal& rhs) const {
    if (rhs.terms_.empty()) return *this;
    const auto lead = rhs.terms_.front().exp;
    Ordinal out;
    for (const auto& t : terms_) {
        if (t.exp > lead)
            out.terms_.push_back(t);
        else if (t.exp == lead) {
            out.terms_.push_back({lead, t.coef + rhs.terms_.front().coef});
            out.terms_.insert(out.terms_.end(), rhs.terms_.begin() + 1, rhs.terms_.end());
            return out;
        }
    }
    out.terms_.insert(out.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
    return out;
}

Ordinal Ordinal::predecessor() const {
    if (!is_successor()) throw Error("NotSuccessor", to_string() + " has no predecessor");
    Ordinal out = *this;
    if (--out.terms_.back().coef == 0) out.terms_.pop_back();
    return out;
}

Ordinal Ordinal::left_subtract_from(const Ordinal& b) const {
    if (b < *this) throw Error("BadOrdinal", "left subtraction needs a <= b");
    const auto& a = terms_;
    const auto& bt = b.terms_;
    std::size_t i = 0;
    while (i < a.size() && i < bt.size() && a[i] == bt[i]) ++i;
    Ordinal d;
    if (i == a.size()) {
        d.terms_.assign(bt.begin() + static_cast<std::ptrdiff_t>(i), bt.end());
        return d;
    }
    if (a[i].exp == bt[i].exp) {
        d.terms_.push_back({bt[i].exp, bt[i].coef - a[i].coef});
        d.terms_.insert(d.terms_.end(), bt.begin() + static_cast<std::ptrdiff_t>(i) + 1, bt.end());
    } else {
        d.terms_.assign(bt.begin() + static_cast<std::ptrdiff_t>(i), bt.end());
    }
    return d;
}

Ordinal Ordinal::shift_down(std::uint32_t a) const {
    Ordinal out;
    for (const auto& t : terms_)
        if (t.exp >= a) out.terms_.push_back({t.exp - a, t.coef});
    return out;
}

Ordinal Ordinal::truncate_below(std::uint32_t a) const {
    Ordinal out;
    for (const auto& t : terms_)
        if (t.exp >= a) out.terms_.push_back(t);
    return out;
}

std::string Ordinal::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += "+";
        if (t.exp == 0) {
            s += std::to_string(t.coef);
            continue;
        }
        s += "w";
        if (t.exp > 1) s += "^" + std::to_string(t.exp);
        if (t.coef > 1) s += "*" + std::to_string(t.coef);
    }
    return s;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const auto n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.terms_[i];
        const auto& y = b.terms_[i];
        if (x.exp != y.exp) return x.exp <=> y.exp;
        if (x.coef != y.coef) return x.coef <=> y.coef;
    }
    return a.terms_.size() <=> b.terms_.size();
}

}  // namespace qfw
