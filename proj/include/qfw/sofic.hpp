#pragma once

// Quasi-actions on finite sets, normalized Hamming distance and the
// good-point bounds used by the main theorem.

#include "qfw/algebra.hpp"

#include <boost/rational.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qfw {

using Rational = boost::rational<std::int64_t>;
using Perm = std::vector<std::uint32_t>;
using GroupWord = std::vector<std::int64_t>;

std::string format_rational(const Rational& r);
// "1/500", "3", "0.25" is rejected.
Rational parse_rational(const std::string& s);

// Z^d or an explicit finite group; finite elements are stored as {index}.
class DiscreteGroup {
public:
    static DiscreteGroup lattice(std::size_t d);
    static DiscreteGroup finite(FiniteGroup G);

    bool is_finite() const noexcept { return finite_.has_value(); }
    std::size_t rank() const noexcept { return d_; }
    const FiniteGroup& finite_group() const;
    std::string kind() const;

    GroupWord identity() const;
    GroupWord mul(const GroupWord& a, const GroupWord& b) const;
    GroupWord inv(const GroupWord& a) const;
    GroupWord of(GElem g) const { return {static_cast<std::int64_t>(g)}; }
    std::vector<GroupWord> elements() const;  // finite groups only

    std::string format(const GroupWord& g) const;
    // "-1", "(1,-2)" or an element name; U+2212 is accepted as a minus sign.
    GroupWord parse(const std::string& s) const;
    // Comma separated, optionally braced: "{-1,0,1}", "(1,0),(0,1)", "e,t".
    std::vector<GroupWord> parse_set(const std::string& s) const;

    // Sorted, without repeats.
    std::vector<GroupWord> products(const std::vector<GroupWord>& A, const std::vector<GroupWord>& B) const;
    bool is_symmetric(const std::vector<GroupWord>& K) const;

private:
    std::size_t d_ = 1;
    std::optional<FiniteGroup> finite_;
};

Rational hamming(const Perm& a, const Perm& b);  // throws DomainMismatch
Perm compose(const Perm& a, const Perm& b);      // a after b

// phi defined on a finite part of G; out-of-domain lookups are errors.
class QuasiAction {
public:
    QuasiAction(DiscreteGroup G, std::size_t V) : G_(std::move(G)), V_(V) {}

    const DiscreteGroup& group() const noexcept { return G_; }
    std::size_t size() const noexcept { return V_; }
    // Throws NotAPermutation.
    void set(const GroupWord& g, Perm p);
    bool defined(const GroupWord& g) const { return phi_.count(g) != 0; }
    // Throws DomainIncomplete.
    const Perm& at(const GroupWord& g) const;
    std::uint32_t act(const GroupWord& g, std::uint32_t v) const { return at(g)[v]; }
    const std::map<GroupWord, Perm>& domain() const noexcept { return phi_; }

private:
    DiscreteGroup G_;
    std::size_t V_;
    std::map<GroupWord, Perm> phi_;
};

struct SoficCertificate {
    Rational eps;
    Rational eps_mult;  // max d(phi(k1 k2), phi(k1) phi(k2))
    Rational eps_free;  // max over k1 != k2 of 1 - d(phi(k1), phi(k2))
    bool qa1 = false;   // phi(e) = id
    bool qa2 = false;
    bool qa3 = false;
    bool valid = false;
    std::optional<std::pair<GroupWord, GroupWord>> mult_worst, free_worst;
};
// Throws DomainIncomplete when K or some product k1 k2 lies outside the domain.
SoficCertificate verify_quasi_action(const QuasiAction& qa, const std::vector<GroupWord>& K, const Rational& eps);

enum class QAKind { finite_quotient, folner_box };
enum class Boundary { cycled, reversed };
struct QAParams {
    // finite_quotient: moduli n_i of Z^d -> prod Z/n_i, or the number of copies
    // of a finite G acted on by left translation. folner_box: side lengths.
    std::vector<std::uint64_t> dims;
    std::vector<GroupWord> K;
    Rational eps{0};
    Boundary boundary = Boundary::cycled;  // folner_box only
};
// The domain is every product of at most four elements of K u {e}, enough to
// certify at H = KK. Throws QuotientNotInjectiveOnK or BoxTooSmall(side).
QuasiAction build_quasi_action(const DiscreteGroup& G, QAKind kind, const QAParams& params);
// Exact left translation of a finite group on `copies` disjoint copies of itself.
QuasiAction self_action(const FiniteGroup& G, std::size_t copies = 1);
// Composes phi(g), g != e, with `swaps` random transpositions each.
QuasiAction perturb(const QuasiAction& qa, std::size_t swaps, std::uint64_t seed);

struct GoodPoints {
    std::vector<GroupWord> H;       // KK
    Rational eps;                   // certified epsilon
    Rational eps_bound;             // 1 / (2 n |H|^2), strict
    std::vector<std::uint32_t> Vbar;
    std::vector<std::uint32_t> W;   // maximal, pairwise disjoint K-orbits
    bool vbar_bound = false;        // |Vbar| >= (1 - 1/n)|V|
    bool w_bound = false;           // |W| >= |V| / (2|H|)
    bool covering = false;          // HW contains Vbar
    std::string tie_break = "lowest-index-first";
};
// With eps unset the measured certificate is used. Throws NotSymmetric,
// EpsilonTooLarge(bound), NotCertified, or LemmaViolation when a bound fails.
GoodPoints good_points(const QuasiAction& qa, const std::vector<GroupWord>& K, std::uint64_t n,
                       std::optional<Rational> eps = std::nullopt);

}  // namespace qfw
