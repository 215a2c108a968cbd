#pragma once

// Finite groups, finite rings and crossed products R*G.

#include "qfw/error.hpp"
#include "qfw/zmod.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qfw {

using zmod::Matrix;
using zmod::Row;
using GElem = std::uint32_t;

class FiniteGroup {
public:
    // Row-major multiplication table; throws NotAGroup with a witness.
    static FiniteGroup from_table(std::size_t n, std::vector<GElem> table, std::vector<std::string> names = {});
    static FiniteGroup cyclic(std::size_t n);  // e, t, t^2, ...
    static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);
    static FiniteGroup trivial() { return cyclic(1); }

    std::size_t size() const noexcept { return n_; }
    GElem mul(GElem g, GElem h) const noexcept { return table_[g * n_ + h]; }
    GElem identity() const noexcept { return e_; }
    GElem inv(GElem g) const noexcept { return inv_[g]; }
    const std::string& name(GElem g) const noexcept { return names_[g]; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<GElem> find(const std::string& name) const;
    const std::string& kind() const noexcept { return kind_; }

private:
    std::size_t n_ = 0;
    GElem e_ = 0;
    std::vector<GElem> table_, inv_;
    std::vector<std::string> names_;
    std::string kind_;
};

// Ring whose additive group is (Z/m)^d. Multiplication is the bilinear
// extension of the basis products, so checking the axioms on basis vectors
// checks them on all elements.
class FiniteRing {
public:
    // products[i*d + j] = e_i e_j. Throws NotARing(clause, i, j, k).
    static FiniteRing from_structure(std::uint32_t m, std::size_t d, std::vector<Row> products, Row one, std::string name);
    static FiniteRing zmod(std::uint32_t n);
    // F_p[x]/(poly), coefficients listed from x^0 up; poly must be monic.
    // Throws NotIrreducible when the quotient is not a field.
    static FiniteRing fq(std::uint32_t p, const std::vector<std::uint32_t>& poly);
    static FiniteRing matrix(const FiniteRing& S, std::size_t k);

    std::uint32_t modulus() const noexcept { return m_; }
    std::size_t dim() const noexcept { return d_; }
    // m^d, saturated at 2^63.
    std::uint64_t order() const noexcept { return order_; }
    const std::string& name() const noexcept { return name_; }
    const Row& one() const noexcept { return one_; }
    Row zero() const { return Row(d_, 0); }
    Row basis(std::size_t i) const;
    const Row& basis_product(std::size_t i, std::size_t j) const { return products_[i * d_ + j]; }

    Row add(const Row& a, const Row& b) const;
    Row sub(const Row& a, const Row& b) const;
    Row neg(const Row& a) const;
    Row mul(const Row& a, const Row& b) const;
    bool is_commutative() const;

    Matrix right_mult(const Row& x) const;  // y -> y x
    Matrix left_mult(const Row& x) const;   // y -> x y
    std::optional<Row> right_inverse(const Row& x) const;  // y with x y = 1
    std::optional<Row> inverse(const Row& x) const;        // two-sided
    bool is_unit(const Row& x) const { return inverse(x).has_value(); }

    // Little-endian mixed radix index; elements() needs order() <= cap.
    std::uint64_t index(const Row& x) const;
    Row element(std::uint64_t i) const;
    std::vector<Row> elements(const Caps& caps = default_caps()) const;
    std::vector<Row> units(const Caps& caps = default_caps()) const;

    // r -> r * S. Throws NotAutomorphism(tag, ...).
    void verify_automorphism(const Matrix& S, std::int64_t tag) const;
    // Matrix of r -> r^p for prime modulus p; verified to be an automorphism.
    Matrix frobenius() const;
    std::string format(const Row& x) const;

private:
    std::uint32_t m_ = 2;
    std::size_t d_ = 0;
    std::uint64_t order_ = 1;
    std::vector<Row> products_;
    Row one_;
    std::string name_;
};

struct CrossedProductSpec {
    FiniteRing R;
    FiniteGroup G;
    std::vector<Matrix> sigma;  // r^{sigma(g)} = r * sigma[g]
    std::vector<Row> tau;       // tau(g,h) at g*|G| + h

    static CrossedProductSpec group_ring(FiniteRing R, FiniteGroup G);
    Row act(GElem g, const Row& r) const { return zmod::apply(r, sigma[g]); }
    const Row& t(GElem g, GElem h) const { return tau[g * G.size() + h]; }
};

// R*G as a ring on (Z/m)^{d|G|}; block g holds the coefficient of g.
class CrossedProduct {
public:
    const CrossedProductSpec& spec() const noexcept { return spec_; }
    const FiniteRing& ring() const noexcept { return ring_; }
    Row embed(const Row& r) const { return element(r, spec_.G.identity()); }  // r e
    Row element(const Row& r, GElem g) const;                                  // r g
    Row coefficient(const Row& x, GElem g) const;
    // The product computed straight from (r g)(s h) = r s^{sigma(g)} tau(g,h) gh.
    Row convolve(const Row& x, const Row& y) const;

private:
    friend CrossedProduct verify_crossed(CrossedProductSpec spec, const Caps& caps);
    CrossedProductSpec spec_;
    FiniteRing ring_;
};

// Checks (Cross.1-3) and automorphisms; throws CrossViolation(index, ...),
// NotAutomorphism(g) or NotUnit(g, h).
CrossedProduct verify_crossed(CrossedProductSpec spec, const Caps& caps = default_caps());

}  // namespace qfw
