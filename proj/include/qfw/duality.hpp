#pragma once

// Duality for finite modules over finite fields and Z/p^n, where K = R is an
// injective cogenerator and A = End_R(K) is R itself.

#include "qfw/automata.hpp"

#include <map>

namespace qfw {

enum class BaseKind { field, zpn };

struct DualitySetting {
    FiniteRing R;
    BaseKind kind = BaseKind::field;
    std::uint32_t p = 2;
    // Additive functional c : R -> Z/m whose kernel holds no nonzero ideal;
    // c(r) = r . chi.
    Row chi;
    // Every module here is finite and discrete, so linearly compact means finite.
    static constexpr const char* topology = "discrete; linearly compact = finite";

    // Throws UnsupportedRing unless R is a commutative field or Z/p^n.
    static DualitySetting of(const FiniteRing& R);
    FiniteModule K() const { return FiniteModule::regular(R); }
};

// R-linear maps M -> N as matrices P (x -> x P), vectorised row-major over Z/N.m.
zmod::RowSpace hom_space(const FiniteModule& M, const FiniteModule& N);

// Kernel and image of x -> x P for any moduli; P must be well defined.
LinearVerdict map_verdict(const FiniteModule& M, const FiniteModule& N, const Matrix& P);

// M* = Hom_R(M, K) in coordinates u in (Z/M.m)^k, where u_a = c(f(e_a)) scaled
// into Z/M.m.
struct DualModule {
    FiniteModule source;
    FiniteModule module;        // M* on the coordinates
    std::vector<Matrix> basis;  // f_j, the hom with coordinates e_j
    Row chi;

    Matrix hom(const Row& u) const;   // k x dim(R) over Z/|R|
    Row coords(const Matrix& f) const;
};
// Enumerates Hom_R(M, K), checks |M*| = |M| and that the coordinates are a
// bijection. Throws UnsupportedRing or SizeLimitExceeded.
DualModule dual(const DualitySetting& S, const FiniteModule& M, const Caps& caps = default_caps());

// phi* : N* -> M*, f -> f phi, in the coordinates of both duals.
Matrix dual_map(const DualModule& Mstar, const DualModule& Nstar, const Matrix& phi);

struct DoubleDual {
    Matrix ev;  // M -> M**, x -> (f -> f(x))
    bool module_hom = false;
    bool bijective = false;
    bool ok() const { return module_hom && bijective; }
};
DoubleDual double_dual_check(const DualitySetting& S, const FiniteModule& M, const Caps& caps = default_caps());

// phi** ev_M = ev_N phi.
bool double_dual_natural(const DualitySetting& S, const FiniteModule& M, const FiniteModule& N, const Matrix& phi,
                         const Caps& caps = default_caps());

struct AntiIsoOptions {
    std::size_t exhaustive_limit = 256;  // |End| up to which all pairs are checked
    std::size_t samples = 1000;          // random pairs otherwise
    std::uint64_t seed = 1;
};

struct AntiIsoReport {
    std::string ring, group;
    std::size_t n = 1;
    std::uint64_t end_size = 0;     // equivariant endomorphisms of (K^n)^G
    std::uint64_t matrix_size = 0;  // |Mat_n(A[G])|
    bool exhaustive = false;
    bool dual_is_free = false;   // (K^n)^G* = A[G]^n on the evaluations at e
    bool duals_equivariant = false;
    bool injective = false;
    bool bijective = false;
    bool identity_to_identity = false;
    std::uint64_t composition_checks = 0;
    std::uint64_t composition_failures = 0;
    std::uint64_t additivity_failures = 0;
    std::uint64_t bridge_failures = 0;  // phi 1-1 <=> phi* onto, phi onto <=> phi* 1-1
    std::uint64_t irreversible = 0;     // bijective phi whose inverse is not equivariant
    bool surjunctive = false;           // every injective phi is onto
    bool directly_finite = false;       // every one-sided invertible image is invertible
    bool verdicts_agree = false;
    bool ok() const {
        return dual_is_free && duals_equivariant && injective && bijective && identity_to_identity && composition_failures == 0 &&
               additivity_failures == 0 && bridge_failures == 0 && irreversible == 0 && verdicts_agree;
    }
};

// The map phi -> phi* from End of (K^n)^G to Mat_n(A[G]) acting on columns.
class EndAntiIso {
public:
    EndAntiIso(const DualitySetting& S, FiniteGroup G, std::size_t n, const Caps& caps = default_caps());

    const FiniteModule& configurations() const noexcept { return conf_; }
    const FiniteRing& group_ring() const noexcept { return AG_; }
    const FiniteRing& matrices() const noexcept { return mat_; }
    const std::vector<Matrix>& endomorphisms() const noexcept { return ends_; }
    bool exhaustive() const noexcept { return exhaustive_; }
    // Throws NotEquivariant when phi does not commute with the translations.
    Row operator()(const Matrix& phi) const;
    // phi(x)(g) = x(g h)
    Matrix shift(GElem h) const;
    AntiIsoReport report(const AntiIsoOptions& opt = {}) const;

private:
    DualitySetting S_;
    FiniteGroup G_;
    std::size_t n_;
    FiniteModule N_, conf_;
    DualModule dual_;
    FiniteRing AG_, mat_;
    std::vector<Matrix> ends_;
    bool exhaustive_ = false;
    std::vector<Row> delta_;  // delta_i(x) = x(e)_i
    Matrix theta_;            // A[G]^n -> M*, (a_i) -> sum delta_i a_i
    std::vector<Matrix> right_act_;  // M* -> M*, f -> f g, per group element
    bool free_ = false;
};

// R^n with the diagonal action.
FiniteModule free_module(const FiniteRing& R, std::size_t n);

AntiIsoReport end_anti_iso(const FiniteRing& R, const FiniteGroup& G, std::size_t n, const AntiIsoOptions& opt = {},
                           const Caps& caps = default_caps());

}  // namespace qfw
