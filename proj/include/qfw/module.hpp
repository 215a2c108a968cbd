#pragma once

// Finite modules, submodule lattices, induced modules over R*G and the
// finite-scale stable finiteness harness.

#include "qfw/algebra.hpp"
#include "qfw/hom.hpp"

#include <random>
#include <string>
#include <unordered_map>

namespace qfw {

// Right module on (Z/m)^k; act[i] is x -> x e_i for the ring basis e_i.
// m must divide the ring modulus.
struct FiniteModule {
    FiniteRing ring;
    std::uint32_t m = 2;
    std::size_t k = 0;
    std::vector<Matrix> act;

    // Throws NotAModule(clause, i, j).
    static FiniteModule make(FiniteRing ring, std::uint32_t m, std::size_t k, std::vector<Matrix> act);
    static FiniteModule regular(const FiniteRing& R);  // R as a right R-module

    std::uint64_t order() const;
    Matrix action(const Row& s) const;
    Row mul(const Row& x, const Row& s) const { return zmod::apply(x, action(s)); }
    Row element(std::uint64_t i) const;
    std::uint64_t index(const Row& x) const;
    // Scalars restricted along a subring; images[i] is the image of S's basis vector i.
    FiniteModule restrict(const FiniteRing& S, const std::vector<Row>& images) const;
};

// M = N (x) R*G, the sum of copies N g with (n g)(r h) = n r^{sigma(g)} tau(g,h) gh.
FiniteModule induced_module(const FiniteModule& N, const CrossedProduct& C, const Caps& caps = default_caps());

// Throws NotModuleHom(i) when P fails to commute with ring basis vector i.
void verify_module_hom(const FiniteModule& M, const FiniteModule& N, const Matrix& P);

struct LinearVerdict {
    bool injective = false;
    bool surjective = false;
    std::uint64_t kernel_size = 0;
    std::uint64_t image_size = 0;
};
// Exact kernel and image sizes of x -> x P : M -> N (N.m must divide M.m).
LinearVerdict linear_verdict(const FiniteModule& M, const FiniteModule& N, const Matrix& P);

class SubmoduleLattice {
public:
    const FiniteModule& module() const noexcept { return M_; }
    const std::vector<zmod::RowSpace>& submodules() const noexcept { return subs_; }
    const zmod::RowSpace& operator[](Elem x) const { return subs_[x]; }
    const LatticePtr& lattice() const noexcept { return L_; }
    std::size_t size() const noexcept { return subs_.size(); }
    std::optional<Elem> find(const zmod::RowSpace& K) const;
    // Index of the image of K under x -> x P inside `target`.
    Elem image(const Matrix& P, Elem K, const SubmoduleLattice& target) const;

private:
    friend SubmoduleLattice submodule_lattice(const FiniteModule& M, const Caps& caps);
    FiniteModule M_;
    std::vector<zmod::RowSpace> subs_;
    std::unordered_map<std::string, Elem> index_;
    LatticePtr L_;
};

// All submodules (joins of cyclic ones), ordered by size; values are orders.
// Throws SizeLimitExceeded above the module or table cap.
SubmoduleLattice submodule_lattice(const FiniteModule& M, const Caps& caps = default_caps());

struct LiftReport {
    QframeHom Phi;
    HomInfo info;
    LinearVerdict linear;
    bool exhaustive_check = false;  // verify_hom on all pairs, else sampled
    bool lemma_holds = false;       // phi onto => Phi onto and algebraic; Phi 1-1 <=> phi 1-1
    bool verdict_agrees = false;    // Phi(1) = 1 <=> phi onto, Phi 1-1 <=> phi 1-1
};
// Phi(K) = phi(K) on submodule lattices; verify_hom must not fire.
LiftReport module_hom_lift(const SubmoduleLattice& LM, const SubmoduleLattice& LN, const Matrix& P);

// Largest lattice for which lifts are verified on all pairs.
inline constexpr std::size_t exhaustive_hom_check_limit = 600;

// vec(P) for all P commuting with every act[i]; rows of length k*k.
zmod::RowSpace endomorphism_space(const FiniteModule& M);
Matrix unvec(const Row& v, std::size_t k, std::uint32_t m);
// Every endomorphism when there are at most `limit`, else `limit` uniform samples.
std::vector<Matrix> endomorphisms(const FiniteModule& M, std::size_t limit, std::uint64_t seed, bool* exhaustive = nullptr);

// L_R(M) for a module over R*G, with rho_g(K) = K g.
struct LatticeModel {
    CrossedProduct C;
    FiniteModule M;  // over C.ring()
    SubmoduleLattice L;
    std::vector<QframeHom> rho;

    LiftReport lift(const Matrix& P) const { return module_hom_lift(L, L, P); }
    bool equivariant(const QframeHom& Phi) const;
};
LatticeModel lattice_model(const CrossedProduct& C, const FiniteModule& M, const Caps& caps = default_caps());

struct RhoReport {
    bool automorphisms = true;  // each rho_g a verified bijective hom
    bool identity_at_e = true;
    bool anti_hom = true;  // rho_g rho_h = rho_{hg}
    bool inverse_law = true;
    std::vector<std::int64_t> witness;
    bool ok() const { return automorphisms && identity_at_e && anti_hom && inverse_law; }
};
RhoReport check_rho(const LatticeModel& model);

enum class ScanMode { automatic, exhaustive, sample };

struct StableFinitenessReport {
    std::string ring;
    std::size_t k = 1;
    std::uint64_t order = 0;
    bool exhaustive = false;
    std::uint64_t checked = 0;
    std::uint64_t right_invertible = 0;
    std::uint64_t violations = 0;
    std::vector<std::uint64_t> violation_indices;
};
// For x in Mat_k(S) with xy = 1 (solved additively), checks yx = 1.
StableFinitenessReport stable_finiteness_check(const FiniteRing& S, std::size_t k, ScanMode mode = ScanMode::automatic,
                                               std::uint64_t samples = 100000, std::uint64_t seed = 1,
                                               const Caps& caps = default_caps());

struct SurjunctivityReport {
    std::uint64_t endomorphisms = 0;
    bool exhaustive = false;
    std::uint64_t surjective = 0;
    std::uint64_t injective = 0;
    std::uint64_t violations = 0;             // surjective but not injective
    std::uint64_t lattice_disagreements = 0;  // lattice verdict differs from linear algebra
    std::uint64_t lemma_failures = 0;
    std::uint64_t equivariance_failures = 0;
};
// Endomorphisms of model.M over R*G, each decided additively and through the lattice.
SurjunctivityReport surj_implies_inj_check(const LatticeModel& model, std::size_t limit = 4096, std::uint64_t seed = 1);

}  // namespace qfw
