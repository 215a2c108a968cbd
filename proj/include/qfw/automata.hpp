#pragma once

// Linear cellular automata over finite groups, the reverse-inclusion lattice
// N(N^G) and the preimage hom.

#include "qfw/module.hpp"

#include <boost/container_hash/hash.hpp>

#include <memory>
#include <unordered_map>

namespace qfw {

// x : G -> N stored blockwise, block g at g*k.
using Configuration = Row;

// phi(x)(g) = sum over f in F of x(gf) A_f.
struct LinearCA {
    FiniteGroup G;
    FiniteModule N;
    std::vector<GElem> F;
    std::vector<Matrix> A;

    // Throws NotModuleHom when some A_f is not R-linear, BadMemorySet on repeats.
    static LinearCA make(FiniteGroup G, FiniteModule N, std::vector<GElem> F, std::vector<Matrix> A);
    std::size_t dim() const { return G.size() * N.k; }
    // Additive matrix on configurations: x * matrix() = phi(x).
    Matrix matrix() const;
};

Configuration apply_ca(const LinearCA& ca, const Configuration& x);
// (g x)(h) = x(g^{-1} h)
Configuration translate(const FiniteGroup& G, std::size_t k, GElem g, const Configuration& x);
Matrix translation_matrix(const FiniteGroup& G, std::size_t k, std::uint32_t m, GElem g);
// N^G with the diagonal scalar action.
FiniteModule configuration_module(const FiniteGroup& G, const FiniteModule& N);
// phi(gx) = g phi(x) for every g and every basis configuration.
bool is_equivariant(const LinearCA& ca);

struct MemorySet {
    std::vector<GElem> F;  // minimal
    std::vector<Matrix> A;
    LinearCA ca;
};
// Recovers the local rule from the e-component of an additive map on N^G.
// Throws NotEquivariant(g) or NotLinear(i).
MemorySet extract_memory_set(const FiniteGroup& G, const FiniteModule& N, const Matrix& phi);
// Same from a table of configuration indices; throws NotLinear(x, y) when not additive.
MemorySet extract_memory_set(const FiniteGroup& G, const FiniteModule& N, const std::vector<std::uint64_t>& table);

struct InjSurj {
    bool injective = false;
    bool surjective = false;
    std::vector<Row> kernel_basis;
    std::uint64_t kernel_size = 0;
    std::uint64_t image_size = 0;
    std::uint64_t image_index = 0;  // |N^G| / |image|
    bool enumerated = false;        // verdicts re-derived by listing all configurations
    bool enumeration_agrees = true;
    bool image_invariant = false;  // image is a G-invariant submodule
    bool reversible = true;        // for bijective phi: the inverse is equivariant
};
InjSurj inj_surj_analysis(const LinearCA& ca);

// Submodules of M = N^G ordered by reverse inclusion: top = 0, bottom = M,
// join = intersection, meet = sum.
class ReverseLattice {
public:
    const SubmoduleLattice& forward() const noexcept { return fwd_; }
    const LatticePtr& lattice() const noexcept { return L_; }
    const FiniteModule& module() const noexcept { return fwd_.module(); }
    std::size_t size() const noexcept { return fwd_.size(); }
    // Index of phi^{-1}(C), given the configuration-index image table of phi.
    std::vector<Elem> preimages(const std::vector<std::uint32_t>& image_table) const;
    std::vector<Elem> preimages(const Matrix& phi) const { return preimages(image_table(phi)); }
    std::vector<std::uint32_t> image_table(const Matrix& phi) const;
    std::optional<Elem> find(const zmod::RowSpace& K) const { return fwd_.find(K); }

private:
    friend ReverseLattice reverse_lattice(const FiniteGroup& G, const FiniteModule& N, const Caps& caps);
    using Bits = std::vector<std::uint64_t>;
    SubmoduleLattice fwd_;
    LatticePtr L_;
    std::vector<Bits> bits_;
    std::unordered_map<Bits, Elem, boost::hash<Bits>> by_bits_;
};
// Needs |N^G| <= 4096 and a lattice within the table cap.
ReverseLattice reverse_lattice(const FiniteGroup& G, const FiniteModule& N, const Caps& caps = default_caps());

struct PreimageModel {
    std::shared_ptr<const ReverseLattice> L;
    QframeHom Phi;
    std::vector<QframeHom> rho;  // rho_g(K) = lambda_g^{-1}(K)
    Elem y = 0;                  // pi_e^{-1}(0)
    std::vector<Elem> y_g;
    bool y_basis = false;
    bool rho_right_action = false;  // rho_g rho_h = rho_{hg}
    bool equivariant = false;       // Phi rho_g = rho_g Phi
    HomInfo info;
    bool exhaustive_check = false;
    bool lemma_holds = false;     // phi 1-1 => Phi onto and algebraic; Phi 1-1 <=> phi onto
    bool verdict_agrees = false;  // Phi(1) = 1 <=> phi 1-1; Phi 1-1 <=> phi onto
    std::optional<std::pair<Elem, Elem>> collision;  // C != D with equal preimages
};
PreimageModel preimage_lattice_model(const LinearCA& ca, std::shared_ptr<const ReverseLattice> L = nullptr);

struct CAShape {
    std::string name;
    FiniteGroup G;
    FiniteModule N;
    std::vector<GElem> F;  // empty means F = G
};
// G in {Z/2, Z/3, Z/2 x Z/2}, N in {F_2, F_2^2, Z/4}, F = G.
std::vector<CAShape> standard_ca_shapes();

struct ShapeReport {
    std::string shape;
    std::uint64_t local_maps = 0;  // |End_R(N)|
    std::uint64_t cas = 0;
    bool exhaustive = false;
    std::uint64_t lattice_size = 0;  // 0 when the lattice is not materialized
    bool structural = false;         // lattice verdict derived without enumerating N(N^G)
    std::uint64_t injective = 0;
    std::uint64_t surjective = 0;
    std::uint64_t violations = 0;  // injective but not surjective
    std::uint64_t lattice_disagreements = 0;
    std::uint64_t lemma_failures = 0;
    std::uint64_t hom_failures = 0;
    std::uint64_t hom_full_checks = 0;     // verify_hom on all pairs
    std::uint64_t hom_sampled_checks = 0;  // random pairs only
    std::uint64_t image_not_invariant = 0;
    std::uint64_t enumeration_disagreements = 0;
    std::uint64_t irreversible = 0;
    std::uint64_t equivariance_failures = 0;
    bool ok() const {
        return violations == 0 && lattice_disagreements == 0 && lemma_failures == 0 && hom_failures == 0 && image_not_invariant == 0 &&
               enumeration_disagreements == 0 && irreversible == 0 && equivariance_failures == 0;
    }
};
ShapeReport surjunctivity_suite(const CAShape& shape, ScanMode mode = ScanMode::exhaustive, std::uint64_t samples = 1000,
                                std::uint64_t seed = 1, const Caps& caps = default_caps());

}  // namespace qfw
