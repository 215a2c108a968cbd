#pragma once

// Executable checks around the main theorem: hypotheses, the exclusivity of
// its two conditions, a replay of the proof's construction, the witness
// lemma and the higher-dimensional reduction.

#include "qfw/dimension.hpp"
#include "qfw/module.hpp"
#include "qfw/sofic.hpp"

#include <map>
#include <memory>

namespace qfw {

// A qframe with rho_g rho_h = rho_{hg}.
struct GQframe {
    FiniteGroup G;
    LatticePtr M;
    std::vector<QframeHom> rho;

    static GQframe from_model(const LatticeModel& model);
};
// Each rho_g a bijective hom, rho_e = id and the anti-homomorphism law.
// Throws HypothesisFailed.
void verify_gqframe(const GQframe& M);

struct MainInstance {
    std::string name;
    std::shared_ptr<const GQframe> M;
    QframeHom Phi;
    Elem ybar = 0;
    std::vector<GElem> F, K;
};

struct HypothesisReport {
    std::size_t l = 0;
    std::vector<Elem> y_g;
    Elem y_F = 0;
    bool basis = false;  // the y_g also join to 1
};
// Checks (a) finite length, (b) independence of the y_g, (c) Phi(y) <= join over F,
// symmetry of F and K, F inside K, e in F, and rho_g Phi = Phi rho_g.
// Throws HypothesisFailed with the clause first in the message.
HypothesisReport verify_main_hypotheses(const MainInstance& I);

struct Exclusivity {
    bool cond1 = false;  // ybar <= join_K Phi(ybar_g)
    bool cond2 = false;  // l(join_K Phi(ybar_g)) <= |K| l - 1
    Elem join_K = 0;
    std::size_t join_length = 0;
    std::size_t l = 0;
};
// Throws TheoremViolation when both conditions hold.
Exclusivity mutual_exclusivity(const MainInstance& I);

using Tuple = std::vector<Elem>;

// Lattice given as the join-closure of generator tuples inside a power of a
// finite lattice, ordered componentwise. Nothing is enumerated up front.
class PresentedLattice {
public:
    PresentedLattice(LatticePtr base, std::size_t width, std::vector<Tuple> gens);

    const FiniteLattice& base() const noexcept { return *base_; }
    std::size_t width() const noexcept { return width_; }
    const std::vector<Tuple>& generators() const noexcept { return gens_; }
    Tuple bottom() const { return Tuple(width_, base_->bottom()); }
    const Tuple& top() const noexcept { return top_; }
    Tuple join(const Tuple& a, const Tuple& b) const;
    bool leq(const Tuple& a, const Tuple& b) const;
    // x is the join of the generators below it.
    bool contains(const Tuple& x) const;
    // Longest chain of [0, x]. Throws SizeLimitExceeded past `cap` elements.
    std::size_t height(const Tuple& x, std::size_t cap = std::size_t{1} << 18) const;
    // nullopt past cap.
    std::optional<std::size_t> size(std::size_t cap) const;
    // Join-independent iff no generator lies below x_i and the join of the others.
    FamilyProps family(std::span<const Tuple> xs) const;

private:
    LatticePtr base_;
    std::size_t width_;
    std::vector<Tuple> gens_;
    Tuple top_;
};

// Longest chain of the join-closure of `gens` (with 0) inside base^width.
std::size_t generated_length(const FiniteLattice& base, std::size_t width, const std::vector<Tuple>& gens, std::size_t cap);

// Join-preserving map fixed by the images of the source generators.
struct PresentedHom {
    PresentedLattice source, target;
    std::vector<Tuple> images;

    Tuple operator()(const Tuple& x) const;
    std::size_t image_length(std::size_t cap = std::size_t{1} << 18) const;
};

struct PointElem {
    std::size_t comp = 0;
    Tuple x;
};

// L1 -> L2 as a product over independent components.
struct KeyLemmaInput {
    std::vector<PresentedHom> comps;
    std::map<std::uint32_t, PointElem> xbar;  // indexed by the points of K Vbar
    std::shared_ptr<const QuasiAction> qa;
    std::vector<GroupWord> K;
    GoodPoints good;
    std::size_t l = 1;
    std::size_t cap = std::size_t{1} << 18;
};
struct KeyLemmaReport {
    bool covering = false;         // (1.1)
    bool lengths = false;          // (1.2)
    std::size_t hyp2_max = 0;      // max over w of l(join over Kw of Phi(xbar))
    std::size_t im_length = 0;     // length of Phi(L1) as a sub-poset of L2
    std::size_t im_top_length = 0; // l([0, Phi(1)]) in L2
    std::size_t W = 0;
    std::size_t len_outside = 0;   // l(join over K Vbar \ KW of Phi(xbar))
    std::size_t len_KW = 0;        // l(join over KW of Phi(xbar))
    std::int64_t est_outside = 0;  // (|K Vbar| - |W||K|) l
    std::int64_t est_KW = 0;       // |W| (|K| l - 1)
    std::int64_t estimate = 0;     // |V| l - |W|
    Rational bound;                // (1 - 1/(2|H|l)) |V| l
    bool holds = false;
};
// Throws HypothesisFailed when (1.1), (1.2) or (2) fails, or Vbar is empty;
// LemmaViolation when the bound fails.
KeyLemmaReport replay_key_lemma(const KeyLemmaInput& in);

struct ReplayOptions {
    std::uint64_t n = 0;  // 0 picks 2|H|l
    std::optional<Rational> eps;
    std::optional<std::size_t> corrupt_sigma_at;  // index into Vbar
    std::size_t cap = std::size_t{1} << 18;      // closure elements
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
};

struct ProofReplay {
    std::size_t l = 0;
    std::uint64_t n = 0;
    std::vector<GElem> H;
    std::size_t V = 0;
    GoodPoints good;
    Exclusivity conditions;
    std::size_t components = 0;
    // summed over components; nullopt when some component exceeds 4096 elements
    std::optional<std::size_t> L1_size, L2_size;

    bool sigma_bijective = true;
    bool cong_join = true;  // (Cong.2) on sampled related pairs
    bool cong_meet = true;  // (Cong.3) on sampled related pairs
    bool cong_max = true;   // (Cong.4) on sampled classes
    std::vector<std::int64_t> cong_meet_witness;  // component, then a, b, c
    std::uint64_t related_pairs = 0;
    bool phi_compatible = true;   // a ~ b in Q^K => Phi(a) ~ Phi(b)
    bool phibar_commutes = true;  // Phibar pi1 = pi2 Phi on samples
    std::optional<bool> phibar_hom;  // verified when both quotients are small
    bool xbar_well_defined = true;
    std::vector<std::int64_t> xbar_witness;  // v, k, v', k'
    bool xbar_independent = false;
    bool xbar_covering = false;
    bool xbar_lengths = false;
    bool pi2_injective_on_Qe = true;
    bool pi2_exhaustive = false;
    bool pi2_recovers_components = true;  // ybar ^ Psi_v(a) = a_v
    std::size_t pi2_Qe_length = 0;
    bool Qe_inside_image = false;

    std::shared_ptr<const KeyLemmaInput> key_input;
    std::optional<KeyLemmaReport> key;  // when the key lemma's hypotheses hold
    std::string key_rejected;           // otherwise, the failing hypothesis
    std::size_t im_length = 0;
    Rational key_bound;
    bool key_bound_holds = false;
    Rational lower_bound;  // (1 - 1/n) |V| l
    bool lower_bound_holds = false;

    // Every claim the proof makes outside the congruence property.
    bool claims_hold() const {
        return sigma_bijective && cong_join && cong_max && phi_compatible && phibar_commutes && xbar_well_defined && xbar_independent &&
               xbar_covering && xbar_lengths && pi2_injective_on_Qe && pi2_recovers_components && pi2_Qe_length == good.Vbar.size() * l;
    }
};
// qa acts by the instance's group (DiscreteGroup::finite). Throws the
// hypothesis errors, EpsilonTooLarge, BadParams (n < 2|H|l) or SizeLimitExceeded.
ProofReplay proof_construction(const MainInstance& I, std::shared_ptr<const QuasiAction> qa, const ReplayOptions& opt = {});

struct PrelHighWitness {
    bool surjective = false;
    bool injective = false;
    std::optional<std::vector<GElem>> surj_K;  // minimal |K| with y <= join_K Phi(y_g)
    std::optional<std::vector<GElem>> noninj_K;
    Elem x = 0;             // 0 != x <= join over noninj_K of y_g with Phi(x) = 0
    bool biconditionals = false;
};
// Throws NotABasis or NotAlgebraic.
PrelHighWitness prel_high_witness(const GQframe& M, const QframeHom& Phi, Elem y);

enum class HigherMode { a_star, a_prime_star };
struct HigherReport {
    Ordinal alpha;
    std::size_t torsion_size = 0;
    std::size_t quotient_size = 0;
    bool transported_rho = false;
    bool transported_equivariant = false;
    bool transported_basis = false;
    std::size_t l = 0;  // l(ybar), or l(s(ybar)) on the socle path
    bool socle_invariant = false;
    bool splitting_on_socle = false;
    bool socle_family_independent = false;
    bool verdict_injective = false;  // what the theorem concludes
    bool direct_injective = false;
    bool agrees = false;
};
// Throws HypothesisFailed (surjective, algebraic, equivariant, basis, Noetherian,
// splitting) or SplittingMissing.
HigherReport main_higher_pipeline(const GQframe& M, const QframeHom& Phi, Elem y, HigherMode mode,
                                  const std::optional<QframeHom>& psi = std::nullopt);

// Restriction of f to the socle [0, s(L)]; throws NotFullyInvariant.
QframeHom socle_restriction(const QframeHom& f);

struct CorpusOptions {
    std::size_t max_n = 4;           // group rings F_2[Z/n], n <= max_n
    std::size_t crossed_endos = 12;  // endomorphisms sampled per crossed product
    std::uint64_t seed = 20240601;
};
struct Corpus {
    std::vector<std::shared_ptr<const LatticeModel>> models;
    std::vector<std::vector<Matrix>> endos;  // per model
    std::vector<MainInstance> instances;
};
Corpus main_instance_corpus(const CorpusOptions& opt = {});

// All symmetric subsets containing e, smallest first.
std::vector<std::vector<GElem>> symmetric_sets(const FiniteGroup& G);

}  // namespace qfw
