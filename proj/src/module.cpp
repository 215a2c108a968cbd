#include "qfw/module.hpp"

#include <algorithm>
#include <deque>

namespace qfw {

namespace {

std::int64_t i64(std::uint64_t x) { return static_cast<std::int64_t>(x); }

std::uint64_t power_saturated(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r = r > (std::uint64_t{1} << 62) / b ? std::uint64_t{1} << 62 : r * b;
    return r;
}

Matrix reduced(const Matrix& A, std::uint32_t m) {
    Matrix B(A.rows, A.cols, m);
    for (std::size_t i = 0; i < A.a.size(); ++i) B.a[i] = A.a[i] % m;
    return B;
}

std::string key_of(const zmod::RowSpace& S) {
    std::string k;
    for (const auto& r : S.basis()) {
        for (auto v : r) k.append(reinterpret_cast<const char*>(&v), sizeof v);
        k.push_back('|');
    }
    return k;
}

std::string label_of(const zmod::RowSpace& S) {
    if (S.basis().empty()) return "0";
    std::string s = "<";
    for (std::size_t i = 0; i < S.basis().size(); ++i) {
        if (i) s += ",";
        const auto& r = S.basis()[i];
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j && S.modulus() > 10) s += ".";
            s += std::to_string(r[j]);
        }
    }
    return s + ">";
}

}  // namespace

FiniteModule FiniteModule::make(FiniteRing ring, std::uint32_t m, std::size_t k, std::vector<Matrix> act) {
    if (m < 2 || ring.modulus() % m != 0) throw Error("NotAModule", "module modulus must divide the ring modulus", {0});
    if (act.size() != ring.dim()) throw Error("NotAModule", "one action matrix per ring basis vector", {0});
    for (auto& A : act) {
        if (A.rows != k || A.cols != k) throw Error("NotAModule", "action matrix of the wrong shape", {0});
        A = reduced(A, m);
    }
    FiniteModule M{std::move(ring), m, k, std::move(act)};
    if (M.action(M.ring.one()) != Matrix::identity(k, m)) throw Error("NotAModule", "unit acts nontrivially", {1});
    const auto d = M.ring.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (M.act[i] * M.act[j] != M.action(M.ring.basis_product(i, j)))
                throw Error("NotAModule", "(x e_i) e_j != x (e_i e_j)", {2, i64(i), i64(j)});
    return M;
}

FiniteModule FiniteModule::regular(const FiniteRing& R) {
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < R.dim(); ++i) act.push_back(R.right_mult(R.basis(i)));
    return make(R, R.modulus(), R.dim(), std::move(act));
}

std::uint64_t FiniteModule::order() const { return power_saturated(m, k); }

Matrix FiniteModule::action(const Row& s) const {
    Matrix A(k, k, m);
    for (std::size_t i = 0; i < act.size(); ++i) {
        const std::uint64_t c = s[i] % m;
        if (!c) continue;
        for (std::size_t j = 0; j < A.a.size(); ++j) A.a[j] = static_cast<std::uint32_t>((A.a[j] + c * act[i].a[j]) % m);
    }
    return A;
}

Row FiniteModule::element(std::uint64_t i) const {
    Row x(k);
    for (std::size_t j = 0; j < k; ++j) {
        x[j] = static_cast<std::uint32_t>(i % m);
        i /= m;
    }
    return x;
}

std::uint64_t FiniteModule::index(const Row& x) const {
    std::uint64_t idx = 0;
    for (std::size_t j = k; j-- > 0;) idx = idx * m + x[j] % m;
    return idx;
}

FiniteModule FiniteModule::restrict(const FiniteRing& S, const std::vector<Row>& images) const {
    std::vector<Matrix> a;
    for (const auto& r : images) a.push_back(action(r));
    return make(S, m, k, std::move(a));
}

FiniteModule induced_module(const FiniteModule& N, const CrossedProduct& C, const Caps& caps) {
    const auto& spec = C.spec();
    const auto& R = spec.R;
    const auto& G = spec.G;
    if (N.ring.dim() != R.dim() || N.ring.modulus() != R.modulus()) throw Error("NotAModule", "N is not a module over the coefficient ring", {0});
    const auto n = G.size(), d = R.dim(), k = N.k;
    if (power_saturated(N.order(), n) > caps.module_order)
        throw Error("SizeLimitExceeded", "induced module over the module cap", {i64(power_saturated(N.order(), n))});
    std::vector<Matrix> act;
    for (GElem h = 0; h < n; ++h)
        for (std::size_t i = 0; i < d; ++i) {
            Matrix A(n * k, n * k, N.m);
            for (GElem g = 0; g < n; ++g) {
                const auto B = N.action(R.mul(spec.act(g, R.basis(i)), spec.t(g, h)));
                const auto gh = G.mul(g, h);
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) A(g * k + a, gh * k + b) = B(a, b);
            }
            act.push_back(std::move(A));
        }
    return FiniteModule::make(C.ring(), N.m, n * k, std::move(act));
}

void verify_module_hom(const FiniteModule& M, const FiniteModule& N, const Matrix& P) {
    if (M.ring.dim() != N.ring.dim() || M.ring.modulus() != N.ring.modulus()) throw Error("NotModuleHom", "different rings", {-1});
    if (M.m % N.m != 0) throw Error("NotModuleHom", "target modulus must divide source modulus", {-1});
    if (P.rows != M.k || P.cols != N.k || P.m != N.m) throw Error("NotModuleHom", "matrix of the wrong shape", {-1});
    for (std::size_t i = 0; i < M.act.size(); ++i)
        if (reduced(M.act[i], N.m) * P != P * N.act[i]) throw Error("NotModuleHom", "does not commute with a ring basis vector", {i64(i)});
}

LinearVerdict linear_verdict(const FiniteModule& M, const FiniteModule& N, const Matrix& P) {
    if (M.m % N.m != 0) throw Error("NotModuleHom", "target modulus must divide source modulus", {-1});
    // x P = 0 mod N.m  iff  x (P * M.m/N.m) = 0 mod M.m
    Matrix Q(P.rows, P.cols, M.m);
    for (std::size_t i = 0; i < P.a.size(); ++i) Q.a[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(P.a[i]) * (M.m / N.m) % M.m);
    LinearVerdict v;
    v.kernel_size = zmod::left_kernel(Q).size();
    v.image_size = zmod::image_size(P);
    v.injective = v.kernel_size == 1;
    v.surjective = v.image_size == N.order();
    return v;
}

std::optional<Elem> SubmoduleLattice::find(const zmod::RowSpace& K) const {
    auto it = index_.find(key_of(K));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Elem SubmoduleLattice::image(const Matrix& P, Elem K, const SubmoduleLattice& target) const {
    std::vector<Row> rows;
    for (const auto& r : subs_[K].basis()) rows.push_back(zmod::apply(r, P));
    const auto S = zmod::RowSpace::span(std::move(rows), target.M_.m, target.M_.k);
    auto j = target.find(S);
    if (!j) throw Error("NotASubmodule", "image is not a submodule of the target", {K});
    return *j;
}

SubmoduleLattice submodule_lattice(const FiniteModule& M, const Caps& caps) {
    const auto order = M.order();
    if (order > caps.module_order) throw Error("SizeLimitExceeded", "module over the module cap", {i64(order)});
    const bool bits = order <= 4096;
    const std::size_t W = (order + 63) / 64;
    auto bitset_of = [&](const zmod::RowSpace& S) {
        std::vector<std::uint64_t> b(W, 0);
        S.for_each([&](const Row& x) {
            const auto i = M.index(x);
            b[i / 64] |= std::uint64_t{1} << (i % 64);
        });
        return b;
    };

    // distinct cyclic submodules xR with a generator each
    std::vector<std::pair<zmod::RowSpace, Row>> cyclic;
    std::unordered_map<std::string, bool> seen_cyclic;
    for (std::uint64_t i = 1; i < order; ++i) {
        const auto x = M.element(i);
        std::vector<Row> rows{x};
        for (const auto& A : M.act) rows.push_back(zmod::apply(x, A));
        auto S = zmod::RowSpace::span(std::move(rows), M.m, M.k);
        if (seen_cyclic.emplace(key_of(S), true).second) cyclic.emplace_back(std::move(S), x);
    }

    std::vector<zmod::RowSpace> subs{zmod::RowSpace(M.m, M.k)};
    std::vector<std::vector<std::uint64_t>> member;
    std::unordered_map<std::string, Elem> idx{{key_of(subs[0]), 0}};
    if (bits) member.push_back(bitset_of(subs[0]));
    for (std::size_t q = 0; q < subs.size(); ++q)
        for (const auto& [C, x] : cyclic) {
            const bool inside = bits ? (member[q][M.index(x) / 64] >> (M.index(x) % 64)) & 1 : subs[q].contains(x);
            if (inside) continue;
            auto T = subs[q] + C;
            auto key = key_of(T);
            if (idx.count(key)) continue;
            if (subs.size() >= caps.table_elements)
                throw Error("SizeLimitExceeded", "more submodules than the table cap", {i64(subs.size())});
            idx.emplace(std::move(key), static_cast<Elem>(subs.size()));
            if (bits) member.push_back(bitset_of(T));
            subs.push_back(std::move(T));
        }

    const auto n = subs.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::vector<std::uint64_t> sizes(n);
    for (std::size_t i = 0; i < n; ++i) sizes[i] = subs[i].size();
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });

    SubmoduleLattice out;
    out.M_ = M;
    for (std::size_t i = 0; i < n; ++i) {
        out.subs_.push_back(subs[perm[i]]);
        out.index_.emplace(key_of(out.subs_.back()), static_cast<Elem>(i));
    }
    const std::size_t LW = (n + 63) / 64;
    std::vector<std::uint64_t> up(n * LW, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto a = perm[i], b = perm[j];
            bool le = sizes[b] % sizes[a] == 0;
            if (le && bits) {
                for (std::size_t w = 0; w < W && le; ++w) le = (member[a][w] & ~member[b][w]) == 0;
            } else if (le) {
                for (const auto& r : subs[a].basis())
                    if (!(le = subs[b].contains(r))) break;
            }
            if (le) up[i * LW + j / 64] |= std::uint64_t{1} << (j % 64);
        }
    auto L = FiniteLattice::from_up_sets(n, std::move(up), caps);
    std::vector<std::string> labels;
    std::vector<std::uint64_t> values;
    for (const auto& S : out.subs_) {
        labels.push_back(label_of(S));
        values.push_back(S.size());
    }
    L.set_labels(std::move(labels));
    L.set_values(std::move(values));
    out.L_ = share(std::move(L));
    return out;
}

LiftReport module_hom_lift(const SubmoduleLattice& LM, const SubmoduleLattice& LN, const Matrix& P) {
    verify_module_hom(LM.module(), LN.module(), P);
    std::vector<Elem> map(LM.size());
    for (Elem K = 0; K < LM.size(); ++K) map[K] = LM.image(P, K, LN);
    LiftReport r;
    if (LM.size() <= exhaustive_hom_check_limit) {
        r.Phi = verify_hom(LM.lattice(), LN.lattice(), std::move(map));
        r.exhaustive_check = true;
    } else {
        r.Phi = QframeHom::trusted(LM.lattice(), LN.lattice(), std::move(map));
        verify_hom_sampled(r.Phi, 20000, 7);
    }
    r.info = kernel_and_algebraicity(r.Phi);
    r.linear = linear_verdict(LM.module(), LN.module(), P);
    r.lemma_holds = (!r.linear.surjective || (r.info.surjective && r.info.algebraic)) && r.info.injective == r.linear.injective;
    const bool onto = r.Phi(LM.lattice()->top()) == LN.lattice()->top();
    r.verdict_agrees = onto == r.linear.surjective && r.info.injective == r.linear.injective;
    return r;
}

zmod::RowSpace endomorphism_space(const FiniteModule& M) {
    const auto k = M.k, kk = k * k, d = M.act.size();
    // unknown P[a][b] at a*k+b; equation (i,r,c) is (A_i P - P A_i)[r][c] = 0
    Matrix X(kk, d * kk, M.m);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& A = M.act[i];
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                for (std::size_t r = 0; r < k; ++r)
                    for (std::size_t c = 0; c < k; ++c) {
                        std::int64_t v = 0;
                        if (c == b) v += A(r, a);
                        if (r == a) v -= A(b, c);
                        X(a * k + b, i * kk + r * k + c) = zmod::reduce(v, M.m);
                    }
    }
    return zmod::left_kernel(X);
}

Matrix unvec(const Row& v, std::size_t k, std::uint32_t m) {
    Matrix P(k, k, m);
    for (std::size_t i = 0; i < k * k; ++i) P.a[i] = v[i] % m;
    return P;
}

std::vector<Matrix> endomorphisms(const FiniteModule& M, std::size_t limit, std::uint64_t seed, bool* exhaustive) {
    const auto S = endomorphism_space(M);
    std::vector<Matrix> out;
    const bool all = S.size() <= limit;
    if (exhaustive) *exhaustive = all;
    if (all) {
        S.for_each([&](const Row& v) { out.push_back(unvec(v, M.k, M.m)); });
        return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> coef(0, M.m - 1);
    for (std::size_t s = 0; s < limit; ++s) {
        Row v(M.k * M.k, 0);
        for (const auto& r : S.basis()) {
            const std::uint64_t c = coef(rng);
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = static_cast<std::uint32_t>((v[j] + c * r[j]) % M.m);
        }
        out.push_back(unvec(v, M.k, M.m));
    }
    return out;
}

bool LatticeModel::equivariant(const QframeHom& Phi) const {
    for (const auto& r : rho)
        for (Elem K = 0; K < L.size(); ++K)
            if (Phi(r(K)) != r(Phi(K))) return false;
    return true;
}

LatticeModel lattice_model(const CrossedProduct& C, const FiniteModule& M, const Caps& caps) {
    const auto& R = C.spec().R;
    if (M.ring.dim() != C.ring().dim() || M.ring.modulus() != C.ring().modulus()) throw Error("NotAModule", "M is not a module over R*G", {0});
    std::vector<Row> images;
    for (std::size_t i = 0; i < R.dim(); ++i) images.push_back(C.embed(R.basis(i)));
    auto L = submodule_lattice(M.restrict(R, images), caps);
    std::vector<QframeHom> rho;
    for (GElem g = 0; g < C.spec().G.size(); ++g) {
        const auto A = M.action(C.element(R.one(), g));
        std::vector<Elem> map(L.size());
        for (Elem K = 0; K < L.size(); ++K) map[K] = L.image(A, K, L);
        rho.push_back(QframeHom::trusted(L.lattice(), L.lattice(), std::move(map)));
    }
    return LatticeModel{C, M, std::move(L), std::move(rho)};
}

RhoReport check_rho(const LatticeModel& model) {
    RhoReport rep;
    const auto& G = model.C.spec().G;
    const auto n = model.L.size();
    for (GElem g = 0; g < G.size(); ++g) {
        const auto& r = model.rho[g];
        try {
            if (n <= exhaustive_hom_check_limit)
                verify_hom(r);
            else
                verify_hom_sampled(r, 20000, g + 1);
        } catch (const Error&) {
            rep.automorphisms = false;
            rep.witness = {0, g};
        }
        auto sorted = r.map;
        std::sort(sorted.begin(), sorted.end());
        for (Elem K = 0; K < n; ++K)
            if (sorted[K] != K) {
                rep.automorphisms = false;
                rep.witness = {0, g};
                break;
            }
    }
    for (Elem K = 0; K < n; ++K)
        if (model.rho[G.identity()](K) != K) {
            rep.identity_at_e = false;
            rep.witness = {1, K};
        }
    for (GElem g = 0; g < G.size(); ++g)
        for (GElem h = 0; h < G.size(); ++h) {
            const auto& hg = model.rho[G.mul(h, g)];
            for (Elem K = 0; K < n; ++K)
                if (model.rho[g](model.rho[h](K)) != hg(K)) {
                    rep.anti_hom = false;
                    rep.witness = {2, g, h, K};
                }
        }
    for (GElem g = 0; g < G.size(); ++g)
        for (Elem K = 0; K < n; ++K)
            if (model.rho[g](model.rho[G.inv(g)](K)) != K) {
                rep.inverse_law = false;
                rep.witness = {3, g, K};
            }
    return rep;
}

StableFinitenessReport stable_finiteness_check(const FiniteRing& S, std::size_t k, ScanMode mode, std::uint64_t samples,
                                               std::uint64_t seed, const Caps& caps) {
    if (k == 0 || k > caps.matrix_k) throw Error("SizeLimitExceeded", "matrix size over the cap", {i64(k)});
    const auto T = k == 1 ? S : FiniteRing::matrix(S, k);
    StableFinitenessReport rep;
    rep.ring = T.name();
    rep.k = k;
    rep.order = T.order();
    constexpr std::uint64_t exhaustive_limit = std::uint64_t{1} << 16;
    rep.exhaustive = mode == ScanMode::exhaustive || (mode == ScanMode::automatic && rep.order <= exhaustive_limit);
    if (rep.exhaustive && rep.order > (std::uint64_t{1} << 24))
        throw Error("SizeLimitExceeded", "ring too large for an exhaustive scan", {i64(rep.order)});
    auto check = [&](const Row& x) {
        ++rep.checked;
        const auto y = T.right_inverse(x);
        if (!y) return;
        ++rep.right_invertible;
        if (T.mul(*y, x) != T.one()) {
            ++rep.violations;
            if (rep.violation_indices.size() < 10) rep.violation_indices.push_back(T.index(x));
        }
    };
    if (rep.exhaustive) {
        for (std::uint64_t i = 0; i < rep.order; ++i) check(T.element(i));
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint32_t> coef(0, T.modulus() - 1);
        for (std::uint64_t s = 0; s < samples; ++s) {
            Row x(T.dim());
            for (auto& c : x) c = coef(rng);
            check(x);
        }
    }
    return rep;
}

SurjunctivityReport surj_implies_inj_check(const LatticeModel& model, std::size_t limit, std::uint64_t seed) {
    SurjunctivityReport rep;
    const auto Ps = endomorphisms(model.M, limit, seed, &rep.exhaustive);
    for (const auto& P : Ps) {
        ++rep.endomorphisms;
        const auto lin = linear_verdict(model.M, model.M, P);
        rep.surjective += lin.surjective;
        rep.injective += lin.injective;
        if (lin.surjective && !lin.injective) ++rep.violations;
        const auto lift = model.lift(P);
        if (!lift.verdict_agrees) ++rep.lattice_disagreements;
        if (!lift.lemma_holds) ++rep.lemma_failures;
        if (!model.equivariant(lift.Phi)) ++rep.equivariance_failures;
    }
    return rep;
}

}  // namespace qfw
