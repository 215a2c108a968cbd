#include "qfw/automata.hpp"

#include <algorithm>

namespace qfw {

namespace {

std::int64_t i64(std::uint64_t x) { return static_cast<std::int64_t>(x); }

Matrix block_diag(const Matrix& B, std::size_t copies) {
    Matrix A(B.rows * copies, B.cols * copies, B.m);
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t i = 0; i < B.rows; ++i)
            for (std::size_t j = 0; j < B.cols; ++j) A(c * B.rows + i, c * B.cols + j) = B(i, j);
    return A;
}

Matrix block(const Matrix& A, std::size_t k, std::size_t bi, std::size_t bj) {
    Matrix B(k, k, A.m);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) B(i, j) = A(bi * k + i, bj * k + j);
    return B;
}

using Bits = std::vector<std::uint64_t>;

bool test(const Bits& b, std::uint64_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set(Bits& b, std::uint64_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

Bits bits_of(const FiniteModule& M, const zmod::RowSpace& S) {
    Bits b((M.order() + 63) / 64, 0);
    S.for_each([&](const Row& x) { set(b, M.index(x)); });
    return b;
}

std::vector<std::uint32_t> table_of(const FiniteModule& M, const Matrix& phi) {
    std::vector<std::uint32_t> t(M.order());
    for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = static_cast<std::uint32_t>(M.index(zmod::apply(M.element(x), phi)));
    return t;
}

Bits preimage_bits(const Bits& C, const std::vector<std::uint32_t>& table) {
    Bits P(C.size(), 0);
    for (std::uint64_t x = 0; x < table.size(); ++x)
        if (test(C, table[x])) set(P, x);
    return P;
}

}  // namespace

LinearCA LinearCA::make(FiniteGroup G, FiniteModule N, std::vector<GElem> F, std::vector<Matrix> A) {
    if (F.size() != A.size()) throw Error("BadMemorySet", "one local matrix per memory element");
    auto sorted = F;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("BadMemorySet", "repeated memory element");
    for (auto f : F)
        if (f >= G.size()) throw Error("BadMemorySet", "memory element outside G", {f});
    for (auto& a : A) {
        Matrix r(a.rows, a.cols, N.m);
        for (std::size_t i = 0; i < a.a.size(); ++i) r.a[i] = a.a[i] % N.m;
        a = std::move(r);
        verify_module_hom(N, N, a);
    }
    return LinearCA{std::move(G), std::move(N), std::move(F), std::move(A)};
}

Matrix LinearCA::matrix() const {
    const auto n = G.size(), k = N.k;
    Matrix P(n * k, n * k, N.m);
    for (GElem g = 0; g < n; ++g)
        for (std::size_t idx = 0; idx < F.size(); ++idx) {
            const auto gf = G.mul(g, F[idx]);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) {
                    auto& c = P(gf * k + i, g * k + j);
                    c = (c + A[idx](i, j)) % N.m;
                }
        }
    return P;
}

Configuration apply_ca(const LinearCA& ca, const Configuration& x) {
    const auto k = ca.N.k;
    Configuration y(ca.dim(), 0);
    for (GElem g = 0; g < ca.G.size(); ++g)
        for (std::size_t idx = 0; idx < ca.F.size(); ++idx) {
            const auto gf = ca.G.mul(g, ca.F[idx]);
            const Row xs(x.begin() + static_cast<std::ptrdiff_t>(gf * k), x.begin() + static_cast<std::ptrdiff_t>((gf + 1) * k));
            const auto v = zmod::apply(xs, ca.A[idx]);
            for (std::size_t j = 0; j < k; ++j) y[g * k + j] = (y[g * k + j] + v[j]) % ca.N.m;
        }
    return y;
}

Configuration translate(const FiniteGroup& G, std::size_t k, GElem g, const Configuration& x) {
    Configuration y(x.size());
    const auto gi = G.inv(g);
    for (GElem h = 0; h < G.size(); ++h) {
        const auto src = G.mul(gi, h);
        for (std::size_t j = 0; j < k; ++j) y[h * k + j] = x[src * k + j];
    }
    return y;
}

Matrix translation_matrix(const FiniteGroup& G, std::size_t k, std::uint32_t m, GElem g) {
    Matrix T(G.size() * k, G.size() * k, m);
    const auto gi = G.inv(g);
    for (GElem h = 0; h < G.size(); ++h)
        for (std::size_t j = 0; j < k; ++j) T(G.mul(gi, h) * k + j, h * k + j) = 1 % m;
    return T;
}

FiniteModule configuration_module(const FiniteGroup& G, const FiniteModule& N) {
    std::vector<Matrix> act;
    for (const auto& A : N.act) act.push_back(block_diag(A, G.size()));
    return FiniteModule::make(N.ring, N.m, G.size() * N.k, std::move(act));
}

bool is_equivariant(const LinearCA& ca) {
    const auto P = ca.matrix();
    for (GElem g = 0; g < ca.G.size(); ++g) {
        const auto T = translation_matrix(ca.G, ca.N.k, ca.N.m, g);
        if (T * P != P * T) return false;
    }
    return true;
}

MemorySet extract_memory_set(const FiniteGroup& G, const FiniteModule& N, const Matrix& phi) {
    const auto n = G.size(), k = N.k;
    if (phi.rows != n * k || phi.cols != n * k || phi.m != N.m) throw Error("NotLinear", "matrix of the wrong shape", {-1});
    for (GElem g = 0; g < n; ++g) {
        const auto T = translation_matrix(G, k, N.m, g);
        if (T * phi != phi * T) throw Error("NotEquivariant", "phi(gx) != g phi(x)", {g});
    }
    for (std::size_t i = 0; i < N.act.size(); ++i) {
        const auto D = block_diag(N.act[i], n);
        if (D * phi != phi * D) throw Error("NotLinear", "does not commute with a scalar", {i64(i)});
    }
    MemorySet out;
    const auto e = G.identity();
    for (GElem f = 0; f < n; ++f) {
        auto A = block(phi, k, f, e);
        if (A.is_zero()) continue;
        out.F.push_back(f);
        out.A.push_back(std::move(A));
    }
    out.ca = LinearCA::make(G, N, out.F, out.A);
    if (out.ca.matrix() != phi) throw Error("Internal", "rebuilt automaton differs from phi");
    return out;
}

MemorySet extract_memory_set(const FiniteGroup& G, const FiniteModule& N, const std::vector<std::uint64_t>& table) {
    const auto M = configuration_module(G, N);
    const auto order = M.order();
    if (table.size() != order) throw Error("NotLinear", "table must cover every configuration", {-1});
    for (std::uint64_t x = 0; x < order; ++x)
        for (std::uint64_t y = 0; y < order; ++y) {
            const auto a = M.element(x), b = M.element(y);
            Row s(M.k), t(M.k);
            const auto fa = M.element(table[x]), fb = M.element(table[y]);
            for (std::size_t c = 0; c < M.k; ++c) {
                s[c] = (a[c] + b[c]) % M.m;
                t[c] = (fa[c] + fb[c]) % M.m;
            }
            if (M.element(table[M.index(s)]) != t) throw Error("NotLinear", "phi(x + y) != phi(x) + phi(y)", {i64(x), i64(y)});
        }
    Matrix phi(M.k, M.k, M.m);
    for (std::size_t j = 0; j < M.k; ++j) {
        Row e(M.k, 0);
        e[j] = 1;
        const auto img = M.element(table[M.index(e)]);
        for (std::size_t c = 0; c < M.k; ++c) phi(j, c) = img[c];
    }
    return extract_memory_set(G, N, phi);
}

InjSurj inj_surj_analysis(const LinearCA& ca) {
    const auto P = ca.matrix();
    const auto M = configuration_module(ca.G, ca.N);
    InjSurj r;
    const auto ker = zmod::left_kernel(P);
    r.kernel_basis = ker.basis();
    r.kernel_size = ker.size();
    const auto img = zmod::RowSpace::of_matrix(P);
    r.image_size = img.size();
    r.image_index = M.order() / r.image_size;
    r.injective = r.kernel_size == 1;
    r.surjective = r.image_size == M.order();
    if (M.order() <= (std::uint64_t{1} << 16)) {
        r.enumerated = true;
        const auto table = table_of(M, P);
        std::uint64_t zeros = 0, distinct = 0;
        Bits hit((M.order() + 63) / 64, 0);
        for (auto t : table) {
            zeros += t == 0;
            if (!test(hit, t)) {
                set(hit, t);
                ++distinct;
            }
        }
        r.enumeration_agrees = (zeros == 1) == r.injective && (distinct == M.order()) == r.surjective && zeros == r.kernel_size &&
                               distinct == r.image_size;
    }
    std::vector<Matrix> ops;
    for (GElem g = 0; g < ca.G.size(); ++g) ops.push_back(translation_matrix(ca.G, ca.N.k, ca.N.m, g));
    for (const auto& A : M.act) ops.push_back(A);
    r.image_invariant = true;
    for (const auto& row : img.basis())
        for (const auto& T : ops)
            if (!img.contains(zmod::apply(row, T))) r.image_invariant = false;
    if (r.injective && r.surjective) {
        Matrix Q(P.rows, P.cols, P.m);
        for (std::size_t j = 0; j < P.rows; ++j) {
            Row e(P.rows, 0);
            e[j] = 1;
            const auto x = zmod::solve_left(P, e);
            for (std::size_t c = 0; c < P.cols; ++c) Q(j, c) = (*x)[c];
        }
        for (GElem g = 0; g < ca.G.size(); ++g)
            if (ops[g] * Q != Q * ops[g]) r.reversible = false;
    }
    return r;
}

ReverseLattice reverse_lattice(const FiniteGroup& G, const FiniteModule& N, const Caps& caps) {
    const auto M = configuration_module(G, N);
    if (M.order() > 4096) throw Error("SizeLimitExceeded", "configuration module too large for bitsets", {i64(M.order())});
    ReverseLattice R;
    R.fwd_ = submodule_lattice(M, caps);
    R.L_ = share(R.fwd_.lattice()->dual());
    for (Elem C = 0; C < R.fwd_.size(); ++C) {
        R.bits_.push_back(bits_of(M, R.fwd_[C]));
        R.by_bits_.emplace(R.bits_.back(), C);
    }
    return R;
}

std::vector<std::uint32_t> ReverseLattice::image_table(const Matrix& phi) const { return table_of(module(), phi); }

std::vector<Elem> ReverseLattice::preimages(const std::vector<std::uint32_t>& table) const {
    std::vector<Elem> out(bits_.size());
    for (std::size_t C = 0; C < bits_.size(); ++C) {
        auto it = by_bits_.find(preimage_bits(bits_[C], table));
        if (it == by_bits_.end()) throw Error("Internal", "preimage is not a listed submodule", {i64(C)});
        out[C] = it->second;
    }
    return out;
}

PreimageModel preimage_lattice_model(const LinearCA& ca, std::shared_ptr<const ReverseLattice> L) {
    if (!L) L = std::make_shared<const ReverseLattice>(reverse_lattice(ca.G, ca.N));
    const auto& lat = L->lattice();
    const auto n = L->size();
    PreimageModel pm;
    pm.L = L;
    const auto P = ca.matrix();
    auto map = L->preimages(P);
    if (n <= exhaustive_hom_check_limit) {
        pm.Phi = verify_hom(lat, lat, std::move(map));
        pm.exhaustive_check = true;
    } else {
        pm.Phi = QframeHom::trusted(lat, lat, std::move(map));
        verify_hom_sampled(pm.Phi, 2000, 11);
    }
    const auto& G = ca.G;
    for (GElem g = 0; g < G.size(); ++g)
        pm.rho.push_back(QframeHom::trusted(lat, lat, L->preimages(translation_matrix(G, ca.N.k, ca.N.m, g))));
    // y = configurations vanishing at e
    std::vector<Row> rows;
    const auto k = ca.N.k;
    for (std::size_t j = 0; j < ca.dim(); ++j)
        if (j / k != G.identity()) {
            Row r(ca.dim(), 0);
            r[j] = 1;
            rows.push_back(std::move(r));
        }
    pm.y = *L->find(zmod::RowSpace::span(std::move(rows), ca.N.m, ca.dim()));
    for (GElem g = 0; g < G.size(); ++g) pm.y_g.push_back(pm.rho[g](pm.y));
    pm.y_basis = family_props(*lat, pm.y_g).basis;
    pm.rho_right_action = true;
    for (GElem g = 0; g < G.size(); ++g)
        for (GElem h = 0; h < G.size(); ++h)
            for (Elem K = 0; K < n; ++K)
                if (pm.rho[g](pm.rho[h](K)) != pm.rho[G.mul(h, g)](K)) pm.rho_right_action = false;
    pm.equivariant = true;
    for (const auto& r : pm.rho)
        for (Elem K = 0; K < n; ++K)
            if (pm.Phi(r(K)) != r(pm.Phi(K))) pm.equivariant = false;
    pm.info = kernel_and_algebraicity(pm.Phi);
    const auto inj = zmod::left_kernel(P).size() == 1;
    const auto surj = zmod::image_size(P) == L->module().order();
    pm.lemma_holds = (!inj || (pm.info.surjective && pm.info.algebraic)) && pm.info.injective == surj;
    pm.verdict_agrees = (pm.Phi(lat->top()) == lat->top()) == inj && pm.info.injective == surj;
    if (!pm.info.injective) {
        std::vector<std::int64_t> first(lat->size(), -1);
        for (Elem C = 0; C < n && !pm.collision; ++C) {
            auto& f = first[pm.Phi(C)];
            if (f >= 0)
                pm.collision = std::pair<Elem, Elem>{static_cast<Elem>(f), C};
            else
                f = C;
        }
    }
    return pm;
}

std::vector<CAShape> standard_ca_shapes() {
    const auto F2 = FiniteRing::zmod(2), Z4 = FiniteRing::zmod(4);
    const std::vector<std::pair<std::string, FiniteModule>> alphabets{
        {"F_2", FiniteModule::regular(F2)},
        {"F_2^2", FiniteModule::make(F2, 2, 2, {Matrix::identity(2, 2)})},
        {"Z/4", FiniteModule::regular(Z4)},
    };
    const std::vector<std::pair<std::string, FiniteGroup>> groups{
        {"Z/2", FiniteGroup::cyclic(2)},
        {"Z/3", FiniteGroup::cyclic(3)},
        {"Z/2xZ/2", FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))},
    };
    std::vector<CAShape> out;
    for (const auto& [gn, G] : groups)
        for (const auto& [nn, N] : alphabets) out.push_back({"G=" + gn + " N=" + nn + " F=G", G, N, {}});
    return out;
}

namespace {

// Lattice verdicts when N(N^G) is too large to list. Phi(1) = phi^{-1}(0) = ker phi.
// The lattice kernel of Phi is the intersection of the hyperplanes C with
// phi^{-1}(C) = M, which is im phi. With equal finite lengths on both sides,
// Phi is injective iff surjective iff Phi(1) = 1, and injective iff its kernel is 0.
struct StructuralVerdict {
    bool phi_injective_by_lattice = false;
    bool phi_surjective_by_lattice = false;
    bool kernel_is_image = false;
};

StructuralVerdict structural_verdict(const FiniteModule& M, const Matrix& P) {
    StructuralVerdict v;
    v.phi_injective_by_lattice = zmod::left_kernel(P).size() == 1;
    // hyperplanes H_f = {x : x.f = 0} over a prime field
    std::vector<Row> fs;
    for (std::uint64_t i = 1; i < M.order(); ++i) {
        const auto f = M.element(i);
        bool contains_image = true;
        for (std::size_t r = 0; r < P.rows && contains_image; ++r) {
            std::uint64_t s = 0;
            for (std::size_t c = 0; c < P.cols; ++c) s += static_cast<std::uint64_t>(P(r, c)) * f[c];
            contains_image = s % M.m == 0;
        }
        if (contains_image) fs.push_back(f);
    }
    Matrix H(M.k, fs.size(), M.m);
    for (std::size_t j = 0; j < fs.size(); ++j)
        for (std::size_t c = 0; c < M.k; ++c) H(c, j) = fs[j][c];
    const auto kernel = fs.empty() ? zmod::RowSpace::of_matrix(Matrix::identity(M.k, M.m)) : zmod::left_kernel(H);
    v.kernel_is_image = kernel == zmod::RowSpace::of_matrix(P);
    v.phi_surjective_by_lattice = kernel.size() == M.order();
    return v;
}

// Join preservation of phi^{-1} on random submodules: phi^{-1}(C n D) = phi^{-1}(C) n phi^{-1}(D).
bool sampled_preimage_joins(const FiniteModule& M, const Matrix& P, std::mt19937_64& rng, int pairs) {
    const auto table = table_of(M, P);
    auto random_sub = [&] {
        std::vector<Row> rows;
        const int gens = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < gens; ++i) {
            const auto x = M.element(rng() % M.order());
            rows.push_back(x);
            for (const auto& A : M.act) rows.push_back(zmod::apply(x, A));
        }
        return bits_of(M, zmod::RowSpace::span(std::move(rows), M.m, M.k));
    };
    Bits all((M.order() + 63) / 64, 0);
    for (std::uint64_t x = 0; x < M.order(); ++x) set(all, x);
    if (preimage_bits(all, table) != all) return false;
    for (int i = 0; i < pairs; ++i) {
        const auto C = random_sub(), D = random_sub();
        Bits CD(C.size());
        for (std::size_t w = 0; w < C.size(); ++w) CD[w] = C[w] & D[w];
        auto pc = preimage_bits(C, table);
        const auto pd = preimage_bits(D, table);
        for (std::size_t w = 0; w < pc.size(); ++w) pc[w] &= pd[w];
        if (preimage_bits(CD, table) != pc) return false;
    }
    return true;
}

}  // namespace

ShapeReport surjunctivity_suite(const CAShape& shape, ScanMode mode, std::uint64_t samples, std::uint64_t seed, const Caps& caps) {
    ShapeReport rep;
    rep.shape = shape.name;
    const auto& G = shape.G;
    std::vector<GElem> F = shape.F;
    if (F.empty())
        for (GElem g = 0; g < G.size(); ++g) F.push_back(g);
    const auto locals = endomorphisms(shape.N, std::size_t{1} << 20, seed);
    rep.local_maps = locals.size();
    const auto M = configuration_module(G, shape.N);

    std::shared_ptr<const ReverseLattice> L;
    try {
        L = std::make_shared<const ReverseLattice>(reverse_lattice(G, shape.N, caps));
        rep.lattice_size = L->size();
    } catch (const Error& e) {
        if (e.code() != "SizeLimitExceeded") throw;
        for (std::uint32_t d = 2; d * d <= M.m; ++d)
            if (M.m % d == 0) throw;  // hyperplane argument needs a prime field
        rep.structural = true;
    }
    std::vector<QframeHom> rho;
    if (L)
        for (GElem g = 0; g < G.size(); ++g)
            rho.push_back(QframeHom::trusted(L->lattice(), L->lattice(), L->preimages(translation_matrix(G, shape.N.k, shape.N.m, g))));

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < F.size(); ++i) total = total > (std::uint64_t{1} << 40) / locals.size() ? std::uint64_t{1} << 40 : total * locals.size();
    rep.exhaustive = mode != ScanMode::sample && total <= (std::uint64_t{1} << 20);
    const auto count = rep.exhaustive ? total : samples;
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> pick(F.size(), 0);

    for (std::uint64_t it = 0; it < count; ++it) {
        if (rep.exhaustive) {
            if (it) {
                for (std::size_t i = 0; i < pick.size(); ++i) {
                    if (++pick[i] < locals.size()) break;
                    pick[i] = 0;
                }
            }
        } else {
            for (auto& p : pick) p = rng() % locals.size();
        }
        std::vector<Matrix> A;
        for (auto p : pick) A.push_back(locals[p]);
        const auto ca = LinearCA::make(G, shape.N, F, std::move(A));
        ++rep.cas;
        const auto v = inj_surj_analysis(ca);
        rep.injective += v.injective;
        rep.surjective += v.surjective;
        if (v.injective && !v.surjective) ++rep.violations;
        if (!v.image_invariant) ++rep.image_not_invariant;
        if (!v.enumeration_agrees) ++rep.enumeration_disagreements;
        if (!v.reversible) ++rep.irreversible;
        if (!is_equivariant(ca)) ++rep.equivariance_failures;
        const auto P = ca.matrix();

        if (rep.structural) {
            const auto s = structural_verdict(M, P);
            if (s.phi_injective_by_lattice != v.injective || s.phi_surjective_by_lattice != v.surjective) ++rep.lattice_disagreements;
            if (!s.kernel_is_image || (v.injective && !s.phi_surjective_by_lattice && v.surjective)) ++rep.lemma_failures;
            if (it % 64 == 0) {
                ++rep.hom_sampled_checks;
                if (!sampled_preimage_joins(M, P, rng, 64)) ++rep.hom_failures;
            }
            continue;
        }

        const auto& lat = L->lattice();
        auto map = L->preimages(P);
        QframeHom Phi;
        try {
            if (L->size() <= exhaustive_hom_check_limit) {
                Phi = verify_hom(lat, lat, std::move(map));
                ++rep.hom_full_checks;
            } else {
                Phi = QframeHom::trusted(lat, lat, std::move(map));
                verify_hom_sampled(Phi, 128, seed + it, it % 256 == 0);
                ++rep.hom_sampled_checks;
            }
        } catch (const Error&) {
            ++rep.hom_failures;
            continue;
        }
        const auto info = kernel_and_algebraicity(Phi);
        if (!((!v.injective || (info.surjective && info.algebraic)) && info.injective == v.surjective)) ++rep.lemma_failures;
        const bool lat_inj = Phi(lat->top()) == lat->top();
        if (lat_inj != v.injective || info.injective != v.surjective) ++rep.lattice_disagreements;
        bool eq = true;
        for (const auto& r : rho)
            for (Elem K = 0; K < L->size() && eq; ++K) eq = Phi(r(K)) == r(Phi(K));
        if (!eq) ++rep.equivariance_failures;
    }
    return rep;
}

}  // namespace qfw
