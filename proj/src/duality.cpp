#include "qfw/duality.hpp"

#include <random>
#include <set>

namespace qfw {

namespace {

std::int64_t i64(std::uint64_t x) { return static_cast<std::int64_t>(x); }

// Product of integer lifts reduced mod m.
Matrix mul(const Matrix& A, const Matrix& B, std::uint32_t m) {
    if (A.cols != B.rows) throw Error("ShapeMismatch", "matrix product");
    Matrix C(A.rows, B.cols, m);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const std::uint64_t x = A(i, k);
            if (!x) continue;
            for (std::size_t j = 0; j < B.cols; ++j) C(i, j) = static_cast<std::uint32_t>((C(i, j) + x * B(k, j)) % m);
        }
    return C;
}

Matrix add(const Matrix& A, const Matrix& B) {
    Matrix C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = (A.a[i] + B.a[i]) % A.m;
    return C;
}

Matrix reshape(const Row& v, std::size_t rows, std::size_t cols, std::uint32_t m) {
    Matrix P(rows, cols, m);
    for (std::size_t i = 0; i < rows * cols; ++i) P.a[i] = v[i] % m;
    return P;
}

Row row_times(const Row& x, const Matrix& A, std::uint32_t m) {
    Row out(A.cols, 0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const std::uint64_t c = x[i] % m;
        if (!c) continue;
        for (std::size_t j = 0; j < A.cols; ++j) out[j] = static_cast<std::uint32_t>((out[j] + c * A(i, j)) % m);
    }
    return out;
}

bool same_ring(const FiniteRing& a, const FiniteRing& b) {
    if (a.modulus() != b.modulus() || a.dim() != b.dim() || a.one() != b.one()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (a.basis_product(i, j) != b.basis_product(i, j)) return false;
    return true;
}

// ev_M : M -> M**, row a is the coordinates of (u -> f_u(e_a)).
Matrix evaluation(const DualModule& D1, const DualModule& D2) {
    const auto& M = D1.source;
    const std::size_t d = M.ring.dim();
    const std::uint32_t mR = M.ring.modulus();
    Matrix ev(M.k, M.k, M.m);
    for (std::size_t a = 0; a < M.k; ++a) {
        Matrix E(D1.module.k, d, mR);
        for (std::size_t j = 0; j < D1.module.k; ++j)
            for (std::size_t b = 0; b < d; ++b) E(j, b) = D1.basis[j](a, b);
        const auto u = D2.coords(E);
        for (std::size_t c = 0; c < M.k; ++c) ev(a, c) = u[c];
    }
    return ev;
}

}  // namespace

DualitySetting DualitySetting::of(const FiniteRing& R) {
    const auto m = R.modulus();
    if (!R.is_commutative()) throw Error("UnsupportedRing", R.name() + " is not commutative");
    std::uint32_t p = 2;
    while (m % p) ++p;
    auto q = m;
    while (q % p == 0) q /= p;
    if (q != 1) throw Error("UnsupportedRing", R.name() + ": additive group is not a p-group", {m});
    DualitySetting S{R, BaseKind::field, p, Row(R.dim(), 0)};
    S.chi[0] = 1;
    if (R.dim() == 1) {
        S.kind = m == p ? BaseKind::field : BaseKind::zpn;
    } else {
        if (m != p) throw Error("UnsupportedRing", R.name() + " is neither a field nor Z/p^n");
        if (R.order() > default_caps().ring_order) throw Error("UnsupportedRing", R.name() + " is too large to certify", {i64(R.order())});
        for (std::uint64_t i = 1; i < R.order(); ++i)
            if (!R.is_unit(R.element(i))) throw Error("UnsupportedRing", R.name() + " has a non-unit", {i64(i)});
    }
    // c must see every nonzero principal ideal
    if (R.order() <= default_caps().ring_order) {
        const auto els = R.elements();
        for (std::size_t i = 1; i < els.size(); ++i) {
            bool seen = false;
            for (const auto& s : els) {
                const auto rs = R.mul(els[i], s);
                std::uint64_t c = 0;
                for (std::size_t b = 0; b < R.dim(); ++b) c += std::uint64_t{rs[b]} * S.chi[b];
                if (c % m) {
                    seen = true;
                    break;
                }
            }
            if (!seen) throw Error("UnsupportedRing", "no generating functional", {i64(i)});
        }
    }
    return S;
}

zmod::RowSpace hom_space(const FiniteModule& M, const FiniteModule& N) {
    if (M.act.size() != N.act.size()) throw Error("ShapeMismatch", "modules over different rings");
    const std::size_t kM = M.k, kN = N.k, d = M.act.size();
    const std::uint32_t m = N.m;
    const auto unknowns = kM * kN;
    auto at = [&](std::size_t a, std::size_t b) { return a * kN + b; };
    // one column per equation; the first is a zero column so X is never empty
    std::vector<std::vector<std::int64_t>> cols;
    cols.emplace_back(unknowns, 0);
    if (M.m % m)
        for (std::size_t a = 0; a < kM; ++a)
            for (std::size_t b = 0; b < kN; ++b) {
                std::vector<std::int64_t> c(unknowns, 0);
                c[at(a, b)] = M.m;
                cols.push_back(std::move(c));
            }
    for (std::size_t i = 0; i < d; ++i) {
        const auto& A = M.act[i];
        const auto& B = N.act[i];
        // (A P - P B)[r][c]
        for (std::size_t r = 0; r < kM; ++r)
            for (std::size_t c = 0; c < kN; ++c) {
                std::vector<std::int64_t> col(unknowns, 0);
                for (std::size_t a = 0; a < kM; ++a) col[at(a, c)] += A(r, a);
                for (std::size_t b = 0; b < kN; ++b) col[at(r, b)] -= B(b, c);
                cols.push_back(std::move(col));
            }
    }
    Matrix X(unknowns, cols.size(), m);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t u = 0; u < unknowns; ++u) X(u, j) = zmod::reduce(cols[j][u], m);
    return zmod::left_kernel(X);
}

Matrix DualModule::hom(const Row& u) const {
    const auto mR = source.ring.modulus();
    Matrix P(source.k, source.ring.dim(), mR);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const std::uint64_t c = u[j] % module.m;
        if (!c) continue;
        for (std::size_t i = 0; i < P.a.size(); ++i) P.a[i] = static_cast<std::uint32_t>((P.a[i] + c * basis[j].a[i]) % mR);
    }
    return P;
}

Row DualModule::coords(const Matrix& f) const {
    const auto mR = source.ring.modulus(), scale = mR / source.m;
    Row u(f.rows, 0);
    for (std::size_t a = 0; a < f.rows; ++a) {
        std::uint64_t c = 0;
        for (std::size_t b = 0; b < f.cols; ++b) c += std::uint64_t{f(a, b)} * chi[b];
        c %= mR;
        if (c % scale) throw Error("NotModuleHom", "value outside the torsion of K", {i64(a)});
        u[a] = static_cast<std::uint32_t>(c / scale);
    }
    return u;
}

LinearVerdict map_verdict(const FiniteModule& M, const FiniteModule& N, const Matrix& P) {
    // the rows of P have order dividing M.m, so their span is the image
    LinearVerdict v;
    v.image_size = zmod::RowSpace::span(zmod::RowSpace::rows_of(P), N.m, N.k).size();
    v.kernel_size = M.order() / v.image_size;
    v.injective = v.kernel_size == 1;
    v.surjective = v.image_size == N.order();
    return v;
}

DualModule dual(const DualitySetting& S, const FiniteModule& M, const Caps& caps) {
    if (!same_ring(S.R, M.ring)) throw Error("UnsupportedRing", M.ring.name() + " differs from the setting's ring");
    if (M.order() > caps.module_order) throw Error("SizeLimitExceeded", "module over the module cap", {i64(M.order())});
    const auto K = S.K();
    const std::size_t d = S.R.dim();
    const std::uint32_t mR = S.R.modulus();
    DualModule D{M, {}, {}, S.chi};
    const auto H = hom_space(M, K);
    if (H.size() != M.order()) throw Error("DualityViolation", "|Hom(M, K)| != |M|", {i64(H.size()), i64(M.order())});
    // coordinates must be a bijection Hom(M, K) -> (Z/M.m)^k
    std::set<Row> seen;
    std::map<Row, Matrix> unit;
    H.for_each([&](const Row& v) {
        auto P = reshape(v, M.k, d, mR);
        auto u = D.coords(P);
        if (!seen.insert(u).second) throw Error("DualityViolation", "two homs share coordinates");
        if (std::count(u.begin(), u.end(), 0U) + 1 == static_cast<std::ptrdiff_t>(u.size()) &&
            std::count(u.begin(), u.end(), 1U) == 1)
            unit.emplace(std::move(u), std::move(P));
    });
    for (std::size_t j = 0; j < M.k; ++j) {
        Row e(M.k, 0);
        e[j] = 1 % M.m;
        auto it = unit.find(e);
        if (it == unit.end()) throw Error("DualityViolation", "no hom with unit coordinates", {i64(j)});
        D.basis.push_back(it->second);
    }
    // (f r)(x) = f(x) r
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < d; ++i) {
        const auto Rr = S.R.right_mult(S.R.basis(i));
        Matrix A(M.k, M.k, M.m);
        for (std::size_t j = 0; j < M.k; ++j) {
            const auto u = D.coords(mul(D.basis[j], Rr, mR));
            for (std::size_t c = 0; c < M.k; ++c) A(j, c) = u[c];
        }
        act.push_back(std::move(A));
    }
    D.module = FiniteModule::make(S.R, M.m, M.k, std::move(act));
    return D;
}

Matrix dual_map(const DualModule& Mstar, const DualModule& Nstar, const Matrix& phi) {
    const auto& M = Mstar.source;
    const auto& N = Nstar.source;
    if (phi.rows != M.k || phi.cols != N.k) throw Error("ShapeMismatch", "phi has the wrong shape");
    const auto mR = M.ring.modulus();
    Matrix D(N.k, M.k, M.m);
    for (std::size_t j = 0; j < N.k; ++j) {
        const auto u = Mstar.coords(mul(phi, Nstar.basis[j], mR));
        for (std::size_t c = 0; c < M.k; ++c) D(j, c) = u[c];
    }
    return D;
}

DoubleDual double_dual_check(const DualitySetting& S, const FiniteModule& M, const Caps& caps) {
    const auto D1 = dual(S, M, caps);
    const auto D2 = dual(S, D1.module, caps);
    DoubleDual out{evaluation(D1, D2)};
    try {
        verify_module_hom(M, D2.module, out.ev);
        out.module_hom = true;
    } catch (const Error&) {
    }
    const auto v = map_verdict(M, D2.module, out.ev);
    out.bijective = v.injective && v.surjective;
    return out;
}

bool double_dual_natural(const DualitySetting& S, const FiniteModule& M, const FiniteModule& N, const Matrix& phi, const Caps& caps) {
    const auto DM = dual(S, M, caps), DN = dual(S, N, caps);
    const auto DMM = dual(S, DM.module, caps), DNN = dual(S, DN.module, caps);
    const auto phis = dual_map(DM, DN, phi);
    const auto phiss = dual_map(DNN, DMM, phis);
    return mul(evaluation(DM, DMM), phiss, N.m) == mul(phi, evaluation(DN, DNN), N.m);
}

FiniteModule free_module(const FiniteRing& R, std::size_t n) {
    const auto d = R.dim();
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < d; ++i) {
        const auto B = R.right_mult(R.basis(i));
        Matrix A(n * d, n * d, R.modulus());
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t s = 0; s < d; ++s) A(c * d + r, c * d + s) = B(r, s);
        act.push_back(std::move(A));
    }
    return FiniteModule::make(R, R.modulus(), n * d, std::move(act));
}

EndAntiIso::EndAntiIso(const DualitySetting& S, FiniteGroup G, std::size_t n, const Caps& caps)
    : S_(S), G_(std::move(G)), n_(n) {
    if (n == 0) throw Error("BadParams", "n must be positive");
    const std::size_t d = S.R.dim(), g = G_.size();
    const std::uint32_t mR = S.R.modulus();
    N_ = free_module(S.R, n);
    conf_ = configuration_module(G_, N_);
    dual_ = dual(S_, conf_, caps);
    const auto k = N_.k, kc = conf_.k;
    for (GElem h = 0; h < g; ++h) right_act_.push_back(dual_map(dual_, dual_, translation_matrix(G_, k, mR, h)));

    AG_ = verify_crossed(CrossedProductSpec::group_ring(S.R, G_), caps).ring();
    mat_ = FiniteRing::matrix(AG_, n);

    // delta_i(x) = x(e)_i
    const auto e = G_.identity();
    for (std::size_t i = 0; i < n; ++i) {
        Matrix P(kc, d, mR);
        for (std::size_t b = 0; b < d; ++b) P(e * k + i * d + b, b) = 1 % mR;
        delta_.push_back(dual_.coords(P));
    }
    // row (i, h, b) is delta_i . (e_b h)
    theta_ = Matrix(n * g * d, kc, mR);
    for (std::size_t i = 0; i < n; ++i)
        for (GElem h = 0; h < g; ++h)
            for (std::size_t b = 0; b < d; ++b) {
                const auto u = row_times(row_times(delta_[i], right_act_[h], mR), dual_.module.act[b], mR);
                for (std::size_t c = 0; c < kc; ++c) theta_((i * g + h) * d + b, c) = u[c];
            }
    free_ = zmod::image_size(theta_) == dual_.module.order();

    // configurations as a right A[G]-module: x . (e_b h) = lambda_{h^-1}(x) e_b
    std::vector<Matrix> act;
    for (GElem h = 0; h < g; ++h)
        for (std::size_t b = 0; b < d; ++b) act.push_back(mul(translation_matrix(G_, k, mR, G_.inv(h)), conf_.act[b], mR));
    const auto over_AG = FiniteModule::make(AG_, mR, kc, std::move(act));
    ends_ = qfw::endomorphisms(over_AG, 4096, 1, &exhaustive_);
}

Row EndAntiIso::operator()(const Matrix& phi) const {
    const std::uint32_t mR = S_.R.modulus();
    const std::size_t g = G_.size(), D = AG_.dim();
    for (GElem h = 0; h < g; ++h) {
        const auto T = translation_matrix(G_, N_.k, mR, h);
        if (mul(T, phi, mR) != mul(phi, T, mR)) throw Error("NotEquivariant", "phi(gx) != g phi(x)", {h});
    }
    verify_module_hom(conf_, conf_, phi);
    const auto Dphi = dual_map(dual_, dual_, phi);
    Row X(mat_.dim(), 0);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto y = row_times(delta_[i], Dphi, mR);
        const auto a = zmod::solve_left(theta_, y);
        if (!a) throw Error("DualityViolation", "phi*(delta) outside A[G]^n", {i64(i)});
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t c = 0; c < D; ++c) X[(j * n_ + i) * D + c] = (*a)[j * D + c];
    }
    return X;
}

Matrix EndAntiIso::shift(GElem h) const {
    const std::size_t k = N_.k;
    const std::uint32_t mR = S_.R.modulus();
    Matrix M(conf_.k, conf_.k, mR);
    for (GElem g = 0; g < G_.size(); ++g)
        for (std::size_t c = 0; c < k; ++c) M(G_.mul(g, h) * k + c, g * k + c) = 1 % mR;
    return M;
}

AntiIsoReport EndAntiIso::report(const AntiIsoOptions& opt) const {
    const auto mR = S_.R.modulus();
    AntiIsoReport r;
    r.ring = S_.R.name();
    r.group = G_.kind();
    r.n = n_;
    r.end_size = exhaustive_ ? ends_.size() : 0;
    r.matrix_size = mat_.order();
    r.exhaustive = exhaustive_ && ends_.size() <= opt.exhaustive_limit;
    r.dual_is_free = free_;

    std::vector<Row> X;
    for (const auto& phi : ends_) X.push_back((*this)(phi));
    r.identity_to_identity = (*this)(Matrix::identity(conf_.k, mR)) == mat_.one();
    r.injective = std::set<Row>(X.begin(), X.end()).size() == X.size();
    r.bijective = exhaustive_ && r.injective && X.size() == mat_.order();

    r.duals_equivariant = true;
    r.surjunctive = r.directly_finite = true;
    for (std::size_t a = 0; a < ends_.size(); ++a) {
        const auto& phi = ends_[a];
        const auto D = dual_map(dual_, dual_, phi);
        for (const auto& T : right_act_) r.duals_equivariant = r.duals_equivariant && mul(T, D, mR) == mul(D, T, mR);
        for (const auto& A : dual_.module.act) r.duals_equivariant = r.duals_equivariant && mul(A, D, mR) == mul(D, A, mR);
        const auto v = map_verdict(conf_, conf_, phi);
        const auto w = map_verdict(dual_.module, dual_.module, D);
        if (v.injective != w.surjective || v.surjective != w.injective) ++r.bridge_failures;
        if (v.injective && !v.surjective) r.surjunctive = false;
        if (mat_.right_inverse(X[a]) && !mat_.inverse(X[a])) r.directly_finite = false;
        if (v.injective && v.surjective) {
            Matrix inv(conf_.k, conf_.k, mR);
            for (std::size_t i = 0; i < conf_.k; ++i) {
                Row e(conf_.k, 0);
                e[i] = 1 % mR;
                const auto x = zmod::solve_left(phi, e);
                for (std::size_t j = 0; j < conf_.k; ++j) inv(i, j) = (*x)[j];
            }
            for (GElem h = 0; h < G_.size(); ++h) {
                const auto T = translation_matrix(G_, N_.k, mR, h);
                if (mul(T, inv, mR) != mul(inv, T, mR)) {
                    ++r.irreversible;
                    break;
                }
            }
        }
    }
    r.verdicts_agree = r.surjunctive == r.directly_finite;

    auto check = [&](std::size_t a, std::size_t b) {
        // phi_a after phi_b is x -> x P_b P_a
        const auto comp = mul(ends_[b], ends_[a], mR);
        ++r.composition_checks;
        if ((*this)(comp) != mat_.mul(X[b], X[a])) ++r.composition_failures;
        if ((*this)(add(ends_[a], ends_[b])) != mat_.add(X[a], X[b])) ++r.additivity_failures;
    };
    if (r.exhaustive) {
        for (std::size_t a = 0; a < ends_.size(); ++a)
            for (std::size_t b = 0; b < ends_.size(); ++b) check(a, b);
    } else {
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<std::size_t> pick(0, ends_.size() - 1);
        for (std::size_t s = 0; s < opt.samples; ++s) check(pick(rng), pick(rng));
    }
    return r;
}

AntiIsoReport end_anti_iso(const FiniteRing& R, const FiniteGroup& G, std::size_t n, const AntiIsoOptions& opt, const Caps& caps) {
    return EndAntiIso(DualitySetting::of(R), G, n, caps).report(opt);
}

}  // namespace qfw
