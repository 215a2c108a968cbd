#include "qfw/algebra.hpp"

#include <sstream>

namespace qfw {

namespace {

std::int64_t i64(std::size_t x) { return static_cast<std::int64_t>(x); }

}  // namespace

FiniteGroup FiniteGroup::from_table(std::size_t n, std::vector<GElem> table, std::vector<std::string> names) {
    if (n == 0 || table.size() != n * n) throw Error("NotAGroup", "table must be n x n with n > 0");
    for (auto x : table)
        if (x >= n) throw Error("NotAGroup", "table entry out of range", {x});
    FiniteGroup G;
    G.n_ = n;
    G.table_ = std::move(table);
    std::optional<GElem> e;
    for (GElem c = 0; c < n && !e; ++c) {
        bool ok = true;
        for (GElem g = 0; g < n && ok; ++g) ok = G.mul(c, g) == g && G.mul(g, c) == g;
        if (ok) e = c;
    }
    if (!e) throw Error("NotAGroup", "no identity");
    G.e_ = *e;
    G.inv_.assign(n, 0);
    for (GElem g = 0; g < n; ++g) {
        bool found = false;
        for (GElem h = 0; h < n && !found; ++h)
            if (G.mul(g, h) == G.e_ && G.mul(h, g) == G.e_) {
                G.inv_[g] = h;
                found = true;
            }
        if (!found) throw Error("NotAGroup", "element without inverse", {g});
    }
    for (GElem a = 0; a < n; ++a)
        for (GElem b = 0; b < n; ++b)
            for (GElem c = 0; c < n; ++c)
                if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c))) throw Error("NotAGroup", "not associative", {a, b, c});
    if (names.empty())
        for (std::size_t g = 0; g < n; ++g) names.push_back("g" + std::to_string(g));
    if (names.size() != n) throw Error("NotAGroup", "wrong number of names");
    G.names_ = std::move(names);
    G.kind_ = "table";
    return G;
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
    if (n == 0) throw Error("NotAGroup", "cyclic group of order 0");
    std::vector<GElem> t(n * n);
    std::vector<std::string> names;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<GElem>((a + b) % n);
        names.push_back(a == 0 ? "e" : a == 1 ? "t" : "t^" + std::to_string(a));
    }
    auto G = from_table(n, std::move(t), std::move(names));
    G.kind_ = "cyclic:" + std::to_string(n);
    return G;
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
    const auto na = a.size(), nb = b.size(), n = na * nb;
    std::vector<GElem> t(n * n);
    std::vector<std::string> names;
    for (std::size_t x = 0; x < n; ++x) {
        names.push_back("(" + a.name(static_cast<GElem>(x / nb)) + "," + b.name(static_cast<GElem>(x % nb)) + ")");
        for (std::size_t y = 0; y < n; ++y)
            t[x * n + y] = static_cast<GElem>(a.mul(static_cast<GElem>(x / nb), static_cast<GElem>(y / nb)) * nb +
                                              b.mul(static_cast<GElem>(x % nb), static_cast<GElem>(y % nb)));
    }
    auto G = from_table(n, std::move(t), std::move(names));
    G.kind_ = a.kind() + "x" + b.kind();
    return G;
}

std::optional<GElem> FiniteGroup::find(const std::string& name) const {
    for (GElem g = 0; g < n_; ++g)
        if (names_[g] == name) return g;
    return std::nullopt;
}

FiniteRing FiniteRing::from_structure(std::uint32_t m, std::size_t d, std::vector<Row> products, Row one, std::string name) {
    if (m < 2) throw Error("NotARing", "modulus must be at least 2");
    if (products.size() != d * d || one.size() != d) throw Error("NotARing", "structure constants have the wrong shape");
    FiniteRing R;
    R.m_ = m;
    R.d_ = d;
    R.order_ = 1;
    for (std::size_t i = 0; i < d; ++i)
        R.order_ = R.order_ > (std::uint64_t{1} << 63) / m ? std::uint64_t{1} << 63 : R.order_ * m;
    for (auto& p : products) {
        if (p.size() != d) throw Error("NotARing", "structure constant of the wrong length");
        for (auto& c : p) c %= m;
    }
    for (auto& c : one) c %= m;
    R.products_ = std::move(products);
    R.one_ = std::move(one);
    R.name_ = std::move(name);
    for (std::size_t i = 0; i < d; ++i) {
        const auto e = R.basis(i);
        if (R.mul(R.one_, e) != e || R.mul(e, R.one_) != e) throw Error("NotARing", "unit law fails", {0, i64(i)});
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                if (R.mul(R.basis_product(i, j), R.basis(k)) != R.mul(R.basis(i), R.basis_product(j, k)))
                    throw Error("NotARing", "not associative on basis vectors", {1, i64(i), i64(j), i64(k)});
    return R;
}

FiniteRing FiniteRing::zmod(std::uint32_t n) { return from_structure(n, 1, {Row{1}}, Row{1}, "Z/" + std::to_string(n)); }

FiniteRing FiniteRing::fq(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
    if (poly.size() < 2 || poly.back() % p != 1) throw Error("NotIrreducible", "polynomial must be monic of degree >= 1");
    const std::size_t d = poly.size() - 1;
    // x^k mod poly for k < 2d - 1
    std::vector<Row> pw;
    Row cur(d, 0);
    cur[0] = 1 % p;
    for (std::size_t k = 0; k + 1 < 2 * d; ++k) {
        pw.push_back(cur);
        const auto lead = cur[d - 1];
        Row next(d, 0);
        for (std::size_t i = d - 1; i > 0; --i) next[i] = cur[i - 1];
        for (std::size_t i = 0; i < d; ++i) next[i] = zmod::reduce(static_cast<std::int64_t>(next[i]) - static_cast<std::int64_t>(lead) * poly[i], p);
        cur = std::move(next);
    }
    std::vector<Row> products;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) products.push_back(pw[i + j]);
    std::size_t q = 1;
    for (std::size_t i = 0; i < d; ++i) q *= p;
    auto R = from_structure(p, d, std::move(products), pw[0], "F_" + std::to_string(q));
    for (std::uint64_t i = 1; i < R.order(); ++i)
        if (!R.is_unit(R.element(i))) throw Error("NotIrreducible", "quotient ring has a zero divisor", {static_cast<std::int64_t>(i)});
    return R;
}

FiniteRing FiniteRing::matrix(const FiniteRing& S, std::size_t k) {
    const auto d = S.dim(), D = k * k * d;
    auto at = [&](std::size_t a, std::size_t b, std::size_t i) { return (a * k + b) * d + i; };
    std::vector<Row> products(D * D, Row(D, 0));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t dd = 0; dd < k; ++dd)
                    for (std::size_t j = 0; j < d; ++j) {
                        // (E_ab e_i)(E_b,dd e_j) = E_a,dd (e_i e_j); other products vanish
                        auto& out = products[at(a, b, i) * D + at(b, dd, j)];
                        const auto& p = S.basis_product(i, j);
                        for (std::size_t l = 0; l < d; ++l) out[at(a, dd, l)] = p[l];
                    }
    Row one(D, 0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t l = 0; l < d; ++l) one[at(a, a, l)] = S.one()[l];
    return from_structure(S.modulus(), D, std::move(products), std::move(one), "Mat_" + std::to_string(k) + "(" + S.name() + ")");
}

Row FiniteRing::basis(std::size_t i) const {
    Row e(d_, 0);
    e[i] = 1;
    return e;
}

Row FiniteRing::add(const Row& a, const Row& b) const {
    Row out(d_);
    for (std::size_t i = 0; i < d_; ++i) out[i] = (a[i] + b[i]) % m_;
    return out;
}

Row FiniteRing::neg(const Row& a) const {
    Row out(d_);
    for (std::size_t i = 0; i < d_; ++i) out[i] = (m_ - a[i]) % m_;
    return out;
}

Row FiniteRing::sub(const Row& a, const Row& b) const { return add(a, neg(b)); }

Row FiniteRing::mul(const Row& a, const Row& b) const {
    std::vector<std::uint64_t> acc(d_, 0);
    for (std::size_t i = 0; i < d_; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < d_; ++j) {
            if (!b[j]) continue;
            const std::uint64_t c = static_cast<std::uint64_t>(a[i]) * b[j] % m_;
            const auto& p = products_[i * d_ + j];
            for (std::size_t l = 0; l < d_; ++l) acc[l] = (acc[l] + c * p[l]) % m_;
        }
    }
    return Row(acc.begin(), acc.end());
}

bool FiniteRing::is_commutative() const {
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = i + 1; j < d_; ++j)
            if (basis_product(i, j) != basis_product(j, i)) return false;
    return true;
}

Matrix FiniteRing::right_mult(const Row& x) const {
    Matrix A(d_, d_, m_);
    for (std::size_t i = 0; i < d_; ++i) {
        const auto r = mul(basis(i), x);
        for (std::size_t j = 0; j < d_; ++j) A(i, j) = r[j];
    }
    return A;
}

Matrix FiniteRing::left_mult(const Row& x) const {
    Matrix A(d_, d_, m_);
    for (std::size_t i = 0; i < d_; ++i) {
        const auto r = mul(x, basis(i));
        for (std::size_t j = 0; j < d_; ++j) A(i, j) = r[j];
    }
    return A;
}

std::optional<Row> FiniteRing::right_inverse(const Row& x) const { return zmod::solve_left(left_mult(x), one_); }

std::optional<Row> FiniteRing::inverse(const Row& x) const {
    auto y = right_inverse(x);
    if (y && mul(*y, x) == one_) return y;
    return std::nullopt;
}

std::uint64_t FiniteRing::index(const Row& x) const {
    std::uint64_t idx = 0;
    for (std::size_t i = d_; i-- > 0;) idx = idx * m_ + x[i];
    return idx;
}

Row FiniteRing::element(std::uint64_t i) const {
    Row x(d_);
    for (std::size_t j = 0; j < d_; ++j) {
        x[j] = static_cast<std::uint32_t>(i % m_);
        i /= m_;
    }
    return x;
}

std::vector<Row> FiniteRing::elements(const Caps& caps) const {
    if (order_ > caps.ring_order) throw Error("SizeLimitExceeded", "ring too large to enumerate", {static_cast<std::int64_t>(order_)});
    std::vector<Row> out;
    for (std::uint64_t i = 0; i < order_; ++i) out.push_back(element(i));
    return out;
}

std::vector<Row> FiniteRing::units(const Caps& caps) const {
    std::vector<Row> out;
    for (auto& x : elements(caps))
        if (is_unit(x)) out.push_back(std::move(x));
    return out;
}

void FiniteRing::verify_automorphism(const Matrix& S, std::int64_t tag) const {
    if (S.rows != d_ || S.cols != d_ || S.m != m_) throw Error("NotAutomorphism", "wrong shape", {tag, 0});
    if (zmod::image_size(S) != order_) throw Error("NotAutomorphism", "not bijective", {tag, 1});
    if (zmod::apply(one_, S) != one_) throw Error("NotAutomorphism", "unit not fixed", {tag, 2});
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) {
            const auto lhs = zmod::apply(basis_product(i, j), S);
            const auto rhs = mul(zmod::apply(basis(i), S), zmod::apply(basis(j), S));
            if (lhs != rhs) throw Error("NotAutomorphism", "not multiplicative", {tag, 3, i64(i), i64(j)});
        }
}

Matrix FiniteRing::frobenius() const {
    Matrix F(d_, d_, m_);
    for (std::size_t i = 0; i < d_; ++i) {
        Row r = one_;
        for (std::uint32_t k = 0; k < m_; ++k) r = mul(r, basis(i));
        for (std::size_t j = 0; j < d_; ++j) F(i, j) = r[j];
    }
    verify_automorphism(F, -1);
    return F;
}

std::string FiniteRing::format(const Row& x) const {
    if (d_ == 1) return std::to_string(x[0]);
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < d_; ++i) os << (i ? " " : "") << x[i];
    os << ')';
    return os.str();
}

}  // namespace qfw
