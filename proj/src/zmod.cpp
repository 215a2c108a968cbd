#include "qfw/zmod.hpp"

#include "qfw/error.hpp"

#include <numeric>
#include <utility>

namespace qfw::zmod {

std::uint32_t reduce(std::int64_t x, std::uint32_t m) {
    auto r = x % static_cast<std::int64_t>(m);
    if (r < 0) r += m;
    return static_cast<std::uint32_t>(r);
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

namespace {

// s*a + t*b = g with g = gcd(a, b) >= 0.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
    std::int64_t old_r = a, r = b, old_s = 1, ss = 0, old_t = 0, tt = 1;
    while (r != 0) {
        const auto q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(ss, old_s - q * ss);
        old_t = std::exchange(tt, old_t - q * tt);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

// Unit u with u * p == gcd(p, m) mod m.
std::uint32_t normalizing_unit(std::uint32_t p, std::uint32_t m) {
    const auto g = static_cast<std::uint32_t>(std::gcd(p, m));
    const auto mp = m / g;
    std::uint32_t u0 = 1;
    if (mp > 1) u0 = *inverse((p / g) % mp, mp);
    for (std::uint32_t u = u0; u < m + u0; u += mp)
        if (std::gcd(u % m, m) == 1) return u % m;
    return 1;
}

void axpy(Row& dst, std::int64_t a, const Row& x, std::int64_t b, const Row& y, std::uint32_t m) {
    for (std::size_t c = 0; c < dst.size(); ++c)
        dst[c] = reduce((reduce(a, m) * static_cast<std::int64_t>(x[c]) + reduce(b, m) * static_cast<std::int64_t>(y[c])) % m, m);
}

bool is_zero_row(const Row& r) {
    for (auto v : r)
        if (v) return false;
    return true;
}

}  // namespace

std::optional<std::uint32_t> inverse(std::uint32_t a, std::uint32_t m) {
    if (m == 1) return 0;
    std::int64_t s, t;
    if (ext_gcd(a % m, m, s, t) != 1) return std::nullopt;
    return reduce(s, m);
}

Matrix Matrix::identity(std::size_t n, std::uint32_t mod) {
    Matrix I(n, n, mod);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1 % mod;
    return I;
}

Matrix Matrix::operator*(const Matrix& b) const {
    if (cols != b.rows || m != b.m) throw Error("ShapeMismatch", "matrix product");
    Matrix c(rows, b.cols, m);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            const std::uint64_t x = (*this)(i, k);
            if (!x) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = static_cast<std::uint32_t>((c(i, j) + x * b(k, j)) % m);
        }
    return c;
}

Matrix Matrix::operator+(const Matrix& b) const {
    if (rows != b.rows || cols != b.cols || m != b.m) throw Error("ShapeMismatch", "matrix sum");
    Matrix c = *this;
    for (std::size_t i = 0; i < a.size(); ++i) c.a[i] = (a[i] + b.a[i]) % m;
    return c;
}

Matrix Matrix::transpose() const {
    Matrix t(cols, rows, m);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::is_zero() const {
    for (auto v : a)
        if (v) return false;
    return true;
}

Row apply(const Row& x, const Matrix& A) {
    Row y(A.cols, 0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const std::uint64_t xi = x[i];
        if (!xi) continue;
        for (std::size_t j = 0; j < A.cols; ++j) y[j] = static_cast<std::uint32_t>((y[j] + xi * A(i, j)) % A.m);
    }
    return y;
}

std::vector<Row> howell(std::vector<Row> A, std::uint32_t m, std::size_t ncols) {
    for (auto& r : A)
        for (auto& v : r) v %= m;
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < ncols && r < A.size(); ++c) {
        std::size_t i = r;
        while (i < A.size() && A[i][c] == 0) ++i;
        if (i == A.size()) continue;
        std::swap(A[r], A[i]);
        for (i = r + 1; i < A.size(); ++i) {
            if (A[i][c] == 0) continue;
            const std::int64_t a = A[r][c], b = A[i][c];
            std::int64_t s, t;
            const auto g = ext_gcd(a, b, s, t);
            Row top(ncols), bot(ncols);
            axpy(top, s, A[r], t, A[i], m);
            axpy(bot, b / g, A[r], -(a / g), A[i], m);
            A[r] = std::move(top);
            A[i] = std::move(bot);
        }
        if (A[r][c] == 0) continue;  // only possible when m divides the gcd; cannot happen for reduced entries
        const auto u = normalizing_unit(A[r][c], m);
        for (auto& v : A[r]) v = static_cast<std::uint32_t>((static_cast<std::uint64_t>(v) * u) % m);
        const std::uint32_t p = A[r][c];
        Row ann(ncols);
        for (std::size_t j = 0; j < ncols; ++j) ann[j] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(m / p) * A[r][j]) % m);
        if (!is_zero_row(ann)) A.push_back(std::move(ann));
        pivots.push_back(c);
        ++r;
    }
    A.resize(r);
    for (std::size_t j = 0; j < r; ++j) {
        const auto c = pivots[j];
        const auto p = A[j][c];
        for (std::size_t i = 0; i < j; ++i) {
            const auto q = A[i][c] / p;
            if (q) axpy(A[i], 1, A[i], -static_cast<std::int64_t>(q), A[j], m);
        }
    }
    return A;
}

std::vector<Row> RowSpace::rows_of(const Matrix& A) {
    std::vector<Row> rows;
    rows.reserve(A.rows);
    for (std::size_t i = 0; i < A.rows; ++i) rows.push_back(A.row_vec(i));
    return rows;
}

RowSpace RowSpace::span(std::vector<Row> rows, std::uint32_t m, std::size_t ncols) {
    RowSpace s(m, ncols);
    s.rows_ = howell(std::move(rows), m, ncols);
    for (const auto& r : s.rows_) {
        std::size_t c = 0;
        while (r[c] == 0) ++c;
        s.pivots_.push_back(c);
    }
    return s;
}

std::uint64_t RowSpace::size() const {
    std::uint64_t n = 1;
    for (std::size_t j = 0; j < rows_.size(); ++j) n *= m_ / rows_[j][pivots_[j]];
    return n;
}

bool RowSpace::contains(Row v) const {
    for (auto& x : v) x %= m_;
    for (std::size_t j = 0; j < rows_.size(); ++j) {
        const auto c = pivots_[j];
        for (std::size_t cc = (j == 0 ? 0 : pivots_[j - 1] + 1); cc < c; ++cc)
            if (v[cc]) return false;
        const auto p = rows_[j][c];
        if (v[c] % p) return false;
        const auto q = v[c] / p;
        if (q) axpy(v, 1, v, -static_cast<std::int64_t>(q), rows_[j], m_);
    }
    return is_zero_row(v);
}

RowSpace RowSpace::operator+(const RowSpace& other) const {
    auto rows = rows_;
    rows.insert(rows.end(), other.rows_.begin(), other.rows_.end());
    return span(std::move(rows), m_, ncols_);
}

namespace {

std::vector<Row> augmented_howell(const Matrix& A) {
    const auto w = A.cols + A.rows;
    std::vector<Row> rows;
    for (std::size_t i = 0; i < A.rows; ++i) {
        Row r(w, 0);
        for (std::size_t j = 0; j < A.cols; ++j) r[j] = A(i, j);
        r[A.cols + i] = 1 % A.m;
        rows.push_back(std::move(r));
    }
    return howell(std::move(rows), A.m, w);
}

}  // namespace

std::optional<Row> solve_left(const Matrix& A, const Row& b) {
    const auto m = A.m;
    const auto H = augmented_howell(A);
    Row v(A.cols + A.rows, 0);
    for (std::size_t j = 0; j < A.cols; ++j) v[j] = b[j] % m;
    for (const auto& r : H) {
        std::size_t c = 0;
        while (r[c] == 0) ++c;
        if (c >= A.cols) break;
        for (std::size_t cc = 0; cc < c; ++cc)
            if (v[cc]) return std::nullopt;
        const auto p = r[c];
        if (v[c] % p) return std::nullopt;
        const auto q = v[c] / p;
        if (q) axpy(v, 1, v, -static_cast<std::int64_t>(q), r, m);
    }
    for (std::size_t j = 0; j < A.cols; ++j)
        if (v[j]) return std::nullopt;
    Row x(A.rows);
    for (std::size_t i = 0; i < A.rows; ++i) x[i] = (m - v[A.cols + i]) % m;
    return x;
}

RowSpace left_kernel(const Matrix& A) {
    const auto H = augmented_howell(A);
    std::vector<Row> ker;
    for (const auto& r : H) {
        bool left_zero = true;
        for (std::size_t j = 0; j < A.cols && left_zero; ++j) left_zero = r[j] == 0;
        if (left_zero) ker.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(A.cols), r.end());
    }
    return RowSpace::span(std::move(ker), A.m, A.rows);
}

}  // namespace qfw::zmod
