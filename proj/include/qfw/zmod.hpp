#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qfw::zmod {

using Row = std::vector<std::uint32_t>;

std::uint32_t reduce(std::int64_t x, std::uint32_t m);
std::int64_t gcd(std::int64_t a, std::int64_t b);
// Inverse of a modulo m, if a is a unit.
std::optional<std::uint32_t> inverse(std::uint32_t a, std::uint32_t m);

// Dense matrix over Z/m; vectors are rows and act as x -> x * A.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint32_t m = 2;
    std::vector<std::uint32_t> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, std::uint32_t mod) : rows(r), cols(c), m(mod), a(r * c, 0) {}
    static Matrix identity(std::size_t n, std::uint32_t mod);

    std::uint32_t& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    std::span<const std::uint32_t> row(std::size_t i) const { return {a.data() + i * cols, cols}; }
    Row row_vec(std::size_t i) const { return Row(a.begin() + static_cast<std::ptrdiff_t>(i * cols), a.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols)); }

    Matrix operator*(const Matrix& b) const;
    Matrix operator+(const Matrix& b) const;
    Matrix transpose() const;
    bool is_zero() const;
    friend bool operator==(const Matrix&, const Matrix&) = default;
};

Row apply(const Row& x, const Matrix& A);  // x * A

// Submodule of (Z/m)^n held in Howell normal form, which is canonical.
class RowSpace {
public:
    RowSpace(std::uint32_t m, std::size_t ncols) : m_(m), ncols_(ncols) {}
    static RowSpace span(std::vector<Row> rows, std::uint32_t m, std::size_t ncols);
    static RowSpace of_matrix(const Matrix& A) { return span(rows_of(A), A.m, A.cols); }

    std::uint32_t modulus() const noexcept { return m_; }
    std::size_t ncols() const noexcept { return ncols_; }
    const std::vector<Row>& basis() const noexcept { return rows_; }
    const std::vector<std::size_t>& pivot_cols() const noexcept { return pivots_; }
    std::uint64_t size() const;
    bool contains(Row v) const;
    RowSpace operator+(const RowSpace& other) const;
    // Calls f(row) for every element, each exactly once.
    template <class F>
    void for_each(F&& f) const;

    friend bool operator==(const RowSpace& a, const RowSpace& b) { return a.m_ == b.m_ && a.ncols_ == b.ncols_ && a.rows_ == b.rows_; }

    static std::vector<Row> rows_of(const Matrix& A);

private:
    std::uint32_t m_;
    std::size_t ncols_;
    std::vector<Row> rows_;
    std::vector<std::size_t> pivots_;
};

// Howell normal form of the row span; zero rows are dropped.
std::vector<Row> howell(std::vector<Row> rows, std::uint32_t m, std::size_t ncols);

// x with x * A = b, if one exists.
std::optional<Row> solve_left(const Matrix& A, const Row& b);
// Generators (Howell form) of {x : x * A = 0}.
RowSpace left_kernel(const Matrix& A);
inline std::uint64_t image_size(const Matrix& A) { return RowSpace::of_matrix(A).size(); }

template <class F>
void RowSpace::for_each(F&& f) const {
    const std::size_t k = rows_.size();
    std::vector<std::uint32_t> order(k), coef(k, 0);
    for (std::size_t j = 0; j < k; ++j) order[j] = m_ / rows_[j][pivots_[j]];
    Row cur(ncols_, 0);
    while (true) {
        f(static_cast<const Row&>(cur));
        std::size_t j = 0;
        for (; j < k; ++j) {
            for (std::size_t c = 0; c < ncols_; ++c) cur[c] = (cur[c] + rows_[j][c]) % m_;
            if (++coef[j] < order[j]) break;
            // wrapped: take back order[j] copies of row j
            const std::uint64_t back = m_ - (static_cast<std::uint64_t>(order[j]) % m_);
            for (std::size_t c = 0; c < ncols_; ++c)
                cur[c] = static_cast<std::uint32_t>((cur[c] + back * rows_[j][c]) % m_);
            coef[j] = 0;
        }
        if (j == k) return;
    }
}

}  // namespace qfw::zmod
