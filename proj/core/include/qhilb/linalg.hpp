#pragma once

#include <cstddef>
#include <vector>

#include "qhilb/rational.hpp"

namespace qhilb {

// Dense row-major matrix over the rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void append_row(const std::vector<Rational>& row);

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// Reduced row echelon form in place. Columns are scanned in the given order
// (all columns, left to right, when `order` is empty). Returns the pivot column of each nonzero row.
std::vector<std::size_t> rref(RationalMatrix& m, const std::vector<std::size_t>& order = {});

// Exact inverse; throws ConsistencyError when singular.
RationalMatrix inverse(const RationalMatrix& m);

Rational determinant(RationalMatrix m);

} // namespace qhilb
