#include "qhilb/linalg.hpp"

#include <numeric>
#include <utility>

#include "qhilb/errors.hpp"

namespace qhilb {

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

void RationalMatrix::append_row(const std::vector<Rational>& row) {
    if (rows_ == 0 && cols_ == 0)
        cols_ = row.size();
    if (row.size() != cols_)
        throw UsageError("row length mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_)
        throw UsageError("matrix shape mismatch");
    RationalMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& x = a(i, k);
            if (x.is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (!b(k, j).is_zero())
                    out(i, j) += x * b(k, j);
        }
    return out;
}

std::vector<std::size_t> rref(RationalMatrix& m, const std::vector<std::size_t>& order) {
    std::vector<std::size_t> cols = order;
    if (cols.empty()) {
        cols.resize(m.cols());
        std::iota(cols.begin(), cols.end(), std::size_t{0});
    }
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col : cols) {
        if (r == m.rows())
            break;
        std::size_t p = r;
        while (p < m.rows() && m(p, col).is_zero())
            ++p;
        if (p == m.rows())
            continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(p, j), m(r, j));
        Rational inv = Rational(1) / m(r, col);
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(r, j).is_zero())
                m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, col).is_zero())
                continue;
            Rational f = m(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!m(r, j).is_zero())
                    m(i, j) -= f * m(r, j);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

RationalMatrix inverse(const RationalMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw UsageError("inverse of a non-square matrix");
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (rref(aug, order).size() != n)
        throw ConsistencyError("matrix is singular");
    RationalMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = aug(i, n + j);
    return out;
}

Rational determinant(RationalMatrix m) {
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c).is_zero())
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero())
                continue;
            Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j)
                m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

} // namespace qhilb
