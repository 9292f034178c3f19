#pragma once

#include <compare>
#include <map>
#include <string>

#include "qhilb/rational.hpp"

namespace qhilb {

// q1^e1 q2^e2 q3^e3 with non-negative exponents.
struct QMonomial {
    int e1 = 0;
    int e2 = 0;
    int e3 = 0;

    QMonomial() = default;
    QMonomial(int a, int b, int c);

    int total_degree() const noexcept { return e1 + e2 + e3; }
    bool is_one() const noexcept { return e1 == 0 && e2 == 0 && e3 == 0; }

    // "1" for the unit, otherwise e.g. "q1 q2 q3^2".
    std::string to_string() const;

    friend QMonomial operator*(const QMonomial& x, const QMonomial& y) {
        return QMonomial(x.e1 + y.e1, x.e2 + y.e2, x.e3 + y.e3);
    }
    friend bool operator==(const QMonomial&, const QMonomial&) = default;
    // Graded order: total degree first, then lexicographic.
    friend std::strong_ordering operator<=>(const QMonomial& x, const QMonomial& y) {
        if (auto c = x.total_degree() <=> y.total_degree(); c != 0)
            return c;
        if (auto c = y.e1 <=> x.e1; c != 0)
            return c;
        if (auto c = y.e2 <=> x.e2; c != 0)
            return c;
        return y.e3 <=> x.e3;
    }
};

// Element of Q[q1,q2][[q3]] with all q3 exponents above c_max discarded.
class QSeries {
public:
    explicit QSeries(int c_max = 0);

    static QSeries constant(const Rational& c, int c_max);
    static QSeries monomial(const QMonomial& m, const Rational& c, int c_max);

    int c_max() const noexcept { return c_max_; }
    const std::map<QMonomial, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    Rational coeff(const QMonomial& m) const;
    void add_term(const QMonomial& m, const Rational& c);

    // Drops everything above the new truncation; new_c_max must not exceed the current one.
    QSeries truncated(int new_c_max) const;

    QSeries& operator+=(const QSeries& o);
    QSeries& operator-=(const QSeries& o);
    QSeries& operator*=(const Rational& c);
    QSeries operator-() const;

    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    friend QSeries operator*(QSeries a, const Rational& c) { return a *= c; }
    friend QSeries operator*(const Rational& c, QSeries a) { return a *= c; }
    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.c_max_ == b.c_max_ && a.terms_ == b.terms_;
    }

    // Terms in graded monomial order, e.g. "2 q1 q3 + q1^2"; "0" when empty.
    std::string to_string() const;

private:
    void check_compatible(const QSeries& o) const;

    int c_max_;
    std::map<QMonomial, Rational> terms_;
};

QSeries series_add(const QSeries& x, const QSeries& y);
QSeries series_mul(const QSeries& x, const QSeries& y);
Rational series_coeff(const QSeries& x, const QMonomial& m);

} // namespace qhilb
