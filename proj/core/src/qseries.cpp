#include "qhilb/qseries.hpp"

#include "qhilb/errors.hpp"

namespace qhilb {

QMonomial::QMonomial(int a, int b, int c) : e1(a), e2(b), e3(c) {
    if (a < 0 || b < 0 || c < 0)
        throw UsageError("negative exponent in q-monomial");
}

std::string QMonomial::to_string() const {
    if (is_one())
        return "1";
    std::string out;
    auto put = [&](const char* name, int e) {
        if (e == 0)
            return;
        if (!out.empty())
            out += ' ';
        out += name;
        if (e != 1)
            out += "^" + std::to_string(e);
    };
    put("q1", e1);
    put("q2", e2);
    put("q3", e3);
    return out;
}

QSeries::QSeries(int c_max) : c_max_(c_max) {
    if (c_max < 0)
        throw ConfigError("c_max must be non-negative");
}

QSeries QSeries::constant(const Rational& c, int c_max) {
    return monomial(QMonomial{}, c, c_max);
}

QSeries QSeries::monomial(const QMonomial& m, const Rational& c, int c_max) {
    QSeries s(c_max);
    s.add_term(m, c);
    return s;
}

Rational QSeries::coeff(const QMonomial& m) const {
    if (m.e3 > c_max_)
        throw TruncationError("coefficient of " + m.to_string() + " requested beyond c_max=" + std::to_string(c_max_));
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational{} : it->second;
}

void QSeries::add_term(const QMonomial& m, const Rational& c) {
    if (m.e3 > c_max_ || c.is_zero())
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

QSeries QSeries::truncated(int new_c_max) const {
    if (new_c_max > c_max_)
        throw ConfigError("cannot raise the truncation of a series");
    QSeries out(new_c_max);
    for (const auto& [m, c] : terms_)
        if (m.e3 <= new_c_max)
            out.terms_.emplace(m, c);
    return out;
}

void QSeries::check_compatible(const QSeries& o) const {
    if (c_max_ != o.c_max_)
        throw ConfigError("series truncations differ: " + std::to_string(c_max_) + " vs " + std::to_string(o.c_max_));
}

QSeries& QSeries::operator+=(const QSeries& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

QSeries& QSeries::operator-=(const QSeries& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

QSeries& QSeries::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_)
        v *= c;
    return *this;
}

QSeries QSeries::operator-() const {
    QSeries out(*this);
    for (auto& [m, v] : out.terms_)
        v = -v;
    return out;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
    a.check_compatible(b);
    QSeries out(a.c_max_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            if (ma.e3 + mb.e3 <= out.c_max_)
                out.add_term(ma * mb, ca * cb);
    return out;
}

std::string QSeries::to_string() const {
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        Rational mag = c.sign() < 0 ? -c : c;
        if (out.empty())
            out += c.sign() < 0 ? "-" : "";
        else
            out += c.sign() < 0 ? " - " : " + ";
        if (m.is_one())
            out += mag.to_string();
        else if (mag == Rational(1))
            out += m.to_string();
        else
            out += mag.to_string() + " " + m.to_string();
    }
    return out;
}

QSeries series_add(const QSeries& x, const QSeries& y) { return x + y; }
QSeries series_mul(const QSeries& x, const QSeries& y) { return x * y; }
Rational series_coeff(const QSeries& x, const QMonomial& m) { return x.coeff(m); }

} // namespace qhilb
