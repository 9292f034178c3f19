#include "qhilb/rational.hpp"

#include <ostream>

#include "qhilb/errors.hpp"

namespace qhilb {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kLimit = INT64_MAX;

bool fits(i128 v) { return v >= -kLimit && v <= kLimit; }

u128 gcd(u128 a, u128 b) {
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u128 magnitude(i128 v) { return v < 0 ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v); }

mpz_class to_mpz(i128 v) {
    u128 m = magnitude(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
    mpz_class r = (hi << 64) + lo;
    return v < 0 ? mpz_class(-r) : r;
}

bool small_value(const mpz_class& z, std::int64_t& out) {
    if (!z.fits_slong_p())
        return false;
    long v = z.get_si();
    if (v == INT64_MIN)
        return false;
    out = v;
    return true;
}

} // namespace

Rational::Rational(long num, long den) {
    if (den == 0)
        throw UsageError("rational with zero denominator");
    if (den < 0)
        assign_reduced(-static_cast<i128>(num), -static_cast<i128>(den));
    else
        assign_reduced(num, den);
}

Rational::Rational(const mpz_class& v) { assign(mpq_class(v)); }

Rational::Rational(const mpq_class& v) {
    mpq_class c(v);
    c.canonicalize();
    assign(std::move(c));
}

void Rational::promote_min() {
    n_ = 0;
    d_ = 1;
    big_ = std::make_unique<mpq_class>(mpz_class(INT64_MIN));
}

void Rational::assign(mpq_class v) {
    std::int64_t n = 0, d = 0;
    if (small_value(v.get_num(), n) && small_value(v.get_den(), d)) {
        n_ = n;
        d_ = d;
        big_.reset();
    } else {
        n_ = 0;
        d_ = 1;
        big_ = std::make_unique<mpq_class>(std::move(v));
    }
}

void Rational::assign_reduced(i128 num, i128 den) {
    // den > 0
    if (num == 0) {
        n_ = 0;
        d_ = 1;
        big_.reset();
        return;
    }
    u128 g = gcd(magnitude(num), static_cast<u128>(den));
    if (g != 1) {
        num /= static_cast<i128>(g);
        den /= static_cast<i128>(g);
    }
    if (fits(num) && fits(den)) {
        n_ = static_cast<std::int64_t>(num);
        d_ = static_cast<std::int64_t>(den);
        big_.reset();
        return;
    }
    mpq_class q(to_mpz(num), to_mpz(den));
    q.canonicalize();
    assign(std::move(q));
}

mpq_class Rational::to_mpq() const {
    if (big_)
        return *big_;
    return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(n_)); }

mpz_class Rational::denominator() const {
    return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(d_));
}

Rational Rational::parse(std::string_view text) {
    auto bad = [&] { return UsageError("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty())
        throw bad();
    auto valid_int = [](std::string_view s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    auto slash = text.find('/');
    std::string num(text.substr(0, slash));
    std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw bad();
    if (num[0] == '+')
        num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0)
        throw bad();
    return Rational(mpq_class(n, d));
}

std::string Rational::to_string() const {
    if (big_) {
        if (big_->get_den() == 1)
            return big_->get_num().get_str();
        return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    }
    if (d_ == 1)
        return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

Rational& Rational::operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (d_ == 1 && o.d_ == 1) {
            i128 s = static_cast<i128>(n_) + o.n_;
            if (fits(s)) {
                n_ = static_cast<std::int64_t>(s);
                return *this;
            }
        }
        assign_reduced(static_cast<i128>(n_) * o.d_ + static_cast<i128>(o.n_) * d_, static_cast<i128>(d_) * o.d_);
        return *this;
    }
    assign(to_mpq() + o.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (d_ == 1 && o.d_ == 1) {
            i128 s = static_cast<i128>(n_) - o.n_;
            if (fits(s)) {
                n_ = static_cast<std::int64_t>(s);
                return *this;
            }
        }
        assign_reduced(static_cast<i128>(n_) * o.d_ - static_cast<i128>(o.n_) * d_, static_cast<i128>(d_) * o.d_);
        return *this;
    }
    assign(to_mpq() - o.to_mpq());
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (d_ == 1 && o.d_ == 1) {
            i128 p = static_cast<i128>(n_) * o.n_;
            if (fits(p)) {
                n_ = static_cast<std::int64_t>(p);
                return *this;
            }
        }
        assign_reduced(static_cast<i128>(n_) * o.n_, static_cast<i128>(d_) * o.d_);
        return *this;
    }
    assign(to_mpq() * o.to_mpq());
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero())
        throw UsageError("division by zero");
    if (!big_ && !o.big_) {
        i128 num = static_cast<i128>(n_) * o.d_, den = static_cast<i128>(d_) * o.n_;
        if (den < 0) {
            num = -num;
            den = -den;
        }
        assign_reduced(num, den);
        return *this;
    }
    assign(to_mpq() / o.to_mpq());
    return *this;
}

Rational Rational::operator-() const {
    Rational r;
    if (big_)
        r.assign(-*big_);
    else {
        r.n_ = -n_;
        r.d_ = d_;
    }
    return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        i128 l = static_cast<i128>(a.n_) * b.d_, r = static_cast<i128>(b.n_) * a.d_;
        return l <=> r;
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
}

mpz_class binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n)
        return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

} // namespace qhilb
