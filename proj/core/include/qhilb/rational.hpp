#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qhilb {

// Exact rational number, always in lowest terms with a positive denominator.
// Values whose numerator and denominator fit in 63 bits are stored inline; larger ones use GMP.
class Rational {
public:
    Rational() = default;
    Rational(long v) : n_(v) { if (v == INT64_MIN) promote_min(); } // NOLINT(google-explicit-constructor)
    Rational(int v) : n_(v) {}                                      // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(const mpz_class& v);
    explicit Rational(const mpq_class& v);

    Rational(const Rational& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o) {
        if (this != &o) {
            n_ = o.n_;
            d_ = o.d_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;
    ~Rational() = default;

    // Accepts "p", "-p", "p/q".
    static Rational parse(std::string_view text);

    mpq_class to_mpq() const;
    mpz_class numerator() const;
    mpz_class denominator() const;

    bool is_zero() const noexcept { return !big_ && n_ == 0; }
    bool is_one() const noexcept { return !big_ && n_ == 1 && d_ == 1; }
    bool is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }
    int sign() const noexcept { return big_ ? sgn(*big_) : (n_ > 0) - (n_ < 0); }

    // "p/q", or "p" when q = 1.
    std::string to_string() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_)
            return a.n_ == b.n_ && a.d_ == b.d_;
        // Canonical form: a big value never fits inline, so mixed pairs differ.
        return a.big_ && b.big_ && *a.big_ == *b.big_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    void promote_min();
    void assign_reduced(__int128 num, __int128 den);
    void assign(mpq_class v);

    std::int64_t n_ = 0;
    std::int64_t d_ = 1;
    std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Exact binomial coefficient; zero when k < 0 or k > n.
mpz_class binomial(long n, long k);

} // namespace qhilb
