#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qhilb/linalg.hpp"
#include "qhilb/rational.hpp"

namespace qhilb {

inline constexpr int kBasisSize = 14;
inline constexpr std::array<int, kBasisSize> kCodim{0, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 4};
inline constexpr int kPointClass = 13;

int codim(int index);
std::string basis_name(int index);
// Parses "T0".."T13".
int parse_basis(std::string_view token);

struct BasisClass {
    int index = 0;

    int codim() const { return qhilb::codim(index); }
    std::string name() const { return basis_name(index); }
};

// aC1 + bC2 + cF.
struct CurveClass {
    int a = 0;
    int b = 0;
    int c = 0;

    bool effective() const noexcept { return a >= 0 && b >= 0 && c >= 0; }
    bool is_zero() const noexcept { return a == 0 && b == 0 && c == 0; }
    CurveClass involution() const noexcept { return {b, a, c}; }

    // "(a,b,c)".
    std::string to_string() const;
    // Accepts "a,b,c" with optional surrounding parentheses.
    static CurveClass parse(std::string_view text);

    friend CurveClass operator+(const CurveClass& x, const CurveClass& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
    friend CurveClass operator-(const CurveClass& x, const CurveClass& y) { return {x.a - y.a, x.b - y.b, x.c - y.c}; }
    friend bool operator==(const CurveClass&, const CurveClass&) = default;
    friend auto operator<=>(const CurveClass&, const CurveClass&) = default;
};

// ∫_β T_i for a divisor index i ∈ {1,2,3}.
int divisor_degree(int i, const CurveClass& beta);

// Element of A*(H) with rational coordinates in the T-basis.
class CohVector {
public:
    CohVector() = default;
    static CohVector basis(int index, const Rational& coeff = 1);

    const Rational& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    Rational& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    bool is_zero() const;
    bool is_homogeneous(int k) const;
    // Codimension of a nonzero homogeneous vector, -1 otherwise.
    int degree() const;

    CohVector& operator+=(const CohVector& o);
    CohVector& operator-=(const CohVector& o);
    CohVector& operator*=(const Rational& s);
    friend CohVector operator+(CohVector x, const CohVector& y) { return x += y; }
    friend CohVector operator-(CohVector x, const CohVector& y) { return x -= y; }
    friend CohVector operator*(const Rational& s, CohVector x) { return x *= s; }
    friend bool operator==(const CohVector&, const CohVector&) = default;

    // e.g. "T13 + 1/2 T5"; "0" for the zero vector.
    std::string to_string() const;

private:
    std::array<Rational, kBasisSize> c_{};
};

CohVector involution(const CohVector& x);
int involution_index(int i);

struct PairingMatrix {
    RationalMatrix g;
    RationalMatrix g_inv;
};

using CupTable = std::array<std::array<CohVector, kBasisSize>, kBasisSize>;

// A*(H) built by normal-form reduction against the classical relations.
class ChowRing {
public:
    ChowRing();
    // Same ring, but each graded piece is reduced with a pseudo-random elimination order.
    explicit ChowRing(std::uint64_t shuffle_seed);

    // Shared instance with the default elimination order.
    static const ChowRing& standard();

    // Class of the product of generators drawn from {1,2,3,4}.
    CohVector normal_form(const std::vector<int>& generators) const;

    const CohVector& cup_basis(int i, int j) const { return cup_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const CupTable& cup_table() const noexcept { return cup_; }
    CohVector cup(const CohVector& x, const CohVector& y) const;
    Rational integrate(const CohVector& x) const { return x[kPointClass]; }
    const PairingMatrix& pairing() const noexcept { return pairing_; }

    // Dimensions of the quotient of Q[T1..T4] by the relations, degrees 0..5 (T4 has degree 2).
    const std::array<int, 6>& graded_dimensions() const noexcept { return dims_; }

    // Classical relations in T1..T4, as (coefficient, generator list) terms.
    using Term = std::pair<Rational, std::vector<int>>;
    static const std::vector<std::vector<Term>>& classical_relations();

private:
    void build(std::uint64_t shuffle_seed, bool shuffle);

    std::array<int, 6> dims_{};
    CupTable cup_{};
    PairingMatrix pairing_;
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

CohVector cup(const CohVector& x, const CohVector& y);
Rational integrate(const CohVector& x);

// Golden file format: one line "i j -> c0,...,c13" per pair.
std::string format_cup_table(const CupTable& table);
CupTable parse_cup_table(std::istream& in);

} // namespace qhilb
