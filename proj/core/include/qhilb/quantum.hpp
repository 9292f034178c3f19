#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qhilb/chow.hpp"
#include "qhilb/gw_engine.hpp"
#include "qhilb/qseries.hpp"

namespace qhilb {

// q^β = q1^b q2^a q3^c.
QMonomial q_of_beta(const CurveClass& beta);

// Element of A*(H) ⊗ Q[q1,q2][[q3]].
class QCohVector {
public:
    explicit QCohVector(int c_max = 0);

    static QCohVector basis(int index, int c_max);
    static QCohVector from_classical(const CohVector& v, int c_max);

    int c_max() const noexcept { return c_max_; }
    const QSeries& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    QSeries& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    bool is_zero() const;
    // Coefficients of q1^0 q2^0 q3^0.
    CohVector at_q_zero() const;
    // Swaps T1<->T2 (and the induced basis swaps) together with q1<->q2.
    QCohVector involution() const;

    QCohVector& operator+=(const QCohVector& o);
    QCohVector& operator-=(const QCohVector& o);
    QCohVector& operator*=(const QSeries& s);
    QCohVector& operator*=(const Rational& s);
    friend QCohVector operator+(QCohVector x, const QCohVector& y) { return x += y; }
    friend QCohVector operator-(QCohVector x, const QCohVector& y) { return x -= y; }
    friend QCohVector operator*(const QSeries& s, QCohVector x) { return x *= s; }
    friend QCohVector operator*(const Rational& s, QCohVector x) { return x *= s; }
    friend bool operator==(const QCohVector&, const QCohVector&) = default;

    // Terms ordered by q-monomial, then by descending basis index: "T13 + 2 q1 q2 q3^2 T0".
    std::string to_string() const;

private:
    int c_max_;
    std::array<QSeries, kBasisSize> c_;
};

// Classical cup product applied coefficient-wise.
QCohVector cup(const QCohVector& x, const QCohVector& y);

// Small quantum product with structure constants cached per basis pair.
class QuantumProduct {
public:
    // c_max may not exceed the engine's.
    QuantumProduct(Engine& engine, int c_max);

    int c_max() const noexcept { return c_max_; }
    Engine& engine() noexcept { return engine_; }

    // Ti * Tj; throws MissingInvariantError when a needed invariant is unknown.
    const QCohVector& basis_product(int i, int j);
    QCohVector multiply(const QCohVector& x, const QCohVector& y);

private:
    Engine& engine_;
    int c_max_;
    std::map<std::pair<int, int>, QCohVector> cache_;
};

QCohVector small_product(Engine& engine, const QCohVector& x, const QCohVector& y, int c_max);

// Exponents of y4..y13.
using YDegree = std::array<int, 10>;

struct GammaSeries {
    int i = 0, j = 0, k = 0;
    int y_truncation = 0;
    int c_max = 0;
    // (β, y-degree) -> ⟨T^α Ti Tj Tk⟩_β / α!; known zeros are dropped, unknown entries are kept.
    std::map<std::pair<CurveClass, YDegree>, InvariantValue> terms;

    InvariantValue coefficient(const CurveClass& beta, const YDegree& y) const;
    bool has_unknown() const;
};

// Quantum part (β ≠ 0) of Γ_ijk up to total y-degree y_truncation and q3-degree c_max.
GammaSeries gamma(Engine& engine, int i, int j, int k, int y_truncation, int c_max);

// One relation of the presentation, kept as text and evaluated on demand.
struct Relation {
    int id = 0;
    std::string name;
    std::string expression;
};

// Reads "name [iota] : expression" lines. Relations marked "iota" get a mirrored
// partner appended after all listed ones, in order of appearance.
std::vector<Relation> parse_relations(std::istream& in);
std::vector<Relation> load_relations(const std::string& path);
// $QHILB_RELATIONS, else the shipped data file.
std::string default_relations_path();

// Swaps T1<->T2 and q1<->q2 in the expression.
std::string mirror_expression(const std::string& expression);

// Evaluates the expression; '*' is the quantum product, '∪' and T^n are cup products.
// With classical = true every q is set to zero and '*' becomes the cup product.
QCohVector evaluate_relation(const Relation& rel, QuantumProduct& product, bool classical = false);

struct ResidualTerm {
    int basis = 0;
    QMonomial monomial;
    Rational coefficient;
};

// Residual of the relation up to the product's truncation; zero means the relation holds.
QCohVector verify_relation(const Relation& rel, QuantumProduct& product);
std::vector<ResidualTerm> residual_terms(const QCohVector& residual);

} // namespace qhilb
