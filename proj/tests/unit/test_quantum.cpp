#include <doctest.h>

#include <sstream>

#include "test_support.hpp"

using namespace qhilb;
using test_support::shared_engine;

namespace {

QCohVector basis(int i, int c_max) { return QCohVector::basis(i, c_max); }

QCohVector eval(const std::string& expr, QuantumProduct& p) {
    return evaluate_relation(Relation{0, "test", expr}, p);
}

} // namespace

TEST_CASE("T4*T4") {
    for (int c = 2; c <= 6; ++c) {
        QuantumProduct p(shared_engine(), c);
        QCohVector expected = basis(13, c) + QSeries::monomial({1, 1, 2}, 2, c) * basis(0, c);
        CHECK(p.basis_product(4, 4) == expected);
        CHECK(p.basis_product(4, 4).to_string() == "T13 + 2 q1 q2 q3^2 T0");
    }
    QuantumProduct p1(shared_engine(), 1);
    CHECK(p1.basis_product(4, 4).to_string() == "T13");
}

TEST_CASE("small products") {
    QuantumProduct p(shared_engine(), 6);
    CHECK(p.basis_product(0, 7).to_string() == "T7");
    CHECK(p.basis_product(1, 3).to_string() == "T8 + 2 q1 q3 T0");
    CHECK_THROWS_AS(QuantumProduct(shared_engine(), 7), ConfigError);
}

TEST_CASE("classical limit and unit") {
    QuantumProduct p(shared_engine(), 3);
    QuantumProduct p0(shared_engine(), 0);
    const ChowRing& ring = ChowRing::standard();
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) {
            CHECK(p.basis_product(i, j).at_q_zero() == ring.cup_basis(i, j));
            CHECK(p0.basis_product(i, j).at_q_zero() == ring.cup_basis(i, j));
        }
    for (int i = 0; i < kBasisSize; ++i)
        CHECK(p.basis_product(0, i) == basis(i, 3));
}

TEST_CASE("quantum product is commutative and associative on all basis triples") {
    const int c = 3;
    QuantumProduct p(shared_engine(), c);
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) {
            CHECK(p.basis_product(i, j) == p.basis_product(j, i));
            for (int k = 0; k < kBasisSize; ++k) {
                INFO("T" << i << " T" << j << " T" << k);
                CHECK(p.multiply(p.basis_product(i, j), basis(k, c)) == p.multiply(basis(i, c), p.basis_product(j, k)));
            }
        }
}

TEST_CASE("quantum product commutes with the involution") {
    QuantumProduct p(shared_engine(), 4);
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = i; j < kBasisSize; ++j)
            CHECK(p.basis_product(i, j).involution() == p.basis_product(involution_index(i), involution_index(j)));
}

TEST_CASE("rendering") {
    QCohVector v = basis(5, 3) + QSeries::monomial({0, 0, 1}, Rational(-1, 2), 3) * basis(2, 3);
    CHECK(v.to_string() == "T5 - 1/2 q3 T2");
    CHECK(QCohVector(3).to_string() == "0");
}

TEST_CASE("relation syntax") {
    QuantumProduct p(shared_engine(), 3);
    CHECK(eval("T4*T4 - T13 - 2 q1 q2 q3^2 T0", p).is_zero());
    CHECK(eval("T1*T3 - T1∪T3 - 2 q1 q3 T0", p).is_zero());
    CHECK(eval("T1^2 - T6", p).is_zero());
    CHECK(eval("(T1 + T2)∪T3 - T8 - T9", p).is_zero());
    QCohVector s = eval("sum_{c>=1} q3^c T0", p);
    CHECK(s.to_string() == "q3 T0 + q3^2 T0 + q3^3 T0");
    CHECK(eval("q1 q2 q3 (1 + 2 q3) T0", p).to_string() == "q1 q2 q3 T0 + 2 q1 q2 q3^2 T0");
    CHECK_THROWS(eval("T1 T2", p));
    CHECK_THROWS(eval("(T1 + T2", p));
    CHECK_THROWS(eval("T15", p));
    CHECK_THROWS(eval("T1 +", p));
}

TEST_CASE("relation file") {
    auto rels = load_relations(default_relations_path());
    REQUIRE(rels.size() == 17);
    for (int i = 0; i < 17; ++i)
        CHECK(rels[static_cast<std::size_t>(i)].id == i + 1);
    CHECK(rels[0].name == "f1");
    CHECK(rels[11].name == "f2'");
    CHECK(rels[16].name == "f11'");
    CHECK(mirror_expression("T1*T1*T2 - q1 q3 T2∪T4") == "T2*T2*T1 - q2 q3 T1∪T4");
    std::istringstream bad("f1 T1*T1\n");
    CHECK_THROWS(parse_relations(bad));
}

TEST_CASE("all relations hold classically") {
    QuantumProduct p(shared_engine(), 0);
    for (const auto& r : load_relations(default_relations_path())) {
        INFO(r.name);
        CHECK(verify_relation(r, p).is_zero());
        CHECK(evaluate_relation(r, p, true).is_zero());
    }
}

TEST_CASE("relations without q-corrections beyond the product hold") {
    QuantumProduct p(shared_engine(), 4);
    auto rels = load_relations(default_relations_path());
    for (const char* name : {"f1", "f3", "f4", "f5", "f11", "f3'", "f4'", "f11'"}) {
        auto it = std::find_if(rels.begin(), rels.end(), [&](const Relation& r) { return r.name == name; });
        REQUIRE(it != rels.end());
        INFO(name);
        CHECK(verify_relation(*it, p).is_zero());
    }
}

TEST_CASE("gamma coefficients are invariants divided by factorials") {
    Engine& e = shared_engine();
    GammaSeries g = gamma(e, 4, 4, 13, 2, 3);
    CHECK_FALSE(g.has_unknown());
    YDegree none{};
    YDegree y4{};
    y4[0] = 1;
    YDegree y4y4{};
    y4y4[0] = 2;
    CHECK(g.coefficient({1, 1, 1}, none) == e.invariant(CurveClass{1, 1, 1}, std::vector<int>{4, 4, 13}));
    CHECK(g.coefficient({1, 1, 1}, y4) == e.invariant(CurveClass{1, 1, 1}, std::vector<int>{4, 4, 4, 13}));
    InvariantValue five = e.invariant(CurveClass{1, 2, 1}, std::vector<int>{4, 4, 4, 4, 13});
    REQUIRE(five.is_known());
    CHECK(g.coefficient({1, 2, 1}, y4y4) == InvariantValue::known(five.value() / 2));
    for (const auto& [key, v] : g.terms)
        CHECK(key.first.c <= 3);
}
