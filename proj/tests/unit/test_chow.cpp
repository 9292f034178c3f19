#include <doctest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace qhilb;

namespace {

const ChowRing& ring() { return ChowRing::standard(); }

CohVector random_vector(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    CohVector v;
    for (int i = 0; i < kBasisSize; ++i)
        v[i] = Rational(coeff(rng), 1 + (coeff(rng) + 3) % 2);
    return v;
}

} // namespace

TEST_CASE("graded dimensions") {
    std::array<int, 6> expected{1, 3, 6, 3, 1, 0};
    CHECK(ring().graded_dimensions() == expected);
    int counts[5] = {};
    for (int i = 0; i < kBasisSize; ++i)
        ++counts[codim(i)];
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 3);
    CHECK(counts[2] == 6);
    CHECK(counts[3] == 3);
    CHECK(counts[4] == 1);
}

TEST_CASE("basis names") {
    CHECK(basis_name(13) == "T13");
    CHECK(parse_basis("T4") == 4);
    CHECK_THROWS(parse_basis("T14"));
    CHECK_THROWS(parse_basis("X1"));
    CHECK_THROWS(parse_basis("T"));
}

TEST_CASE("pairing matrix") {
    const auto& g = ring().pairing().g;
    const auto& gi = ring().pairing().g_inv;
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) {
            CHECK(g(i, j) == g(j, i));
            if (codim(i) + codim(j) != 4)
                CHECK(g(i, j).is_zero());
        }
    CHECK(g(1, 10) == 1);
    CHECK(g(1, 11) == 0);
    CHECK(g(3, 12) == 1);
    CHECK(g(2, 11) == 1);
    CHECK(g(0, 13) == 1);
    CHECK(determinant(g) != 0);
    RationalMatrix id = g * gi;
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j)
            CHECK(id(i, j) == (i == j ? 1 : 0));
}

TEST_CASE("divisor pairings of the codim-3 classes") {
    const int expected[3][3] = {{1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    for (int t = 0; t < 3; ++t)
        for (int d = 1; d <= 3; ++d)
            CHECK(integrate(cup(CohVector::basis(10 + t), CohVector::basis(d))) == expected[t][d - 1]);
}

TEST_CASE("monomial names of the codim-2 basis") {
    CHECK(ring().normal_form({1, 2}) == CohVector::basis(5));
    CHECK(ring().normal_form({1, 1}) == CohVector::basis(6));
    CHECK(ring().normal_form({2, 2}) == CohVector::basis(7));
    CHECK(ring().normal_form({1, 3}) == CohVector::basis(8));
    CHECK(ring().normal_form({2, 3}) == CohVector::basis(9));
    CHECK(ring().normal_form({4, 4}) == CohVector::basis(13));
    CHECK(ring().normal_form({}) == CohVector::basis(0));
}

TEST_CASE("classical relations vanish") {
    for (const auto& rel : ChowRing::classical_relations()) {
        CohVector sum;
        for (const auto& [c, gens] : rel)
            sum += c * ring().normal_form(gens);
        CHECK(sum.is_zero());
    }
    CHECK(ChowRing::classical_relations().size() == 17);
}

TEST_CASE("cup table matches the blowup oracle") {
    std::istringstream in(test_support::read_file(test_support::data_path("cup_table_oracle.txt")));
    CupTable oracle = parse_cup_table(in);
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) {
            INFO("T" << i << " T" << j);
            CHECK(ring().cup_basis(i, j) == oracle[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
}

TEST_CASE("cup table round trips through its text form") {
    std::istringstream in(format_cup_table(ring().cup_table()));
    CHECK(parse_cup_table(in) == ring().cup_table());
    std::istringstream bad("0 0 -> 1,2\n");
    CHECK_THROWS(parse_cup_table(bad));
}

TEST_CASE("normal form is independent of the elimination order") {
    for (std::uint64_t seed : {1u, 2u, 3u, 17u, 99u}) {
        ChowRing shuffled(seed);
        CHECK(shuffled.cup_table() == ring().cup_table());
        CHECK(shuffled.graded_dimensions() == ring().graded_dimensions());
    }
}

TEST_CASE("cup product is a graded commutative ring with unit") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) {
            CHECK(ring().cup_basis(i, j) == ring().cup_basis(j, i));
            const CohVector& p = ring().cup_basis(i, j);
            if (!p.is_zero())
                CHECK(p.degree() == codim(i) + codim(j));
            else
                CHECK(true);
        }
    for (int t = 0; t < 50; ++t) {
        CohVector x = random_vector(rng), y = random_vector(rng), z = random_vector(rng);
        CHECK(cup(cup(x, y), z) == cup(x, cup(y, z)));
        CHECK(cup(x, y + z) == cup(x, y) + cup(x, z));
        CHECK(cup(CohVector::basis(0), x) == x);
    }
}

TEST_CASE("involution is a ring automorphism") {
    for (int i = 0; i < kBasisSize; ++i) {
        CHECK(involution_index(involution_index(i)) == i);
        CHECK(codim(involution_index(i)) == codim(i));
        for (int j = 0; j < kBasisSize; ++j)
            CHECK(involution(ring().cup_basis(i, j)) == ring().cup_basis(involution_index(i), involution_index(j)));
    }
    CHECK(involution_index(1) == 2);
    CHECK(involution_index(10) == 11);
    CHECK(involution_index(12) == 12);
    CHECK(CurveClass{1, 2, 3}.involution() == CurveClass{2, 1, 3});
}

TEST_CASE("curve classes") {
    CHECK(CurveClass::parse("1,0,1") == CurveClass{1, 0, 1});
    CHECK(CurveClass::parse("(3,2,2)") == CurveClass{3, 2, 2});
    CHECK_THROWS(CurveClass::parse("1,0"));
    CHECK_THROWS(CurveClass::parse("a,b,c"));
    CHECK(CurveClass{2, 1, 3}.to_string() == "(2,1,3)");
    CHECK(divisor_degree(1, {2, 5, 7}) == 5);
    CHECK(divisor_degree(2, {2, 5, 7}) == 2);
    CHECK(divisor_degree(3, {2, 5, 7}) == 7);
}
