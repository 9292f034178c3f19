#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <qhilb/linalg.hpp>

#include "test_support.hpp"

using namespace qhilb;
using test_support::shared_engine;

namespace {

Rational value(Engine& e, CurveClass beta, std::vector<int> ins) {
    InvariantValue v = e.invariant(beta, ins);
    REQUIRE(v.is_known());
    return v.value();
}

} // namespace

TEST_CASE("insertion parsing and keys") {
    CHECK(parse_insertions("T4^5 T13") == std::vector<int>{4, 4, 4, 4, 4, 13});
    CHECK(parse_insertions("T13 T4 T4") == std::vector<int>{4, 4, 13});
    CHECK(render_insertions({4, 4, 10}) == "T4^2 T10");
    CHECK_THROWS(parse_insertions("T4^"));
    CHECK_THROWS(parse_insertions("T4^x"));
    CHECK_THROWS(InvariantKey::make({1, 0, 1}, {0, 13}));
    CHECK_THROWS(InvariantKey::make({1, 0, 1}, {1, 13}));
    CHECK_THROWS(InvariantKey::make({-1, 0, 1}, {13}));
    InvariantKey k = InvariantKey::make({1, 0, 1}, {10, 4, 4});
    CHECK(k.to_string() == "<T4^2 T10>_(1,0,1)");
    CHECK(k.involution().to_string() == "<T4^2 T11>_(0,1,1)");
    CHECK(k.count(4) == 2);
}

TEST_CASE("dimension axiom") {
    CHECK(dimension_check({1, 0, 1}, {13}));
    CHECK(dimension_check({0, 0, 3}, {8}));
    CHECK(dimension_check({3, 2, 2}, std::vector<int>(11, 4)));
    CHECK_FALSE(dimension_check({1, 0, 1}, {12}));
    Engine& e = shared_engine();
    CHECK(value(e, {1, 0, 1}, {12}) == 0);
    CHECK(value(e, {2, 2, 0}, {4, 4}) == 0);
}

TEST_CASE("shipped seeds") {
    Engine& e = shared_engine();
    for (int c = 1; c <= 6; ++c)
        CHECK(value(e, {0, 0, c}, {8}) == Rational(4, static_cast<long>(c) * c));
    CHECK(value(e, {0, 0, 1}, {9}) == 4);
    CHECK(value(e, {1, 0, 1}, {13}) == 2);
    CHECK(value(e, {0, 1, 1}, {13}) == 2);
    CHECK(value(e, {1, 0, 1}, {4, 10}) == 1);
    CHECK(value(e, {1, 0, 1}, {4, 12}) == 1);
    CHECK(value(e, {1, 0, 1}, {4, 11}) == 0);
    CHECK(value(e, {0, 1, 0}, {11, 6}) == 1);
    CHECK(value(e, {0, 1, 1}, {11, 6}) == 2);
    CHECK(value(e, {0, 1, 2}, {11, 6}) == 1);
    CHECK(value(e, {1, 0, 2}, {10, 7}) == 1);
}

TEST_CASE("divisor axiom") {
    Engine& e = shared_engine();
    CHECK(value(e, {1, 0, 1}, {2, 13}) == 2);
    CHECK(value(e, {1, 0, 1}, {1, 13}) == 0);
    CHECK(value(e, {1, 0, 1}, {2, 3, 3, 13}) == 2);
    CHECK(value(e, {0, 0, 3}, {3, 8}) == Rational(4, 3));
    std::vector<CohVector> ins{CohVector::basis(2) + CohVector::basis(3), CohVector::basis(13)};
    CHECK(e.invariant(CurveClass{1, 0, 1}, ins).value() == 4);
}

TEST_CASE("two-point table is recovered without the associativity seeds") {
    Engine e{EngineConfig{6, false, false}};
    const auto& table = e.derive_two_point_table();
    CHECK(e.two_point_equation_count() > 0);
    for (const auto& [key, entry] : table) {
        INFO(key.to_string());
        CHECK(entry.value.is_known());
    }
    CHECK(value(e, {0, 1, 1}, {5, 11}) == 2);
    CHECK(value(e, {0, 1, 1}, {5, 12}) == 2);
    CHECK(value(e, {0, 1, 1}, {5, 10}) == 0);
    for (int c = 0; c <= 6; ++c)
        for (int t : {10, 11, 12})
            CHECK(value(e, {1, 0, c}, {6, t}) == 0);

    SeedTable full = SeedTable::builtin(6, true);
    for (const auto& [key, seed] : full.entries()) {
        INFO(key.to_string());
        CHECK(value(e, key.beta, key.insertions) == seed.value);
    }
}

TEST_CASE("derived two-point table matches the frozen file") {
    Engine e{EngineConfig{6, false, false}};
    std::istringstream in(test_support::read_file(test_support::data_path("two_point_table_derived.txt")));
    auto golden = parse_seed_lines(in);
    const auto& table = e.derive_two_point_table();
    std::size_t known = 0;
    for (const auto& [key, entry] : table)
        known += entry.value.is_known() ? 1 : 0;
    CHECK(golden.size() == known);
    for (const auto& [key, seed] : golden) {
        INFO(key.to_string());
        auto it = table.find(key);
        REQUIRE(it != table.end());
        CHECK(it->second.value == InvariantValue::known(seed.value));
        CHECK(it->second.source == seed.citation);
    }
}

TEST_CASE("pure T4 invariants") {
    Engine& e = shared_engine();
    InvariantValue v = e.invariant(CurveClass{3, 2, 2}, std::vector<int>(11, 4));
    CHECK_FALSE(v.is_known());
    CHECK(v.reason().find("<T4^11>_(3,2,2)") != std::string::npos);
    CHECK(v.to_string() == "UNKNOWN");
    CHECK(value(e, {1, 1, 0}, {4, 4, 4}) == 0);
    CHECK_FALSE(e.invariant(CurveClass{1, 1, 0}, std::vector<int>(5, 4)).is_known());

    Engine flagged{EngineConfig{6, true, true}};
    CHECK(value(flagged, {1, 1, 0}, std::vector<int>(5, 4)) == 0);
    CHECK(value(flagged, {2, 2, 3}, std::vector<int>(9, 4)) == 0);
    CHECK_FALSE(flagged.invariant(CurveClass{3, 2, 2}, std::vector<int>(11, 4)).is_known());
}

TEST_CASE("unknown propagates through the recursion") {
    Engine& e = shared_engine();
    std::vector<int> ins{4, 4, 4, 4, 4, 10};
    REQUIRE(dimension_check({2, 1, 1}, ins));
    InvariantValue v = e.invariant(CurveClass{2, 1, 1}, ins);
    CHECK_FALSE(v.is_known());
    CHECK(v.reason().find("<T4^5>_(1,1,0)") != std::string::npos);

    Engine flagged{EngineConfig{6, true, true}};
    CHECK(value(flagged, {2, 1, 1}, ins) == 0);
}

TEST_CASE("exceeding the truncation gives Unknown") {
    Engine e{EngineConfig{2, false, true}};
    InvariantValue v = e.invariant(CurveClass{0, 0, 3}, std::vector<int>{8});
    CHECK_FALSE(v.is_known());
    CHECK(v.reason().find("exceeds c_max") != std::string::npos);
}

TEST_CASE("raising c_max keeps known values") {
    Engine& lo = shared_engine(4);
    Engine& hi = shared_engine(6);
    lo.invariant(CurveClass{1, 1, 1}, std::vector<int>{4, 4, 4, 12});
    lo.invariant(CurveClass{1, 2, 3}, std::vector<int>{4, 13, 13});
    for (const auto& [key, v] : lo.memo_snapshot()) {
        if (!v.is_known())
            continue;
        INFO(key.to_string());
        CHECK(hi.invariant(key) == v);
    }
}

TEST_CASE("seed table validation") {
    SeedTable t = SeedTable::builtin(3);
    CHECK_THROWS_AS(t.insert(InvariantKey::make({1, 0, 1}, {13}), 5, "x"), ConsistencyError);
    CHECK_THROWS_AS(t.insert(InvariantKey::make({1, 0, 1}, {12}), 5, "x"), UsageError);
    t.insert(InvariantKey::make({1, 0, 1}, {13}), 2, "again");
    REQUIRE(t.find(InvariantKey::make({0, 1, 1}, {13})) != nullptr);

    std::istringstream in(t.to_text());
    SeedTable back;
    for (const auto& [key, entry] : parse_seed_lines(in))
        back.insert(key, entry.value, entry.citation);
    CHECK(back.size() == t.size());
    for (const auto& [key, entry] : t.entries()) {
        REQUIRE(back.find(key) != nullptr);
        CHECK(back.find(key)->value == entry.value);
    }
    std::istringstream bad("1,0,1 | 13 | two | nope\n");
    CHECK_THROWS(parse_seed_lines(bad));
    std::istringstream short_line("1,0,1 | 13\n");
    CHECK_THROWS(parse_seed_lines(short_line));
}

TEST_CASE("seed overrides are checked against associativity") {
    SeedTable seeds = SeedTable::builtin(3);
    std::istringstream same("1,0,1 | 13 | 2 | re-entered\n");
    seeds.load_overrides(same);
    CHECK(seeds.find(InvariantKey::make({0, 1, 1}, {13}))->citation == "re-entered");
    Engine ok{EngineConfig{3, false, true}, seeds};
    ok.begin_provenance(false);
    CHECK(value(ok, {1, 0, 1}, {2, 13}) == 2);
    CHECK(ok.end_provenance().citations.count("re-entered") == 1);

    std::istringstream doubled("# doubled line count\n1,0,1 | 13 | 4 | test override\n");
    seeds.load_overrides(doubled);
    CHECK(seeds.find(InvariantKey::make({0, 1, 1}, {13}))->value == 4);
    Engine bad{EngineConfig{3, false, true}, seeds};
    CHECK_THROWS_AS(bad.derive_two_point_table(), ConsistencyError);
}

TEST_CASE("held-out associativity instances close") {
    Engine& e = shared_engine(4);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> idx(1, 13);
    int checked = 0;
    for (int attempt = 0; attempt < 4000 && checked < 60; ++attempt) {
        CurveClass beta{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3), static_cast<int>(rng() % 4)};
        if (beta.is_zero())
            continue;
        int i = idx(rng), j = idx(rng), k = idx(rng), l = idx(rng);
        int rest = 2 * (beta.a + beta.b) + 4 - codim(i) - codim(j) - codim(k) - codim(l);
        std::vector<int> extra;
        while (rest >= 2 && extra.size() < 2) {
            extra.push_back(4);
            rest -= 2;
        }
        if (rest != 0)
            continue;
        LinearRelation rel = e.wdvv_instance(i, j, k, l, extra, beta);
        InvariantValue r = e.evaluate(rel);
        if (!r.is_known())
            continue;
        INFO(rel.to_string());
        CHECK(r.value() == 0);
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("recursion agrees with elimination over all associativity instances at (1,1,1)") {
    Engine& e = shared_engine(4);
    const CurveClass beta{1, 1, 1};
    CHECK(value(e, {0, 1, 1}, {4, 4, 4, 12}) == 0);

    std::vector<std::vector<int>> extras{{}};
    for (int x = 4; x < kBasisSize; ++x) {
        extras.push_back({x});
        for (int y = x; y < kBasisSize; ++y)
            extras.push_back({x, y});
    }
    std::map<InvariantKey, std::size_t> column;
    std::vector<LinearRelation> rels;
    for (const auto& extra : extras) {
        int budget = 2 * (beta.a + beta.b) + 4 + static_cast<int>(extra.size());
        for (int x : extra)
            budget -= codim(x);
        for (int i = 1; i < kBasisSize; ++i)
            for (int j = i; j < kBasisSize; ++j)
                for (int k = 1; k < kBasisSize; ++k)
                    for (int l = k; l < kBasisSize; ++l) {
                        if (codim(i) + codim(j) + codim(k) + codim(l) != budget)
                            continue;
                        LinearRelation rel = e.wdvv_instance(i, j, k, l, extra, beta);
                        if (rel.unknown_constant || rel.coefficients.empty())
                            continue;
                        for (const auto& [key, c] : rel.coefficients)
                            column.emplace(key, column.size());
                        rels.push_back(std::move(rel));
                    }
    }
    const std::size_t n = column.size();
    RationalMatrix m(0, n + 1);
    for (const auto& rel : rels) {
        std::vector<Rational> row(n + 1);
        for (const auto& [key, c] : rel.coefficients)
            row[column.at(key)] = c;
        row[n] = -rel.constant;
        m.append_row(row);
    }
    std::vector<std::size_t> pivots = rref(m);
    for (std::size_t r = pivots.size(); r < m.rows(); ++r)
        REQUIRE(m(r, n).is_zero());
    REQUIRE(std::find(pivots.begin(), pivots.end(), n) == pivots.end());

    std::size_t solved = 0;
    bool target_solved = false;
    const InvariantKey target = InvariantKey::make(beta, {4, 4, 4, 12});
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        bool alone = true;
        for (std::size_t c = 0; c < n; ++c)
            if (c != pivots[r] && !m(r, c).is_zero())
                alone = false;
        if (!alone)
            continue;
        auto it = std::find_if(column.begin(), column.end(), [&](const auto& kv) { return kv.second == pivots[r]; });
        INFO(it->first.to_string());
        InvariantValue v = e.invariant(it->first);
        REQUIRE(v.is_known());
        CHECK(v.value() == m(r, n));
        target_solved = target_solved || it->first == target;
        ++solved;
    }
    CHECK(target_solved);
    CHECK(solved > 0);
    MESSAGE(rels.size() << " instances, " << n << " keys, " << solved << " determined");
}

TEST_CASE("concurrent queries agree with serial ones") {
    std::vector<InvariantKey> keys;
    for (int c = 0; c <= 3; ++c)
        for (int t : {10, 11, 12}) {
            keys.push_back(InvariantKey::make({1, 1, c}, {4, 4, 4, t}));
            keys.push_back(InvariantKey::make({2, 1, c}, {4, 4, 13, t}));
        }
    Engine serial{EngineConfig{3, false, true}};
    std::vector<InvariantValue> expected;
    for (const auto& k : keys)
        expected.push_back(serial.invariant(k));

    Engine shared{EngineConfig{3, false, true}};
    std::vector<std::vector<InvariantValue>> got(4);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < got.size(); ++t)
        threads.emplace_back([&, t] {
            for (std::size_t n = 0; n < keys.size(); ++n)
                got[t].push_back(shared.invariant(keys[(n + 5 * t) % keys.size()]));
        });
    for (auto& th : threads)
        th.join();
    for (std::size_t t = 0; t < got.size(); ++t)
        for (std::size_t n = 0; n < keys.size(); ++n)
            CHECK(got[t][n] == expected[(n + 5 * t) % keys.size()]);
}
