#include <doctest.h>

#include <json.hpp>
#include <random>

#include "test_support.hpp"

using namespace qhilb;

TEST_CASE("query bookkeeping") {
    HyperellipticQuery q{2, 2, 2, 0};
    CHECK(q.r() == 9);
    CHECK(q.k() == 3);
    CHECK(q.h_max() == 3);
    CHECK(beta_of(1, 2, 0) == CurveClass{2, 1, 2});
    CHECK_THROWS_AS((HyperellipticQuery{0, 1, 0, 0}.validate()), UsageError);
    CHECK_THROWS_AS((HyperellipticQuery{1, 1, 2, 0}.validate()), UsageError);
    CHECK_THROWS_AS((HyperellipticQuery{1, 1, 0, 5}.validate()), UsageError);
    CHECK_THROWS_AS((HyperellipticQuery{1, 1, -1, 0}.validate()), UsageError);
    CHECK(seed_vanishing(1, 1));
    CHECK(seed_vanishing(2, 2));
    CHECK_FALSE(seed_vanishing(3, 2));
}

TEST_CASE("invert and transform are mutually inverse") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        int d1 = 1 + static_cast<int>(rng() % 4), d2 = 1 + static_cast<int>(rng() % 4);
        HyperellipticQuery q{d1, d2, 0, 0};
        std::map<int, InvariantValue> counts;
        for (int h = 0; h <= q.h_max(); ++h)
            counts.insert_or_assign(h, InvariantValue::known(Rational(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 3))));
        auto forward = apply_transform(counts, q.h_max());
        HyperellipticTable back = invert_counts(forward, q);
        for (int h = 0; h <= q.h_max(); ++h)
            CHECK(back.counts.at(h).count == counts.at(h));
    }
}

TEST_CASE("unknown entries propagate only downwards in genus") {
    HyperellipticQuery q{2, 2, 0, 0};
    std::map<int, InvariantValue> inv{{0, InvariantValue::known(1)},
                                      {1, InvariantValue::unknown("missing")},
                                      {2, InvariantValue::known(3)},
                                      {3, InvariantValue::known(4)}};
    HyperellipticTable t = invert_counts(inv, q);
    CHECK(t.counts.at(3).count.is_known());
    CHECK(t.counts.at(2).count.is_known());
    CHECK_FALSE(t.counts.at(1).count.is_known());
    CHECK_FALSE(t.counts.at(0).count.is_known());
}

TEST_CASE("engine columns match the frozen file") {
    Engine e{EngineConfig{6, true, true}};
    std::string expected = test_support::read_file(test_support::data_path("hyperelliptic_golden.csv"));
    std::string got = "# Hyperelliptic counts computed by the engine with --enable-bidegree-vanishing (frozen regression values, not published numbers).\n";
    const int queries[][3] = {{1, 1, 1}, {1, 2, 1}, {2, 1, 1}, {2, 2, 1}, {2, 2, 2}, {1, 3, 1}, {3, 1, 1}, {1, 1, 0}};
    for (const auto& q : queries) {
        std::string csv = hyperelliptic_table(e, HyperellipticQuery{q[0], q[1], q[2], 0}).to_csv();
        got += csv.substr(csv.find('\n') + 1);
    }
    CHECK(got == expected);
}

TEST_CASE("l = 2 column for (2,2) is fully known without extra rules") {
    HyperellipticTable t = hyperelliptic_table(test_support::shared_engine(), HyperellipticQuery{2, 2, 2, 0});
    for (const auto& [h, row] : t.counts)
        CHECK(row.count.is_known());
}

TEST_CASE("l = 0 columns") {
    Engine flagged{EngineConfig{6, true, true}};
    for (auto [d1, d2] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
        HyperellipticTable t = hyperelliptic_table(flagged, HyperellipticQuery{d1, d2, 0, 0});
        for (const auto& [h, row] : t.counts)
            CHECK(row.count == InvariantValue::known(0));
    }
    HyperellipticTable t = hyperelliptic_table(test_support::shared_engine(), HyperellipticQuery{3, 2, 0, 0});
    bool any_unknown = false;
    for (const auto& [h, row] : t.counts)
        any_unknown = any_unknown || !row.count.is_known();
    CHECK(any_unknown);
}

TEST_CASE("table serialisation") {
    HyperellipticTable t = hyperelliptic_table(test_support::shared_engine(), HyperellipticQuery{2, 2, 2, 0});
    std::string csv = t.to_csv();
    CHECK(csv.rfind("d1,d2,l,h,count,provenance\n", 0) == 0);
    std::string js = t.to_json();
    CHECK(nlohmann::ordered_json::parse(js).dump(2) == js);
    CHECK(hyperelliptic_table(test_support::shared_engine(), HyperellipticQuery{2, 2, 2, 0}).to_json() == js);
}
