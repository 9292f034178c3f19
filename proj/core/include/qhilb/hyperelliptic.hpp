#pragma once

#include <map>
#include <string>

#include "qhilb/chow.hpp"
#include "qhilb/gw_engine.hpp"

namespace qhilb {

struct HyperellipticQuery {
    int d1 = 1;
    int d2 = 1;
    int l = 0;
    int g_min = 0;

    int r() const noexcept { return 2 * d1 + 2 * d2 + 1; }
    int k() const noexcept { return r() - 3 * l; }
    int h_max() const noexcept { return d1 + d2 - 1; }
    // Throws UsageError unless d1, d2 >= 1, l >= 0, k >= 0 and 0 <= g_min <= h_max.
    void validate() const;
};

struct HyperellipticRow {
    InvariantValue count = InvariantValue::known(0);
    std::string provenance;
};

struct HyperellipticTable {
    HyperellipticQuery query;
    std::map<int, HyperellipticRow> counts; // genus h -> E^l((d1,d2),h)

    std::string to_csv() const;
    std::string to_json() const;
};

// (a,b,c) = (d2, d1, d1+d2-g-1).
CurveClass beta_of(int d1, int d2, int g);

// ⟨T13^l T4^(r-3l)⟩ at beta_of(d1,d2,g) for g_min <= g <= d1+d2-1.
std::map<int, InvariantValue> forward_invariants(Engine& engine, const HyperellipticQuery& query);

// Solves I(g) = Σ_{h>=g} C(2h+2, h-g) E(h) from h = d1+d2-1 downwards.
HyperellipticTable invert_counts(const std::map<int, InvariantValue>& invariants, const HyperellipticQuery& query);

// Applies the binomial transform to a table of counts; the inverse of invert_counts.
std::map<int, InvariantValue> apply_transform(const std::map<int, InvariantValue>& counts, int h_max);

bool seed_vanishing(int d1, int d2);

HyperellipticTable hyperelliptic_table(Engine& engine, const HyperellipticQuery& query);

} // namespace qhilb
