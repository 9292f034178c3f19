#include "qhilb/hyperelliptic.hpp"

#include <json.hpp>

#include "qhilb/errors.hpp"

namespace qhilb {

void HyperellipticQuery::validate() const {
    if (d1 < 1 || d2 < 1)
        throw UsageError("bidegree entries must be positive");
    if (l < 0)
        throw UsageError("l must be non-negative");
    if (k() < 0)
        throw UsageError("l is too large: r - 3l = " + std::to_string(k()) + " < 0");
    if (g_min < 0 || g_min > h_max())
        throw UsageError("genus floor must lie in [0, d1+d2-1]");
}

CurveClass beta_of(int d1, int d2, int g) {
    const int c = d1 + d2 - g - 1;
    if (c < 0)
        throw UsageError("genus " + std::to_string(g) + " is too large for bidegree (" + std::to_string(d1) + "," +
                         std::to_string(d2) + ")");
    if (d1 < 0 || d2 < 0 || g < 0)
        throw UsageError("bidegree and genus must be non-negative");
    return {d2, d1, c};
}

bool seed_vanishing(int d1, int d2) {
    if (d1 < 0 || d2 < 0)
        throw UsageError("bidegree entries must be non-negative");
    return static_cast<long>(d1) * d2 - d1 - d2 - 1 < 0;
}

std::map<int, InvariantValue> forward_invariants(Engine& engine, const HyperellipticQuery& query) {
    query.validate();
    std::vector<int> ins(static_cast<std::size_t>(query.l), kPointClass);
    ins.insert(ins.end(), static_cast<std::size_t>(query.k()), 4);
    std::map<int, InvariantValue> out;
    for (int g = query.g_min; g <= query.h_max(); ++g)
        out.emplace(g, engine.invariant(beta_of(query.d1, query.d2, g), ins));
    return out;
}

std::map<int, InvariantValue> apply_transform(const std::map<int, InvariantValue>& counts, int h_max) {
    std::map<int, InvariantValue> out;
    for (const auto& [g, unused] : counts) {
        Rational sum;
        std::optional<std::string> missing;
        for (int h = g; h <= h_max; ++h) {
            auto it = counts.find(h);
            if (it == counts.end())
                continue;
            if (!it->second.is_known()) {
                missing = it->second.reason();
                break;
            }
            sum += Rational(binomial(2L * h + 2, h - g)) * it->second.value();
        }
        out.emplace(g, missing ? InvariantValue::unknown(*missing) : InvariantValue::known(sum));
    }
    return out;
}

HyperellipticTable invert_counts(const std::map<int, InvariantValue>& invariants, const HyperellipticQuery& query) {
    HyperellipticTable t;
    t.query = query;
    const int h_max = query.h_max();
    for (int h = h_max; h >= query.g_min; --h) {
        if (binomial(2L * h + 2, 0) != 1)
            throw ConsistencyError("diagonal of the binomial transform is not 1");
        auto it = invariants.find(h);
        if (it == invariants.end())
            throw UsageError("missing invariant for genus " + std::to_string(h));
        HyperellipticRow row;
        const CurveClass beta = beta_of(query.d1, query.d2, h);
        std::vector<int> ins(static_cast<std::size_t>(query.k()), 4);
        ins.insert(ins.end(), static_cast<std::size_t>(query.l), kPointClass);
        row.provenance = "<" + render_insertions(ins) + ">_" + beta.to_string();
        if (!it->second.is_known()) {
            row.count = InvariantValue::unknown(it->second.reason());
            row.provenance += ": " + it->second.reason();
        } else {
            Rational e = it->second.value();
            std::optional<std::string> missing;
            for (int hp = h + 1; hp <= h_max; ++hp) {
                const InvariantValue& above = t.counts.at(hp).count;
                if (!above.is_known()) {
                    missing = "depends on unknown count at genus " + std::to_string(hp);
                    break;
                }
                e -= Rational(binomial(2L * hp + 2, hp - h)) * above.value();
            }
            if (missing) {
                row.count = InvariantValue::unknown(*missing);
                row.provenance += ": " + *missing;
            } else {
                row.count = InvariantValue::known(e);
            }
        }
        t.counts.emplace(h, std::move(row));
    }
    return t;
}

HyperellipticTable hyperelliptic_table(Engine& engine, const HyperellipticQuery& query) {
    return invert_counts(forward_invariants(engine, query), query);
}

std::string HyperellipticTable::to_csv() const {
    std::string out = "d1,d2,l,h,count,provenance\n";
    for (const auto& [h, row] : counts) {
        std::string prov = row.provenance;
        if (prov.find_first_of(",\"") != std::string::npos) {
            std::string q = "\"";
            for (char ch : prov)
                q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            prov = q + "\"";
        }
        out += std::to_string(query.d1) + "," + std::to_string(query.d2) + "," + std::to_string(query.l) + "," +
               std::to_string(h) + "," + row.count.to_string() + "," + prov + "\n";
    }
    return out;
}

std::string HyperellipticTable::to_json() const {
    nlohmann::ordered_json j;
    j["d1"] = query.d1;
    j["d2"] = query.d2;
    j["l"] = query.l;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& [h, row] : counts) {
        nlohmann::ordered_json r;
        r["h"] = h;
        r["count"] = row.count.to_string();
        r["provenance"] = row.provenance;
        j["rows"].push_back(r);
    }
    return j.dump(2);
}

} // namespace qhilb
