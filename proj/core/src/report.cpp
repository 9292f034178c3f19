#include "qhilb/report.hpp"

#include <json.hpp>

#include "qhilb/hyperelliptic.hpp"
#include "qhilb/quantum.hpp"

namespace qhilb {

namespace {

using json = nlohmann::ordered_json;

json terms_json(const QCohVector& v) {
    json arr = json::array();
    for (const auto& t : residual_terms(v))
        arr.push_back({{"basis", basis_name(t.basis)}, {"monomial", t.monomial.to_string()},
                       {"coefficient", t.coefficient.to_string()}});
    return arr;
}

json key_json(const InvariantKey& key) {
    return {{"beta", key.beta.to_string()}, {"insertions", render_insertions(key.insertions)}};
}

} // namespace

std::string full_report_json(const ReportOptions& options) {
    EngineConfig cfg;
    cfg.c_max = options.c_max;
    cfg.enable_bidegree_vanishing = options.enable_bidegree_vanishing;
    Engine engine(cfg);
    const ChowRing& ring = ChowRing::standard();

    json out;
    out["c_max"] = options.c_max;
    out["enable_bidegree_vanishing"] = options.enable_bidegree_vanishing;
    out["graded_dimensions"] = ring.graded_dimensions();

    json cups = json::array();
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = i; j < kBasisSize; ++j)
            cups.push_back({{"left", basis_name(i)}, {"right", basis_name(j)}, {"cup", ring.cup_basis(i, j).to_string()}});
    out["cup_table"] = cups;

    json seeds = json::array();
    for (const auto& [key, e] : engine.seeds().entries()) {
        json s = key_json(key);
        s["value"] = e.value.to_string();
        s["citation"] = e.citation;
        seeds.push_back(s);
    }
    out["seeds"] = seeds;

    json table = json::array();
    for (const auto& [key, e] : engine.derive_two_point_table()) {
        json s = key_json(key);
        s["value"] = e.value.to_string();
        s["source"] = e.source;
        table.push_back(s);
    }
    out["two_point_table"] = table;

    QuantumProduct product(engine, options.c_max);
    json products = json::array();
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = i; j < kBasisSize; ++j)
            products.push_back({{"left", basis_name(i)}, {"right", basis_name(j)},
                                {"product", product.basis_product(i, j).to_string()}});
    out["products"] = products;

    json rels = json::array();
    for (const auto& r : load_relations(options.relations_path.empty() ? default_relations_path() : options.relations_path)) {
        QCohVector res = verify_relation(r, product);
        rels.push_back({{"id", r.id}, {"name", r.name}, {"status", res.is_zero() ? "pass" : "fail"},
                        {"residual", terms_json(res)}});
    }
    out["relations"] = rels;

    json hyper = json::array();
    const int queries[][3] = {{1, 1, 1}, {1, 2, 1}, {2, 2, 1}, {2, 2, 2}, {1, 1, 0}, {3, 2, 0}};
    for (const auto& q : queries) {
        HyperellipticQuery hq{q[0], q[1], q[2], 0};
        if (beta_of(q[0], q[1], 0).c > options.c_max)
            continue;
        hyper.push_back(json::parse(hyperelliptic_table(engine, hq).to_json()));
    }
    out["hyperelliptic"] = hyper;

    json memo = json::array();
    for (const auto& [key, v] : engine.memo_snapshot()) {
        json s = key_json(key);
        s["value"] = v.to_string();
        memo.push_back(s);
    }
    out["memo"] = memo;
    return out.dump(2);
}

} // namespace qhilb
