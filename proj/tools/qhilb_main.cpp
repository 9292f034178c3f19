#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhilb/qhilb.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qhilb;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitVerify = 3;

struct Options {
    int c_max = 6;
    int y_truncation = 2;
    std::string seeds_path;
    bool bidegree_vanishing = false;
    std::string format = "text";
    bool trace = false;
};

std::unique_ptr<Engine> make_engine(const Options& o, bool associativity_seeds = true) {
    if (o.c_max < 0)
        throw UsageError("--cmax must be non-negative");
    EngineConfig cfg;
    cfg.c_max = o.c_max;
    cfg.enable_bidegree_vanishing = o.bidegree_vanishing;
    cfg.use_associativity_seeds = associativity_seeds;
    SeedTable seeds = SeedTable::builtin(cfg.c_max, associativity_seeds);
    std::string path = o.seeds_path;
    if (path.empty())
        if (const char* env = std::getenv("QHILB_SEEDS"); env && *env)
            path = env;
    if (!path.empty())
        seeds.load_overrides_file(path);
    return std::make_unique<Engine>(cfg, std::move(seeds));
}

json series_terms(const QCohVector& v) {
    json arr = json::array();
    for (const auto& t : residual_terms(v))
        arr.push_back({{"basis", basis_name(t.basis)}, {"monomial", t.monomial.to_string()},
                       {"coefficient", t.coefficient.to_string()}});
    return arr;
}

void emit_json(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_invariant(const Options& o, const std::string& beta_text, const std::string& ins_text) {
    CurveClass beta = CurveClass::parse(beta_text);
    std::vector<int> ins = parse_insertions(ins_text);
    if (beta.c > o.c_max)
        throw TruncationError(beta.to_string() + " has q3-degree above --cmax " + std::to_string(o.c_max));
    auto engine = make_engine(o);
    engine->derive_two_point_table();
    engine->begin_provenance(o.trace);
    InvariantValue v = engine->invariant(beta, ins);
    Provenance p = engine->end_provenance();
    if (!dimension_check(beta, ins))
        p.citations.insert("rule: dimension axiom, codimension sum != 2a + 2b + 1 + n");
    const std::string key = "<" + render_insertions(ins) + ">_" + beta.to_string();

    if (o.format == "json") {
        json j;
        j["key"] = key;
        j["status"] = v.is_known() ? "known" : "unknown";
        j["value"] = v.is_known() ? json(v.value().to_string()) : json(nullptr);
        if (!v.is_known())
            j["reason"] = v.reason();
        j["wdvv_steps"] = p.wdvv_steps;
        j["citations"] = p.citations;
        if (o.trace)
            j["trace"] = p.trace;
        emit_json(j);
    } else if (o.format == "csv") {
        std::cout << "beta,insertions,value\n"
                  << beta.a << ' ' << beta.b << ' ' << beta.c << ',' << render_insertions(ins) << ','
                  << v.to_string() << '\n';
    } else {
        std::cout << v.to_string() << '\n';
        std::cout << "key: " << key << '\n';
        if (!v.is_known())
            std::cout << "reason: " << v.reason() << '\n';
        std::cout << "wdvv steps: " << p.wdvv_steps << '\n';
        for (const auto& c : p.citations)
            std::cout << "seed: " << c << '\n';
        for (const auto& t : p.trace)
            std::cout << "trace: " << t << '\n';
    }
    return v.is_known() ? kExitOk : kExitUnknown;
}

int cmd_product(const Options& o, const std::string& left, const std::string& right) {
    int i = parse_basis(left), j = parse_basis(right);
    auto engine = make_engine(o);
    QuantumProduct prod(*engine, o.c_max);
    const QCohVector& v = prod.basis_product(i, j);
    if (o.format == "json") {
        emit_json({{"left", left}, {"right", right}, {"c_max", o.c_max}, {"text", v.to_string()}, {"terms", series_terms(v)}});
    } else if (o.format == "csv") {
        std::cout << "basis,monomial,coefficient\n";
        for (const auto& t : residual_terms(v))
            std::cout << basis_name(t.basis) << ',' << t.monomial.to_string() << ',' << t.coefficient << '\n';
    } else {
        std::cout << v.to_string() << '\n';
    }
    return kExitOk;
}

int cmd_verify(const Options& o, bool all, const std::vector<int>& ids, const std::string& relations_path) {
    std::vector<Relation> rels = load_relations(relations_path.empty() ? default_relations_path() : relations_path);
    std::vector<Relation> chosen;
    if (all || ids.empty()) {
        chosen = rels;
    } else {
        for (int id : ids) {
            if (id < 1 || id > static_cast<int>(rels.size()))
                throw UsageError("relation id out of range: " + std::to_string(id));
            chosen.push_back(rels[static_cast<std::size_t>(id - 1)]);
        }
    }
    auto engine = make_engine(o);
    QuantumProduct prod(*engine, o.c_max);
    int passed = 0;
    json report = json::array();
    std::ostringstream text, csv;
    csv << "id,name,status,basis,monomial,coefficient\n";
    for (const auto& r : chosen) {
        QCohVector res = verify_relation(r, prod);
        bool ok = res.is_zero();
        passed += ok ? 1 : 0;
        text << r.name << " (" << r.id << "): " << (ok ? "pass" : "FAIL") << '\n';
        for (const auto& t : residual_terms(res)) {
            text << "  residual " << basis_name(t.basis) << " [" << t.monomial.to_string() << "] = " << t.coefficient << '\n';
            csv << r.id << ',' << r.name << ",fail," << basis_name(t.basis) << ',' << t.monomial.to_string() << ','
                << t.coefficient << '\n';
        }
        if (ok)
            csv << r.id << ',' << r.name << ",pass,,,\n";
        report.push_back({{"id", r.id}, {"name", r.name}, {"status", ok ? "pass" : "fail"}, {"residual", series_terms(res)}});
    }
    const int total = static_cast<int>(chosen.size());
    if (o.format == "json")
        emit_json({{"c_max", o.c_max}, {"passed", passed}, {"total", total}, {"relations", report}});
    else if (o.format == "csv")
        std::cout << csv.str();
    else
        std::cout << text.str() << passed << "/" << total << " pass\n";
    return passed == total ? kExitOk : kExitVerify;
}

int cmd_hyper(const Options& o, int d1, int d2, int l, int g_min) {
    HyperellipticQuery q{d1, d2, l, g_min};
    q.validate();
    if (beta_of(d1, d2, g_min).c > o.c_max)
        throw TruncationError("the table needs q3-degree " + std::to_string(beta_of(d1, d2, g_min).c) +
                              ", above --cmax " + std::to_string(o.c_max));
    auto engine = make_engine(o);
    HyperellipticTable t = hyperelliptic_table(*engine, q);
    if (o.format == "json") {
        std::cout << t.to_json() << '\n';
    } else if (o.format == "csv") {
        std::cout << t.to_csv();
    } else {
        std::cout << "E^" << l << "((" << d1 << "," << d2 << "),h), r = " << q.r() << ", k = " << q.k() << '\n';
        for (const auto& [h, row] : t.counts)
            std::cout << "h=" << h << "  " << row.count.to_string() << "   " << row.provenance << '\n';
    }
    for (const auto& [h, row] : t.counts)
        if (!row.count.is_known())
            return kExitUnknown;
    return kExitOk;
}

int cmd_gamma(const Options& o, const std::string& a, const std::string& b, const std::string& c) {
    int i = parse_basis(a), j = parse_basis(b), k = parse_basis(c);
    auto engine = make_engine(o);
    GammaSeries g = gamma(*engine, i, j, k, o.y_truncation, o.c_max);
    auto ydeg = [](const YDegree& y) {
        std::string s;
        for (int t = 0; t < 10; ++t)
            if (y[static_cast<std::size_t>(t)])
                s += (s.empty() ? "" : " ") + std::string("y") + std::to_string(t + 4) +
                     (y[static_cast<std::size_t>(t)] > 1 ? "^" + std::to_string(y[static_cast<std::size_t>(t)]) : "");
        return s.empty() ? std::string("1") : s;
    };
    json arr = json::array();
    std::ostringstream text;
    for (const auto& [key, v] : g.terms) {
        arr.push_back({{"beta", key.first.to_string()}, {"y", ydeg(key.second)}, {"value", v.to_string()}});
        text << key.first.to_string() << "  " << ydeg(key.second) << "  " << v.to_string() << '\n';
    }
    if (o.format == "json")
        emit_json({{"i", a}, {"j", b}, {"k", c}, {"y_truncation", o.y_truncation}, {"c_max", o.c_max}, {"terms", arr}});
    else
        std::cout << text.str();
    return g.has_unknown() ? kExitUnknown : kExitOk;
}

int cmd_seeds_export(const Options& o, bool derived, bool withhold, const std::string& out_path) {
    auto engine = make_engine(o, !withhold);
    std::string text = engine->seeds().to_text();
    if (derived) {
        text.clear();
        for (const auto& [key, e] : engine->derive_two_point_table()) {
            if (!e.value.is_known())
                continue;
            text += format_seed_line(key, e.value.value(), e.source) + "\n";
        }
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw UsageError("cannot write '" + out_path + "'");
        out << text;
    }
    return kExitOk;
}

int cmd_seeds_check(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open seed file '" + path + "'");
    auto lines = parse_seed_lines(in);
    std::cout << lines.size() << " seed lines ok\n";
    return kExitOk;
}

int cmd_export(const Options& o, const std::string& relations_path, const std::string& out_path) {
    if (o.c_max < 0)
        throw UsageError("--cmax must be non-negative");
    ReportOptions r;
    r.c_max = o.c_max;
    r.enable_bidegree_vanishing = o.bidegree_vanishing;
    r.relations_path = relations_path;
    std::string text = full_report_json(r) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write '" + out_path + "'");
    out << text;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum cohomology and Gromov-Witten invariants of Hilb^2(P1 x P1)"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--cmax", o.c_max, "Largest q3 exponent kept")->capture_default_str();
    app.add_option("--ytrunc", o.y_truncation, "Largest total y-degree for gamma")->capture_default_str();
    app.add_option("--seeds", o.seeds_path, "Seed override file (fallback: $QHILB_SEEDS)");
    app.add_flag("--enable-bidegree-vanishing", o.bidegree_vanishing, "Treat <T4^m> as zero when d1 d2 - d1 - d2 - 1 < 0");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();
    app.add_flag("--trace", o.trace, "Print every WDVV instance used");

    std::function<int()> run;

    auto* inv = app.add_subcommand("invariant", "Compute a genus-zero invariant");
    std::string beta_text, ins_text;
    inv->add_option("--beta", beta_text, "Curve class a,b,c")->required();
    inv->add_option("--ins", ins_text, "Insertions, e.g. \"T4^5 T13\"")->required();
    inv->callback([&] { run = [&] { return cmd_invariant(o, beta_text, ins_text); }; });

    auto* prod = app.add_subcommand("product", "Small quantum product of two basis classes");
    std::string left, right;
    prod->add_option("left", left)->required();
    prod->add_option("right", right)->required();
    prod->callback([&] { run = [&] { return cmd_product(o, left, right); }; });

    auto* ver = app.add_subcommand("verify", "Check the relations of the presentation");
    bool all = false;
    std::vector<int> ids;
    std::string relations_path;
    ver->add_flag("--all", all, "Check all relations");
    ver->add_option("--id", ids, "Relation ids (1..17)");
    ver->add_option("--relations", relations_path, "Relations file (default: shipped data)");
    ver->callback([&] { run = [&] { return cmd_verify(o, all, ids, relations_path); }; });

    auto* hyp = app.add_subcommand("hyper", "Hyperelliptic counts E^l((d1,d2),h)");
    int d1 = 0, d2 = 0, l = 0, g_min = 0;
    hyp->add_option("--d1", d1)->required();
    hyp->add_option("--d2", d2)->required();
    hyp->add_option("--l", l)->required();
    hyp->add_option("--gmin", g_min, "Smallest genus listed")->capture_default_str();
    hyp->callback([&] { run = [&] { return cmd_hyper(o, d1, d2, l, g_min); }; });

    auto* gam = app.add_subcommand("gamma", "Coefficients of Gamma_ijk");
    std::string ga, gb, gc;
    gam->add_option("i", ga)->required();
    gam->add_option("j", gb)->required();
    gam->add_option("k", gc)->required();
    gam->callback([&] { run = [&] { return cmd_gamma(o, ga, gb, gc); }; });

    auto* seeds = app.add_subcommand("seeds", "Export or check seed files");
    seeds->require_subcommand(1);
    auto* exp = seeds->add_subcommand("export", "Write the seed table (or the derived two-point table)");
    bool derived = false;
    std::string out_path;
    bool withhold = false;
    exp->add_flag("--derived", derived, "Export the derived two-point table instead");
    exp->add_flag("--withhold-associativity-table", withhold, "Leave the <T5 Te>, <T6 Te> seeds out and derive them");
    exp->add_option("--out", out_path, "Output file (default: stdout)");
    exp->callback([&] { run = [&] { return cmd_seeds_export(o, derived, withhold, out_path); }; });
    auto* chk = seeds->add_subcommand("check", "Parse and validate a seed file");
    std::string check_path;
    chk->add_option("path", check_path)->required();
    chk->callback([&] { run = [&] { return cmd_seeds_check(check_path); }; });

    auto* rep = app.add_subcommand("export", "Write a JSON report of everything computed at this truncation");
    std::string report_relations, report_out;
    rep->add_option("--relations", report_relations, "Relations file (default: shipped data)");
    rep->add_option("--out", report_out, "Output file (default: stdout)");
    rep->callback([&] { run = [&] { return cmd_export(o, report_relations, report_out); }; });

    for (auto* sub : {inv, prod, ver, hyp, gam, rep})
        sub->fallthrough();
    seeds->fallthrough();
    exp->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    try {
        return run();
    } catch (const MissingInvariantError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnknown;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
