#include "qhilb/gw_engine.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "qhilb/errors.hpp"
#include "qhilb/linalg.hpp"

namespace qhilb {

namespace {

using Sparse = std::vector<std::pair<int, Rational>>;

Sparse unit(int i, const Rational& c = 1) { return {{i, c}}; }

const Sparse& unit_ref(int i) {
    static const std::array<Sparse, kBasisSize> table = [] {
        std::array<Sparse, kBasisSize> t;
        for (int k = 0; k < kBasisSize; ++k)
            t[static_cast<std::size_t>(k)] = unit(k);
        return t;
    }();
    return table[static_cast<std::size_t>(i)];
}

Sparse sparse_of(const CohVector& v) {
    Sparse s;
    for (int i = 0; i < kBasisSize; ++i)
        if (!v[i].is_zero())
            s.emplace_back(i, v[i]);
    return s;
}

int sparse_codim(const Sparse& s) { return s.empty() ? -1 : kCodim[static_cast<std::size_t>(s.front().first)]; }

std::string render_sparse(const Sparse& s) {
    std::string out;
    for (const auto& [i, c] : s) {
        if (!out.empty())
            out += " + ";
        if (c != Rational(1))
            out += c.to_string() + " ";
        out += basis_name(i);
    }
    return out.empty() ? "0" : out;
}

const std::vector<int>& block(int k) {
    static const std::array<std::vector<int>, 5> blocks = [] {
        std::array<std::vector<int>, 5> b;
        for (int i = 0; i < kBasisSize; ++i)
            b[static_cast<std::size_t>(kCodim[static_cast<std::size_t>(i)])].push_back(i);
        return b;
    }();
    return blocks[static_cast<std::size_t>(k)];
}

// γ = α ∪ α1 with α1 a divisor index.
std::pair<Sparse, int> decomposition(int g) {
    switch (g) {
    case 5: return {unit(1), 2};
    case 6: return {unit(1), 1};
    case 7: return {unit(2), 2};
    case 8: return {unit(1), 3};
    case 9: return {unit(2), 3};
    case 10: return {unit(5, Rational(1, 2)), 2};
    case 11: return {unit(5, Rational(1, 2)), 1};
    case 12: return {unit(8, Rational(1, 2)), 2};
    case 13: return {unit(11), 2};
    default: throw ConsistencyError("no decomposition for " + basis_name(g));
    }
}

const char* const kCiteFibre = "fibre classes: <T8>_(0,0,c) = 4/c^2";
const char* const kCiteFibreZero = "fibre classes: <T4>,<T5>,<T6>,<T7> vanish on (0,0,c)";
const char* const kCiteLine = "lines of type (1,0,c): <T13>_(1,0,1) = 2, <T4 T10>_(1,0,1) = <T4 T12>_(1,0,1) = 1, others zero";
const char* const kCiteAssoc = "associativity table: <T5 Te>_(0,1,c) and <T6 Te>_(1,0,c)";
const char* const kCiteT11T6 = "<T11 T6>_(0,1,c) = 1, 2, 1 for c = 0, 1, 2";
const char* const kCiteT13Te = "<T13 Te>_(1,1,1) = integral of T3.Te";
const char* const kRuleLines = "rule: invariants with at most 3 insertions vanish on (1,0,c), (0,1,c) for c > 2";
const char* const kRulePure = "rule: <T4^m> vanishes for m even and for m = 1, 3";
const char* const kRuleBidegree = "rule (optional): <T4^m> vanishes when d1 d2 - d1 - d2 - 1 < 0";

std::string trim(std::string s) {
    auto ws = [](unsigned char ch) { return std::isspace(ch) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

} // namespace

// ---------------------------------------------------------------- keys and values

InvariantKey InvariantKey::make(const CurveClass& beta, std::vector<int> insertions) {
    if (!beta.effective() || beta.is_zero())
        throw UsageError("invariant key needs an effective nonzero class, got " + beta.to_string());
    for (int i : insertions)
        if (codim(i) < 2)
            throw UsageError("invariant key insertions must have codimension >= 2, got " + basis_name(i));
    std::sort(insertions.begin(), insertions.end());
    return {beta, std::move(insertions)};
}

InvariantKey InvariantKey::involution() const {
    std::vector<int> ins;
    ins.reserve(insertions.size());
    for (int i : insertions)
        ins.push_back(involution_index(i));
    std::sort(ins.begin(), ins.end());
    return {beta.involution(), std::move(ins)};
}

int InvariantKey::count(int index) const {
    return static_cast<int>(std::count(insertions.begin(), insertions.end(), index));
}

std::string InvariantKey::to_string() const {
    return "<" + render_insertions(insertions) + ">_" + beta.to_string();
}

std::size_t InvariantKeyHash::operator()(const InvariantKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.beta.a) * 1000003u ^ static_cast<std::size_t>(k.beta.b) * 10007u ^
                    static_cast<std::size_t>(k.beta.c) * 101u;
    for (int i : k.insertions)
        h = h * 31u + static_cast<std::size_t>(i) + 1u;
    return h;
}

std::string render_insertions(const std::vector<int>& insertions) {
    std::vector<int> sorted = insertions;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (std::size_t p = 0; p < sorted.size();) {
        std::size_t q = p;
        while (q < sorted.size() && sorted[q] == sorted[p])
            ++q;
        if (!out.empty())
            out += ' ';
        out += basis_name(sorted[p]);
        if (q - p > 1)
            out += "^" + std::to_string(q - p);
        p = q;
    }
    return out;
}

std::vector<int> parse_insertions(std::string_view text) {
    std::vector<int> out;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) {
        auto caret = tok.find('^');
        int idx = parse_basis(std::string_view(tok).substr(0, caret));
        int times = 1;
        if (caret != std::string::npos) {
            std::string e = tok.substr(caret + 1);
            if (e.empty() || e.size() > 4 || !std::all_of(e.begin(), e.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
                throw UsageError("bad exponent in insertion token '" + tok + "'");
            times = std::stoi(e);
        }
        out.insert(out.end(), static_cast<std::size_t>(times), idx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const Rational& InvariantValue::value() const {
    if (reason_)
        throw UsageError("value requested from an unknown invariant: " + *reason_);
    return value_;
}

const std::string& InvariantValue::reason() const {
    static const std::string empty;
    return reason_ ? *reason_ : empty;
}

std::string InvariantValue::to_string() const {
    return reason_ ? "UNKNOWN" : value_.to_string();
}

bool dimension_check(const CurveClass& beta, const std::vector<int>& insertions) {
    long sum = 0;
    for (int i : insertions)
        sum += codim(i);
    return sum == 2L * beta.a + 2L * beta.b + 1 + static_cast<long>(insertions.size());
}

// ---------------------------------------------------------------- seeds

void SeedTable::insert(const InvariantKey& key, const Rational& value, const std::string& citation) {
    if (!dimension_check(key.beta, key.insertions))
        throw UsageError("seed " + key.to_string() + " violates the dimension axiom");
    for (const InvariantKey& k : {key, key.involution()}) {
        auto [it, inserted] = entries_.try_emplace(k, SeedEntry{value, citation});
        if (!inserted && it->second.value != value)
            throw ConsistencyError("conflicting seeds for " + k.to_string() + ": " + it->second.value.to_string() +
                                   " vs " + value.to_string());
    }
}

void SeedTable::override_entry(const InvariantKey& key, const Rational& value, const std::string& citation) {
    if (!dimension_check(key.beta, key.insertions))
        throw UsageError("seed " + key.to_string() + " violates the dimension axiom");
    entries_[key] = SeedEntry{value, citation};
    entries_[key.involution()] = SeedEntry{value, citation};
}

const SeedEntry* SeedTable::find(const InvariantKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

SeedTable SeedTable::builtin(int c_max, bool include_associativity_table) {
    if (c_max < 0)
        throw ConfigError("c_max must be non-negative");
    SeedTable t;
    auto put = [&](CurveClass beta, std::vector<int> ins, Rational v, const char* cite) {
        t.insert(InvariantKey::make(beta, std::move(ins)), v, cite);
    };
    for (int c = 1; c <= c_max; ++c) {
        put({0, 0, c}, {8}, Rational(4, static_cast<long>(c) * c), kCiteFibre);
        for (int i : {4, 5, 6, 7})
            put({0, 0, c}, {i}, 0, kCiteFibreZero);
    }
    for (int c = 0; c <= c_max; ++c) {
        put({1, 0, c}, {13}, c == 1 ? 2 : 0, kCiteLine);
        for (int e : {10, 11, 12})
            put({1, 0, c}, {4, e}, (c == 1 && e != 11) ? 1 : 0, kCiteLine);
    }
    if (include_associativity_table) {
        for (int c = 0; c <= c_max; ++c)
            for (int e : {10, 11, 12}) {
                put({0, 1, c}, {5, e}, (c == 1 && e != 10) ? 2 : 0, kCiteAssoc);
                put({1, 0, c}, {6, e}, 0, kCiteAssoc);
            }
    }
    const long t11t6[3] = {1, 2, 1};
    for (int c = 0; c <= std::min(c_max, 2); ++c)
        put({0, 1, c}, {6, 11}, t11t6[c], kCiteT11T6);
    if (c_max >= 1) {
        const ChowRing& ring = ChowRing::standard();
        for (int e : {10, 11, 12})
            put({1, 1, 1}, {13, e}, ring.cup_basis(3, e)[kPointClass], kCiteT13Te);
    }
    return t;
}

std::string format_seed_line(const InvariantKey& key, const Rational& value, const std::string& citation) {
    std::string ins;
    for (int i : key.insertions)
        ins += (ins.empty() ? "" : " ") + std::to_string(i);
    return std::to_string(key.beta.a) + "," + std::to_string(key.beta.b) + "," + std::to_string(key.beta.c) + " | " +
           ins + " | " + value.to_string() + " | " + citation;
}

std::vector<std::pair<InvariantKey, SeedEntry>> parse_seed_lines(std::istream& in) {
    std::vector<std::pair<InvariantKey, SeedEntry>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        for (int k = 0; k < 3; ++k) {
            auto bar = t.find('|', pos);
            if (bar == std::string::npos)
                throw UsageError("seed line " + std::to_string(lineno) + ": expected 'a,b,c | insertions | p/q | citation'");
            fields.push_back(trim(t.substr(pos, bar - pos)));
            pos = bar + 1;
        }
        fields.push_back(trim(t.substr(pos)));
        try {
            CurveClass beta = CurveClass::parse(fields[0]);
            std::vector<int> ins;
            std::istringstream is(fields[1]);
            std::string tok;
            while (is >> tok) {
                if (tok[0] == 'T') {
                    auto more = parse_insertions(tok);
                    ins.insert(ins.end(), more.begin(), more.end());
                } else {
                    std::size_t used = 0;
                    int v = std::stoi(tok, &used);
                    if (used != tok.size())
                        throw UsageError("bad insertion '" + tok + "'");
                    codim(v);
                    ins.push_back(v);
                }
            }
            InvariantKey key = InvariantKey::make(beta, ins);
            if (!dimension_check(key.beta, key.insertions))
                throw UsageError(key.to_string() + " violates the dimension axiom");
            out.emplace_back(key, SeedEntry{Rational::parse(fields[2]), fields[3]});
        } catch (const std::invalid_argument&) {
            throw UsageError("seed line " + std::to_string(lineno) + ": malformed number");
        } catch (const std::out_of_range&) {
            throw UsageError("seed line " + std::to_string(lineno) + ": number out of range");
        } catch (const UsageError& e) {
            throw UsageError("seed line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void SeedTable::load_overrides(std::istream& in) {
    for (const auto& [key, entry] : parse_seed_lines(in))
        override_entry(key, entry.value, entry.citation);
}

void SeedTable::load_overrides_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open seed file '" + path + "'");
    load_overrides(in);
}

std::string SeedTable::to_text() const {
    std::string out;
    for (const auto& [key, e] : entries_)
        out += format_seed_line(key, e.value, e.citation) + "\n";
    return out;
}

std::string LinearRelation::to_string() const {
    std::string out;
    for (const auto& [key, c] : coefficients) {
        Rational mag = c.sign() < 0 ? -c : c;
        out += out.empty() ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
        if (mag != Rational(1))
            out += mag.to_string() + " ";
        out += key.to_string();
    }
    std::string k = unknown_constant ? std::string("UNKNOWN") : constant.to_string();
    if (out.empty())
        out = k;
    else if (unknown_constant || !constant.is_zero())
        out += (constant.sign() < 0 && !unknown_constant) ? " - " + (-constant).to_string() : " + " + k;
    return out + " = 0";
}

// ---------------------------------------------------------------- engine

Engine::Engine(EngineConfig config)
    : Engine(config, SeedTable::builtin(config.c_max, config.use_associativity_seeds)) {}

Engine::Engine(EngineConfig config, SeedTable seeds)
    : config_(config), seeds_(std::move(seeds)), ring_(ChowRing::standard()) {
    if (config_.c_max < 0)
        throw ConfigError("c_max must be non-negative");
}

std::optional<InvariantValue> Engine::seed_lookup(const InvariantKey& key) const {
    if (const SeedEntry* e = seeds_.find(key))
        return InvariantValue::known(e->value);
    const CurveClass& b = key.beta;
    if (b.a + b.b == 1 && b.c > 2 && key.insertions.size() <= 3)
        return InvariantValue::known(0);
    if (key.count(4) == static_cast<int>(key.insertions.size())) {
        int m = static_cast<int>(key.insertions.size());
        if (m % 2 == 0 || m == 1 || m == 3)
            return InvariantValue::known(0);
        long d1 = b.b, d2 = b.a;
        if (config_.enable_bidegree_vanishing && d1 * d2 - d1 - d2 - 1 < 0)
            return InvariantValue::known(0);
    }
    return std::nullopt;
}

InvariantValue Engine::to_value(const Affine& a) const {
    if (a.is_unknown())
        return InvariantValue::unknown(a.reason());
    if (a.has_variables())
        return InvariantValue::unknown("depends on an undetermined two-point invariant");
    return InvariantValue::known(a.constant());
}

void Engine::note_citation(const std::string& c) {
    if (provenance_)
        provenance_->citations.insert(c);
}

void Engine::begin_provenance(bool record_trace) {
    std::unique_lock lock(mutex_);
    ensure_table();
    provenance_.emplace();
    provenance_memo_.clear();
    record_trace_ = record_trace;
}

Provenance Engine::end_provenance() {
    std::unique_lock lock(mutex_);
    Provenance p = provenance_ ? std::move(*provenance_) : Provenance{};
    provenance_.reset();
    provenance_memo_.clear();
    return p;
}

InvariantValue Engine::invariant(const InvariantKey& key) {
    {
        std::shared_lock lock(mutex_);
        if (table_state_ == TableState::done && !provenance_) {
            auto it = memo_.find(key);
            if (it != memo_.end())
                return to_value(it->second);
        }
    }
    std::unique_lock lock(mutex_);
    ensure_table();
    return to_value(lookup(key));
}

InvariantValue Engine::invariant(const CurveClass& beta, const std::vector<int>& insertions) {
    if (!beta.effective())
        throw UsageError("curve class " + beta.to_string() + " is not effective");
    if (beta.is_zero())
        throw UsageError("invariants are only defined here for nonzero classes");
    for (int i : insertions)
        codim(i);
    if (!dimension_check(beta, insertions))
        return InvariantValue::known(0);
    Rational coeff = 1;
    InvariantKey key;
    if (!normalize(beta, insertions, coeff, key))
        return InvariantValue::known(0);
    InvariantValue v = invariant(key);
    if (!v.is_known())
        return v;
    return InvariantValue::known(v.value() * coeff);
}

InvariantValue Engine::invariant(const CurveClass& beta, const std::vector<CohVector>& insertions) {
    if (!beta.effective())
        throw UsageError("curve class " + beta.to_string() + " is not effective");
    if (beta.is_zero())
        throw UsageError("invariants are only defined here for nonzero classes");
    std::vector<Sparse> sparse;
    sparse.reserve(insertions.size());
    for (const auto& v : insertions)
        sparse.push_back(sparse_of(v));
    std::vector<const Sparse*> ptrs;
    for (const auto& s : sparse)
        ptrs.push_back(&s);
    std::unique_lock lock(mutex_);
    ensure_table();
    return to_value(eval(beta, ptrs));
}

bool Engine::normalize(const CurveClass& beta, const std::vector<int>& idx, Rational& coeff, InvariantKey& key) const {
    if (!beta.effective())
        return false;
    long sum = 0;
    for (int i : idx)
        sum += kCodim[static_cast<std::size_t>(i)];
    if (sum != 2L * beta.a + 2L * beta.b + 1 + static_cast<long>(idx.size()))
        return false;
    key.beta = beta;
    key.insertions.clear();
    for (int i : idx) {
        int k = kCodim[static_cast<std::size_t>(i)];
        if (k == 0)
            return false;
        if (k == 1) {
            int d = divisor_degree(i, beta);
            if (d == 0)
                return false;
            coeff *= d;
        } else {
            key.insertions.push_back(i);
        }
    }
    std::sort(key.insertions.begin(), key.insertions.end());
    return true;
}

template <class Fn>
void Engine::expand(const std::vector<const Sparse*>& ins, Fn&& fn) const {
    const std::size_t n = ins.size();
    for (const Sparse* s : ins)
        if (s->empty())
            return;
    std::vector<std::size_t> pos(n, 0);
    std::vector<int> idx(n);
    while (true) {
        Rational c = 1;
        for (std::size_t p = 0; p < n; ++p) {
            const auto& [i, v] = (*ins[p])[pos[p]];
            idx[p] = i;
            c *= v;
        }
        fn(idx, c);
        std::size_t p = 0;
        while (p < n && ++pos[p] == ins[p]->size())
            pos[p++] = 0;
        if (p == n)
            return;
    }
}

Engine::Affine Engine::eval(const CurveClass& beta, const std::vector<const Sparse*>& ins) {
    Affine acc;
    InvariantKey key;
    expand(ins, [&](const std::vector<int>& idx, Rational c) {
        if (acc.is_unknown())
            return;
        if (!normalize(beta, idx, c, key))
            return;
        acc.add_scaled(lookup(key), c);
    });
    return acc;
}

void Engine::collect(const CurveClass& beta, const std::vector<const Sparse*>& ins, const Rational& scale,
                     std::map<InvariantKey, Rational>& out) const {
    InvariantKey key;
    expand(ins, [&](const std::vector<int>& idx, Rational c) {
        if (!normalize(beta, idx, c, key))
            return;
        Rational& slot = out[key];
        slot += c * scale;
        if (slot.is_zero())
            out.erase(key);
    });
}

Engine::Sparse Engine::cup_sparse(const Sparse& x, const Sparse& y) const {
    CohVector v;
    for (const auto& [i, a] : x)
        for (const auto& [j, b] : y) {
            const CohVector& c = ring_.cup_basis(i, j);
            if (!c.is_zero())
                v += (a * b) * c;
        }
    return sparse_of(v);
}

const Engine::Affine& Engine::lookup(const InvariantKey& key) {
    // Provenance queries recompute everything so that each seed they touch is recorded.
    auto& memo = provenance_ ? provenance_memo_ : memo_;
    auto it = memo.find(key);
    if (it != memo.end())
        return it->second;
    if (!in_progress_.insert(key).second)
        throw ConsistencyError("recursion revisits " + key.to_string());
    Affine v;
    try {
        v = compute(key);
    } catch (...) {
        in_progress_.erase(key);
        throw;
    }
    in_progress_.erase(key);
    return memo.emplace(key, std::move(v)).first->second;
}

Engine::Affine Engine::compute(const InvariantKey& key) {
    const CurveClass& b = key.beta;
    if (b.c > config_.c_max)
        return Affine::unknown(key.to_string() + " exceeds c_max=" + std::to_string(config_.c_max));
    if (const SeedEntry* e = seeds_.find(key)) {
        note_citation(e->citation);
        return Affine(e->value);
    }
    if (auto v = variables_.find(key); v != variables_.end())
        return Affine::variable(v->second);
    if (b.a + b.b == 1 && b.c > 2 && key.insertions.size() <= 3) {
        note_citation(kRuleLines);
        return {};
    }
    const int m = key.count(4);
    const int n = static_cast<int>(key.insertions.size()) - m;
    if (n == 0) {
        if (m % 2 == 0 || m == 1 || m == 3) {
            note_citation(kRulePure);
            return {};
        }
        long d1 = b.b, d2 = b.a;
        if (config_.enable_bidegree_vanishing && d1 * d2 - d1 - d2 - 1 < 0) {
            note_citation(kRuleBidegree);
            return {};
        }
        return Affine::unknown("requires " + key.to_string() + " seed");
    }
    if (m + n <= 2) {
        if (b.a + b.b <= 2) {
            if (auto t = two_point_.find(key); t != two_point_.end()) {
                const InvariantValue& v = t->second.value;
                note_citation(t->second.source);
                return v.is_known() ? Affine(v.value()) : Affine::unknown(v.reason());
            }
            if (table_state_ != TableState::done)
                return Affine::unknown(key.to_string() + ": two-point table not derived yet");
        }
        return Affine::unknown("no seed or rule determines " + key.to_string());
    }
    return recurse(key);
}

Engine::Affine Engine::recurse(const InvariantKey& key) {
    const int m = key.count(4);
    std::vector<int> others;
    for (int i : key.insertions)
        if (i != 4)
            others.push_back(i);
    std::stable_sort(others.begin(), others.end(),
                     [](int x, int y) { return kCodim[static_cast<std::size_t>(x)] > kCodim[static_cast<std::size_t>(y)]; });
    const std::size_t n = others.size();
    const Sparse t4 = unit(4);

    if (m == 0) {
        auto [alpha, a1] = decomposition(others.back());
        std::vector<int> rest(others.begin() + 2, others.end() - 1);
        return solve_for(key, unit(others[0]), unit(others[1]), alpha, unit(a1), rest);
    }
    if (m == 1) {
        auto [alpha, a1] = decomposition(others.back());
        std::vector<int> rest(others.begin() + 1, others.end() - 1);
        return solve_for(key, t4, unit(others[0]), alpha, unit(a1), rest);
    }
    if (n == 1) {
        std::vector<int> rest(static_cast<std::size_t>(m - 2), 4);
        int g = others[0];
        if (kCodim[static_cast<std::size_t>(g)] == 4)
            return solve_for(key, t4, t4, unit(5), unit(5, Rational(1, 2)), rest);
        auto [alpha, a1] = decomposition(g);
        return solve_for(key, t4, t4, alpha, unit(a1), rest);
    }
    auto [alpha, a1] = decomposition(others.back());
    std::vector<int> rest(static_cast<std::size_t>(m - 1), 4);
    rest.insert(rest.end(), others.begin() + 1, others.end() - 1);
    return solve_for(key, t4, unit(others[0]), alpha, unit(a1), rest);
}

Engine::Affine Engine::solve_for(const InvariantKey& target, const Sparse& ti, const Sparse& tj, const Sparse& tk,
                                 const Sparse& tl, const std::vector<int>& rest) {
    if (provenance_) {
        ++provenance_->wdvv_steps;
        if (record_trace_)
            provenance_->trace.push_back(target.to_string() + " <- WDVV(i=" + render_sparse(ti) + ", j=" +
                                         render_sparse(tj) + ", k=" + render_sparse(tk) + ", l=" + render_sparse(tl) +
                                         (rest.empty() ? "" : " | " + render_insertions(rest)) + ") at " +
                                         target.beta.to_string());
    }
    Split split = build(ti, tj, tk, tl, rest, target.beta);
    return close(&target, split);
}

Engine::Split Engine::build(const Sparse& ti, const Sparse& tj, const Sparse& tk, const Sparse& tl,
                            const std::vector<int>& rest, const CurveClass& beta) {
    Split s;
    auto with_rest = [&](std::initializer_list<const Sparse*> head) {
        std::vector<const Sparse*> v(head);
        for (int i : rest)
            v.push_back(&unit_ref(i));
        return v;
    };
    const Sparse titj = cup_sparse(ti, tj), tktl = cup_sparse(tk, tl);
    const Sparse titk = cup_sparse(ti, tk), tjtl = cup_sparse(tj, tl);
    collect(beta, with_rest({&titj, &tk, &tl}), 1, s.top);
    collect(beta, with_rest({&ti, &tj, &tktl}), 1, s.top);
    collect(beta, with_rest({&titk, &tj, &tl}), -1, s.top);
    collect(beta, with_rest({&ti, &tk, &tjtl}), -1, s.top);
    add_products(ti, tj, tk, tl, rest, beta, 1, s.rest);
    if (!s.rest.is_unknown())
        add_products(ti, tk, tj, tl, rest, beta, -1, s.rest);
    return s;
}

void Engine::add_products(const Sparse& x, const Sparse& y, const Sparse& z, const Sparse& w,
                          const std::vector<int>& rest, const CurveClass& beta, const Rational& sign, Affine& acc) {
    std::vector<std::pair<int, int>> groups; // (index, multiplicity)
    for (int i : rest) {
        if (!groups.empty() && groups.back().first == i)
            ++groups.back().second;
        else
            groups.emplace_back(i, 1);
    }
    std::sort(groups.begin(), groups.end());
    for (std::size_t p = 1; p < groups.size(); ++p)
        if (groups[p].first == groups[p - 1].first)
            throw ConsistencyError("unsorted rest insertions");
    const int cx = sparse_codim(x), cy = sparse_codim(y), cz = sparse_codim(z), cw = sparse_codim(w);
    if (cx < 0 || cy < 0 || cz < 0 || cw < 0)
        return;
    const PairingMatrix& pm = ring_.pairing();
    const std::size_t ng = groups.size();
    std::vector<int> take(ng, 0);
    std::vector<const Sparse*> units_a, units_b, ins;

    for (int a1 = 0; a1 <= beta.a; ++a1)
        for (int b1 = 0; b1 <= beta.b; ++b1)
            for (int c1 = 0; c1 <= beta.c; ++c1) {
                const CurveClass beta1{a1, b1, c1};
                const CurveClass beta2 = beta - beta1;
                if (beta1.is_zero() || beta2.is_zero())
                    continue;
                std::fill(take.begin(), take.end(), 0);
                while (true) {
                    Rational mult = 1;
                    int size_a = 0, size_b = 0, cod_a = 0, cod_b = 0;
                    units_a.clear();
                    units_b.clear();
                    for (std::size_t g = 0; g < ng; ++g) {
                        const auto& [idx, cnt] = groups[g];
                        const int t = take[g];
                        mult *= Rational(binomial(cnt, t));
                        size_a += t;
                        size_b += cnt - t;
                        cod_a += t * kCodim[static_cast<std::size_t>(idx)];
                        cod_b += (cnt - t) * kCodim[static_cast<std::size_t>(idx)];
                        for (int q = 0; q < t; ++q)
                            units_a.push_back(&unit_ref(idx));
                        for (int q = 0; q < cnt - t; ++q)
                            units_b.push_back(&unit_ref(idx));
                    }
                    const int cod_e = 2 * (a1 + b1) + 4 + size_a - (cx + cy + cod_a);
                    const int cod_f = 4 - cod_e;
                    const bool balanced = cod_e >= 0 && cod_e <= 4 &&
                                          cz + cw + cod_f + cod_b == 2 * (beta2.a + beta2.b) + 4 + size_b;
                    if (balanced) {
                        std::vector<std::pair<int, Affine>> left;
                        for (int e : block(cod_e)) {
                            ins.assign({&x, &y, &unit_ref(e)});
                            ins.insert(ins.end(), units_a.begin(), units_a.end());
                            Affine v = eval(beta1, ins);
                            if (!v.is_zero())
                                left.emplace_back(e, std::move(v));
                        }
                        if (!left.empty()) {
                            for (int f : block(cod_f)) {
                                Affine s;
                                for (const auto& [e, v] : left) {
                                    const Rational& gi = pm.g_inv(static_cast<std::size_t>(e), static_cast<std::size_t>(f));
                                    if (!gi.is_zero())
                                        s.add_scaled(v, gi);
                                }
                                if (s.is_zero())
                                    continue;
                                ins.assign({&z, &w, &unit_ref(f)});
                                ins.insert(ins.end(), units_b.begin(), units_b.end());
                                Affine r = eval(beta2, ins);
                                acc.add_scaled(s * r, sign * mult);
                                if (acc.is_unknown())
                                    return;
                            }
                        }
                    }
                    std::size_t g = 0;
                    while (g < ng && ++take[g] > groups[g].second)
                        take[g++] = 0;
                    if (g == ng)
                        break;
                }
            }
}

Engine::Affine Engine::close(const InvariantKey* target, const Split& split) {
    Affine sum = split.rest;
    Rational ct;
    for (const auto& [key, c] : split.top) {
        if (target && key == *target) {
            ct = c;
            continue;
        }
        if (sum.is_unknown())
            break;
        sum.add_scaled(lookup(key), c);
    }
    if (!target)
        return sum;
    if (ct.is_zero())
        throw ConsistencyError("associativity instance does not contain " + target->to_string());
    return sum.scaled(Rational(-1) / ct);
}

LinearRelation Engine::wdvv_instance(int i, int j, int k, int l, const std::vector<int>& extra, const CurveClass& beta) {
    for (int x : {i, j, k, l})
        codim(x);
    for (int x : extra)
        codim(x);
    LinearRelation rel;
    rel.beta = beta;
    if (!beta.effective() || beta.is_zero())
        return rel;
    std::vector<int> rest = extra;
    std::sort(rest.begin(), rest.end());
    std::unique_lock lock(mutex_);
    ensure_table();
    Split s = build(unit(i), unit(j), unit(k), unit(l), rest, beta);
    rel.coefficients = std::move(s.top);
    if (s.rest.is_unknown())
        rel.unknown_constant = s.rest.reason();
    else
        rel.constant = s.rest.constant();
    return rel;
}

InvariantValue Engine::evaluate(const LinearRelation& relation) {
    if (relation.unknown_constant)
        return InvariantValue::unknown(*relation.unknown_constant);
    std::unique_lock lock(mutex_);
    ensure_table();
    Affine sum(relation.constant);
    for (const auto& [key, c] : relation.coefficients) {
        sum.add_scaled(lookup(key), c);
        if (sum.is_unknown())
            break;
    }
    return to_value(sum);
}

const std::map<InvariantKey, TwoPointEntry>& Engine::derive_two_point_table() {
    std::unique_lock lock(mutex_);
    ensure_table();
    return two_point_;
}

std::vector<std::pair<InvariantKey, InvariantValue>> Engine::memo_snapshot() {
    std::unique_lock lock(mutex_);
    ensure_table();
    std::vector<std::pair<InvariantKey, InvariantValue>> out;
    out.reserve(memo_.size());
    for (const auto& [k, v] : memo_)
        out.emplace_back(k, to_value(v));
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

void Engine::ensure_table() {
    if (table_state_ != TableState::pending)
        return;
    table_state_ = TableState::deriving;

    std::vector<CurveClass> classes;
    for (int s = 1; s <= 2; ++s)
        for (int c = 0; c <= config_.c_max; ++c)
            for (int a = s; a >= 0; --a)
                classes.push_back({a, s - a, c});

    for (const CurveClass& beta : classes) {
        deriving_beta_ = beta;
        std::vector<InvariantKey> unknowns;
        for (int p = 4; p < kBasisSize; ++p)
            for (int q = p; q < kBasisSize; ++q) {
                if (!dimension_check(beta, {p, q}))
                    continue;
                InvariantKey key{beta, {p, q}};
                if (const SeedEntry* e = seeds_.find(key)) {
                    two_point_[key] = {InvariantValue::known(e->value), "seed: " + e->citation};
                } else if (auto r = seed_lookup(key); r && config_.use_associativity_seeds) {
                    two_point_[key] = {*r, kRuleLines};
                } else {
                    variables_.emplace(key, static_cast<int>(unknowns.size()));
                    unknowns.push_back(key);
                }
            }
        if (unknowns.empty())
            continue;

        const std::size_t nv = unknowns.size();
        RationalMatrix rows(0, nv + 1);
        std::vector<std::string> labels;
        const int target = 2 * (beta.a + beta.b) + 4;
        for (int i = 1; i < kBasisSize; ++i)
            for (int j = i; j < kBasisSize; ++j)
                for (int k = 1; k < kBasisSize; ++k)
                    for (int l = k; l < kBasisSize; ++l) {
                        if (kCodim[static_cast<std::size_t>(i)] + kCodim[static_cast<std::size_t>(j)] +
                                kCodim[static_cast<std::size_t>(k)] + kCodim[static_cast<std::size_t>(l)] !=
                            target)
                            continue;
                        Split s = build(unit(i), unit(j), unit(k), unit(l), {}, beta);
                        Affine eq = close(nullptr, s);
                        if (eq.is_unknown())
                            continue;
                        std::string label = "WDVV(" + basis_name(i) + "," + basis_name(j) + "," + basis_name(k) +
                                            "," + basis_name(l) + ") at " + beta.to_string();
                        if (!eq.has_variables()) {
                            if (!eq.constant().is_zero())
                                throw ConsistencyError("inconsistent associativity relation " + label + ": residual " +
                                                       eq.constant().to_string());
                            continue;
                        }
                        std::vector<Rational> row(nv + 1);
                        for (const auto& [id, c] : eq.terms())
                            row[static_cast<std::size_t>(id)] = c;
                        row[nv] = -eq.constant();
                        rows.append_row(row);
                        labels.push_back(std::move(label));
                    }
        equation_count_ += rows.rows();

        std::vector<std::size_t> order(nv);
        for (std::size_t v = 0; v < nv; ++v)
            order[v] = v;
        RationalMatrix red = rows;
        std::vector<std::size_t> pivots = red.rows() ? rref(red, order) : std::vector<std::size_t>{};
        for (std::size_t r = pivots.size(); r < red.rows(); ++r)
            if (!red(r, nv).is_zero()) {
                std::string msg = "inconsistent two-point system at " + beta.to_string() + "; relations:";
                for (const auto& l : labels)
                    msg += "\n  " + l;
                throw ConsistencyError(msg);
            }
        std::vector<Affine> solution(nv, Affine::unknown("two-point invariant not determined by associativity"));
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            bool alone = true;
            for (std::size_t v = 0; v < nv; ++v)
                if (v != pivots[r] && !red(r, v).is_zero())
                    alone = false;
            if (alone)
                solution[pivots[r]] = Affine(red(r, nv));
        }
        for (std::size_t v = 0; v < nv; ++v) {
            const InvariantKey& key = unknowns[v];
            variables_.erase(key);
            memo_[key] = solution[v];
            two_point_[key] = {to_value(solution[v]), "derived: associativity at " + beta.to_string()};
        }
        auto sub = [&](int id) { return solution[static_cast<std::size_t>(id)]; };
        for (auto& [k, v] : memo_)
            if (v.has_variables()) {
                v = v.substitute(sub);
                if (v.has_variables())
                    v = Affine::unknown("depends on an undetermined two-point invariant");
            }
    }
    table_state_ = TableState::done;
}

} // namespace qhilb
