#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qhilb/affine.hpp"
#include "qhilb/chow.hpp"
#include "qhilb/rational.hpp"

namespace qhilb {

// Normalised argument of a genus-zero invariant: effective nonzero β and a sorted
// multiset of basis indices, none of them T0 or a divisor.
struct InvariantKey {
    CurveClass beta;
    std::vector<int> insertions;

    // Sorts and validates; throws UsageError on T0/divisor insertions or a bad class.
    static InvariantKey make(const CurveClass& beta, std::vector<int> insertions);

    InvariantKey involution() const;
    int count(int index) const;

    // e.g. "<T4^2 T10>_(1,0,1)".
    std::string to_string() const;

    friend bool operator==(const InvariantKey&, const InvariantKey&) = default;
    friend auto operator<=>(const InvariantKey&, const InvariantKey&) = default;
};

struct InvariantKeyHash {
    std::size_t operator()(const InvariantKey& k) const noexcept;
};

// "T4^2 T10" style rendering of a multiset of basis indices.
std::string render_insertions(const std::vector<int>& insertions);
// Parses "T4^5 T13" (also "T4 T4 T4"); returns sorted indices.
std::vector<int> parse_insertions(std::string_view text);

class InvariantValue {
public:
    static InvariantValue known(Rational v) { return InvariantValue(std::move(v), {}); }
    static InvariantValue unknown(std::string reason) { return InvariantValue({}, std::move(reason)); }

    bool is_known() const noexcept { return !reason_.has_value(); }
    // Throws UsageError when unknown.
    const Rational& value() const;
    const std::string& reason() const;

    // The rational, or "UNKNOWN".
    std::string to_string() const;

    friend bool operator==(const InvariantValue&, const InvariantValue&) = default;

private:
    InvariantValue(Rational v, std::optional<std::string> r) : value_(std::move(v)), reason_(std::move(r)) {}

    Rational value_;
    std::optional<std::string> reason_;
};

// Σ codim = 2a + 2b + 1 + n.
bool dimension_check(const CurveClass& beta, const std::vector<int>& insertions);

struct SeedEntry {
    Rational value;
    std::string citation;
};

// Primitive invariant values with citations; closed under the involution.
class SeedTable {
public:
    SeedTable() = default;

    // Shipped seeds up to q3-degree c_max. The associativity table on (0,1,c)
    // and ⟨T6 Te⟩_(1,0,c) can be left out to exercise their re-derivation.
    static SeedTable builtin(int c_max, bool include_associativity_table = true);

    // Adds the entry and its involution image; throws ConsistencyError on a conflicting value
    // and UsageError when the dimension axiom fails.
    void insert(const InvariantKey& key, const Rational& value, const std::string& citation);
    // Like insert, but replaces existing values.
    void override_entry(const InvariantKey& key, const Rational& value, const std::string& citation);

    const SeedEntry* find(const InvariantKey& key) const;
    const std::map<InvariantKey, SeedEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    // Reads lines "a,b,c | i1 i2 ... | p/q | citation" and overrides matching entries.
    void load_overrides(std::istream& in);
    void load_overrides_file(const std::string& path);

    std::string to_text() const;

private:
    std::map<InvariantKey, SeedEntry> entries_;
};

std::string format_seed_line(const InvariantKey& key, const Rational& value, const std::string& citation);
std::vector<std::pair<InvariantKey, SeedEntry>> parse_seed_lines(std::istream& in);

struct EngineConfig {
    int c_max = 6;
    bool enable_bidegree_vanishing = false;
    bool use_associativity_seeds = true;
};

// Σ coeff·⟨key⟩ + constant = 0 at a single curve class; products with lower classes are
// already evaluated into the constant.
struct LinearRelation {
    CurveClass beta;
    std::map<InvariantKey, Rational> coefficients;
    Rational constant;
    std::optional<std::string> unknown_constant;

    bool is_trivial() const { return coefficients.empty() && constant.is_zero() && !unknown_constant; }
    std::string to_string() const;
};

struct Provenance {
    std::size_t wdvv_steps = 0;
    std::set<std::string> citations;
    std::vector<std::string> trace;
};

// Entry of the two-point table together with how it was obtained.
struct TwoPointEntry {
    InvariantValue value = InvariantValue::known(0);
    std::string source;
};

class Engine {
public:
    explicit Engine(EngineConfig config = {});
    Engine(EngineConfig config, SeedTable seeds);

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    const EngineConfig& config() const noexcept { return config_; }
    const SeedTable& seeds() const noexcept { return seeds_; }

    InvariantValue invariant(const CurveClass& beta, const std::vector<int>& insertions);
    InvariantValue invariant(const CurveClass& beta, const std::vector<CohVector>& insertions);
    InvariantValue invariant(const InvariantKey& key);

    // Seed table entries plus the vanishing rules; empty when neither applies.
    std::optional<InvariantValue> seed_lookup(const InvariantKey& key) const;

    // Expansion of the associativity equation for (Ti*Tj)*Tk*Tl = (Ti*Tk)*Tj*Tl with extra insertions.
    LinearRelation wdvv_instance(int i, int j, int k, int l, const std::vector<int>& extra, const CurveClass& beta);
    // Plugs engine values into a relation and returns Σ coeff·value + constant.
    InvariantValue evaluate(const LinearRelation& relation);

    // Solves all two-point invariants with a + b ≤ 2, c ≤ c_max. Runs once; later calls return the cached table.
    const std::map<InvariantKey, TwoPointEntry>& derive_two_point_table();
    std::size_t two_point_equation_count() const noexcept { return equation_count_; }

    // All memoised values, sorted by key.
    std::vector<std::pair<InvariantKey, InvariantValue>> memo_snapshot();

    // Collects seed citations and WDVV steps for computations that miss the memo.
    void begin_provenance(bool record_trace);
    Provenance end_provenance();

private:
    using Affine = detail::Affine;
    using Sparse = std::vector<std::pair<int, Rational>>;

    struct Split {
        std::map<InvariantKey, Rational> top;
        Affine rest;
    };

    void ensure_table();
    InvariantValue to_value(const Affine& a) const;
    const Affine& lookup(const InvariantKey& key);
    Affine compute(const InvariantKey& key);
    Affine recurse(const InvariantKey& key);
    Affine solve_for(const InvariantKey& target, const Sparse& ti, const Sparse& tj, const Sparse& tk,
                     const Sparse& tl, const std::vector<int>& rest);

    // Normalises one basis term: returns false when it vanishes, otherwise fills key and scales coeff.
    bool normalize(const CurveClass& beta, const std::vector<int>& idx, Rational& coeff, InvariantKey& key) const;
    template <class Fn>
    void expand(const std::vector<const Sparse*>& ins, Fn&& fn) const;
    Affine eval(const CurveClass& beta, const std::vector<const Sparse*>& ins);
    void collect(const CurveClass& beta, const std::vector<const Sparse*>& ins, const Rational& scale,
                 std::map<InvariantKey, Rational>& out) const;
    Split build(const Sparse& ti, const Sparse& tj, const Sparse& tk, const Sparse& tl, const std::vector<int>& rest,
                const CurveClass& beta);
    void add_products(const Sparse& x, const Sparse& y, const Sparse& z, const Sparse& w,
                      const std::vector<int>& rest, const CurveClass& beta, const Rational& sign, Affine& acc);
    Affine close(const InvariantKey* target, const Split& split);

    Sparse cup_sparse(const Sparse& x, const Sparse& y) const;
    void note_citation(const std::string& c);

    EngineConfig config_;
    SeedTable seeds_;
    const ChowRing& ring_;
    mutable std::shared_mutex mutex_;

    std::unordered_map<InvariantKey, Affine, InvariantKeyHash> memo_;
    std::unordered_map<InvariantKey, Affine, InvariantKeyHash> provenance_memo_;
    std::unordered_set<InvariantKey, InvariantKeyHash> in_progress_;

    enum class TableState { pending, deriving, done };
    TableState table_state_ = TableState::pending;
    CurveClass deriving_beta_{};
    std::map<InvariantKey, int> variables_;
    std::map<InvariantKey, TwoPointEntry> two_point_;
    std::size_t equation_count_ = 0;

    std::optional<Provenance> provenance_;
    bool record_trace_ = false;
};

} // namespace qhilb
