#include "qhilb/chow.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "qhilb/errors.hpp"

namespace qhilb {

namespace {

constexpr std::array<int, 5> kGenDegree{0, 1, 1, 1, 2};
constexpr int kTopDegree = 4;

using Exp = std::array<int, 4>; // exponents of T1..T4

int weight(const Exp& e) { return e[0] + e[1] + e[2] + 2 * e[3]; }

Exp exp_of(const std::vector<int>& gens) {
    Exp e{};
    for (int g : gens) {
        if (g < 1 || g > 4)
            throw UsageError("generator index must be in 1..4, got " + std::to_string(g));
        ++e[static_cast<std::size_t>(g - 1)];
    }
    return e;
}

Exp operator+(const Exp& x, const Exp& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]}; }

std::vector<Exp> monomials_of_degree(int d) {
    std::vector<Exp> out;
    for (int e4 = 0; 2 * e4 <= d; ++e4)
        for (int e1 = 0; e1 + 2 * e4 <= d; ++e1)
            for (int e2 = 0; e1 + e2 + 2 * e4 <= d; ++e2) {
                int e3 = d - e1 - e2 - 2 * e4;
                out.push_back({e1, e2, e3, e4});
            }
    std::sort(out.begin(), out.end());
    return out;
}

// Basis classes that are monomials in the generators.
const std::map<int, Exp>& monomial_basis() {
    static const std::map<int, Exp> m{
        {0, {0, 0, 0, 0}}, {1, {1, 0, 0, 0}}, {2, {0, 1, 0, 0}}, {3, {0, 0, 1, 0}},
        {4, {0, 0, 0, 1}}, {5, {1, 1, 0, 0}}, {6, {2, 0, 0, 0}}, {7, {0, 2, 0, 0}},
        {8, {1, 0, 1, 0}}, {9, {0, 1, 1, 0}}, {13, {0, 0, 0, 2}},
    };
    return m;
}

// Divisor pairings of T10, T11, T12 against T1, T2, T3.
constexpr int kCurvePairing[3][3] = {{1, 0, 1}, {0, 1, 1}, {1, 1, 1}};

} // namespace

int codim(int index) {
    if (index < 0 || index >= kBasisSize)
        throw UsageError("basis index out of range: " + std::to_string(index));
    return kCodim[static_cast<std::size_t>(index)];
}

std::string basis_name(int index) {
    codim(index);
    return "T" + std::to_string(index);
}

int parse_basis(std::string_view token) {
    if (token.size() < 2 || token.size() > 3 || token[0] != 'T')
        throw UsageError("not a basis token: '" + std::string(token) + "'");
    int v = 0;
    for (char ch : token.substr(1)) {
        if (ch < '0' || ch > '9')
            throw UsageError("not a basis token: '" + std::string(token) + "'");
        v = v * 10 + (ch - '0');
    }
    if (v >= kBasisSize || (token.size() == 3 && token[1] == '0'))
        throw UsageError("not a basis token: '" + std::string(token) + "'");
    return v;
}

std::string CurveClass::to_string() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

CurveClass CurveClass::parse(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return ch == '(' || ch == ')' || ch == ' '; }), s.end());
    std::array<int, 3> v{};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        std::size_t end = s.find(',', pos);
        if ((k < 2) != (end != std::string::npos))
            throw UsageError("curve class must be 'a,b,c': '" + std::string(text) + "'");
        std::string part = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        std::size_t used = 0;
        try {
            v[static_cast<std::size_t>(k)] = std::stoi(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size())
            throw UsageError("curve class must be 'a,b,c': '" + std::string(text) + "'");
        pos = end + 1;
    }
    return {v[0], v[1], v[2]};
}

int divisor_degree(int i, const CurveClass& beta) {
    switch (i) {
    case 1: return beta.b;
    case 2: return beta.a;
    case 3: return beta.c;
    default: throw UsageError("divisor_degree needs a divisor index 1..3, got " + std::to_string(i));
    }
}

CohVector CohVector::basis(int index, const Rational& coeff) {
    codim(index);
    CohVector v;
    v[index] = coeff;
    return v;
}

bool CohVector::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.is_zero(); });
}

bool CohVector::is_homogeneous(int k) const {
    for (int i = 0; i < kBasisSize; ++i)
        if (!c_[static_cast<std::size_t>(i)].is_zero() && kCodim[static_cast<std::size_t>(i)] != k)
            return false;
    return true;
}

int CohVector::degree() const {
    int d = -1;
    for (int i = 0; i < kBasisSize; ++i) {
        if (c_[static_cast<std::size_t>(i)].is_zero())
            continue;
        int k = kCodim[static_cast<std::size_t>(i)];
        if (d >= 0 && d != k)
            return -1;
        d = k;
    }
    return d;
}

CohVector& CohVector::operator+=(const CohVector& o) {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!o.c_[i].is_zero())
            c_[i] += o.c_[i];
    return *this;
}

CohVector& CohVector::operator-=(const CohVector& o) {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!o.c_[i].is_zero())
            c_[i] -= o.c_[i];
    return *this;
}

CohVector& CohVector::operator*=(const Rational& s) {
    for (auto& x : c_)
        if (!x.is_zero())
            x *= s;
    return *this;
}

std::string CohVector::to_string() const {
    std::string out;
    for (int i = kBasisSize - 1; i >= 0; --i) {
        const Rational& x = c_[static_cast<std::size_t>(i)];
        if (x.is_zero())
            continue;
        Rational mag = x.sign() < 0 ? -x : x;
        if (out.empty())
            out += x.sign() < 0 ? "-" : "";
        else
            out += x.sign() < 0 ? " - " : " + ";
        if (mag != Rational(1))
            out += mag.to_string() + " ";
        out += basis_name(i);
    }
    return out.empty() ? "0" : out;
}

int involution_index(int i) {
    codim(i);
    switch (i) {
    case 1: return 2;
    case 2: return 1;
    case 6: return 7;
    case 7: return 6;
    case 8: return 9;
    case 9: return 8;
    case 10: return 11;
    case 11: return 10;
    default: return i;
    }
}

CohVector involution(const CohVector& x) {
    CohVector out;
    for (int i = 0; i < kBasisSize; ++i)
        out[involution_index(i)] = x[i];
    return out;
}

const std::vector<std::vector<ChowRing::Term>>& ChowRing::classical_relations() {
    static const std::vector<std::vector<Term>> rels = [] {
        std::vector<std::vector<Term>> r{
            {{1, {3, 3}}, {-1, {1, 3}}, {-1, {2, 3}}, {1, {1, 2}}},
            {{1, {1, 1, 1}}},
            {{1, {1, 1, 2}}, {-2, {1, 4}}},
            {{1, {1, 1, 3}}, {-2, {1, 4}}},
            {{1, {1, 2, 3}}, {-2, {3, 4}}},
            {{1, {4, 4, 4}}},
            {{1, {4, 4, 1}}},
            {{1, {4, 4, 3}}},
            {{1, {1, 1, 4}}},
            {{1, {1, 2, 4}}, {-1, {4, 4}}},
            {{1, {1, 3, 4}}, {-1, {4, 4}}},
        };
        for (int k : {2, 3, 4, 7, 9, 11}) {
            std::vector<Term> mirrored;
            for (const auto& [c, gens] : r[static_cast<std::size_t>(k - 1)]) {
                std::vector<int> g;
                for (int x : gens)
                    g.push_back(x == 1 ? 2 : x == 2 ? 1 : x);
                mirrored.emplace_back(c, g);
            }
            r.push_back(mirrored);
        }
        return r;
    }();
    return rels;
}

struct ChowRing::Impl {
    // For each degree 0..4, the T-basis class of every monomial of that degree.
    std::array<std::map<Exp, CohVector>, kTopDegree + 1> classes;
};

ChowRing::ChowRing() { build(0, false); }

ChowRing::ChowRing(std::uint64_t shuffle_seed) { build(shuffle_seed, true); }

const ChowRing& ChowRing::standard() {
    static const ChowRing ring;
    return ring;
}

void ChowRing::build(std::uint64_t shuffle_seed, bool shuffle) {
    std::mt19937_64 rng(shuffle_seed);
    auto impl = std::make_shared<Impl>();

    std::vector<std::vector<std::pair<Exp, Rational>>> relations;
    for (const auto& rel : classical_relations()) {
        std::vector<std::pair<Exp, Rational>> p;
        for (const auto& [c, gens] : rel)
            p.emplace_back(exp_of(gens), c);
        relations.push_back(std::move(p));
    }

    // Per degree: reduction of each monomial to the standard (non-pivot) monomials.
    std::array<std::vector<Exp>, kTopDegree + 2> monos;
    std::array<std::vector<std::size_t>, kTopDegree + 2> standard;
    std::array<std::map<Exp, std::vector<Rational>>, kTopDegree + 2> reduced;
    for (int d = 0; d <= kTopDegree + 1; ++d) {
        auto& ms = monos[static_cast<std::size_t>(d)];
        ms = monomials_of_degree(d);
        std::map<Exp, std::size_t> index;
        for (std::size_t i = 0; i < ms.size(); ++i)
            index[ms[i]] = i;
        RationalMatrix rows(0, ms.size());
        for (const auto& rel : relations) {
            int df = weight(rel.front().first);
            if (df > d)
                continue;
            for (const Exp& m : monomials_of_degree(d - df)) {
                std::vector<Rational> row(ms.size());
                for (const auto& [e, c] : rel)
                    row[index.at(e + m)] += c;
                rows.append_row(row);
            }
        }
        std::vector<std::size_t> order(ms.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (shuffle)
            std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::size_t> pivots = rows.rows() ? rref(rows, order) : std::vector<std::size_t>{};
        std::vector<bool> is_pivot(ms.size(), false);
        for (auto p : pivots)
            is_pivot[p] = true;
        auto& std_cols = standard[static_cast<std::size_t>(d)];
        for (std::size_t j = 0; j < ms.size(); ++j)
            if (!is_pivot[j])
                std_cols.push_back(j);
        dims_[static_cast<std::size_t>(d)] = static_cast<int>(std_cols.size());
        for (std::size_t i = 0; i < ms.size(); ++i) {
            std::vector<Rational> v(std_cols.size());
            if (!is_pivot[i]) {
                v[static_cast<std::size_t>(std::find(std_cols.begin(), std_cols.end(), i) - std_cols.begin())] = 1;
            } else {
                std::size_t r = static_cast<std::size_t>(std::find(pivots.begin(), pivots.end(), i) - pivots.begin());
                for (std::size_t s = 0; s < std_cols.size(); ++s)
                    v[s] = -rows(r, std_cols[s]);
            }
            reduced[static_cast<std::size_t>(d)][ms[i]] = std::move(v);
        }
    }
    const std::array<int, 6> expected{1, 3, 6, 3, 1, 0};
    if (dims_ != expected)
        throw ConsistencyError("classical relations give the wrong graded dimensions");

    // Degree map: the unique standard monomial in degree 4, normalised by T4^2.
    const Exp t4sq{0, 0, 0, 2};
    const Rational kappa = reduced[4].at(t4sq)[0];
    if (kappa.is_zero())
        throw ConsistencyError("T4^2 vanishes in the classical ring");
    auto integral = [&](const Exp& m) { return weight(m) == kTopDegree ? reduced[4].at(m)[0] / kappa : Rational{}; };

    // Degrees 0..2 and 4: coordinates through the monomial basis classes.
    for (int d : {0, 1, 2}) {
        std::vector<int> basis;
        for (const auto& [i, e] : monomial_basis())
            if (weight(e) == d)
                basis.push_back(i);
        const std::size_t n = basis.size();
        RationalMatrix b(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            const auto& v = reduced[static_cast<std::size_t>(d)].at(monomial_basis().at(basis[r]));
            for (std::size_t s = 0; s < n; ++s)
                b(r, s) = v[s];
        }
        RationalMatrix binv = inverse(b);
        for (const Exp& m : monos[static_cast<std::size_t>(d)]) {
            const auto& v = reduced[static_cast<std::size_t>(d)].at(m);
            CohVector out;
            for (std::size_t r = 0; r < n; ++r) {
                Rational x;
                for (std::size_t s = 0; s < n; ++s)
                    x += v[s] * binv(s, r);
                out[basis[r]] = x;
            }
            impl->classes[static_cast<std::size_t>(d)][m] = out;
        }
    }
    for (const Exp& m : monos[4])
        impl->classes[4][m] = CohVector::basis(kPointClass, integral(m));

    // Degree 3: coordinates through the pairing with T1, T2, T3.
    RationalMatrix curve(3, 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 3; ++s)
            curve(r, s) = kCurvePairing[r][s];
    RationalMatrix curve_inv = inverse(curve);
    for (const Exp& m : monos[3]) {
        std::array<Rational, 3> p;
        for (int k = 0; k < 3; ++k) {
            Exp t{};
            t[static_cast<std::size_t>(k)] = 1;
            p[static_cast<std::size_t>(k)] = integral(m + t);
        }
        CohVector out;
        for (std::size_t e = 0; e < 3; ++e) {
            Rational x;
            for (std::size_t k = 0; k < 3; ++k)
                x += p[k] * curve_inv(k, e);
            out[10 + static_cast<int>(e)] = x;
        }
        impl->classes[3][m] = out;
    }

    // Polynomial representatives of every basis class.
    std::array<std::vector<std::pair<Exp, Rational>>, kBasisSize> reps;
    for (const auto& [i, e] : monomial_basis())
        reps[static_cast<std::size_t>(i)] = {{e, Rational(1)}};
    {
        std::vector<Exp> chosen;
        RationalMatrix pick(0, 3);
        for (const Exp& m : monos[3]) {
            RationalMatrix trial = pick;
            const CohVector& v = impl->classes[3].at(m);
            trial.append_row({v[10], v[11], v[12]});
            RationalMatrix reduced_trial = trial;
            if (rref(reduced_trial).size() == trial.rows()) {
                pick = trial;
                chosen.push_back(m);
            }
            if (chosen.size() == 3)
                break;
        }
        if (chosen.size() != 3)
            throw ConsistencyError("codimension-3 piece is not spanned by monomials");
        RationalMatrix pinv = inverse(pick);
        for (std::size_t e = 0; e < 3; ++e)
            for (std::size_t r = 0; r < 3; ++r)
                if (!pinv(e, r).is_zero())
                    reps[10 + e].emplace_back(chosen[r], pinv(e, r));
    }

    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) {
            CohVector out;
            if (kCodim[static_cast<std::size_t>(i)] + kCodim[static_cast<std::size_t>(j)] <= kTopDegree) {
                for (const auto& [ei, ci] : reps[static_cast<std::size_t>(i)])
                    for (const auto& [ej, cj] : reps[static_cast<std::size_t>(j)]) {
                        Exp m = ei + ej;
                        out += (ci * cj) * impl->classes[static_cast<std::size_t>(weight(m))].at(m);
                    }
            }
            cup_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = out;
        }

    pairing_.g = RationalMatrix(kBasisSize, kBasisSize);
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j)
            pairing_.g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = cup_basis(i, j)[kPointClass];
    pairing_.g_inv = inverse(pairing_.g);
    impl_ = std::move(impl);
}

CohVector ChowRing::normal_form(const std::vector<int>& generators) const {
    Exp e = exp_of(generators);
    int d = weight(e);
    if (d > kTopDegree)
        return {};
    return impl_->classes[static_cast<std::size_t>(d)].at(e);
}

CohVector ChowRing::cup(const CohVector& x, const CohVector& y) const {
    CohVector out;
    for (int i = 0; i < kBasisSize; ++i) {
        if (x[i].is_zero())
            continue;
        for (int j = 0; j < kBasisSize; ++j) {
            if (y[j].is_zero())
                continue;
            const CohVector& c = cup_basis(i, j);
            if (!c.is_zero())
                out += (x[i] * y[j]) * c;
        }
    }
    return out;
}

CohVector cup(const CohVector& x, const CohVector& y) { return ChowRing::standard().cup(x, y); }

Rational integrate(const CohVector& x) { return x[kPointClass]; }

std::string format_cup_table(const CupTable& table) {
    std::ostringstream os;
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) {
            os << i << ' ' << j << " ->";
            for (int f = 0; f < kBasisSize; ++f)
                os << (f ? "," : " ") << table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][f];
            os << '\n';
        }
    return os.str();
}

CupTable parse_cup_table(std::istream& in) {
    CupTable table{};
    std::array<std::array<bool, kBasisSize>, kBasisSize> seen{};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        auto fail = [&] { return UsageError("cup table line " + std::to_string(lineno) + " is malformed"); };
        auto arrow = line.find("->");
        if (arrow == std::string::npos)
            throw fail();
        std::istringstream head(line.substr(0, arrow));
        int i = -1, j = -1;
        if (!(head >> i >> j) || i < 0 || j < 0 || i >= kBasisSize || j >= kBasisSize)
            throw fail();
        std::string body = line.substr(arrow + 2);
        body.erase(std::remove(body.begin(), body.end(), ' '), body.end());
        std::istringstream cells(body);
        std::string cell;
        int f = 0;
        CohVector v;
        while (std::getline(cells, cell, ',')) {
            if (f >= kBasisSize)
                throw fail();
            v[f++] = Rational::parse(cell);
        }
        if (f != kBasisSize)
            throw fail();
        table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    }
    for (const auto& row : seen)
        for (bool b : row)
            if (!b)
                throw UsageError("cup table is missing entries");
    return table;
}

} // namespace qhilb
