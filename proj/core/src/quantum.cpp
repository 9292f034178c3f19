#include "qhilb/quantum.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <tuple>

#include "qhilb/errors.hpp"

namespace qhilb {

QMonomial q_of_beta(const CurveClass& beta) {
    if (!beta.effective())
        throw UsageError("q^beta needs an effective class, got " + beta.to_string());
    return QMonomial(beta.b, beta.a, beta.c);
}

QCohVector::QCohVector(int c_max) : c_max_(c_max) {
    for (auto& s : c_)
        s = QSeries(c_max);
}

QCohVector QCohVector::basis(int index, int c_max) {
    codim(index);
    QCohVector v(c_max);
    v[index] = QSeries::constant(1, c_max);
    return v;
}

QCohVector QCohVector::from_classical(const CohVector& v, int c_max) {
    QCohVector out(c_max);
    for (int i = 0; i < kBasisSize; ++i)
        out[i] = QSeries::constant(v[i], c_max);
    return out;
}

bool QCohVector::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const QSeries& s) { return s.is_zero(); });
}

CohVector QCohVector::at_q_zero() const {
    CohVector out;
    for (int i = 0; i < kBasisSize; ++i)
        out[i] = c_[static_cast<std::size_t>(i)].coeff(QMonomial{});
    return out;
}

QCohVector QCohVector::involution() const {
    QCohVector out(c_max_);
    for (int i = 0; i < kBasisSize; ++i) {
        QSeries s(c_max_);
        for (const auto& [m, c] : c_[static_cast<std::size_t>(i)].terms())
            s.add_term(QMonomial(m.e2, m.e1, m.e3), c);
        out[involution_index(i)] = s;
    }
    return out;
}

QCohVector& QCohVector::operator+=(const QCohVector& o) {
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

QCohVector& QCohVector::operator-=(const QCohVector& o) {
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

QCohVector& QCohVector::operator*=(const QSeries& s) {
    for (auto& x : c_)
        if (!x.is_zero())
            x = x * s;
    return *this;
}

QCohVector& QCohVector::operator*=(const Rational& s) {
    for (auto& x : c_)
        x *= s;
    return *this;
}

std::string QCohVector::to_string() const {
    std::vector<std::tuple<QMonomial, int, Rational>> terms;
    for (int i = 0; i < kBasisSize; ++i)
        for (const auto& [m, c] : c_[static_cast<std::size_t>(i)].terms())
            terms.emplace_back(m, i, c);
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
        if (std::get<0>(x) != std::get<0>(y))
            return std::get<0>(x) < std::get<0>(y);
        return std::get<1>(x) > std::get<1>(y);
    });
    std::string out;
    for (const auto& [m, i, c] : terms) {
        Rational mag = c.sign() < 0 ? -c : c;
        out += out.empty() ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
        if (mag != Rational(1))
            out += mag.to_string() + " ";
        if (!m.is_one())
            out += m.to_string() + " ";
        out += basis_name(i);
    }
    return out.empty() ? "0" : out;
}

QCohVector cup(const QCohVector& x, const QCohVector& y) {
    if (x.c_max() != y.c_max())
        throw ConfigError("cup of vectors with different truncations");
    const ChowRing& ring = ChowRing::standard();
    QCohVector out(x.c_max());
    for (int i = 0; i < kBasisSize; ++i) {
        if (x[i].is_zero())
            continue;
        for (int j = 0; j < kBasisSize; ++j) {
            if (y[j].is_zero())
                continue;
            const CohVector& c = ring.cup_basis(i, j);
            if (c.is_zero())
                continue;
            QSeries xy = x[i] * y[j];
            for (int f = 0; f < kBasisSize; ++f)
                if (!c[f].is_zero())
                    out[f] += xy * c[f];
        }
    }
    return out;
}

// ---------------------------------------------------------------- small product

QuantumProduct::QuantumProduct(Engine& engine, int c_max) : engine_(engine), c_max_(c_max) {
    if (c_max < 0)
        throw ConfigError("c_max must be non-negative");
    if (c_max > engine.config().c_max)
        throw ConfigError("product truncation " + std::to_string(c_max) + " exceeds the engine's c_max=" +
                          std::to_string(engine.config().c_max));
}

const QCohVector& QuantumProduct::basis_product(int i, int j) {
    codim(i);
    codim(j);
    if (i > j)
        std::swap(i, j);
    if (auto it = cache_.find({i, j}); it != cache_.end())
        return it->second;
    const ChowRing& ring = ChowRing::standard();
    const PairingMatrix& pm = ring.pairing();
    QCohVector out = QCohVector::from_classical(ring.cup_basis(i, j), c_max_);
    for (int s = 0; s <= 4; ++s) {
        const int cod_e = 2 * s + 4 - kCodim[static_cast<std::size_t>(i)] - kCodim[static_cast<std::size_t>(j)];
        if (cod_e < 0 || cod_e > 4)
            continue;
        for (int a = s; a >= 0; --a)
            for (int c = s == 0 ? 1 : 0; c <= c_max_; ++c) {
                const CurveClass beta{a, s - a, c};
                const QMonomial q = q_of_beta(beta);
                for (int e = 0; e < kBasisSize; ++e) {
                    if (kCodim[static_cast<std::size_t>(e)] != cod_e)
                        continue;
                    InvariantValue v = engine_.invariant(beta, std::vector<int>{i, j, e});
                    if (!v.is_known())
                        throw MissingInvariantError("<" + render_insertions({i, j, e}) + ">_" + beta.to_string(),
                                                    v.reason());
                    if (v.value().is_zero())
                        continue;
                    for (int f = 0; f < kBasisSize; ++f) {
                        const Rational& gi = pm.g_inv(static_cast<std::size_t>(e), static_cast<std::size_t>(f));
                        if (!gi.is_zero())
                            out[f].add_term(q, v.value() * gi);
                    }
                }
            }
    }
    return cache_.emplace(std::make_pair(i, j), std::move(out)).first->second;
}

QCohVector QuantumProduct::multiply(const QCohVector& x, const QCohVector& y) {
    if (x.c_max() != c_max_ || y.c_max() != c_max_)
        throw ConfigError("operand truncation differs from the product's c_max");
    QCohVector out(c_max_);
    for (int i = 0; i < kBasisSize; ++i) {
        if (x[i].is_zero())
            continue;
        for (int j = 0; j < kBasisSize; ++j) {
            if (y[j].is_zero())
                continue;
            QSeries xy = x[i] * y[j];
            if (xy.is_zero())
                continue;
            out += xy * basis_product(i, j);
        }
    }
    return out;
}

QCohVector small_product(Engine& engine, const QCohVector& x, const QCohVector& y, int c_max) {
    QuantumProduct p(engine, c_max);
    return p.multiply(x, y);
}

// ---------------------------------------------------------------- gamma

InvariantValue GammaSeries::coefficient(const CurveClass& beta, const YDegree& y) const {
    auto it = terms.find({beta, y});
    return it == terms.end() ? InvariantValue::known(0) : it->second;
}

bool GammaSeries::has_unknown() const {
    return std::any_of(terms.begin(), terms.end(), [](const auto& t) { return !t.second.is_known(); });
}

GammaSeries gamma(Engine& engine, int i, int j, int k, int y_truncation, int c_max) {
    for (int x : {i, j, k})
        codim(x);
    if (y_truncation < 0 || c_max < 0)
        throw ConfigError("truncations must be non-negative");
    GammaSeries g;
    g.i = i;
    g.j = j;
    g.k = k;
    g.y_truncation = y_truncation;
    g.c_max = c_max;
    YDegree alpha{};
    std::function<void(int, int)> rec = [&](int slot, int left) {
        if (slot == 10) {
            int n = 0, cod = kCodim[static_cast<std::size_t>(i)] + kCodim[static_cast<std::size_t>(j)] +
                            kCodim[static_cast<std::size_t>(k)];
            std::vector<int> ins{i, j, k};
            Rational fact = 1;
            for (int t = 0; t < 10; ++t) {
                n += alpha[static_cast<std::size_t>(t)];
                cod += alpha[static_cast<std::size_t>(t)] * kCodim[static_cast<std::size_t>(t + 4)];
                for (int r = 1; r <= alpha[static_cast<std::size_t>(t)]; ++r) {
                    fact *= r;
                    ins.push_back(t + 4);
                }
            }
            const int twice = cod - 4 - n;
            if (twice < 0 || twice % 2 != 0)
                return;
            const int s = twice / 2;
            for (int a = s; a >= 0; --a)
                for (int c = 0; c <= c_max; ++c) {
                    const CurveClass beta{a, s - a, c};
                    if (beta.is_zero())
                        continue;
                    InvariantValue v = engine.invariant(beta, ins);
                    if (v.is_known() && v.value().is_zero())
                        continue;
                    g.terms.emplace(std::make_pair(beta, alpha),
                                    v.is_known() ? InvariantValue::known(v.value() / fact) : v);
                }
            return;
        }
        for (int e = 0; e <= left; ++e) {
            alpha[static_cast<std::size_t>(slot)] = e;
            rec(slot + 1, left - e);
        }
        alpha[static_cast<std::size_t>(slot)] = 0;
    };
    rec(0, y_truncation);
    return g;
}

// ---------------------------------------------------------------- relations

namespace {

const std::string kCupGlyph = "\xE2\x88\xAA";

struct Token {
    enum Kind { num, tcls, qvar, pow, lp, rp, plus, minus, star, cupop, sum, end } kind;
    Rational value;
    int index = 0; // basis index, q index, exponent (-1 for c), or sum lower bound
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t p = 0;
    auto digits = [&](std::size_t from) {
        std::size_t q = from;
        while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q])))
            ++q;
        return q;
    };
    auto fail = [&](const std::string& what) {
        return UsageError("relation expression: " + what + " at offset " + std::to_string(p) + " in '" + s + "'");
    };
    while (p < s.size()) {
        char ch = s[p];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++p;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t q = digits(p);
            if (q < s.size() && s[q] == '/')
                q = digits(q + 1);
            out.push_back({Token::num, Rational::parse(s.substr(p, q - p)), 0});
            p = q;
        } else if (ch == 'T') {
            std::size_t q = digits(p + 1);
            if (q == p + 1)
                throw fail("expected a basis index after T");
            out.push_back({Token::tcls, {}, parse_basis(s.substr(p, q - p))});
            p = q;
        } else if (ch == 'q') {
            if (p + 1 >= s.size() || s[p + 1] < '1' || s[p + 1] > '3')
                throw fail("expected q1, q2 or q3");
            out.push_back({Token::qvar, {}, s[p + 1] - '0'});
            p += 2;
        } else if (ch == '^') {
            if (p + 1 < s.size() && s[p + 1] == 'c') {
                out.push_back({Token::pow, {}, -1});
                p += 2;
            } else {
                std::size_t q = digits(p + 1);
                if (q == p + 1)
                    throw fail("expected an exponent");
                out.push_back({Token::pow, {}, std::stoi(s.substr(p + 1, q - p - 1))});
                p = q;
            }
        } else if (s.compare(p, 8, "sum_{c>=") == 0) {
            std::size_t q = digits(p + 8);
            if (q == p + 8 || q >= s.size() || s[q] != '}')
                throw fail("malformed sum_{c>=N}");
            out.push_back({Token::sum, {}, std::stoi(s.substr(p + 8, q - p - 8))});
            p = q + 1;
        } else if (s.compare(p, kCupGlyph.size(), kCupGlyph) == 0) {
            out.push_back({Token::cupop, {}, 0});
            p += kCupGlyph.size();
        } else {
            Token::Kind k;
            switch (ch) {
            case '(': k = Token::lp; break;
            case ')': k = Token::rp; break;
            case '+': k = Token::plus; break;
            case '-': k = Token::minus; break;
            case '*': k = Token::star; break;
            default: throw fail(std::string("unexpected character '") + ch + "'");
            }
            out.push_back({k, {}, 0});
            ++p;
        }
    }
    out.push_back({Token::end, {}, 0});
    return out;
}

struct Node {
    enum Kind { num, tcls, qvar, add, neg, mul, pow, sum } kind;
    Rational value;
    int index = 0;
    char op = 'j'; // 'j' juxtaposition, '*' quantum, 'u' cup
    std::vector<std::unique_ptr<Node>> kids;
};

using NodePtr = std::unique_ptr<Node>;

class Parser {
public:
    explicit Parser(std::vector<Token> toks, std::string text) : t_(std::move(toks)), text_(std::move(text)) {}

    NodePtr parse() {
        NodePtr n = expr();
        if (peek().kind != Token::end)
            throw fail("trailing input");
        return n;
    }

private:
    const Token& peek() const { return t_[p_]; }
    Token next() { return t_[p_++]; }
    UsageError fail(const std::string& what) const {
        return UsageError("relation expression: " + what + " (token " + std::to_string(p_) + ") in '" + text_ + "'");
    }

    static NodePtr make(Node::Kind k) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        return n;
    }
    static NodePtr binary(Node::Kind k, char op, NodePtr a, NodePtr b) {
        auto n = make(k);
        n->op = op;
        n->kids.push_back(std::move(a));
        n->kids.push_back(std::move(b));
        return n;
    }

    NodePtr expr() {
        auto n = make(Node::add);
        bool negate = false;
        if (peek().kind == Token::plus || peek().kind == Token::minus)
            negate = next().kind == Token::minus;
        while (true) {
            NodePtr t = term();
            if (negate) {
                auto g = make(Node::neg);
                g->kids.push_back(std::move(t));
                t = std::move(g);
            }
            n->kids.push_back(std::move(t));
            if (peek().kind == Token::plus || peek().kind == Token::minus)
                negate = next().kind == Token::minus;
            else
                break;
        }
        return n;
    }

    static bool starts_factor(Token::Kind k) {
        return k == Token::num || k == Token::tcls || k == Token::qvar || k == Token::lp || k == Token::sum;
    }

    NodePtr term() {
        NodePtr n = factor();
        while (true) {
            Token::Kind k = peek().kind;
            if (k == Token::star || k == Token::cupop) {
                next();
                n = binary(Node::mul, k == Token::star ? '*' : 'u', std::move(n), factor());
            } else if (starts_factor(k)) {
                n = binary(Node::mul, 'j', std::move(n), factor());
            } else {
                return n;
            }
        }
    }

    NodePtr factor() {
        Token tok = next();
        NodePtr n;
        switch (tok.kind) {
        case Token::num:
            n = make(Node::num);
            n->value = tok.value;
            break;
        case Token::tcls:
            n = make(Node::tcls);
            n->index = tok.index;
            break;
        case Token::qvar:
            n = make(Node::qvar);
            n->index = tok.index;
            break;
        case Token::lp:
            n = expr();
            if (next().kind != Token::rp)
                throw fail("missing ')'");
            break;
        case Token::sum:
            n = make(Node::sum);
            n->index = tok.index;
            n->kids.push_back(term());
            return n;
        default:
            throw fail("expected a factor");
        }
        if (peek().kind == Token::pow) {
            Token e = next();
            if (n->kind != Node::tcls && n->kind != Node::qvar)
                throw fail("exponents apply only to T and q symbols");
            auto pw = make(Node::pow);
            pw->index = e.index;
            pw->kids.push_back(std::move(n));
            n = std::move(pw);
        }
        return n;
    }

    std::vector<Token> t_;
    std::string text_;
    std::size_t p_ = 0;
};

struct Value {
    bool vec = false;
    QSeries s;
    QCohVector v;
};

class Evaluator {
public:
    Evaluator(QuantumProduct& product, bool classical)
        : product_(product), classical_(classical), c_max_(product.c_max()) {}

    Value eval(const Node& n) {
        switch (n.kind) {
        case Node::num: return scalar(QSeries::constant(n.value, c_max_));
        case Node::tcls: return vector(QCohVector::basis(n.index, c_max_));
        case Node::qvar: return scalar(qpow(n.index, 1));
        case Node::pow: {
            int e = n.index < 0 ? bound_c() : n.index;
            const Node& base = *n.kids[0];
            if (base.kind == Node::qvar)
                return scalar(qpow(base.index, e));
            if (e < 1)
                throw UsageError("class exponents must be positive");
            QCohVector b = QCohVector::basis(base.index, c_max_), out = b;
            for (int r = 1; r < e; ++r)
                out = cup(out, b);
            return vector(out);
        }
        case Node::neg: {
            Value v = eval(*n.kids[0]);
            if (v.vec)
                v.v *= Rational(-1);
            else
                v.s = -v.s;
            return v;
        }
        case Node::add: {
            Value acc = scalar(QSeries(c_max_));
            bool first = true;
            for (const auto& k : n.kids) {
                Value v = eval(*k);
                if (first) {
                    acc = std::move(v);
                    first = false;
                } else if (acc.vec != v.vec) {
                    if (!(acc.vec ? v.s.is_zero() : acc.s.is_zero()))
                        throw UsageError("relation adds a scalar to a class");
                    if (!acc.vec)
                        acc = std::move(v);
                } else if (acc.vec) {
                    acc.v += v.v;
                } else {
                    acc.s += v.s;
                }
            }
            return acc;
        }
        case Node::mul: {
            Value a = eval(*n.kids[0]);
            Value b = eval(*n.kids[1]);
            if (a.vec && b.vec) {
                if (n.op == 'j')
                    throw UsageError("juxtaposed classes need an explicit '*' or the cup sign");
                if (n.op == 'u' || classical_)
                    return vector(cup(a.v, b.v));
                return vector(product_.multiply(a.v, b.v));
            }
            if (a.vec)
                return vector(b.s * a.v);
            if (b.vec)
                return vector(a.s * b.v);
            return scalar(a.s * b.s);
        }
        case Node::sum: {
            Value acc = scalar(QSeries(c_max_));
            int saved = c_;
            for (int c = n.index; c <= c_max_; ++c) {
                c_ = c;
                Value v = eval(*n.kids[0]);
                if (c == n.index)
                    acc = std::move(v);
                else if (acc.vec != v.vec)
                    throw UsageError("summand changes type");
                else if (acc.vec)
                    acc.v += v.v;
                else
                    acc.s += v.s;
            }
            c_ = saved;
            return acc;
        }
        }
        throw UsageError("bad relation node");
    }

private:
    int bound_c() const {
        if (c_ < 0)
            throw UsageError("exponent c used outside sum_{c>=N}");
        return c_;
    }
    QSeries qpow(int var, int e) const {
        if (e == 0)
            return QSeries::constant(1, c_max_);
        if (classical_)
            return QSeries(c_max_);
        QMonomial m(var == 1 ? e : 0, var == 2 ? e : 0, var == 3 ? e : 0);
        return QSeries::monomial(m, 1, c_max_);
    }
    Value scalar(QSeries s) const {
        Value v;
        v.s = std::move(s);
        v.v = QCohVector(c_max_);
        return v;
    }
    Value vector(QCohVector x) const {
        Value v;
        v.vec = true;
        v.s = QSeries(c_max_);
        v.v = std::move(x);
        return v;
    }

    QuantumProduct& product_;
    bool classical_;
    int c_max_;
    int c_ = -1;
};

std::string trim_copy(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::string mirror_expression(const std::string& expression) {
    std::string out;
    std::size_t p = 0;
    while (p < expression.size()) {
        char ch = expression[p];
        if (ch == 'T' && p + 1 < expression.size() && std::isdigit(static_cast<unsigned char>(expression[p + 1]))) {
            std::size_t q = p + 1;
            while (q < expression.size() && std::isdigit(static_cast<unsigned char>(expression[q])))
                ++q;
            out += basis_name(involution_index(parse_basis(expression.substr(p, q - p))));
            p = q;
        } else if (ch == 'q' && p + 1 < expression.size() && (expression[p + 1] == '1' || expression[p + 1] == '2')) {
            out += expression[p + 1] == '1' ? "q2" : "q1";
            p += 2;
        } else {
            out += ch;
            ++p;
        }
    }
    return out;
}

std::vector<Relation> parse_relations(std::istream& in) {
    std::vector<Relation> listed, mirrored;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#')
            continue;
        auto colon = t.find(':');
        if (colon == std::string::npos)
            throw UsageError("relations line " + std::to_string(lineno) + ": expected 'name [iota] : expression'");
        std::istringstream head(t.substr(0, colon));
        std::string name, flag;
        head >> name >> flag;
        if (name.empty() || (!flag.empty() && flag != "iota"))
            throw UsageError("relations line " + std::to_string(lineno) + ": bad header");
        Relation r{0, name, trim_copy(t.substr(colon + 1))};
        Parser(lex(r.expression), r.expression).parse();
        listed.push_back(r);
        if (flag == "iota")
            mirrored.push_back({0, name + "'", mirror_expression(r.expression)});
    }
    listed.insert(listed.end(), mirrored.begin(), mirrored.end());
    for (std::size_t i = 0; i < listed.size(); ++i)
        listed[i].id = static_cast<int>(i) + 1;
    return listed;
}

std::vector<Relation> load_relations(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open relations file '" + path + "'");
    return parse_relations(in);
}

std::string default_relations_path() {
    if (const char* env = std::getenv("QHILB_RELATIONS"); env && *env)
        return env;
    for (const char* dir : {QHILB_SOURCE_DATA_DIR, QHILB_INSTALL_DATA_DIR}) {
        std::filesystem::path p = std::filesystem::path(dir) / "relations.txt";
        if (std::filesystem::exists(p))
            return p.string();
    }
    return (std::filesystem::path(QHILB_INSTALL_DATA_DIR) / "relations.txt").string();
}

QCohVector evaluate_relation(const Relation& rel, QuantumProduct& product, bool classical) {
    NodePtr tree = Parser(lex(rel.expression), rel.expression).parse();
    Evaluator ev(product, classical);
    Value v = ev.eval(*tree);
    if (!v.vec) {
        if (!v.s.is_zero())
            throw UsageError("relation " + rel.name + " evaluates to a scalar");
        return QCohVector(product.c_max());
    }
    return v.v;
}

QCohVector verify_relation(const Relation& rel, QuantumProduct& product) {
    return evaluate_relation(rel, product, false);
}

std::vector<ResidualTerm> residual_terms(const QCohVector& residual) {
    std::vector<ResidualTerm> out;
    for (int i = 0; i < kBasisSize; ++i)
        for (const auto& [m, c] : residual[i].terms())
            out.push_back({i, m, c});
    return out;
}

} // namespace qhilb
