#include "qhilb/affine.hpp"

namespace qhilb::detail {

Affine Affine::variable(int id) {
    Affine a;
    a.terms_.emplace_back(id, Rational(1));
    return a;
}

Affine Affine::unknown(std::string reason) {
    Affine a;
    a.reason_ = std::make_shared<const std::string>(std::move(reason));
    return a;
}

const std::string& Affine::reason() const {
    static const std::string empty;
    return reason_ ? *reason_ : empty;
}

void Affine::add_scaled(const Affine& x, const Rational& s) {
    if (is_unknown() || s.is_zero() || x.is_zero())
        return;
    if (x.is_unknown()) {
        *this = x;
        return;
    }
    constant_ += x.constant_ * s;
    if (x.terms_.empty())
        return;
    std::vector<std::pair<int, Rational>> merged;
    merged.reserve(terms_.size() + x.terms_.size());
    auto i = terms_.begin();
    auto j = x.terms_.begin();
    while (i != terms_.end() || j != x.terms_.end()) {
        if (j == x.terms_.end() || (i != terms_.end() && i->first < j->first)) {
            merged.push_back(*i++);
        } else if (i == terms_.end() || j->first < i->first) {
            merged.emplace_back(j->first, j->second * s);
            ++j;
        } else {
            Rational c = i->second + j->second * s;
            if (!c.is_zero())
                merged.emplace_back(i->first, std::move(c));
            ++i;
            ++j;
        }
    }
    terms_ = std::move(merged);
}

Affine Affine::scaled(const Rational& s) const {
    if (s.is_zero())
        return {};
    if (is_unknown())
        return *this;
    Affine out(*this);
    out.constant_ *= s;
    for (auto& t : out.terms_)
        t.second *= s;
    return out;
}

Affine operator*(const Affine& x, const Affine& y) {
    if (x.is_zero() || y.is_zero())
        return {};
    if (x.is_unknown())
        return x;
    if (y.is_unknown())
        return y;
    if (x.has_variables() && y.has_variables())
        return Affine::unknown("product of two undetermined two-point invariants");
    if (!x.has_variables())
        return y.scaled(x.constant_);
    return x.scaled(y.constant_);
}

} // namespace qhilb::detail
