#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qhilb/rational.hpp"

namespace qhilb::detail {

// constant + Σ coeff·x_id, or an unknown value carrying a reason.
// Variables stand for two-point invariants that are being solved for.
class Affine {
public:
    Affine() = default;
    explicit Affine(Rational c) : constant_(std::move(c)) {}

    static Affine variable(int id);
    static Affine unknown(std::string reason);

    bool is_unknown() const noexcept { return static_cast<bool>(reason_); }
    bool has_variables() const noexcept { return !terms_.empty(); }
    // Exact zero: known, no variables, zero constant.
    bool is_zero() const noexcept { return !reason_ && terms_.empty() && constant_.is_zero(); }

    const Rational& constant() const noexcept { return constant_; }
    const std::vector<std::pair<int, Rational>>& terms() const noexcept { return terms_; }
    const std::string& reason() const;

    void add_scaled(const Affine& x, const Rational& s);
    Affine& operator+=(const Affine& x) { add_scaled(x, Rational(1)); return *this; }
    Affine scaled(const Rational& s) const;

    // Product; an exact zero annihilates anything, two variable-bearing factors give Unknown.
    friend Affine operator*(const Affine& x, const Affine& y);

    // Replaces variables with the values returned by `lookup(id)` (which may be Unknown).
    template <class Fn>
    Affine substitute(Fn&& lookup) const {
        if (is_unknown() || terms_.empty())
            return *this;
        Affine out(constant_);
        for (const auto& [id, c] : terms_)
            out.add_scaled(lookup(id), c);
        return out;
    }

private:
    Rational constant_;
    std::vector<std::pair<int, Rational>> terms_; // sorted by id, nonzero coefficients
    std::shared_ptr<const std::string> reason_;
};

} // namespace qhilb::detail
