#pragma once

#include <utility>
#include <vector>

#include "pfext/rational.hpp"

namespace pfext {

// Linear ordinary differential operator  sum_i p_i(t) (d/dt)^i  with rational
// coefficients.  coefficient(i) multiplies the i-th derivative.  The stored
// list never has a zero top entry except for the zero operator, which is kept
// as a single zero coefficient.
class DifferentialOperator {
public:
    DifferentialOperator() : coeffs_{RationalFunction()} {}
    explicit DifferentialOperator(std::vector<RationalFunction> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(RationalFunction());
        while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    static DifferentialOperator constant(const RationalFunction& f) {
        return DifferentialOperator(std::vector<RationalFunction>{f});
    }
    static DifferentialOperator derivative() {
        return DifferentialOperator(std::vector<RationalFunction>{RationalFunction(), RationalFunction(1.0)});
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0].is_zero(); }

    const RationalFunction& coefficient(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    const std::vector<RationalFunction>& coefficients() const { return coeffs_; }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = order(); i >= 0; --i) {
            if (coeffs_[static_cast<std::size_t>(i)].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + coeffs_[static_cast<std::size_t>(i)].to_string() + ")";
            if (i >= 1) out += "*D";
            if (i >= 2) out += "^" + std::to_string(i);
        }
        return out;
    }

private:
    std::vector<RationalFunction> coeffs_;
};

inline DifferentialOperator operator+(const DifferentialOperator& a, const DifferentialOperator& b) {
    std::vector<RationalFunction> r(static_cast<std::size_t>(std::max(a.order(), b.order())) + 1);
    for (int i = 0; i <= a.order(); ++i) r[static_cast<std::size_t>(i)] += a.coefficient(i);
    for (int i = 0; i <= b.order(); ++i) r[static_cast<std::size_t>(i)] += b.coefficient(i);
    return DifferentialOperator(std::move(r));
}

inline DifferentialOperator operator-(const DifferentialOperator& a, const DifferentialOperator& b) {
    std::vector<RationalFunction> r(static_cast<std::size_t>(std::max(a.order(), b.order())) + 1);
    for (int i = 0; i <= a.order(); ++i) r[static_cast<std::size_t>(i)] += a.coefficient(i);
    for (int i = 0; i <= b.order(); ++i) r[static_cast<std::size_t>(i)] -= b.coefficient(i);
    return DifferentialOperator(std::move(r));
}

inline DifferentialOperator operator*(const RationalFunction& f, const DifferentialOperator& a) {
    std::vector<RationalFunction> r;
    r.reserve(static_cast<std::size_t>(a.order()) + 1);
    for (const auto& c : a.coefficients()) r.push_back(f * c);
    return DifferentialOperator(std::move(r));
}

// Apply the operator to a rational function.
inline RationalFunction apply(const DifferentialOperator& op, const RationalFunction& f) {
    RationalFunction acc;
    RationalFunction d = f;
    for (int i = 0; i <= op.order(); ++i) {
        if (!op.coefficient(i).is_zero()) acc += op.coefficient(i) * d;
        if (i < op.order()) d = d.derivative();
    }
    return acc;
}

// Operator composition L∘R: coefficients follow from the Leibniz rule,
//   (d/dt)^i ∘ q(t) = sum_m C(i,m) q^(m)(t) (d/dt)^{i-m}.
inline DifferentialOperator compose(const DifferentialOperator& L, const DifferentialOperator& R) {
    if (L.is_zero() || R.is_zero()) return DifferentialOperator();
    const int oL = L.order();
    const int oR = R.order();
    std::vector<RationalFunction> out(static_cast<std::size_t>(oL + oR) + 1);

    // q_j^{(m)} for m up to oL
    std::vector<std::vector<RationalFunction>> derivs(static_cast<std::size_t>(oR) + 1);
    for (int j = 0; j <= oR; ++j) {
        derivs[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(oL) + 1);
        derivs[static_cast<std::size_t>(j)][0] = R.coefficient(j);
        for (int m = 1; m <= oL; ++m)
            derivs[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] =
                derivs[static_cast<std::size_t>(j)][static_cast<std::size_t>(m - 1)].derivative();
    }

    for (int i = 0; i <= oL; ++i) {
        if (L.coefficient(i).is_zero()) continue;
        double binom = 1.0;
        for (int m = 0; m <= i; ++m) {
            if (m > 0) binom = binom * double(i - m + 1) / double(m);
            for (int j = 0; j <= oR; ++j) {
                const RationalFunction& qd = derivs[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
                if (qd.is_zero()) continue;
                out[static_cast<std::size_t>(i - m + j)] += RationalFunction(binom) * L.coefficient(i) * qd;
            }
        }
    }
    return DifferentialOperator(std::move(out));
}

// Canonical polynomial form: clear all denominators, remove the common
// polynomial content of the coefficient list, and scale the leading
// coefficient monic.  A zero coefficient blocks content removal (it divides
// only the trivial factor), so e.g. [0, t] is already canonical while [t, t^2]
// becomes [1, t].  Throws AllCoefficientsZero for the zero operator.
inline DifferentialOperator normalize(const DifferentialOperator& op, double rel_tol = kGcdRelTol) {
    if (op.is_zero()) throw AllCoefficientsZero();

    Polynomial common_den(1.0);
    for (const auto& c : op.coefficients())
        if (!c.is_zero()) common_den = lcm(common_den, c.den(), rel_tol);

    std::vector<Polynomial> nums;
    nums.reserve(op.coefficients().size());
    bool any_zero = false;
    for (const auto& c : op.coefficients()) {
        if (c.is_zero()) {
            nums.emplace_back();
            any_zero = true;
            continue;
        }
        RationalFunction cleared = c * RationalFunction(common_den);
        if (!cleared.is_polynomial())
            throw Error("denominator clearing left a non-polynomial coefficient");
        nums.push_back(cleared.num());
    }

    if (!any_zero) {
        Polynomial content;
        for (const auto& p : nums) content = gcd(content, p, rel_tol);
        if (content.degree() >= 1)
            for (auto& p : nums) p = divide_out(p, content, rel_tol);
    }

    const cdouble lead = nums.back().leading();
    std::vector<RationalFunction> out;
    out.reserve(nums.size());
    for (auto& p : nums) out.emplace_back(p / lead);
    return DifferentialOperator(std::move(out));
}

// Substitute t = 1/s in a rational function of t, producing a rational
// function of s.
inline RationalFunction substitute_reciprocal(const RationalFunction& f) {
    if (f.is_zero()) return f;
    const int dn = f.num().degree();
    const int dd = f.den().degree();
    Polynomial rn = f.num().reversed();
    Polynomial rd = f.den().reversed();
    if (dd >= dn) return RationalFunction(rn.times_power(dd - dn), rd);
    return RationalFunction(rn, rd.times_power(dn - dd));
}

// The operator seen from the chart at infinity: substitute t = 1/s, so that
// d/dt becomes -s^2 d/ds, then renormalize.  Solutions of the result in s
// correspond to solutions of the input in t = 1/s.
inline DifferentialOperator pullback_to_infinity(const DifferentialOperator& op, double rel_tol = kGcdRelTol) {
    if (op.is_zero()) throw AllCoefficientsZero();
    const int n = op.order();

    // powers of (-s^2 d/ds)
    RationalFunction ms2(Polynomial(std::vector<cdouble>{0.0, 0.0, -1.0}));
    DifferentialOperator gen(std::vector<RationalFunction>{RationalFunction(), ms2});
    std::vector<DifferentialOperator> pow;
    pow.reserve(static_cast<std::size_t>(n) + 1);
    pow.push_back(DifferentialOperator::constant(RationalFunction(1.0)));
    for (int i = 1; i <= n; ++i) pow.push_back(compose(gen, pow.back()));

    DifferentialOperator acc;
    for (int i = 0; i <= n; ++i) {
        const RationalFunction& p = op.coefficient(i);
        if (p.is_zero()) continue;
        acc = acc + substitute_reciprocal(p) * pow[static_cast<std::size_t>(i)];
    }
    return normalize(acc, rel_tol);
}

}  // namespace pfext
