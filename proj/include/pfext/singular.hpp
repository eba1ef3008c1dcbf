#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pfext/operator.hpp"

namespace pfext {

struct SingularPoint {
    bool at_infinity = false;
    cdouble location = 0.0;          // meaningful when !at_infinity
    bool is_singular = true;         // false: ordinary point analysed on request
    bool is_regular = true;          // Fuchsian at this point
    int leading_multiplicity = 0;    // multiplicity as a root of the leading coefficient
    std::vector<cdouble> exponents;  // roots of the local exponent polynomial, with multiplicity
    Polynomial indicial;             // the local exponent polynomial itself
};

struct SingularityProfile {
    DifferentialOperator op;  // canonical polynomial form
    std::vector<SingularPoint> points;  // finite singular points sorted by (re, im), then infinity
    bool fuchsian = true;
    double separation = 1.0;  // min pairwise distance between finite singular points

    std::vector<cdouble> finite_locations() const {
        std::vector<cdouble> out;
        for (const auto& p : points)
            if (!p.at_infinity) out.push_back(p.location);
        return out;
    }
    const SingularPoint* at(cdouble z, double tol = 1e-9) const {
        for (const auto& p : points)
            if (!p.at_infinity && std::abs(p.location - z) <= tol * std::max(1.0, std::abs(z))) return &p;
        return nullptr;
    }
    const SingularPoint& infinity() const {
        for (const auto& p : points)
            if (p.at_infinity) return p;
        throw Error("profile has no entry for infinity");
    }
};

namespace detail {

// Extract the polynomial coefficient list of a canonical-form operator.
inline std::vector<Polynomial> polynomial_coefficients(const DifferentialOperator& op) {
    std::vector<Polynomial> out;
    out.reserve(op.coefficients().size());
    for (const auto& c : op.coefficients()) {
        if (!c.is_polynomial()) throw Error("operator is not in cleared polynomial form");
        out.push_back(c.num());
    }
    return out;
}

// Falling factorial rho(rho-1)...(rho-i+1) as a polynomial in rho.
inline Polynomial falling_factorial(int i) {
    Polynomial p(1.0);
    for (int m = 0; m < i; ++m) p = p * Polynomial(std::vector<cdouble>{cdouble(-m), 1.0});
    return p;
}

struct LocalData {
    int nu = 0;                // min over i of (order of q_i at the point) - i
    Polynomial indicial;       // exponent polynomial at the point
    bool regular = false;      // nu == ord(q_n) - n
    int leading_order = 0;     // order of vanishing of the leading coefficient
};

// Local Frobenius data of a cleared-form operator at a finite point `center`:
// shift coordinates so the point sits at 0, read off the lowest valuation
// nu = min_i (ord q_i - i), and assemble the exponent polynomial
//   I(rho) = sum_i q_{i, nu+i} * rho(rho-1)...(rho-i+1).
// The point is regular (in the Fuchs sense) exactly when the minimum is
// attained by the leading coefficient: nu == ord(q_n) - n.
inline LocalData local_data(const std::vector<Polynomial>& q, cdouble center) {
    const int n = static_cast<int>(q.size()) - 1;
    LocalData out;
    std::vector<Polynomial> shifted;
    shifted.reserve(q.size());
    std::vector<int> ord(q.size(), -1);
    int nu = std::numeric_limits<int>::max();
    for (int i = 0; i <= n; ++i) {
        shifted.push_back(q[static_cast<std::size_t>(i)].shifted(center));
        ord[static_cast<std::size_t>(i)] = shifted.back().order_at_zero();
        if (ord[static_cast<std::size_t>(i)] >= 0) nu = std::min(nu, ord[static_cast<std::size_t>(i)] - i);
    }
    if (nu == std::numeric_limits<int>::max()) throw AllCoefficientsZero();
    out.nu = nu;
    out.leading_order = ord.back() < 0 ? std::numeric_limits<int>::max() : ord.back();
    out.regular = (ord.back() >= 0) && (nu == ord.back() - n);

    Polynomial I;
    for (int i = 0; i <= n; ++i) {
        const int k = nu + i;
        if (k < 0 || ord[static_cast<std::size_t>(i)] < 0 || k < ord[static_cast<std::size_t>(i)]) continue;
        const cdouble c = shifted[static_cast<std::size_t>(i)].coefficient(k);
        if (c == cdouble(0.0)) continue;
        I += c * falling_factorial(i);
    }
    out.indicial = I;
    return out;
}

inline SingularPoint make_point(const std::vector<Polynomial>& q, cdouble center, bool at_inf, int lead_mult,
                                double cluster_tol) {
    LocalData ld = local_data(q, center);
    SingularPoint p;
    p.at_infinity = at_inf;
    p.location = at_inf ? cdouble(0.0) : center;
    p.is_singular = lead_mult > 0;
    p.is_regular = ld.regular;
    p.leading_multiplicity = lead_mult;
    p.indicial = ld.indicial;
    for (const auto& rc : roots(ld.indicial, cluster_tol))
        for (int m = 0; m < rc.multiplicity; ++m) p.exponents.push_back(rc.center);
    return p;
}

}  // namespace detail

// Full singularity analysis: canonical form, all finite singular points with
// their exponents, and the point at infinity (via the substitution t = 1/s).
inline SingularityProfile singularities(const DifferentialOperator& op_in, double cluster_tol = kClusterTol,
                                        double rel_tol = kGcdRelTol) {
    DifferentialOperator op = normalize(op_in, rel_tol);
    if (op.order() < 1) throw Error("singularity analysis requires an operator of order at least 1");
    SingularityProfile prof;
    prof.op = op;
    const std::vector<Polynomial> q = detail::polynomial_coefficients(op);

    if (q.back().degree() >= 1) {
        for (const auto& rc : roots(q.back(), cluster_tol))
            prof.points.push_back(detail::make_point(q, rc.center, false, rc.multiplicity, cluster_tol));
    }
    std::sort(prof.points.begin(), prof.points.end(), [](const SingularPoint& a, const SingularPoint& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });

    DifferentialOperator pb = pullback_to_infinity(op, rel_tol);
    const std::vector<Polynomial> qs = detail::polynomial_coefficients(pb);
    const int lead_ord = std::max(qs.back().order_at_zero(), 0);
    prof.points.push_back(detail::make_point(qs, 0.0, true, lead_ord, cluster_tol));

    prof.fuchsian = std::all_of(prof.points.begin(), prof.points.end(),
                                [](const SingularPoint& p) { return p.is_regular; });

    const std::vector<cdouble> fin = prof.finite_locations();
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fin.size(); ++i)
        for (std::size_t j = i + 1; j < fin.size(); ++j) sep = std::min(sep, std::abs(fin[i] - fin[j]));
    prof.separation = std::isfinite(sep) ? sep : 1.0;
    return prof;
}

// Exponents at one finite point (regular singular or ordinary).  Throws
// IrregularPoint when the Fuchs criterion fails there.
inline std::vector<cdouble> indicial_exponents(const DifferentialOperator& op_in, cdouble center,
                                               double cluster_tol = kClusterTol) {
    DifferentialOperator op = normalize(op_in);
    detail::LocalData ld = detail::local_data(detail::polynomial_coefficients(op), center);
    if (!ld.regular) throw IrregularPoint("point is not regular singular: exponents are undefined");
    std::vector<cdouble> out;
    for (const auto& rc : roots(ld.indicial, cluster_tol))
        for (int m = 0; m < rc.multiplicity; ++m) out.push_back(rc.center);
    return out;
}

inline std::vector<cdouble> indicial_exponents_at_infinity(const DifferentialOperator& op_in,
                                                           double cluster_tol = kClusterTol) {
    DifferentialOperator pb = pullback_to_infinity(normalize(op_in));
    detail::LocalData ld = detail::local_data(detail::polynomial_coefficients(pb), 0.0);
    if (!ld.regular) throw IrregularPoint("infinity is not regular singular: exponents are undefined");
    std::vector<cdouble> out;
    for (const auto& rc : roots(ld.indicial, cluster_tol))
        for (int m = 0; m < rc.multiplicity; ++m) out.push_back(rc.center);
    return out;
}

// Throws NonFuchsianInput naming the first irregular point.
inline SingularityProfile require_fuchsian(const DifferentialOperator& op, double cluster_tol = kClusterTol) {
    SingularityProfile prof = singularities(op, cluster_tol);
    if (!prof.fuchsian) {
        for (const auto& p : prof.points)
            if (!p.is_regular)
                throw NonFuchsianInput(p.at_infinity
                                           ? std::string("irregular singular point at infinity")
                                           : "irregular singular point at " + format_complex(p.location));
    }
    return prof;
}

}  // namespace pfext
