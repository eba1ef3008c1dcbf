#pragma once

#include <optional>
#include <vector>

#include "pfext/singular.hpp"

namespace pfext {

// First-order system  w' = A(t) w + b(t)  equivalent to a scalar operator:
// w = (h, h', ..., h^{(n-1)}).  b is empty for homogeneous systems.
struct CompanionSystem {
    int dim = 0;
    std::vector<std::vector<RationalFunction>> A;  // dim x dim
    std::vector<RationalFunction> b;               // dim entries, or empty
    std::vector<cdouble> poles;                    // clustered poles of all entries

    bool inhomogeneous() const { return !b.empty(); }
};

namespace detail {

inline void collect_poles(std::vector<cdouble>& acc, const RationalFunction& f, double cluster_tol) {
    for (const auto& rc : f.poles(cluster_tol)) {
        bool found = false;
        for (const auto& p : acc)
            if (std::abs(p - rc.center) <= cluster_tol * std::max(1.0, std::abs(rc.center))) {
                found = true;
                break;
            }
        if (!found) acc.push_back(rc.center);
    }
}

}  // namespace detail

// Companion system of op (order n >= 1), optionally with inhomogeneity g:
// superdiagonal ones, last row -p_i/p_n, last entry of b equal to g/p_n.
// Built from the operator's own coefficients (not a rescaled normal form) so
// that b matches the equation exactly as stated.
inline CompanionSystem companion_system(const DifferentialOperator& op,
                                        const std::optional<RationalFunction>& g = std::nullopt,
                                        double cluster_tol = kClusterTol) {
    if (op.is_zero()) throw AllCoefficientsZero();
    const int n = op.order();
    if (n < 1) throw Error("companion system requires an operator of order at least 1");

    CompanionSystem sys;
    sys.dim = n;
    sys.A.assign(static_cast<std::size_t>(n), std::vector<RationalFunction>(static_cast<std::size_t>(n)));
    for (int i = 0; i + 1 < n; ++i) sys.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i) + 1] = RationalFunction(1.0);
    const RationalFunction& pn = op.coefficient(n);
    for (int j = 0; j < n; ++j)
        sys.A[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(j)] = -(op.coefficient(j) / pn);
    if (g) {
        sys.b.assign(static_cast<std::size_t>(n), RationalFunction());
        sys.b.back() = *g / pn;
    }

    for (const auto& row : sys.A)
        for (const auto& f : row) detail::collect_poles(sys.poles, f, cluster_tol);
    for (const auto& f : sys.b) detail::collect_poles(sys.poles, f, cluster_tol);
    std::sort(sys.poles.begin(), sys.poles.end(), [](cdouble a, cdouble b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return sys;
}

// Homogeneous system of dimension dim+1 whose fundamental matrix carries the
// inhomogeneous transport in its last column: A_aug = [[A, b], [0, 0]].
inline CompanionSystem augment(const CompanionSystem& sys) {
    if (!sys.inhomogeneous()) throw Error("augmenting a homogeneous system");
    CompanionSystem out;
    out.dim = sys.dim + 1;
    out.A.assign(static_cast<std::size_t>(out.dim), std::vector<RationalFunction>(static_cast<std::size_t>(out.dim)));
    for (int i = 0; i < sys.dim; ++i) {
        for (int j = 0; j < sys.dim; ++j) out.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sys.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        out.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(sys.dim)] = sys.b[static_cast<std::size_t>(i)];
    }
    out.poles = sys.poles;
    return out;
}

// Trace of A as a rational function: -p_{n-1}/p_n.  The Wronskian of any
// fundamental matrix satisfies  W' = tr(A) W  along a path.
inline RationalFunction system_trace(const CompanionSystem& sys) {
    RationalFunction tr;
    for (int i = 0; i < sys.dim; ++i) tr += sys.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return tr;
}

}  // namespace pfext
