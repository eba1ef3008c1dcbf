#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pfext/companion.hpp"
#include "pfext/path.hpp"

namespace pfext {

// Result of analytic continuation along a path.  For w' = A w + b the
// continued solution satisfies  w(end) = matrix * w(start) + particular_shift;
// particular_shift is zero for homogeneous systems.  error_estimate is a
// conservative absolute bound on the entrywise error of `matrix` (and shift),
// accumulated from per-step series tails and rounding.
struct TransferResult {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd particular_shift;
    double error_estimate = 0.0;
    long steps = 0;
};

namespace detail {

// Taylor data of the system matrix at one expansion center: coefficient
// matrices A_k of A(center + u) = sum A_k u^k, and the recursion outputs
// Y_m with Y_0 = I, (m+1) Y_{m+1} = sum_{k<=m} A_k Y_{m-k}, so that the local
// fundamental matrix is S(u) = sum Y_m u^m.
struct StepSeries {
    int dim;
    std::vector<Eigen::MatrixXcd> A;  // taylor_order_max coefficient matrices
    std::vector<Eigen::MatrixXcd> Y;  // grown on demand

    StepSeries(const CompanionSystem& sys, cdouble center, int k_max) : dim(sys.dim) {
        A.assign(static_cast<std::size_t>(k_max), Eigen::MatrixXcd::Zero(dim, dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const RationalFunction& f = sys.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (f.is_zero()) continue;
                std::vector<cdouble> c = f.taylor(center, k_max);
                for (int k = 0; k < k_max; ++k) A[static_cast<std::size_t>(k)](i, j) = c[static_cast<std::size_t>(k)];
            }
        Y.push_back(Eigen::MatrixXcd::Identity(dim, dim));
    }

    const Eigen::MatrixXcd& coefficient(int m) {
        while (static_cast<int>(Y.size()) <= m) {
            const int mm = static_cast<int>(Y.size()) - 1;  // have Y_0..Y_mm
            Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
            for (int k = 0; k <= mm && k < static_cast<int>(A.size()); ++k)
                next += A[static_cast<std::size_t>(k)] * Y[static_cast<std::size_t>(mm - k)];
            next /= double(mm + 1);
            Y.push_back(std::move(next));
        }
        return Y[static_cast<std::size_t>(m)];
    }
};

struct StepValue {
    Eigen::MatrixXcd S;
    double tail = 0.0;
};

// Sum the local series at displacement u.  Succeeds when two consecutive
// terms fall below tail_target relative to the partial sum, using at least
// order_min and at most order_max terms; otherwise the caller must shrink u.
inline std::optional<StepValue> evaluate_step(StepSeries& series, cdouble u, const NumericsConfig& cfg) {
    Eigen::MatrixXcd S = series.coefficient(0);
    cdouble up = 1.0;
    double tau_prev = std::numeric_limits<double>::infinity();
    double ratio = 0.0;
    for (int m = 1; m <= cfg.taylor_order_max; ++m) {
        up *= u;
        const Eigen::MatrixXcd& Ym = series.coefficient(m);
        const double tau = Ym.norm() * std::abs(up);
        S += Ym * up;
        if (std::isfinite(tau_prev) && tau_prev > 0.0) ratio = std::max(ratio, std::min(tau / tau_prev, 0.95));
        const double floor = cfg.tail_target * std::max(1.0, S.norm());
        if (m >= 2 && tau <= floor && tau_prev <= floor) {
            const double r = std::max(ratio, cfg.theta);
            return StepValue{std::move(S), (tau + tau_prev) * r / (1.0 - r) + tau};
        }
        tau_prev = tau;
    }
    return std::nullopt;
}

inline double min_pole_distance(const std::vector<cdouble>& poles, cdouble z) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : poles) d = std::min(d, std::abs(z - p));
    return d;
}

}  // namespace detail

// Continuation of the homogeneous system along a polyline.  The path must
// stay clear of every pole of the system: at least cfg.clearance when that is
// positive, and never closer than a hard floor.
inline TransferResult transfer_homogeneous(const CompanionSystem& sys, const PathPolyline& path,
                                           const NumericsConfig& cfg) {
    path.validate();
    double scale = 1.0;
    for (const auto& v : path.vertices) scale = std::max(scale, std::abs(v));
    const double floor = std::max(cfg.clearance, 1e-9 * scale);
    for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k)
        for (const auto& p : sys.poles)
            if (dist_point_segment(p, path.vertices[k], path.vertices[k + 1]) < floor)
                throw PathTooCloseToSingularity("path passes within " + std::to_string(floor) +
                                                " of the singular point " + format_complex(p));

    TransferResult res;
    res.matrix = Eigen::MatrixXcd::Identity(sys.dim, sys.dim);
    res.particular_shift = Eigen::VectorXcd::Zero(sys.dim);

    for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k) {
        const cdouble z0 = path.vertices[k];
        const cdouble z1 = path.vertices[k + 1];
        const double seg_len = std::abs(z1 - z0);
        const cdouble dir = (z1 - z0) / seg_len;
        double pos = 0.0;
        while (pos < seg_len * (1.0 - 1e-15)) {
            const cdouble center = z0 + pos * dir;
            const double dmin = detail::min_pole_distance(sys.poles, center);
            double step = seg_len - pos;
            if (std::isfinite(dmin)) step = std::min(step, cfg.theta * dmin * cfg.step_scale);
            detail::StepSeries series(sys, center, cfg.taylor_order_max);
            std::optional<detail::StepValue> val;
            while (true) {
                val = detail::evaluate_step(series, step * dir, cfg);
                if (val) break;
                step *= 0.5;
                if (step < 1e-13 * std::max(1.0, std::abs(center)))
                    throw PrecisionExhausted("Taylor step collapsed near " + format_complex(center));
            }
            const double nS = val->S.norm();
            const double nT = res.matrix.norm();
            res.error_estimate = nS * res.error_estimate +
                                 (val->tail + 10.0 * sys.dim * std::numeric_limits<double>::epsilon() * nS) *
                                     std::max(1.0, nT);
            res.matrix = val->S * res.matrix;
            pos += step;
            ++res.steps;
        }
    }
    return res;
}

// Continuation of w' = A w + b: the augmented homogeneous system of dimension
// dim+1 is continued and its last column read back as the particular shift.
inline TransferResult transfer(const CompanionSystem& sys, const PathPolyline& path, const NumericsConfig& cfg) {
    if (!sys.inhomogeneous()) return transfer_homogeneous(sys, path, cfg);
    const CompanionSystem aug = augment(sys);
    TransferResult r = transfer_homogeneous(aug, path, cfg);
    const int n = sys.dim;
    TransferResult out;
    out.matrix = r.matrix.topLeftCorner(n, n);
    out.particular_shift = r.matrix.topRightCorner(n, 1);
    out.error_estimate = r.error_estimate;
    out.steps = r.steps;
    return out;
}

// A solution jet (values of w = (h, h', ..., h^{(n-1)})) anchored at a point.
struct JetVector {
    cdouble base = 0.0;
    Eigen::VectorXcd values;
};

inline JetVector transport_jet(const CompanionSystem& sys, const PathPolyline& path, const JetVector& init,
                               const NumericsConfig& cfg) {
    if (std::abs(init.base - path.start()) > 1e-10 * std::max(1.0, std::abs(init.base)))
        throw Error("jet is not anchored at the start of the path");
    TransferResult r = transfer(sys, path, cfg);
    JetVector out;
    out.base = path.end();
    out.values = r.matrix * init.values + r.particular_shift;
    return out;
}

}  // namespace pfext
