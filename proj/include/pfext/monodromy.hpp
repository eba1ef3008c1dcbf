#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pfext/continuation.hpp"

namespace pfext {

// Plan of base point and generator loops.  Loop j encircles points[j] once
// counterclockwise and nothing else; loops start and end at the base point.
// infinity_loop runs out to a large circle traversed clockwise, so that the
// composite of all finite loops in listed order is homotopic to its reverse.
struct LoopPlan {
    cdouble base_point = 0.0;
    double clearance = 0.0;
    double cut_angle = 0.0;            // direction of the outgoing ray of infinity_loop
    std::vector<cdouble> points;       // encircled points, in composition order
    std::vector<double> radii;
    std::vector<PathPolyline> loops;
    PathPolyline infinity_loop;
};

namespace detail {

struct Obstacle {
    cdouble point;
    double clearance;
};

// Straight segment from a to b, bent around obstacles that come too close.
// The detour waypoint sits on the far side of the blocking obstacle, at a
// distance that clears both the obstacle's clearance and its loop circle.
inline void route_segment(std::vector<cdouble>& out, cdouble a, cdouble b, const std::vector<Obstacle>& obstacles,
                          int depth) {
    const Obstacle* blocker = nullptr;
    double worst = 0.0;
    for (const auto& o : obstacles) {
        const double d = dist_point_segment(o.point, a, b);
        if (d < o.clearance && (blocker == nullptr || o.clearance - d > worst)) {
            blocker = &o;
            worst = o.clearance - d;
        }
    }
    if (blocker == nullptr) {
        out.push_back(b);
        return;
    }
    if (depth <= 0) throw PathTooCloseToSingularity("could not route a path segment around " + format_complex(blocker->point));

    const cdouble dir = (b - a) / std::abs(b - a);
    const double s = std::clamp((((blocker->point - a) * std::conj(b - a)).real()) / std::norm(b - a), 0.0, 1.0);
    const cdouble off = blocker->point - (a + s * (b - a));
    const cdouble nhat = (std::abs(off) < 1e-12 * std::max(1.0, std::abs(blocker->point)))
                             ? cdouble(0.0, 1.0) * dir
                             : -off / std::abs(off);
    const cdouble w = blocker->point + 1.5 * blocker->clearance * nhat;
    route_segment(out, a, w, obstacles, depth - 1);
    route_segment(out, w, b, obstacles, depth - 1);
}

inline PathPolyline routed_polyline(cdouble a, cdouble b, const std::vector<Obstacle>& obstacles) {
    PathPolyline p;
    p.vertices.push_back(a);
    route_segment(p.vertices, a, b, obstacles, 4);
    return p;
}

// Midpoint of the largest angular gap between the given directions; 0 when
// there are none.
inline double cut_direction(const std::vector<double>& angles) {
    if (angles.empty()) return 0.0;
    std::vector<double> a = angles;
    for (auto& x : a) x = wrap_angle_2pi(x);
    std::sort(a.begin(), a.end());
    double best_gap = kTwoPi - (a.back() - a.front());
    double best_mid = wrap_angle_2pi(a.back() + best_gap / 2.0);
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        const double gap = a[k + 1] - a[k];
        if (gap > best_gap) {
            best_gap = gap;
            best_mid = a[k] + gap / 2.0;
        }
    }
    return best_mid;
}

}  // namespace detail

inline constexpr int kLoopPolygonSides = 16;
inline constexpr int kOuterPolygonSides = 32;

// Deterministic base point: the node of a coarse grid over the inflated
// bounding box of the points that maximizes the distance to all of them.
inline cdouble choose_base_point(const std::vector<cdouble>& points, double min_distance) {
    if (points.empty()) return 0.0;
    double xmin = points[0].real(), xmax = xmin, ymin = points[0].imag(), ymax = ymin;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const double pad = 0.75 * std::max({xmax - xmin, ymax - ymin, 1.0});
    const int N = 33;
    cdouble best = 0.0;
    double best_score = -1.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cdouble z(xmin - pad + (xmax - xmin + 2 * pad) * double(i) / double(N - 1),
                            ymin - pad + (ymax - ymin + 2 * pad) * double(j) / double(N - 1));
            double score = std::numeric_limits<double>::infinity();
            for (const auto& p : points) score = std::min(score, std::abs(z - p));
            if (score > best_score) {
                best_score = score;
                best = z;
            }
        }
    if (best_score < min_distance) throw NoValidBasepoint("no grid node is clear of the singular points");
    return best;
}

// Build generator loops around the given points.  `separation` is the
// minimal pairwise distance between them (used to derive the clearance when
// cfg.clearance is zero).
inline LoopPlan generator_loops(const std::vector<cdouble>& points, double separation,
                                std::optional<cdouble> base, const NumericsConfig& cfg) {
    LoopPlan plan;
    plan.clearance = cfg.clearance > 0.0 ? cfg.clearance : cfg.clearance_factor * separation;
    const double min_base_dist = std::max(2.5 * plan.clearance, 1e-6);

    if (base) {
        for (const auto& p : points)
            if (std::abs(*base - p) < min_base_dist)
                throw NoValidBasepoint("base point is within clearance of the singular point " + format_complex(p));
        plan.base_point = *base;
    } else {
        plan.base_point = choose_base_point(points, min_base_dist);
    }
    const cdouble t0 = plan.base_point;

    // order: counterclockwise by argument seen from the base point, starting
    // just after the cut ray (the largest angular gap), so the composite of
    // the listed loops sweeps once around everything.
    std::vector<double> angles;
    for (const auto& p : points) angles.push_back(std::arg(p - t0));
    plan.cut_angle = detail::cut_direction(angles);
    std::vector<std::size_t> idx(points.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double wa = wrap_angle_2pi(angles[a] - plan.cut_angle);
        const double wb = wrap_angle_2pi(angles[b] - plan.cut_angle);
        if (wa != wb) return wa < wb;
        return std::abs(points[a] - t0) < std::abs(points[b] - t0);
    });

    for (std::size_t k : idx) plan.points.push_back(points[k]);
    for (const auto& s : plan.points) {
        double d_other = std::numeric_limits<double>::infinity();
        for (const auto& o : plan.points)
            if (o != s) d_other = std::min(d_other, std::abs(o - s));
        const double r = 0.5 * std::min(d_other, std::abs(t0 - s));
        if (r * std::cos(kPi / kLoopPolygonSides) <= plan.clearance)
            throw PathTooCloseToSingularity("loop radius around " + format_complex(s) +
                                            " cannot respect the clearance");
        plan.radii.push_back(r);
    }

    for (std::size_t k = 0; k < plan.points.size(); ++k) {
        const cdouble s = plan.points[k];
        const double r = plan.radii[k];
        std::vector<detail::Obstacle> obstacles;
        for (std::size_t m = 0; m < plan.points.size(); ++m)
            if (m != k) obstacles.push_back({plan.points[m], std::max(plan.clearance, 0.9 * plan.radii[m])});
        obstacles.push_back({s, 0.8 * r});

        const double entry_angle = std::arg(t0 - s);
        const cdouble entry = s + std::polar(r, entry_angle);
        PathPolyline approach = detail::routed_polyline(t0, entry, obstacles);
        PathPolyline loop = concat_paths(approach, regular_polygon_loop(s, r, kLoopPolygonSides, entry_angle, true));
        loop = concat_paths(loop, reverse_path(approach));
        loop.closed = true;
        loop.validate();

        if (std::abs(winding_number(loop, s) - 1.0) > 0.01)
            throw Error("constructed loop does not encircle its point exactly once");
        for (std::size_t m = 0; m < plan.points.size(); ++m)
            if (m != k && std::abs(winding_number(loop, plan.points[m])) > 0.01)
                throw Error("constructed loop encircles a point it should avoid");
        plan.loops.push_back(std::move(loop));
    }

    // clockwise outer loop: out along the cut ray, once around everything the
    // wrong way, and back.
    double rmax = 0.0;
    for (const auto& p : points) rmax = std::max(rmax, std::abs(p - t0));
    const double R = 2.0 * rmax + 1.0 + 4.0 * plan.clearance;
    std::vector<detail::Obstacle> obstacles;
    for (std::size_t m = 0; m < plan.points.size(); ++m)
        obstacles.push_back({plan.points[m], std::max(plan.clearance, 0.9 * plan.radii[m])});
    const cdouble far = t0 + std::polar(R, plan.cut_angle);
    PathPolyline ray = detail::routed_polyline(t0, far, obstacles);
    PathPolyline outer = concat_paths(ray, regular_polygon_loop(t0, R, kOuterPolygonSides, plan.cut_angle, false));
    outer = concat_paths(outer, reverse_path(ray));
    outer.closed = true;
    outer.validate();
    for (const auto& p : points)
        if (std::abs(winding_number(outer, p) + 1.0) > 0.01)
            throw Error("outer loop does not wind once clockwise around the points");
    plan.infinity_loop = std::move(outer);
    return plan;
}

// The monodromy representation of a homogeneous operator on the loops of a
// plan: matrices[j] maps the jet of a solution at the base point to its jet
// after continuation around loop j.
struct MonodromyRepresentation {
    int dim = 0;
    cdouble base_point = 0.0;
    std::vector<cdouble> points;
    std::vector<Eigen::MatrixXcd> matrices;
    std::vector<double> errors;
    Eigen::MatrixXcd m_infinity;  // inverse of the ordered product
    double m_infinity_error = 0.0;
};

// Product in composition order: matrices.back() * ... * matrices.front(),
// the transfer of the concatenation of all loops in listed order.
inline Eigen::MatrixXcd ordered_product(const std::vector<Eigen::MatrixXcd>& ms, int dim) {
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& m : ms) P = m * P;
    return P;
}

inline MonodromyRepresentation monodromy_representation(const CompanionSystem& sys, const LoopPlan& plan,
                                                        const NumericsConfig& cfg_in) {
    if (sys.inhomogeneous()) throw Error("monodromy requires the homogeneous system");
    NumericsConfig cfg = cfg_in;
    cfg.clearance = 0.9 * plan.clearance;

    MonodromyRepresentation rep;
    rep.dim = sys.dim;
    rep.base_point = plan.base_point;
    rep.points = plan.points;
    for (const auto& loop : plan.loops) {
        TransferResult r = transfer_homogeneous(sys, loop, cfg);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r.matrix);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        const double smax = svd.singularValues()(0);
        if (smin <= 1e-10 * smax)
            throw NumericError("monodromy matrix is numerically singular");
        rep.matrices.push_back(r.matrix);
        rep.errors.push_back(r.error_estimate);
    }
    const Eigen::MatrixXcd P = ordered_product(rep.matrices, rep.dim);
    rep.m_infinity = P.partialPivLu().inverse();
    rep.m_infinity_error = 0.0;
    for (double e : rep.errors) rep.m_infinity_error += e;
    return rep;
}

// Residual of the defining relation: the transfer around the reversed outer
// loop (a plain counterclockwise circle around everything) against the
// ordered product of the generator matrices.
struct ProductRelationReport {
    double residual = 0.0;
    double transfer_error = 0.0;
};

inline ProductRelationReport product_relation_check(const CompanionSystem& sys, const LoopPlan& plan,
                                                    const MonodromyRepresentation& rep, const NumericsConfig& cfg_in) {
    NumericsConfig cfg = cfg_in;
    cfg.clearance = 0.9 * plan.clearance;
    TransferResult big = transfer_homogeneous(sys, reverse_path(plan.infinity_loop), cfg);
    ProductRelationReport out;
    out.residual = (big.matrix - ordered_product(rep.matrices, rep.dim)).norm();
    out.transfer_error = big.error_estimate;
    return out;
}

// Greedy multiset matching distance between eigenvalue lists.
inline double eigenvalue_match_distance(std::vector<cdouble> got, std::vector<cdouble> expected) {
    if (got.size() != expected.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& e : expected) {
        if (got.empty()) break;
        std::size_t best = 0;
        for (std::size_t k = 1; k < got.size(); ++k)
            if (std::abs(got[k] - e) < std::abs(got[best] - e)) best = k;
        worst = std::max(worst, std::abs(got[best] - e));
        got.erase(got.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

inline std::vector<cdouble> eigenvalues_of(const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<cdouble> out;
    for (int i = 0; i < m.rows(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

// Compare the eigenvalues of each monodromy matrix with exp(2*pi*i*rho) over
// the local exponents rho at its point.
struct LocalConsistencyEntry {
    cdouble point;
    bool at_infinity = false;
    double distance = 0.0;
    bool pass = false;
};

inline std::vector<LocalConsistencyEntry> local_consistency_check(
    const MonodromyRepresentation& rep, const std::vector<std::vector<cdouble>>& exponents,
    const std::optional<std::vector<cdouble>>& infinity_exponents, const NumericsConfig& cfg) {
    std::vector<LocalConsistencyEntry> out;
    const cdouble tau(0.0, kTwoPi);
    for (std::size_t k = 0; k < rep.matrices.size(); ++k) {
        std::vector<cdouble> expected;
        for (const auto& rho : exponents[k]) expected.push_back(std::exp(tau * rho));
        LocalConsistencyEntry e;
        e.point = rep.points[k];
        e.distance = eigenvalue_match_distance(eigenvalues_of(rep.matrices[k]), expected);
        e.pass = e.distance <= cfg.tol_eigen_match;
        out.push_back(e);
    }
    if (infinity_exponents) {
        std::vector<cdouble> expected;
        for (const auto& rho : *infinity_exponents) expected.push_back(std::exp(tau * rho));
        LocalConsistencyEntry e;
        e.at_infinity = true;
        e.distance = eigenvalue_match_distance(eigenvalues_of(rep.m_infinity), expected);
        e.pass = e.distance <= cfg.tol_eigen_match;
        out.push_back(e);
    }
    return out;
}

// Admissibility of the representation relative to a set of boundary points:
// unipotent local monodromy there, and no common invariant line or hyperplane
// (complete for dim <= 3; a heuristic beyond that, which the flag records).
struct AdmissibilityReport {
    struct UnipotencyEntry {
        cdouble point;
        double norm;  // ||(M - I)^dim||
        bool pass;
    };
    std::vector<UnipotencyEntry> unipotency;
    bool all_unipotent = true;
    bool irreducible = true;
    bool irreducibility_is_heuristic = false;
    bool admissible = false;
};

namespace detail {

struct EigenlineScan {
    bool found = false;
    bool complete = true;  // false when the tuple enumeration was truncated
};

// A common invariant line exists iff for some choice of one eigenvalue per
// generator the stacked matrix [(M_i - lambda_i I)] has a kernel.  The
// eigenvalue tuples are enumerated exhaustively up to a cap (never reached
// for small dimensions), so for lines and hyperplanes this is complete up to
// numerics.
inline EigenlineScan scan_common_eigenline(const std::vector<Eigen::MatrixXcd>& ms, int dim, double tol) {
    std::vector<std::vector<cdouble>> choices;
    for (const auto& m : ms) {
        std::vector<cdouble> distinct;
        for (const auto& lambda : eigenvalues_of(m)) {
            bool seen = false;
            for (const auto& mu : distinct)
                if (std::abs(lambda - mu) <= 100.0 * tol) seen = true;
            if (!seen) distinct.push_back(lambda);
        }
        choices.push_back(std::move(distinct));
    }

    EigenlineScan out;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(dim, dim);
    std::vector<std::size_t> pick(ms.size(), 0);
    for (std::size_t visited = 0;; ++visited) {
        if (visited >= 4096) {
            out.complete = false;
            return out;
        }
        Eigen::MatrixXcd stacked(static_cast<int>(ms.size()) * dim, dim);
        for (std::size_t k = 0; k < ms.size(); ++k)
            stacked.middleRows(static_cast<int>(k) * dim, dim) = ms[k] - choices[k][pick[k]] * I;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 100.0 * tol * std::max(1.0, double(sv(0)))) {
            out.found = true;
            return out;
        }

        std::size_t k = 0;
        while (k < pick.size()) {
            if (++pick[k] < choices[k].size()) break;
            pick[k] = 0;
            ++k;
        }
        if (k == pick.size()) break;
    }
    return out;
}

}  // namespace detail

inline AdmissibilityReport admissibility_check(const MonodromyRepresentation& rep,
                                               const std::vector<std::size_t>& boundary_loop_indices,
                                               const NumericsConfig& cfg) {
    AdmissibilityReport out;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
    for (std::size_t k : boundary_loop_indices) {
        Eigen::MatrixXcd N = rep.matrices[k] - I;
        Eigen::MatrixXcd P = N;
        for (int m = 1; m < rep.dim; ++m) P = P * N;
        AdmissibilityReport::UnipotencyEntry e{rep.points[k], P.norm(), P.norm() <= cfg.tol_consistency};
        out.all_unipotent = out.all_unipotent && e.pass;
        out.unipotency.push_back(e);
    }
    if (rep.dim == 1) {
        out.irreducible = true;
        out.irreducibility_is_heuristic = false;
    } else {
        const double tol = cfg.tol_consistency;
        const detail::EigenlineScan line = detail::scan_common_eigenline(rep.matrices, rep.dim, tol);
        std::vector<Eigen::MatrixXcd> transposed;
        for (const auto& m : rep.matrices) transposed.push_back(m.transpose());
        const detail::EigenlineScan hyperplane = detail::scan_common_eigenline(transposed, rep.dim, tol);
        out.irreducible = !line.found && !hyperplane.found;
        // The verdict rests on floating-point eigen-decompositions and a
        // tolerance, and intermediate-dimension subspaces are not scanned
        // from dim 4 on; either way the irreducibility half is evidence,
        // not proof, so it always carries the heuristic flag.
        out.irreducibility_is_heuristic = true;
    }
    out.admissible = out.all_unipotent && out.irreducible;
    return out;
}

}  // namespace pfext
