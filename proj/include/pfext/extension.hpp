#pragma once

#include <optional>
#include <vector>

#include "pfext/monodromy.hpp"

namespace pfext {

// An operator together with an inhomogeneity:  op(h) = g.
struct InhomogeneousProblem {
    DifferentialOperator op;
    RationalFunction g;
    std::optional<int> twist;  // inert weight label carried through reports
};

// The order-(n+1) operator (d/dt - g'/g) ∘ op, which annihilates every
// solution of op(h) = g along with the solution space of op.  Requires g
// nonzero.
inline DifferentialOperator extended_operator(const InhomogeneousProblem& prob) {
    if (prob.g.is_zero()) throw ZeroFunction();
    DifferentialOperator left(std::vector<RationalFunction>{-dlog(prob.g), RationalFunction(1.0)});
    return normalize(compose(left, prob.op));
}

// Singular locus for planning loops of the inhomogeneous problem: the
// operator's finite singular points enlarged by zeros and poles of g.  Points
// appearing only through g are ordinary for the operator itself but carry
// nontrivial data of the extension.
struct EnlargedProfile {
    SingularityProfile op_profile;
    std::vector<cdouble> points;                 // merged locus, sorted by (re, im)
    std::vector<bool> from_operator;             // aligned: singular for op itself
    std::vector<std::vector<cdouble>> exponents; // aligned: op exponents at the point
    double separation = 1.0;
};

inline EnlargedProfile enlarged_profile(const InhomogeneousProblem& prob, const NumericsConfig& cfg) {
    if (prob.g.is_zero()) throw ZeroFunction();
    EnlargedProfile out;
    out.op_profile = singularities(prob.op, cfg.cluster_tol);
    std::vector<cdouble> pts = out.op_profile.finite_locations();
    std::vector<bool> from_op(pts.size(), true);

    auto add = [&](cdouble z) {
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (std::abs(pts[k] - z) <= 10.0 * cfg.cluster_tol * std::max(1.0, std::abs(z))) return;
        pts.push_back(z);
        from_op.push_back(false);
    };
    for (const auto& rc : prob.g.zeros(cfg.cluster_tol)) add(rc.center);
    for (const auto& rc : prob.g.poles(cfg.cluster_tol)) add(rc.center);

    std::vector<std::size_t> idx(pts.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a].real() != pts[b].real()) return pts[a].real() < pts[b].real();
        return pts[a].imag() < pts[b].imag();
    });
    const int n = out.op_profile.op.order();
    for (std::size_t k : idx) {
        out.points.push_back(pts[k]);
        out.from_operator.push_back(from_op[k]);
        if (from_op[k]) {
            const SingularPoint* sp = out.op_profile.at(pts[k]);
            out.exponents.push_back(sp ? sp->exponents : std::vector<cdouble>{});
        } else {
            std::vector<cdouble> ordinary;
            for (int m = 0; m < n; ++m) ordinary.push_back(double(m));
            out.exponents.push_back(std::move(ordinary));
        }
    }

    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.points.size(); ++i)
        for (std::size_t j = i + 1; j < out.points.size(); ++j)
            sep = std::min(sep, std::abs(out.points[i] - out.points[j]));
    out.separation = std::isfinite(sep) ? sep : 1.0;
    return out;
}

// A twisted cocycle: one vector per generator loop, expressed in the jet
// basis at the base point.  Under continuation around loop j a particular
// solution jet w_p returns as  M_j w_p + vectors[j].
struct Cocycle {
    int dim = 0;
    std::vector<Eigen::VectorXcd> vectors;
    std::vector<double> errors;  // per-vector absolute error estimates
};

// Route 1: continue a particular solution of  op(h) = g  around each loop.
// The particular solution is anchored by the jet `init` at the base point
// (zero by default); for another anchor v the cocycle shifts by the
// coboundary (M_j - I) v, leaving its class unchanged.
inline Cocycle cocycle_by_continuation(const InhomogeneousProblem& prob, const LoopPlan& plan,
                                       const MonodromyRepresentation& rep, const NumericsConfig& cfg_in,
                                       const std::optional<Eigen::VectorXcd>& init = std::nullopt) {
    NumericsConfig cfg = cfg_in;
    cfg.clearance = 0.9 * plan.clearance;
    const CompanionSystem sys = companion_system(prob.op, prob.g, cfg.cluster_tol);
    Cocycle out;
    out.dim = sys.dim;
    const Eigen::VectorXcd v0 = init ? *init : Eigen::VectorXcd::Zero(sys.dim);
    for (std::size_t j = 0; j < plan.loops.size(); ++j) {
        TransferResult r = transfer(sys, plan.loops[j], cfg);
        // continued jet of the particular solution minus its homogeneous part:
        // (M v0 + shift) - v0 would mix in the coboundary of v0 only if we
        // dropped it; the cocycle with anchor v0 is  shift + (M - I) v0.
        Eigen::VectorXcd a = r.particular_shift + (rep.matrices[j] - Eigen::MatrixXcd::Identity(sys.dim, sys.dim)) * v0;
        out.vectors.push_back(std::move(a));
        out.errors.push_back(r.error_estimate * (1.0 + v0.norm()));
    }
    return out;
}

// Route 2: monodromy of the extended operator (d/dt - g'/g) ∘ op, read in the
// frame that pairs a basis of op-solution jets with one solution of
// op(h) = g.  In that frame every loop matrix is block triangular
// [[M_j, a_j], [0, 1]]; the report records how far the computed matrices are
// from that shape.
struct BlockMonodromyReport {
    DifferentialOperator d_ext;
    std::vector<Eigen::MatrixXcd> block_matrices;  // in the adapted frame
    Cocycle cocycle;
    std::vector<double> bottom_row_deviation;  // | bottom block - (0 ... 0 1) |
    std::vector<double> top_block_deviation;   // || top-left block - M_j ||
};

namespace detail {

// Frame at the base point adapting the extended companion system to the
// splitting: columns 1..n are unit jets of op-solutions extended to jets of
// order n (using op(h) = 0), the last column is the jet of the particular
// solution with zero initial jet (using op(h) = g).  Uses the operator's own
// coefficients so the frame matches the equation exactly as stated.
inline Eigen::MatrixXcd splitting_frame(const DifferentialOperator& op, const RationalFunction& g, cdouble t0) {
    const int n = op.order();
    const RationalFunction& pn = op.coefficient(n);
    const cdouble pn0 = pn.eval(t0);
    if (!finite(pn0) || std::abs(pn0) < 1e-12 * std::max(1.0, pn.num().max_abs()))
        throw LiftFailure("leading coefficient vanishes at the base point");
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    for (int j = 0; j < n; ++j) {
        const cdouble pj = op.coefficient(j).eval(t0);
        F(n, j) = -pj / pn0;
    }
    const cdouble g0 = g.eval(t0);
    if (!finite(g0)) throw LiftFailure("inhomogeneity has a pole at the base point");
    F(n, n) = g0 / pn0;
    for (int j = 0; j < n; ++j) F(j, n) = 0.0;
    return F;
}

}  // namespace detail

inline BlockMonodromyReport cocycle_by_block_monodromy(const InhomogeneousProblem& prob, const LoopPlan& plan,
                                                       const MonodromyRepresentation& rep,
                                                       const NumericsConfig& cfg_in) {
    NumericsConfig cfg = cfg_in;
    cfg.clearance = 0.9 * plan.clearance;
    BlockMonodromyReport out;
    out.d_ext = extended_operator(prob);
    const DifferentialOperator& op = prob.op;
    const int n = op.order();

    const CompanionSystem ext_sys = companion_system(out.d_ext, std::nullopt, cfg.cluster_tol);
    const Eigen::MatrixXcd F = detail::splitting_frame(op, prob.g, plan.base_point);
    const Eigen::PartialPivLU<Eigen::MatrixXcd> F_lu(F);

    out.cocycle.dim = n;
    for (std::size_t j = 0; j < plan.loops.size(); ++j) {
        TransferResult r = transfer_homogeneous(ext_sys, plan.loops[j], cfg);
        Eigen::MatrixXcd B = F_lu.solve(r.matrix * F);
        out.block_matrices.push_back(B);
        Eigen::VectorXcd a = B.topRightCorner(n, 1);
        double bottom = std::abs(B(n, n) - cdouble(1.0));
        for (int c = 0; c < n; ++c) bottom = std::max(bottom, std::abs(B(n, c)));
        out.bottom_row_deviation.push_back(bottom);
        out.top_block_deviation.push_back((B.topLeftCorner(n, n) - rep.matrices[j]).norm());
        out.cocycle.vectors.push_back(std::move(a));
        // frame conditioning amplifies the transfer error
        const double cond = F.norm() * F_lu.inverse().norm();
        out.cocycle.errors.push_back(r.error_estimate * cond);
    }
    return out;
}

// Cocycle identity  a_{γδ} = a_δ + M_δ a_γ  for the composite of two loops
// (γ traversed first).  Used to validate computed cocycles on words.
inline Eigen::VectorXcd compose_cocycle(const Eigen::MatrixXcd& m_delta, const Eigen::VectorXcd& a_gamma,
                                        const Eigen::VectorXcd& a_delta) {
    return a_delta + m_delta * a_gamma;
}

inline Cocycle shift_by_coboundary(const MonodromyRepresentation& rep, const Cocycle& a, const Eigen::VectorXcd& c) {
    Cocycle out = a;
    for (std::size_t j = 0; j < out.vectors.size(); ++j)
        out.vectors[j] += (rep.matrices[j] - Eigen::MatrixXcd::Identity(rep.dim, rep.dim)) * c;
    return out;
}

inline Cocycle cocycle_difference(const Cocycle& a, const Cocycle& b) {
    if (a.dim != b.dim || a.vectors.size() != b.vectors.size()) throw Error("cocycle shapes do not match");
    Cocycle out = a;
    out.errors.assign(a.vectors.size(), 0.0);
    for (std::size_t j = 0; j < out.vectors.size(); ++j) {
        out.vectors[j] -= b.vectors[j];
        out.errors[j] = (j < a.errors.size() ? a.errors[j] : 0.0) + (j < b.errors.size() ? b.errors[j] : 0.0);
    }
    return out;
}

enum class ClassVerdict { Trivial, Nontrivial, Inconclusive };

inline const char* to_string(ClassVerdict v) {
    switch (v) {
        case ClassVerdict::Trivial: return "trivial";
        case ClassVerdict::Nontrivial: return "nontrivial";
        default: return "inconclusive";
    }
}

// Least-squares test of whether a is a coboundary: solve the stacked system
// (M_j - I) c = a_j for the minimum-norm c and compare the residual against
// the size of the cocycle.  Verdicts keep a buffer zone: relative residuals
// between tol and 10*tol are inconclusive.
struct CoboundaryResult {
    ClassVerdict verdict = ClassVerdict::Inconclusive;
    Eigen::VectorXcd witness;     // minimum-norm c
    double residual = 0.0;        // absolute
    double residual_rel = 0.0;    // residual / |a|
    double cocycle_norm = 0.0;
};

inline CoboundaryResult is_coboundary(const MonodromyRepresentation& rep, const Cocycle& a,
                                      const NumericsConfig& cfg) {
    const int n = rep.dim;
    const int k = static_cast<int>(a.vectors.size());
    CoboundaryResult out;
    out.witness = Eigen::VectorXcd::Zero(n);
    double norm2 = 0.0;
    for (const auto& v : a.vectors) norm2 += v.squaredNorm();
    out.cocycle_norm = std::sqrt(norm2);

    // a cocycle indistinguishable from zero at the accumulated continuation
    // error is trivial outright (c = 0); relative residuals make no sense
    // against pure noise
    double noise = 0.0;
    for (double e : a.errors) noise += e;
    double mscale = 1.0;
    for (const auto& m : rep.matrices) mscale = std::max(mscale, m.norm());
    noise = 10.0 * noise + 1e-13 * mscale;
    if (k == 0 || out.cocycle_norm <= noise) {
        out.verdict = ClassVerdict::Trivial;
        return out;
    }

    Eigen::MatrixXcd S(k * n, n);
    Eigen::VectorXcd rhs(k * n);
    for (int j = 0; j < k; ++j) {
        S.middleRows(j * n, n) = rep.matrices[static_cast<std::size_t>(j)] - Eigen::MatrixXcd::Identity(n, n);
        rhs.segment(j * n, n) = a.vectors[static_cast<std::size_t>(j)];
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(S);
    out.witness = cod.solve(rhs);
    out.residual = (S * out.witness - rhs).norm();
    out.residual_rel = out.residual / out.cocycle_norm;
    if (out.residual_rel <= cfg.tol_class)
        out.verdict = ClassVerdict::Trivial;
    else if (out.residual_rel >= 10.0 * cfg.tol_class)
        out.verdict = ClassVerdict::Nontrivial;
    else
        out.verdict = ClassVerdict::Inconclusive;
    return out;
}

// Equality of extension classes: the difference cocycle must be a coboundary.
struct ClassComparison {
    ClassVerdict equal = ClassVerdict::Inconclusive;  // Trivial means "equal"
    CoboundaryResult difference;
    double max_vector_distance = 0.0;
};

inline ClassComparison class_equal(const MonodromyRepresentation& rep, const Cocycle& a, const Cocycle& b,
                                   const NumericsConfig& cfg) {
    ClassComparison out;
    Cocycle d = cocycle_difference(a, b);
    double scale = 0.0;
    for (const auto& v : a.vectors) scale = std::max(scale, v.norm());
    for (const auto& v : b.vectors) scale = std::max(scale, v.norm());
    for (const auto& v : d.vectors) out.max_vector_distance = std::max(out.max_vector_distance, v.norm());
    // a numerically zero difference is equality outright; otherwise test the
    // difference for being a coboundary, relative to the size of the inputs.
    if (out.max_vector_distance <= cfg.tol_class * std::max(1.0, scale)) {
        out.difference.verdict = ClassVerdict::Trivial;
        out.difference.witness = Eigen::VectorXcd::Zero(rep.dim);
        out.equal = ClassVerdict::Trivial;
        return out;
    }
    out.difference = is_coboundary(rep, d, cfg);
    // the residual of the difference should be judged against the cocycles
    // themselves, not the (possibly tiny) difference
    const double rel_vs_inputs = out.difference.residual / std::max(scale, 1e-300);
    if (rel_vs_inputs <= cfg.tol_class)
        out.equal = ClassVerdict::Trivial;
    else if (out.difference.verdict == ClassVerdict::Trivial)
        out.equal = ClassVerdict::Trivial;
    else if (out.difference.verdict == ClassVerdict::Nontrivial && rel_vs_inputs >= 10.0 * cfg.tol_class)
        out.equal = ClassVerdict::Nontrivial;
    else
        out.equal = ClassVerdict::Inconclusive;
    return out;
}

// Extension class bundle: the cocycle, its triviality verdict, and the label
// of the twist carried along unchanged.
struct ExtensionClass {
    Cocycle cocycle;
    CoboundaryResult triviality;
    std::optional<int> twist;
};

inline ExtensionClass make_extension_class(const MonodromyRepresentation& rep, const Cocycle& a,
                                           const NumericsConfig& cfg, std::optional<int> twist) {
    ExtensionClass out;
    out.cocycle = a;
    out.triviality = is_coboundary(rep, a, cfg);
    out.twist = twist;
    return out;
}

}  // namespace pfext
