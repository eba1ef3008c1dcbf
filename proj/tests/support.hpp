#pragma once
// Shared helpers for the test suite: corpus locations, conversions between
// engine objects and oracle data, and a deterministic generator of random
// regular-singular test instances.

#include <random>
#include <string>
#include <vector>

#include "oracle_support.hpp"
#include "pfext/pfext.hpp"

namespace testsup {

inline std::string corpus_path(const std::string& name) {
    return std::string(PFEXT_CORPUS_DIR) + "/" + name;
}

// Copy an engine polynomial / rational function / operator out as plain
// oracle data (numbers only).
inline oracle::Poly to_oracle(const pfext::Polynomial& p) {
    oracle::Poly out;
    out.c = p.coefficients();
    return out;
}

inline oracle::RatCoeff to_oracle(const pfext::RationalFunction& f) {
    oracle::RatCoeff out;
    out.num = to_oracle(f.num());
    out.den = to_oracle(f.den());
    return out;
}

inline std::vector<oracle::Poly> oracle_coefficients(const pfext::DifferentialOperator& op) {
    std::vector<oracle::RatCoeff> rc;
    for (const auto& c : op.coefficients()) rc.push_back(to_oracle(c));
    return oracle::clear_denominators(rc);
}

// Oracle indicial polynomial of an engine operator at a finite point.
inline oracle::Poly oracle_indicial(const pfext::DifferentialOperator& op, pfext::cdouble s) {
    return oracle::indicial_polynomial(oracle_coefficients(op), s);
}

// ---------------------------------------------------------------- numerics

inline double matrix_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).norm(); }

// Closed polyline visiting the vertices of a regular polygon, starting and
// ending at center + r (counterclockwise); test-local path construction.
inline pfext::PathPolyline circle_loop(pfext::cdouble center, double r, int sides = 64) {
    pfext::PathPolyline p;
    for (int k = 0; k <= sides; ++k) {
        const double a = pfext::kTwoPi * double(k) / double(sides);
        p.vertices.push_back(center + r * pfext::cdouble(std::cos(a), std::sin(a)));
    }
    p.closed = true;
    return p;
}

inline std::vector<oracle::C> vertices_of(const pfext::PathPolyline& p) { return p.vertices; }

// -------------------------------------------- random Fuchsian instances

// A random inhomogeneous problem with guaranteed regular singularities:
// the leading coefficient vanishes at two random well-separated points, the
// lower coefficients keep the degree bounds that make every point (including
// infinity) regular, and g is a random nonzero polynomial of degree <= 1.
// Orders 1 and 2 are drawn directly; order 3 instances are compositions of
// an order-1 and an order-2 instance (regularity is preserved under
// composition).
struct RandomInstance {
    pfext::InhomogeneousProblem prob;
    int order = 0;
};

class InstanceGenerator {
public:
    explicit InstanceGenerator(unsigned seed) : rng_(seed) {}

    RandomInstance next(int order) {
        RandomInstance out;
        out.order = order;
        if (order == 1)
            out.prob.op = random_order1();
        else if (order == 2)
            out.prob.op = random_order2();
        else
            out.prob.op = pfext::normalize(pfext::compose(random_order1(), random_order2()));
        out.prob.g = random_inhomogeneity();
        return out;
    }

    Eigen::VectorXcd random_vector(int n) {
        Eigen::VectorXcd v(n);
        for (int k = 0; k < n; ++k) v(k) = pfext::cdouble(unit(), unit());
        return v;
    }

private:
    std::mt19937 rng_;

    double unit() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng_); }

    // two singular points, well separated and away from each other
    std::pair<pfext::cdouble, pfext::cdouble> random_points() {
        const pfext::cdouble s1(unit(), unit());
        while (true) {
            const pfext::cdouble s2(unit() * 2.0, unit() * 2.0);
            if (std::abs(s2 - s1) > 0.8) return {s1, s2};
        }
    }

    pfext::Polynomial vanishing_at(pfext::cdouble s1, pfext::cdouble s2) {
        using pfext::Polynomial;
        const Polynomial t = Polynomial::variable();
        return (t - Polynomial(s1)) * (t - Polynomial(s2));
    }

    pfext::DifferentialOperator random_order1() {
        auto [s1, s2] = random_points();
        // p1 = (t-s1)(t-s2), deg p0 <= 1 keeps infinity regular
        pfext::RationalFunction p1(vanishing_at(s1, s2));
        pfext::Polynomial p0(std::vector<pfext::cdouble>{pfext::cdouble(unit(), unit()), pfext::cdouble(unit(), unit())});
        return pfext::DifferentialOperator({pfext::RationalFunction(p0), p1});
    }

    pfext::DifferentialOperator random_order2() {
        auto [s1, s2] = random_points();
        // hypergeometric-shaped degree bounds: deg p1 <= 1, deg p0 <= 0
        pfext::RationalFunction p2(vanishing_at(s1, s2));
        pfext::Polynomial p1(std::vector<pfext::cdouble>{pfext::cdouble(unit(), unit()), pfext::cdouble(unit(), unit())});
        pfext::Polynomial p0(pfext::cdouble(unit(), unit()));
        return pfext::DifferentialOperator({pfext::RationalFunction(p0), pfext::RationalFunction(p1), p2});
    }

    pfext::RationalFunction random_inhomogeneity() {
        while (true) {
            pfext::Polynomial g(
                std::vector<pfext::cdouble>{pfext::cdouble(unit(), unit()), pfext::cdouble(unit(), unit())});
            if (!g.is_zero() && g.max_abs() > 0.1) return pfext::RationalFunction(g);
        }
    }
};

}  // namespace testsup
