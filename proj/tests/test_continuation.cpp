#include <catch2/catch_amalgamated.hpp>

#include "pfext/pfext.hpp"
#include "support.hpp"

using namespace pfext;
using Catch::Matchers::WithinAbs;

namespace {

const NumericsConfig kCfg{};

PathPolyline segment(cdouble a, cdouble b) {
    PathPolyline p;
    p.vertices = {a, b};
    return p;
}

}  // namespace

TEST_CASE("companion systems rearrange the equation") {
    SECTION("second derivative alone") {
        CompanionSystem sys = companion_system(parse_operator("D^2"), std::nullopt);
        REQUIRE(sys.dim == 2);
        REQUIRE(sys.A[0][0].is_zero());
        REQUIRE(approx_equal(sys.A[0][1], RationalFunction(1.0)));
        REQUIRE(sys.A[1][0].is_zero());
        REQUIRE(sys.A[1][1].is_zero());
    }
    SECTION("second order with vanishing leading coefficient at two points") {
        DifferentialOperator L = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
        CompanionSystem sys = companion_system(L, std::nullopt);
        // last row must be (-p0/p2, -p1/p2) = (1/(4t(1-t)), -(1-2t)/(t(1-t)))
        const Polynomial t = Polynomial::variable();
        Polynomial lead = t * (Polynomial(1.0) - t);
        REQUIRE(approx_equal(sys.A[1][0], RationalFunction(Polynomial(0.25), lead)));
        REQUIRE(approx_equal(sys.A[1][1], RationalFunction(Polynomial(cdouble(-1.0)) * (Polynomial(1.0) - t * Polynomial(2.0)), lead)));
        // poles of the system are exactly the leading-coefficient roots
        REQUIRE(sys.poles.size() == 2);
    }
    SECTION("scalar inhomogeneous case") {
        CompanionSystem sys = companion_system(DifferentialOperator::derivative(), parse_rational("1/t"));
        REQUIRE(sys.dim == 1);
        REQUIRE(sys.A[0][0].is_zero());
        REQUIRE(sys.inhomogeneous());
        REQUIRE(approx_equal(sys.b[0], parse_rational("1/t")));
    }
    SECTION("inhomogeneity divides by the leading coefficient as stated") {
        // 2t h' = 1  =>  h' = 1/(2t)
        DifferentialOperator L({RationalFunction(), RationalFunction(Polynomial::variable() * Polynomial(2.0))});
        CompanionSystem sys = companion_system(L, RationalFunction(1.0));
        REQUIRE(approx_equal(sys.b[0], parse_rational("1/(2*t)")));
    }
}

TEST_CASE("transfer along a path with no coefficient matrix is the identity") {
    CompanionSystem sys = companion_system(DifferentialOperator::derivative(), std::nullopt);
    TransferResult r = transfer(sys, segment(cdouble(-1.0, 0.3), cdouble(2.0, -0.4)), kCfg);
    REQUIRE_THAT((r.matrix - Eigen::MatrixXcd::Identity(1, 1)).norm(), WithinAbs(0.0, 1e-14));
}

TEST_CASE("exponential growth along a real segment") {
    // h' = h from 0 to 1 multiplies by e
    DifferentialOperator L({RationalFunction(-1.0), RationalFunction(1.0)});
    CompanionSystem sys = companion_system(L, std::nullopt);
    TransferResult r = transfer(sys, segment(0.0, 1.0), kCfg);
    REQUIRE_THAT(std::abs(r.matrix(0, 0) - std::exp(1.0)), WithinAbs(0.0, 1e-12));
    REQUIRE(r.error_estimate < 1e-9);
    REQUIRE(r.steps >= 1);
}

TEST_CASE("scaling monodromy multiplier around the origin") {
    // t h' = lambda h around a closed loop: multiplier exp(2 pi i lambda)
    const double lambda = 1.0 / 3.0;
    DifferentialOperator L({RationalFunction(-lambda), RationalFunction::variable()});
    CompanionSystem sys = companion_system(L, std::nullopt);
    TransferResult r = transfer(sys, testsup::circle_loop(0.0, 1.0, 16), kCfg);
    const cdouble expected = std::exp(cdouble(0.0, kTwoPi * lambda));
    REQUIRE_THAT(std::abs(r.matrix(0, 0) - expected), WithinAbs(0.0, 1e-11));
}

TEST_CASE("jet transport on simple inhomogeneous problems") {
    SECTION("constant inhomogeneity accumulates the primitive") {
        CompanionSystem sys = companion_system(DifferentialOperator::derivative(), RationalFunction(1.0));
        JetVector init{cdouble(0.0), Eigen::VectorXcd::Zero(1)};
        JetVector out = transport_jet(sys, segment(0.0, 1.0), init, kCfg);
        REQUIRE_THAT(std::abs(out.values(0) - 1.0), WithinAbs(0.0, 1e-12));
    }
    SECTION("reciprocal inhomogeneity around a loop accumulates the residue, against quadrature") {
        CompanionSystem sys = companion_system(DifferentialOperator::derivative(), parse_rational("1/t"));
        PathPolyline loop = testsup::circle_loop(0.0, 1.0, 64);
        JetVector init{cdouble(1.0), Eigen::VectorXcd::Zero(1)};
        JetVector out = transport_jet(sys, loop, init, kCfg);
        const oracle::C expected = oracle::integrate_polyline([](oracle::C t) { return 1.0 / t; }, loop.vertices);
        REQUIRE_THAT(std::abs(out.values(0) - expected), WithinAbs(0.0, 1e-10));
        REQUIRE_THAT(std::abs(expected - cdouble(0.0, kTwoPi)), WithinAbs(0.0, 1e-10));
    }
    SECTION("without inhomogeneity the jet transforms linearly") {
        DifferentialOperator L = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
        CompanionSystem sys = companion_system(L, std::nullopt);
        PathPolyline path = segment(cdouble(0.5, 1.0), cdouble(0.5, 2.0));
        TransferResult r = transfer(sys, path, kCfg);
        Eigen::VectorXcd v(2);
        v << cdouble(0.3, -0.2), cdouble(1.1, 0.7);
        JetVector out = transport_jet(sys, path, JetVector{cdouble(0.5, 1.0), v}, kCfg);
        REQUIRE_THAT((out.values - r.matrix * v).norm(), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("transfers compose along concatenated paths") {
    DifferentialOperator L = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
    CompanionSystem sys = companion_system(L, std::nullopt);
    PathPolyline p1 = segment(cdouble(0.5, 1.0), cdouble(-0.5, 0.5));
    PathPolyline p2 = segment(cdouble(-0.5, 0.5), cdouble(0.3, -0.8));
    TransferResult t1 = transfer(sys, p1, kCfg);
    TransferResult t2 = transfer(sys, p2, kCfg);
    TransferResult whole = transfer(sys, concat_paths(p1, p2), kCfg);
    const double err = t1.error_estimate + t2.error_estimate + whole.error_estimate + 1e-13;
    REQUIRE((whole.matrix - t2.matrix * t1.matrix).norm() <= 10.0 * err);
}

TEST_CASE("reversal inverts the transfer") {
    DifferentialOperator L = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
    CompanionSystem sys = companion_system(L, std::nullopt);
    PathPolyline loop = testsup::circle_loop(cdouble(0.0), 0.5, 16);
    TransferResult fwd = transfer(sys, loop, kCfg);
    TransferResult bwd = transfer(sys, reverse_path(loop), kCfg);
    REQUIRE((bwd.matrix * fwd.matrix - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("interior perturbations within the clearance do not change a loop transfer") {
    DifferentialOperator L = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
    CompanionSystem sys = companion_system(L, std::nullopt);
    NumericsConfig cfg = kCfg;
    cfg.clearance = 0.2;
    PathPolyline loop = testsup::circle_loop(cdouble(0.0), 0.55, 24);
    TransferResult base = transfer(sys, loop, cfg);
    PathPolyline wobbled = loop;
    std::mt19937 rng(97531);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    for (std::size_t k = 1; k + 1 < wobbled.vertices.size(); ++k)
        wobbled.vertices[k] += cfg.clearance * 0.45 * cdouble(d(rng), d(rng));
    TransferResult moved = transfer(sys, wobbled, cfg);
    const double allowance = 10.0 * (base.error_estimate + moved.error_estimate) + 1e-12;
    REQUIRE((base.matrix - moved.matrix).norm() <= allowance);
}

TEST_CASE("halving the step scale changes the result by less than the reported error") {
    DifferentialOperator L = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
    CompanionSystem sys = companion_system(L, std::nullopt);
    PathPolyline loop = testsup::circle_loop(cdouble(0.5, 1.0), 0.4, 16);
    NumericsConfig coarse = kCfg;
    TransferResult a = transfer(sys, loop, coarse);
    NumericsConfig fine = kCfg;
    fine.step_scale = 0.5;
    TransferResult b = transfer(sys, loop, fine);
    REQUIRE(b.steps > a.steps);
    REQUIRE((a.matrix - b.matrix).norm() <= a.error_estimate + 1e-13);
}

TEST_CASE("determinant of a loop transfer matches the trace integral") {
    // d/dt det W = -(p_{n-1}/p_n) det W, so det of the transfer equals
    // exp(-integral of p1/p2); the integral is computed by the independent
    // quadrature oracle along the same polyline.
    DifferentialOperator L = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4");
    CompanionSystem sys = companion_system(L, std::nullopt);
    const RationalFunction ratio = L.coefficient(1) / L.coefficient(2);
    for (double radius : {0.4, 0.7}) {
        PathPolyline loop = testsup::circle_loop(cdouble(0.0), radius, 32);
        TransferResult r = transfer(sys, loop, kCfg);
        const oracle::C integral =
            oracle::integrate_polyline([&](oracle::C t) { return ratio.eval(t); }, loop.vertices);
        const cdouble expected = std::exp(-integral);
        REQUIRE_THAT(std::abs(r.matrix.determinant() - expected), WithinAbs(0.0, 1e-8));
    }
}

TEST_CASE("paths crossing the clearance zone are rejected") {
    CompanionSystem sys = companion_system(parse_operator("t*D - 1/3"), std::nullopt);
    NumericsConfig cfg = kCfg;
    cfg.clearance = 0.1;
    PathPolyline close = segment(cdouble(-1.0, 0.01), cdouble(1.0, 0.01));
    REQUIRE_THROWS_AS(transfer(sys, close, cfg), PathTooCloseToSingularity);
}

TEST_CASE("degenerate paths are rejected at validation") {
    PathPolyline p;
    p.vertices = {cdouble(0.0)};
    REQUIRE_THROWS_AS(p.validate(), Error);
    p.vertices = {cdouble(0.0), cdouble(0.0)};
    REQUIRE_THROWS_AS(p.validate(), Error);
}

TEST_CASE("winding numbers of constructed loops") {
    PathPolyline loop = testsup::circle_loop(cdouble(1.0), 0.5, 16);
    REQUIRE_THAT(winding_number(loop, cdouble(1.0)), WithinAbs(1.0, 1e-9));
    REQUIRE_THAT(winding_number(loop, cdouble(3.0)), WithinAbs(0.0, 1e-9));
    PathPolyline rev = reverse_path(loop);
    REQUIRE_THAT(winding_number(rev, cdouble(1.0)), WithinAbs(-1.0, 1e-9));
}

TEST_CASE("augmented systems carry the inhomogeneity in the last column") {
    CompanionSystem sys = companion_system(parse_operator("D^2"), RationalFunction(1.0));
    CompanionSystem aug = augment(sys);
    REQUIRE(aug.dim == 3);
    REQUIRE_FALSE(aug.inhomogeneous());
    REQUIRE(approx_equal(aug.A[1][2], RationalFunction(1.0)));  // b lands in the last column
    REQUIRE(aug.A[2][0].is_zero());
    REQUIRE(aug.A[2][1].is_zero());
    REQUIRE(aug.A[2][2].is_zero());
}
