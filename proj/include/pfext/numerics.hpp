#pragma once

#include <complex>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>

namespace pfext {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Default tolerances. Every analysis entry point takes a NumericsConfig, so
// these are starting values, not hard-wired constants.
inline constexpr double kGcdRelTol = 1e-12;     // approximate gcd / canonical forms
inline constexpr double kClusterTol = 1e-8;     // root clustering for multiplicities
inline constexpr double kTrimRelTol = 1e-12;    // degree trim for derived polynomials

struct NumericsConfig {
    // Taylor continuation
    double theta = 0.4;             // step radius as a fraction of distance to nearest pole
    int taylor_order_min = 24;
    int taylor_order_max = 64;
    double tail_target = 1e-16;     // relative per-step series cutoff (precision target)
    double step_scale = 1.0;        // <1 forces finer step subdivision

    // geometry
    double clearance = 0.0;         // absolute clearance; 0 means clearance_factor * separation
    double clearance_factor = 0.1;

    // verdicts and checks
    double tol_class = 1e-6;        // relative residual threshold for coboundary verdicts
    double tol_consistency = 1e-7;  // unipotency / product-relation matrix norms
    double tol_eigen_match = 1e-6;  // eigenvalue-multiset matching distance
    double cluster_tol = kClusterTol;
    double gcd_tol = kGcdRelTol;

    std::uint64_t seed = 20240915;
};

inline double wrap_angle_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
}

inline bool finite(cdouble z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace pfext
