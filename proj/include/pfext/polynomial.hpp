#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pfext/errors.hpp"
#include "pfext/numerics.hpp"

namespace pfext {

// Dense univariate polynomial over complex doubles.  coefficient(k) multiplies
// t^k.  The zero polynomial has an empty coefficient list; otherwise the
// leading (highest stored) coefficient is exactly nonzero.  Arithmetic trims
// exact zero leading coefficients only; tolerance-based trimming is explicit
// via chopped(), so tiny but intentional coefficients survive + and -.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(double c) : Polynomial(cdouble(c)) {}
    Polynomial(cdouble c) {
        if (c != cdouble(0.0)) coeffs_.push_back(c);
    }
    explicit Polynomial(std::vector<cdouble> coeffs) : coeffs_(std::move(coeffs)) { trim_exact(); }

    static Polynomial variable() { return Polynomial(std::vector<cdouble>{0.0, 1.0}); }
    static Polynomial power_of_variable(int k) {
        std::vector<cdouble> c(static_cast<std::size_t>(k) + 1, 0.0);
        c.back() = 1.0;
        return Polynomial(std::move(c));
    }

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is -1 by convention.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    cdouble coefficient(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
        return coeffs_[static_cast<std::size_t>(k)];
    }
    const std::vector<cdouble>& coefficients() const { return coeffs_; }

    cdouble leading() const { return coeffs_.empty() ? cdouble(0.0) : coeffs_.back(); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    cdouble eval(cdouble t) const {
        cdouble acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return Polynomial();
        std::vector<cdouble> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * double(k);
        return Polynomial(std::move(d));
    }

    // Coefficients of p(center + u) as a polynomial in u (in-place Taylor shift).
    Polynomial shifted(cdouble center) const {
        if (coeffs_.empty()) return Polynomial();
        std::vector<cdouble> r = coeffs_;
        const int n = static_cast<int>(r.size()) - 1;
        for (int k = 0; k < n; ++k)
            for (int j = n - 1; j >= k; --j) r[static_cast<std::size_t>(j)] += center * r[static_cast<std::size_t>(j) + 1];
        return Polynomial(std::move(r));
    }

    // Coefficient list reversed: t^deg * p(1/t).
    Polynomial reversed() const {
        std::vector<cdouble> r(coeffs_.rbegin(), coeffs_.rend());
        return Polynomial(std::move(r));
    }

    Polynomial times_power(int k) const {
        if (is_zero() || k == 0) return k == 0 ? *this : Polynomial();
        std::vector<cdouble> r(coeffs_.size() + static_cast<std::size_t>(k), 0.0);
        std::copy(coeffs_.begin(), coeffs_.end(), r.begin() + k);
        return Polynomial(std::move(r));
    }

    // Lowest index with a coefficient significant relative to the largest one;
    // -1 for (numerically) zero polynomials.
    int order_at_zero(double rel_tol = kTrimRelTol) const {
        const double thr = rel_tol * max_abs();
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            if (std::abs(coeffs_[k]) > thr) return static_cast<int>(k);
        return -1;
    }

    // Drop leading coefficients that are negligible against the largest one.
    Polynomial chopped(double rel_tol = kTrimRelTol) const {
        const double thr = rel_tol * max_abs();
        std::size_t n = coeffs_.size();
        while (n > 0 && std::abs(coeffs_[n - 1]) <= thr) --n;
        return Polynomial(std::vector<cdouble>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(n)));
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        return *this / leading();
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<cdouble> r(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t k = 0; k < a.coeffs_.size(); ++k) r[k] += a.coeffs_[k];
        for (std::size_t k = 0; k < b.coeffs_.size(); ++k) r[k] += b.coeffs_[k];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<cdouble> r(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t k = 0; k < a.coeffs_.size(); ++k) r[k] += a.coeffs_[k];
        for (std::size_t k = 0; k < b.coeffs_.size(); ++k) r[k] -= b.coeffs_[k];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a) {
        std::vector<cdouble> r = a.coeffs_;
        for (auto& c : r) c = -c;
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<cdouble> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Polynomial& a, cdouble s) { return a * Polynomial(s); }
    friend Polynomial operator*(cdouble s, const Polynomial& a) { return a * Polynomial(s); }
    friend Polynomial operator/(const Polynomial& a, cdouble s) {
        std::vector<cdouble> r = a.coeffs_;
        for (auto& c : r) c /= s;
        return Polynomial(std::move(r));
    }

    Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
    Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
    Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

    std::string to_string(const std::string& var = "t") const;

private:
    void trim_exact() {
        while (!coeffs_.empty() && coeffs_.back() == cdouble(0.0)) coeffs_.pop_back();
    }

    std::vector<cdouble> coeffs_;
};

// Euclidean division with a cleanup of remainder entries that are pure
// cancellation noise.  Throws on division by the zero polynomial.
inline std::pair<Polynomial, Polynomial> divrem(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    if (a.degree() < b.degree()) return {Polynomial(), a};
    std::vector<cdouble> rem(a.coefficients());
    const int db = b.degree();
    const cdouble lb = b.leading();
    std::vector<cdouble> quot(static_cast<std::size_t>(a.degree() - db) + 1, 0.0);
    for (int k = a.degree() - db; k >= 0; --k) {
        const cdouble q = rem[static_cast<std::size_t>(k + db)] / lb;
        quot[static_cast<std::size_t>(k)] = q;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= q * b.coefficient(j);
    }
    rem.resize(static_cast<std::size_t>(db) > 0 ? static_cast<std::size_t>(db) : 0);
    Polynomial quotient{std::move(quot)};
    double scale = a.max_abs() + b.max_abs() * (1.0 + quotient.max_abs());
    for (auto& c : rem)
        if (std::abs(c) <= 5e-14 * scale) c = 0.0;
    return {std::move(quotient), Polynomial(std::move(rem))};
}

// Approximate monic gcd via the Euclidean algorithm; remainders whose size
// falls below rel_tol of the operand scale are treated as zero.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b, double rel_tol = kGcdRelTol) {
    Polynomial A = a.chopped(rel_tol);
    Polynomial B = b.chopped(rel_tol);
    if (A.is_zero()) return B.monic();
    if (B.is_zero()) return A.monic();
    if (A.degree() < B.degree()) std::swap(A, B);
    while (!B.is_zero()) {
        if (B.degree() == 0) return Polynomial(1.0);
        const double scale = std::max(A.max_abs(), B.max_abs());
        Polynomial r = divrem(A, B).second.chopped(rel_tol);
        if (r.max_abs() <= rel_tol * scale) r = Polynomial();
        A = B;
        B = r.is_zero() ? r : r / cdouble(r.max_abs());
    }
    return A.monic();
}

// Exact-division helper for factors found by gcd: returns the quotient and
// checks the remainder is negligible.
inline Polynomial divide_out(const Polynomial& a, const Polynomial& factor, double rel_tol = kGcdRelTol) {
    auto [q, r] = divrem(a, factor);
    if (r.max_abs() > 1e4 * rel_tol * std::max(1.0, a.max_abs()))
        throw Error("inexact polynomial division where an exact factor was expected");
    return q;
}

inline Polynomial lcm(const Polynomial& a, const Polynomial& b, double rel_tol = kGcdRelTol) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    Polynomial g = gcd(a, b, rel_tol);
    return (divide_out(a, g, rel_tol) * b).monic();
}

struct RootCluster {
    cdouble center;
    int multiplicity;
};

// All roots of p, clustered into multiplicity groups at relative tolerance
// cluster_tol.  Computed from the companion matrix with a Newton polish.
// Throws RootIsolationFailure when distinct clusters cannot be separated.
inline std::vector<RootCluster> roots(const Polynomial& p, double cluster_tol = kClusterTol) {
    Polynomial q = p.chopped();
    if (q.degree() <= 0) {
        if (q.is_zero() && !p.is_zero())
            throw RootIsolationFailure("cannot isolate roots of a numerically zero polynomial");
        return {};
    }
    q = q.monic();
    const int n = q.degree();

    std::vector<cdouble> raw;
    raw.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        raw.push_back(-q.coefficient(0));
    } else {
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) C(i, n - 1) = -q.coefficient(i);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) throw RootIsolationFailure("eigenvalue iteration for roots failed");
        for (int i = 0; i < n; ++i) raw.push_back(es.eigenvalues()(i));
    }

    const Polynomial dq = q.derivative();
    for (auto& r : raw) {
        for (int it = 0; it < 4; ++it) {
            const cdouble d = dq.eval(r);
            if (std::abs(d) < 1e-14) break;  // multiple root: leave to clustering
            const cdouble step = q.eval(r) / d;
            if (!finite(step)) break;
            r -= step;
        }
    }

    double scale = 1.0;
    for (const auto& r : raw) scale = std::max(scale, std::abs(r));
    const double tol = cluster_tol * scale;

    std::vector<RootCluster> clusters;
    std::vector<cdouble> sums;
    for (const auto& r : raw) {
        bool placed = false;
        for (std::size_t k = 0; k < clusters.size(); ++k) {
            if (std::abs(r - clusters[k].center) <= tol) {
                sums[k] += r;
                clusters[k].multiplicity += 1;
                clusters[k].center = sums[k] / double(clusters[k].multiplicity);
                placed = true;
                break;
            }
        }
        if (!placed) {
            clusters.push_back({r, 1});
            sums.push_back(r);
        }
    }

    // Distinct clusters must sit well clear of the clustering tolerance;
    // near-multiple roots carry O(sqrt(machine eps)) noise, so a narrow
    // margin would let noise-displaced pairs slip through as separate roots.
    for (std::size_t i = 0; i < clusters.size(); ++i)
        for (std::size_t j = i + 1; j < clusters.size(); ++j)
            if (std::abs(clusters[i].center - clusters[j].center) < 5.0 * tol)
                throw RootIsolationFailure("root clusters are not separated at the requested tolerance");

    std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });
    return clusters;
}

inline std::string format_complex(cdouble z) {
    std::ostringstream os;
    os.precision(12);
    if (z.imag() == 0.0) {
        os << z.real();
    } else if (z.real() == 0.0) {
        os << z.imag() << "i";
    } else {
        os << "(" << z.real() << (z.imag() >= 0 ? "+" : "") << z.imag() << "i)";
    }
    return os.str();
}

inline std::string Polynomial::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const cdouble c = coefficient(k);
        if (c == cdouble(0.0)) continue;
        if (!first) os << " + ";
        first = false;
        if (k == 0) {
            os << format_complex(c);
        } else {
            if (c != cdouble(1.0)) os << format_complex(c) << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

}  // namespace pfext
