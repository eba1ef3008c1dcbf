#pragma once

#include <utility>
#include <vector>

#include "pfext/polynomial.hpp"

namespace pfext {

// Rational function num/den in canonical form: den is monic and nonzero, the
// pair has no common factor at the working tolerance, and 0 is stored as 0/1.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(1.0) {}
    RationalFunction(double c) : num_(c), den_(1.0) {}
    RationalFunction(cdouble c) : num_(c), den_(1.0) {}
    RationalFunction(Polynomial num) : num_(std::move(num)), den_(1.0) {}
    RationalFunction(Polynomial num, Polynomial den, double rel_tol = kGcdRelTol)
        : num_(std::move(num)), den_(std::move(den)) {
        canonicalize(rel_tol);
    }

    static RationalFunction variable() { return RationalFunction(Polynomial::variable()); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    cdouble eval(cdouble t) const { return num_.eval(t) / den_.eval(t); }

    RationalFunction derivative() const {
        return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw Error("division by the zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }

    std::vector<RootCluster> zeros(double cluster_tol = kClusterTol) const {
        return is_zero() ? std::vector<RootCluster>{} : roots(num_, cluster_tol);
    }
    std::vector<RootCluster> poles(double cluster_tol = kClusterTol) const { return roots(den_, cluster_tol); }

    // Taylor coefficients of the function around `center`, count terms.
    // Throws when center is (numerically) a pole.
    std::vector<cdouble> taylor(cdouble center, int count) const {
        Polynomial n = num_.shifted(center);
        Polynomial d = den_.shifted(center);
        const cdouble d0 = d.coefficient(0);
        if (std::abs(d0) <= 1e-13 * std::max(1.0, d.max_abs()))
            throw NumericError("series expansion requested at a pole");
        std::vector<cdouble> out(static_cast<std::size_t>(count), 0.0);
        for (int k = 0; k < count; ++k) {
            cdouble acc = n.coefficient(k);
            for (int j = 1; j <= k; ++j) acc -= d.coefficient(j) * out[static_cast<std::size_t>(k - j)];
            out[static_cast<std::size_t>(k)] = acc / d0;
        }
        return out;
    }

    std::string to_string(const std::string& var = "t") const {
        if (is_polynomial()) return num_.to_string(var);
        return "(" + num_.to_string(var) + ") / (" + den_.to_string(var) + ")";
    }

private:
    void canonicalize(double rel_tol) {
        den_ = den_.chopped(rel_tol);
        if (den_.is_zero()) throw Error("rational function with zero denominator");
        num_ = num_.chopped(rel_tol);
        if (num_.is_zero()) {
            num_ = Polynomial();
            den_ = Polynomial(1.0);
            return;
        }
        Polynomial g = gcd(num_, den_, rel_tol);
        if (g.degree() >= 1) {
            num_ = divide_out(num_, g, rel_tol);
            den_ = divide_out(den_, g, rel_tol);
        }
        const cdouble lc = den_.leading();
        den_ = den_ / lc;
        num_ = num_ / lc;
        if (den_.degree() == 0) den_ = Polynomial(1.0);
    }

    Polynomial num_;
    Polynomial den_;
};

// Logarithmic derivative g'/g; rejects the zero function.
inline RationalFunction dlog(const RationalFunction& g) {
    if (g.is_zero()) throw ZeroFunction();
    return g.derivative() / g;
}

// Approximate equality by cross-multiplication, relative to coefficient size.
inline bool approx_equal(const RationalFunction& a, const RationalFunction& b, double tol = 1e-10) {
    Polynomial diff = a.num() * b.den() - b.num() * a.den();
    double scale = std::max({1.0, a.num().max_abs() * b.den().max_abs(), b.num().max_abs() * a.den().max_abs()});
    return diff.max_abs() <= tol * scale;
}

}  // namespace pfext
