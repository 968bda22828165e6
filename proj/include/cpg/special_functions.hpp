#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cpg/series.hpp"

// Series evaluation of the special functions the closed-form distributions
// are written in: the Wright function, the generalized Wright function
// 1Psi1, the three-parameter Mittag-Leffler function and the modified
// Bessel function of the first kind of arbitrary real order.
//
// All series share one convention: gamma functions in denominators are
// applied through recip_gamma(), which is exactly zero at the poles of
// Gamma.  Terms that hit such a pole therefore drop out of the sum, which
// is what the formulas require (their sums implicitly start past the pole).

namespace cpg {

/// sin(pi*x) with exact argument reduction (period-2 remainder first).
inline double sin_pi(double x) {
    const double r = std::remainder(x, 2.0);  // r in [-1, 1], sin has period 2
    return std::sin(std::numbers::pi * r);
}

/// Sign of Gamma(x): +1 / -1, or 0 at the poles (x a non-positive integer).
inline int gamma_sign(double x) {
    if (x > 0.0) return 1;
    if (x == std::floor(x)) return 0;
    return sin_pi(x) > 0.0 ? 1 : -1;
}

/// 1/Gamma(x).  Total function: exactly 0 at non-positive integers, and in
/// the underflow region x > 500.  Arguments below -500 are outside the
/// supported range and also map to 0.
inline double recip_gamma(double x) {
    if (x > 0.0) {
        if (x > 500.0) return 0.0;
        if (x <= 170.0) return 1.0 / std::tgamma(x);
        return std::exp(-std::lgamma(x));  // graceful underflow past 171
    }
    if (x == std::floor(x)) return 0.0;  // poles, including x = 0
    if (x < -500.0) return 0.0;
    // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    const double s = sin_pi(x);
    const double y = 1.0 - x;
    if (y <= 170.0) return s * std::tgamma(y) / std::numbers::pi;
    const double mag = std::exp(std::lgamma(y) + std::log(std::abs(s) / std::numbers::pi));
    return s < 0.0 ? -mag : mag;
}

/// Gamma(x + k) / Gamma(x) for x >= 0 and integer k >= 0, evaluated in log
/// space.  The ratio is 1 at k = 0 and 0 at the x = 0 pole (Gamma(x) blows
/// up while Gamma(k) stays finite), which implements the convention that
/// series written with Gamma(x) in the denominator lose their x = 0 term.
inline double gamma_ratio(double x, long k) {
    if (k == 0) return 1.0;
    if (x < 0.0) throw std::domain_error("gamma_ratio: x must be >= 0");
    if (x == 0.0) return 0.0;
    return std::exp(std::lgamma(x + static_cast<double>(k)) - std::lgamma(x));
}

/// Wright function Phi(rho, delta, z) = sum_k z^k / (k! Gamma(rho k + delta)),
/// rho > 0.  Terms at poles of Gamma vanish via recip_gamma; in particular
/// Phi(rho, 0, z) starts effectively at k = 1.
inline double wright_phi(double rho, double delta, double z,
                         const SeriesControl& ctl = {}) {
    if (!(rho > 0.0)) throw std::invalid_argument("wright_phi: rho must be > 0");
    if (z == 0.0) return recip_gamma(delta);
    const double lz = std::log(std::abs(z));
    const bool negative = z < 0.0;
    return detail::sum_series(
        ctl,
        [=](long k) {
            const double kk = static_cast<double>(k);
            const double mag = std::exp(kk * lz - std::lgamma(kk + 1.0));
            const double t = mag * recip_gamma(rho * kk + delta);
            return (negative && (k & 1)) ? -t : t;
        },
        "wright_phi");
}

/// Generalized Wright function 1Psi1((a, alpha), (b, beta); z)
///   = sum_k Gamma(a + alpha k) / Gamma(b + beta k) * z^k / k!.
/// Requires alpha - beta > -1 for convergence (always true in this library,
/// where alpha = beta) and no poles of the numerator on the summation path.
inline double wright_psi11(double a, double alpha, double b, double beta,
                           double z, const SeriesControl& ctl = {}) {
    if (z == 0.0) return gamma_sign(a) == 0
                             ? std::numeric_limits<double>::infinity()
                             : std::exp(std::lgamma(a)) * gamma_sign(a) * recip_gamma(b);
    const double lz = std::log(std::abs(z));
    const bool negative = z < 0.0;
    return detail::sum_series(
        ctl,
        [=](long k) {
            const double kk = static_cast<double>(k);
            const double num = a + alpha * kk;
            const int sgn = gamma_sign(num);
            if (sgn == 0)
                throw std::domain_error("wright_psi11: numerator gamma at a pole");
            double t = sgn *
                       std::exp(std::lgamma(num) + kk * lz - std::lgamma(kk + 1.0)) *
                       recip_gamma(b + beta * kk);
            return (negative && (k & 1)) ? -t : t;
        },
        "wright_psi11");
}

/// Three-parameter (Prabhakar) Mittag-Leffler function
///   E^gamma_{rho,delta}(z) = sum_k Gamma(gamma + k) / Gamma(gamma)
///                            * z^k / (k! Gamma(rho k + delta)),
/// for rho, delta, gamma > 0.
inline double mittag_leffler3(double rho, double delta, double gamma, double z,
                              const SeriesControl& ctl = {}) {
    if (!(rho > 0.0) || !(delta > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("mittag_leffler3: rho, delta, gamma must be > 0");
    if (z == 0.0) return recip_gamma(delta);
    const double lz = std::log(std::abs(z));
    const double lg = std::lgamma(gamma);
    const bool negative = z < 0.0;
    return detail::sum_series(
        ctl,
        [=](long k) {
            const double kk = static_cast<double>(k);
            const double t = std::exp(std::lgamma(gamma + kk) - lg + kk * lz -
                                      std::lgamma(kk + 1.0)) *
                             recip_gamma(rho * kk + delta);
            return (negative && (k & 1)) ? -t : t;
        },
        "mittag_leffler3");
}

/// Modified Bessel function of the first kind, real order:
///   I_v(z) = sum_n (z/2)^{2n+v} / (n! Gamma(n + v + 1)),  z >= 0.
/// Negative integer orders fold onto positive ones through the vanishing
/// reciprocal-gamma terms.
inline double bessel_i(double order, double z, const SeriesControl& ctl = {}) {
    if (z < 0.0) throw std::domain_error("bessel_i: z must be >= 0");
    if (z == 0.0) {
        if (order == 0.0) return 1.0;
        if (order > 0.0) return 0.0;
        if (order == std::floor(order)) return 0.0;  // I_{-m}(0) = I_m(0)
        return std::numeric_limits<double>::infinity();
    }
    const double lh = std::log(0.5 * z);
    return detail::sum_series(
        ctl,
        [=](long n) {
            const double nn = static_cast<double>(n);
            return std::exp((2.0 * nn + order) * lh - std::lgamma(nn + 1.0)) *
                   recip_gamma(nn + order + 1.0);
        },
        "bessel_i");
}

}  // namespace cpg
