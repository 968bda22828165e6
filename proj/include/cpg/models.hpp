#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cpg/special_functions.hpp"

// Parameter sets, Bernstein functions, Levy measures, marginal densities and
// moments of the subordinator families:
//
//   GN   - compound Poisson-Gamma  G(N(t)),            f(u) = lambda (1 - (beta/(beta+u))^alpha)
//   EN   - compound Poisson-exponential (GN, alpha=1)
//   GNa  - Gamma process on a drifted Poisson clock G(a t + N(t))
//   ENa  - GNa at alpha = 1
//   DriftedPoisson - the clock a t + N(t) itself
//
// plus the moments of the counting process N1(G(a t + N(t))).

namespace cpg {

/// The five scalars parameterizing every process here.  `lambda` drives the
/// inner Poisson clock, (`alpha`, `beta`) the Gamma jumps, `lambda1` the
/// outer Poisson counts, `a` the drift of the clock.
struct ModelParams {
    double lambda = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    double lambda1 = 1.0;
    double a = 0.0;

    void validate() const {
        if (!(lambda > 0.0) || !(alpha > 0.0) || !(beta > 0.0) ||
            !(lambda1 > 0.0) || !(a >= 0.0))
            throw std::invalid_argument(
                "ModelParams: need lambda, alpha, beta, lambda1 > 0 and a >= 0");
    }
};

enum class Subordinator { gn, en, gna, ena, drifted_poisson };

/// A subordinator described by its Bernstein function and Levy measure.
/// The Levy measure may carry a continuous density, discrete atoms (the
/// drifted Poisson clock jumps by 1), or both; `drift` is the linear part
/// of the Bernstein function.  `atom_at_zero`, when set, maps t to the
/// probability mass of the time-t marginal at zero.
struct LevyCharacterization {
    std::function<double(double)> bernstein;
    std::function<double(double)> levy_density;
    std::vector<std::pair<double, double>> levy_atoms;  // (jump size, intensity)
    double drift = 0.0;
    std::function<double(double)> atom_at_zero;  // null when there is no atom
    bool total_mass_finite = true;
};

struct MomentSet {
    double mean = 0.0;
    double variance = 0.0;
    std::function<double(double, double)> covariance;
};

enum class MomentFamily { drifted_poisson, gna, n1gna };

namespace detail {

// log(beta / (lambda1 + beta)), the workhorse ratio x of all closed forms.
inline double log_x(const ModelParams& p) {
    return std::log(p.beta) - std::log(p.lambda1 + p.beta);
}

}  // namespace detail

/// Bernstein function of G(a t + N(t)):
///   f(u) = a alpha log(1 + u/beta) + lambda (1 - (1 + u/beta)^{-alpha}).
inline double bernstein_gna(double u, double lambda, double alpha, double beta,
                            double a) {
    const double l1p = std::log1p(u / beta);
    return a * alpha * l1p - lambda * std::expm1(-alpha * l1p);
}

/// Levy density of G(a t + N(t)):
///   nu(x) = e^{-beta x} x^{-1} (a alpha + lambda beta^alpha x^alpha / Gamma(alpha)).
inline double levy_density_gna(double x, double lambda, double alpha,
                               double beta, double a) {
    if (!(x > 0.0)) throw std::domain_error("levy_density_gna: x must be > 0");
    const double poly =
        a * alpha +
        lambda * std::exp(alpha * std::log(beta * x) - std::lgamma(alpha));
    return std::exp(-beta * x) * poly / x;
}

inline LevyCharacterization characterize(Subordinator family,
                                         const ModelParams& p) {
    p.validate();
    if ((family == Subordinator::en || family == Subordinator::ena) &&
        p.alpha != 1.0)
        throw std::invalid_argument("characterize: EN/ENa require alpha = 1");

    LevyCharacterization out;
    const double lambda = p.lambda, alpha = p.alpha, beta = p.beta;
    switch (family) {
        case Subordinator::gn:
        case Subordinator::en:
            out.bernstein = [=](double u) {
                return bernstein_gna(u, lambda, alpha, beta, 0.0);
            };
            out.levy_density = [=](double x) {
                return levy_density_gna(x, lambda, alpha, beta, 0.0);
            };
            out.atom_at_zero = [=](double t) { return std::exp(-lambda * t); };
            out.total_mass_finite = true;
            break;
        case Subordinator::gna:
        case Subordinator::ena: {
            const double a = p.a;
            out.bernstein = [=](double u) {
                return bernstein_gna(u, lambda, alpha, beta, a);
            };
            out.levy_density = [=](double x) {
                return levy_density_gna(x, lambda, alpha, beta, a);
            };
            if (a == 0.0)
                out.atom_at_zero = [=](double t) { return std::exp(-lambda * t); };
            out.total_mass_finite = (a == 0.0);
            break;
        }
        case Subordinator::drifted_poisson: {
            const double a = p.a;
            out.bernstein = [=](double u) {
                return a * u - lambda * std::expm1(-u);
            };
            out.levy_density = [](double) { return 0.0; };
            out.levy_atoms = {{1.0, lambda}};
            out.drift = a;
            if (a == 0.0)
                out.atom_at_zero = [=](double t) { return std::exp(-lambda * t); };
            out.total_mass_finite = true;
            break;
        }
    }
    return out;
}

/// Density of G(a t + N(t)) at y > 0, for a > 0 (the law is absolutely
/// continuous only in that case):
///   e^{-y beta - lambda t} (y beta)^{alpha a t} y^{-1}
///     Phi(alpha, alpha a t, lambda t (beta y)^alpha).
inline double density_gna(double y, double t, const ModelParams& p,
                          const SeriesControl& ctl = {}) {
    p.validate();
    if (p.a == 0.0)
        throw std::domain_error(
            "density_gna: a = 0 has an atom at zero, use dist_gn_with_atom");
    if (!(y > 0.0) || !(t > 0.0))
        throw std::domain_error("density_gna: need y > 0, t > 0");
    const double lby = std::log(p.beta * y);
    const double logpre =
        -y * p.beta - p.lambda * t + p.alpha * p.a * t * lby - std::log(y);
    const double z = p.lambda * t * std::exp(p.alpha * lby);
    return std::exp(logpre) * wright_phi(p.alpha, p.alpha * p.a * t, z, ctl);
}

/// Density of E(a t + N(t)) at y > 0 (alpha = 1 case of density_gna),
/// written through the modified Bessel function:
///   e^{-y beta - lambda t} beta^{(at+1)/2} (y/(lambda t))^{(at-1)/2}
///     I_{at-1}(2 sqrt(lambda beta t y)).
inline double density_ena(double y, double t, const ModelParams& p,
                          const SeriesControl& ctl = {}) {
    p.validate();
    if (p.a == 0.0)
        throw std::domain_error(
            "density_ena: a = 0 has an atom at zero, use dist_gn_with_atom");
    if (!(y > 0.0) || !(t > 0.0))
        throw std::domain_error("density_ena: need y > 0, t > 0");
    const double at = p.a * t;
    const double logpre = -y * p.beta - p.lambda * t +
                          0.5 * (at + 1.0) * std::log(p.beta) +
                          0.5 * (at - 1.0) * (std::log(y) - std::log(p.lambda * t));
    const double arg = 2.0 * std::sqrt(p.lambda * p.beta * t * y);
    return std::exp(logpre) * bessel_i(at - 1.0, arg, ctl);
}

struct AtomDensity {
    double atom;
    double density;
};

/// Law of G(N(t)) (no drift): atom e^{-lambda t} at zero plus the density
///   e^{-lambda t - beta s} s^{-1} Phi(alpha, 0, lambda t (beta s)^alpha)
/// on s > 0.
inline AtomDensity dist_gn_with_atom(double s, double t, const ModelParams& p,
                                     const SeriesControl& ctl = {}) {
    p.validate();
    if (!(s > 0.0) || !(t > 0.0))
        throw std::domain_error("dist_gn_with_atom: need s > 0, t > 0");
    const double atom = std::exp(-p.lambda * t);
    const double z = p.lambda * t * std::exp(p.alpha * std::log(p.beta * s));
    const double density = std::exp(-p.lambda * t - p.beta * s - std::log(s)) *
                           wright_phi(p.alpha, 0.0, z, ctl);
    return {atom, density};
}

/// First two moments (with the min(t, s) covariance of processes with
/// stationary independent increments).
inline MomentSet moments(MomentFamily family, const ModelParams& p, double t) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("moments: need t > 0");
    double mean_rate = 0.0, var_rate = 0.0;
    switch (family) {
        case MomentFamily::drifted_poisson:
            mean_rate = p.lambda + p.a;
            var_rate = p.lambda;
            break;
        case MomentFamily::gna:
            mean_rate = p.alpha / p.beta * (p.lambda + p.a);
            var_rate = p.alpha / (p.beta * p.beta) *
                       (p.lambda * p.alpha + p.lambda + p.a);
            break;
        case MomentFamily::n1gna:
            mean_rate = p.lambda1 * p.alpha / p.beta * (p.lambda + p.a);
            var_rate = p.lambda1 * p.alpha / (p.beta * p.beta) *
                       (p.lambda1 * (p.lambda * p.alpha + p.lambda + p.a) +
                        (p.lambda + p.a) * p.beta);
            break;
    }
    MomentSet m;
    m.mean = mean_rate * t;
    m.variance = var_rate * t;
    m.covariance = [var_rate](double u, double v) {
        return var_rate * std::min(u, v);
    };
    return m;
}

}  // namespace cpg
