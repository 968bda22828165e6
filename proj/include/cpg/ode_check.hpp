#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cpg/iterate.hpp"
#include "cpg/models.hpp"
#include "cpg/pmf.hpp"
#include "cpg/quadrature.hpp"

// Residual checks of the difference-differential systems: the central
// difference of d/dt p_k(t) against the right-hand side built from the
// printed coefficient lists (or, for the generic system, from quadrature
// moments of the Levy measure).  Residuals shrink as O(h^2) when both the
// pmf and the coefficients are right.

namespace cpg {

enum class OdeSystem { generic, gn, en, gna, chain };

namespace detail {

template <class Pmf>
double central_difference(Pmf&& pk, double t, double h) {
    if (!(h > 0.0) || !(t - h > 0.0))
        throw std::domain_error("ode residual: need 0 < h < t");
    return (pk(t + h) - pk(t - h)) / (2.0 * h);
}

}  // namespace detail

/// Generic system for any counting family:
///   d/dt p_k = -f(lambda1) p_k + sum_{m=1}^{k} lambda1^m/m!
///              [int e^{-lambda1 s} s^m nu(ds)] p_{k-m},
/// with the moments integrated numerically from the characterization.
inline double ode_residual_generic(Counting family, long k, double t,
                                   const ModelParams& p, double h,
                                   const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0) throw std::domain_error("ode_residual_generic: need k >= 0");
    Subordinator sub = Subordinator::gn;
    switch (family) {
        case Counting::n1gn: sub = Subordinator::gn; break;
        case Counting::n1en: sub = Subordinator::en; break;
        case Counting::n1gna: sub = Subordinator::gna; break;
        case Counting::n1ena: sub = Subordinator::ena; break;
    }
    const auto chr = characterize(sub, p);
    const double fd = detail::central_difference(
        [&](double u) { return pmf(family, k, u, p, ctl); }, t, h);
    double rhs = -chr.bernstein(p.lambda1) * pmf(family, k, t, p, ctl);
    QuadratureOptions qopt;
    qopt.abs_tol = 1e-13;
    for (long m = 1; m <= k; ++m) {
        const double moment = integrate_to_inf(
            [&](double s) {
                return std::exp(-p.lambda1 * s + m * std::log(s)) *
                       chr.levy_density(s);
            },
            0.0, 1.0, qopt);
        const double scale =
            std::exp(m * std::log(p.lambda1) - std::lgamma(m + 1.0));
        rhs += scale * moment * pmf(family, k - m, t, p, ctl);
    }
    return std::abs(fd - rhs);
}

/// System of the N1(G_N) probabilities:
///   d/dt p_k = (lambda x^alpha - lambda) p_k
///            + lambda x^alpha sum_{m=1}^{k} q^m Gamma(m+alpha)/(m! Gamma(alpha)) p_{k-m}.
inline double ode_residual_gn(long k, double t, const ModelParams& p, double h,
                              const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0) throw std::domain_error("ode_residual_gn: need k >= 0");
    const double xa = std::exp(p.alpha * detail::log_x(p));
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double fd = detail::central_difference(
        [&](double u) { return pmf_n1gn(k, u, p, ctl); }, t, h);
    double rhs = (p.lambda * xa - p.lambda) * pmf_n1gn(k, t, p, ctl);
    for (long m = 1; m <= k; ++m)
        rhs += p.lambda * xa *
               std::exp(m * lq + std::lgamma(p.alpha + m) - std::lgamma(m + 1.0) -
                        std::lgamma(p.alpha)) *
               pmf_n1gn(k - m, t, p, ctl);
    return std::abs(fd - rhs);
}

/// System of the N1(E_N) probabilities:
///   d/dt p_k = -lambda q p_k + lambda beta/(lambda1+beta)
///              sum_{m=1}^{k} q^m p_{k-m},   q = lambda1/(lambda1+beta).
inline double ode_residual_en(long k, double t, const ModelParams& p, double h,
                              const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0) throw std::domain_error("ode_residual_en: need k >= 0");
    const double denom = p.lambda1 + p.beta;
    const double q = p.lambda1 / denom;
    const double fd = detail::central_difference(
        [&](double u) { return pmf_n1en(k, u, p, ctl); }, t, h);
    double rhs = -p.lambda * q * pmf_n1en(k, t, p, ctl);
    double qm = 1.0;
    for (long m = 1; m <= k; ++m) {
        qm *= q;
        rhs += p.lambda * p.beta / denom * qm * pmf_n1en(k - m, t, p, ctl);
    }
    return std::abs(fd - rhs);
}

/// System of the N1(G(a t + N(t))) probabilities:
///   d/dt p_k = -(a alpha log(1+lambda1/beta) + lambda (1 - x^alpha)) p_k
///            + sum_{m=1}^{k} q^m/m! (a alpha Gamma(m)
///              + lambda x^alpha Gamma(m+alpha)/Gamma(alpha)) p_{k-m}.
inline double ode_residual_gna(long k, double t, const ModelParams& p, double h,
                               const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0) throw std::domain_error("ode_residual_gna: need k >= 0");
    const double xa = std::exp(p.alpha * detail::log_x(p));
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double fd = detail::central_difference(
        [&](double u) { return pmf_n1gna(k, u, p, ctl); }, t, h);
    double rhs = -(p.a * p.alpha * std::log1p(p.lambda1 / p.beta) +
                   p.lambda * (1.0 - xa)) *
                 pmf_n1gna(k, t, p, ctl);
    for (long m = 1; m <= k; ++m) {
        const double weight =
            std::exp(m * lq - std::lgamma(m + 1.0)) *
            (p.a * p.alpha * std::tgamma(static_cast<double>(m)) +
             p.lambda * xa *
                 std::exp(std::lgamma(p.alpha + m) - std::lgamma(p.alpha)));
        rhs += weight * pmf_n1gna(k - m, t, p, ctl);
    }
    return std::abs(fd - rhs);
}

/// Probabilities of N_mu(X_n(t)) by pgf-coefficient extraction: the
/// exponent's Taylor coefficients come from the chain's exact
/// exponential-sum Levy measure.
inline std::vector<double> chain_counting_pmf(const IterChain& chain, double mu,
                                              double t, int order) {
    if (order < 0 || order > 128)
        throw std::invalid_argument("chain_counting_pmf: order in [0, 128]");
    const ExpSumMeasure measure = chain_levy_measure(chain);
    std::vector<double> g(static_cast<std::size_t>(order) + 1);
    g[0] = -t * compose_bernstein(mu, chain);
    for (int m = 1; m <= order; ++m)
        g[static_cast<std::size_t>(m)] =
            t * std::exp(m * std::log(mu) - std::lgamma(m + 1.0)) *
            exp_sum_exp_moment(measure, mu, m);
    return detail::exp_power_series(g);
}

/// Residual of the iterated-chain system, with the operator sum expanded in
/// its integral form:
///   d/dt p_k = -[sum_j f_{n,j}(mu)] p_k
///            + sum_{m=1}^{k} mu^m/m! [int e^{-mu s} s^m nu_n(ds)] p_{k-m}.
/// The f_{n,j} come from the governing-system component list, the moments
/// from the closed-form measure.
inline double ode_residual_chain(const IterChain& chain, double mu, long k,
                                 double t, double h) {
    if (k < 0 || !(mu > 0.0))
        throw std::domain_error("ode_residual_chain: need k >= 0, mu > 0");
    const auto components = ode_coefficients(chain);
    double f_mu = 0.0;
    for (const auto& c : components) f_mu += c.eval(mu);
    const ExpSumMeasure measure = chain_levy_measure(chain);
    const int order = static_cast<int>(k);
    const double fd = detail::central_difference(
        [&](double u) {
            return chain_counting_pmf(chain, mu, u, order)[static_cast<std::size_t>(k)];
        },
        t, h);
    const auto at_t = chain_counting_pmf(chain, mu, t, order);
    double rhs = -f_mu * at_t[static_cast<std::size_t>(k)];
    for (long m = 1; m <= k; ++m)
        rhs += std::exp(m * std::log(mu) - std::lgamma(m + 1.0)) *
               exp_sum_exp_moment(measure, mu, m) *
               at_t[static_cast<std::size_t>(k - m)];
    return std::abs(fd - rhs);
}

inline double ode_residual(OdeSystem system, Counting family, long k, double t,
                           const ModelParams& p, double h,
                           const SeriesControl& ctl = {}) {
    switch (system) {
        case OdeSystem::generic: return ode_residual_generic(family, k, t, p, h, ctl);
        case OdeSystem::gn: return ode_residual_gn(k, t, p, h, ctl);
        case OdeSystem::en: return ode_residual_en(k, t, p, h, ctl);
        case OdeSystem::gna: return ode_residual_gna(k, t, p, h, ctl);
        case OdeSystem::chain:
            throw std::invalid_argument("ode_residual: use ode_residual_chain");
    }
    throw std::invalid_argument("ode_residual: unknown system");
}

}  // namespace cpg
