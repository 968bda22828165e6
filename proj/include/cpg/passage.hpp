#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cpg/pmf.hpp"

// Hitting times T_k = inf{s : N1(G_N(s)) = k} and first passage times
// T~_k = inf{s : N1(G_N(s)) >= k}.  The embedded jump chain of the counting
// process (negative-binomial-type jump sizes) gives a renewal recursion that
// serves as the module's ground truth for the series and closed forms.

namespace cpg {

/// Law of a single jump of the time-changed counting process: total jump
/// rate f(lambda1) and the distribution q_j of the jump size j >= 1
/// (q[j] indexes size j; q[0] is unused).  Jump sizes j carry intensity
/// lambda1^j/j! int e^{-lambda1 s} s^j nu(ds); normalizing kills lambda.
struct JumpDistribution {
    double rate = 0.0;
    std::vector<double> q;  // q[j] = P{jump size = j}, q[0] = 0
    double tail = 0.0;

    long jmax() const { return static_cast<long>(q.size()) - 1; }
};

/// Jump law of N1(G_N(.)): q_j proportional to
/// (lambda1/(lambda1+beta))^j Gamma(j+alpha) / (j! Gamma(alpha)).
/// With jmax = 0 the truncation point is chosen so the geometric tail bound
/// drops below 1e-15; an explicit jmax must leave tail <= 1e-12.
inline JumpDistribution jump_distribution(const ModelParams& p, long jmax = 0) {
    p.validate();
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double q_ratio = p.lambda1 / (p.lambda1 + p.beta);
    const double xa = std::exp(p.alpha * detail::log_x(p));
    const double lnorm = p.alpha * detail::log_x(p) - std::log1p(-xa) -
                         std::lgamma(p.alpha);
    const bool automatic = jmax == 0;
    if (!automatic && jmax < 1)
        throw std::invalid_argument("jump_distribution: jmax must be >= 1");

    JumpDistribution out;
    out.rate = p.lambda * (1.0 - xa);
    out.q.push_back(0.0);
    double sum = 0.0;
    for (long j = 1;; ++j) {
        const double qj =
            std::exp(lnorm + std::lgamma(p.alpha + j) - std::lgamma(j + 1.0) + j * lq);
        out.q.push_back(qj);
        sum += qj;
        if (automatic) {
            // ratio q_{j+1}/q_j = q_ratio (j+alpha)/(j+1), < 1 from some j on
            const double r = q_ratio * (j + p.alpha) / (j + 1.0);
            if (r < 1.0 && qj * r / (1.0 - r) < 1e-15) break;
            if (j > 1000000)
                throw truncation_error("jump_distribution: tail did not close");
        } else if (j == jmax) {
            break;
        }
    }
    out.tail = 1.0 - sum;
    if (!automatic && out.tail > 1e-12)
        throw truncation_error("jump_distribution: tail above 1e-12 at given jmax");
    return out;
}

/// Renewal recursion over the embedded jump chain:
///   r_0 = 1,  r_m = sum_{j=1}^{m} q_j r_{m-j},
/// so r_k = P{T_k < infinity}.  Exact up to q's own truncation.
inline double hit_prob_renewal(long k, const JumpDistribution& jd) {
    if (k < 1) throw std::invalid_argument("hit_prob_renewal: need k >= 1");
    if (k > jd.jmax())
        throw std::invalid_argument("hit_prob_renewal: k beyond jump truncation");
    std::vector<double> r(static_cast<std::size_t>(k) + 1);
    r[0] = 1.0;
    for (long m = 1; m <= k; ++m) {
        double acc = 0.0;
        for (long j = 1; j <= m; ++j)
            acc += jd.q[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(m - j)];
        r[static_cast<std::size_t>(m)] = acc;
    }
    return r[static_cast<std::size_t>(k)];
}

/// P{T_k < infinity} for N1(G_N(.)):
///   lambda1^k / (k! (lambda1+beta)^k) (1 - x^alpha)
///     sum_{n>=1} x^{alpha n} Gamma(alpha n + k)/Gamma(alpha n),
/// x = beta/(lambda1+beta).  Does not involve lambda.
inline double hit_prob_n1gn(long k, const ModelParams& p,
                            const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1) throw std::invalid_argument("hit_prob_n1gn: need k >= 1");
    const double lx = detail::log_x(p);
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double logpre = k * lq - std::lgamma(static_cast<double>(k) + 1.0) +
                          std::log1p(-std::exp(p.alpha * lx));
    const double alpha = p.alpha;
    return detail::sum_series(
        ctl,
        [=](long j) {
            const double n = static_cast<double>(j + 1);
            return std::exp(logpre + alpha * n * lx +
                            detail::log_gamma_ratio(alpha * n, k));
        },
        "hit_prob_n1gn");
}

/// P{T_k < infinity} for N1(E_N(.)): beta/(lambda1+beta), independent of k.
inline double hit_prob_n1en(long k, const ModelParams& p) {
    p.validate();
    if (k < 1) throw std::invalid_argument("hit_prob_n1en: need k >= 1");
    return p.beta / (p.lambda1 + p.beta);
}

/// Closed form of P{T_k < infinity} at alpha = 2, obtained by summing the
/// even terms of sum_n x^n Gamma(n+k)/(k! Gamma(n)) = x (1-x)^{-(k+1)}:
///   (1 - x^2) (beta/2) [1/lambda1 - lambda1^k / (lambda1+2 beta)^{k+1}].
inline double hit_prob_alpha2(long k, const ModelParams& p) {
    p.validate();
    if (k < 1) throw std::invalid_argument("hit_prob_alpha2: need k >= 1");
    if (p.alpha != 2.0)
        throw std::invalid_argument("hit_prob_alpha2: requires alpha = 2");
    const double x = p.beta / (p.lambda1 + p.beta);
    const double shifted = std::exp(k * std::log(p.lambda1) -
                                    (k + 1.0) * std::log(p.lambda1 + 2.0 * p.beta));
    return (1.0 - x * x) * 0.5 * p.beta * (1.0 / p.lambda1 - shifted);
}

/// Defective density of T_k for N1(G_N(.)):
///   e^{-lambda s} lambda1^k / (k! (lambda1+beta)^k)
///     sum_{n>=1} c^n Gamma(alpha n + k)/(n! Gamma(alpha n))
///       (n s^{n-1} - s^n c),
/// with c = lambda beta^alpha/(lambda1+beta)^alpha.  Integrates to
/// hit_prob_n1gn(k).
inline double hit_density_n1gn(long k, double s, const ModelParams& p,
                               const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || !(s > 0.0))
        throw std::domain_error("hit_density_n1gn: need k >= 1, s > 0");
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double logpre =
        -p.lambda * s + k * lq - std::lgamma(static_cast<double>(k) + 1.0);
    const double c = p.lambda * std::exp(p.alpha * detail::log_x(p));
    const double lcs = std::log(c * s);
    const double alpha = p.alpha;
    return detail::sum_series(
        ctl,
        [=](long j) {
            const double n = static_cast<double>(j + 1);
            return std::exp(logpre + n * lcs - std::lgamma(n + 1.0) +
                            detail::log_gamma_ratio(alpha * n, k)) *
                   (n / s - c);
        },
        "hit_density_n1gn");
}

/// The same density in the rearranged (convolution) form: an inner double
/// series over 1 <= j <= k-1 plus a boundary term proportional to the
/// zero-count probability.
inline double hit_density_n1gn_grouped(long k, double s, const ModelParams& p,
                                       const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || !(s > 0.0))
        throw std::domain_error("hit_density_n1gn_grouped: need k >= 1, s > 0");
    const double lx = detail::log_x(p);
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double xa = std::exp(p.alpha * lx);
    const double lcs = std::log(p.lambda * s) + p.alpha * lx;
    const double alpha = p.alpha;
    // log of lambda beta^alpha / Gamma(alpha) * lambda1^k / (lambda1+beta)^{alpha+k}
    const double logouter = std::log(p.lambda) + p.alpha * lx - std::lgamma(p.alpha) +
                            k * lq;
    double sum = 0.0;
    for (long j = 1; j <= k - 1; ++j) {
        const double ljfac = std::lgamma(p.alpha + j) -
                             std::lgamma(static_cast<double>(k - j) + 1.0) -
                             std::lgamma(static_cast<double>(j) + 1.0);
        sum += detail::sum_series(
            ctl,
            [=](long m) {
                const double n = static_cast<double>(m + 1);
                return std::exp(logouter - p.lambda * s + ljfac + n * lcs -
                                std::lgamma(n + 1.0) +
                                detail::log_gamma_ratio(alpha * n, k - j));
            },
            "hit_density_n1gn_grouped");
    }
    const double boundary =
        std::exp(p.lambda * s * (xa - 1.0) + logouter + std::lgamma(p.alpha + k) -
                 std::lgamma(static_cast<double>(k) + 1.0));
    return sum + boundary;
}

/// Negative binomial mass P{X = n} with k "successes" and success
/// probability psucc: Gamma(n+k)/(n! Gamma(k)) psucc^k (1-psucc)^n.
inline double negative_binomial_pmf(long n, double k, double psucc) {
    if (n < 0) return 0.0;
    return std::exp(std::lgamma(n + k) - std::lgamma(n + 1.0) - std::lgamma(k) +
                    k * std::log(psucc) + n * std::log1p(-psucc));
}

/// Density of T_k for N1(E_N(.)) in the mixed-Poisson form:
///   lambda beta/(lambda1+beta)
///     sum_{n>=0} P{N_lambda(s) = n} P{N_beta(E_lambda1(k)) = n},
/// where the second factor is negative binomial with k successes at
/// success probability lambda1/(lambda1+beta).
inline double hit_density_n1en(long k, double s, const ModelParams& p,
                               const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || !(s > 0.0))
        throw std::domain_error("hit_density_n1en: need k >= 1, s > 0");
    const double denom = p.lambda1 + p.beta;
    const double psucc = p.lambda1 / denom;
    const double lls = std::log(p.lambda * s);
    return p.lambda * p.beta / denom *
           detail::sum_series(
               ctl,
               [=](long n) {
                   const double nn = static_cast<double>(n);
                   const double pois =
                       std::exp(-p.lambda * s + nn * lls - std::lgamma(nn + 1.0));
                   return pois * negative_binomial_pmf(n, static_cast<double>(k), psucc);
               },
               "hit_density_n1en");
}

/// P{T~_k < s} = P{N1(G_N(s)) >= k}, computed as the complement of the
/// first k closed-form probabilities.
inline double fpt_cdf(long k, double s, const ModelParams& p,
                      const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || s < 0.0) throw std::domain_error("fpt_cdf: need k >= 1, s >= 0");
    if (s == 0.0) return 0.0;
    double low = 0.0;
    for (long j = 0; j < k; ++j) low += pmf_n1gn(j, s, p, ctl);
    return 1.0 - low;
}

/// The same quantity from the double series sum_{j>=k} p_j(s), truncated by
/// the shared tail rule.  Used as a cross-route for fpt_cdf.
inline double fpt_cdf_series(long k, double s, const ModelParams& p,
                             const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || s < 0.0)
        throw std::domain_error("fpt_cdf_series: need k >= 1, s >= 0");
    if (s == 0.0) return 0.0;
    return detail::sum_series(
        ctl, [&](long j) { return pmf_n1gn(k + j, s, p, ctl); },
        "fpt_cdf_series");
}

/// Density of T~_k:
///   e^{-lambda s} sum_{j>=k} (lambda1/(lambda1+beta))^j / j!
///     sum_{n>=1} c^n s^{n-1} (n - lambda s)
///       Gamma(alpha n + j)/(n! Gamma(alpha n)).
inline double fpt_density(long k, double s, const ModelParams& p,
                          const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || !(s > 0.0))
        throw std::domain_error("fpt_density: need k >= 1, s > 0");
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double c = p.lambda * std::exp(p.alpha * detail::log_x(p));
    const double lcs = std::log(c * s);
    const double alpha = p.alpha;
    const double lambda = p.lambda;
    return detail::sum_series(
        ctl,
        [=](long i) {
            const long j = k + i;
            const double logj =
                -lambda * s + j * lq - std::lgamma(static_cast<double>(j) + 1.0);
            return detail::sum_series(
                ctl,
                [=](long m) {
                    const double n = static_cast<double>(m + 1);
                    return std::exp(logj + n * lcs - std::lgamma(n + 1.0) +
                                    detail::log_gamma_ratio(alpha * n, j)) *
                           (n / s - lambda);
                },
                "fpt_density(inner)");
        },
        "fpt_density");
}

/// alpha = 1 form of the first-passage density:
///   e^{-lambda s} lambda beta/(lambda1+beta)
///     sum_{j>=k} (lambda1/(lambda1+beta))^j
///       [E^{j+1}_{1,1}(z) - lambda s E^{j+1}_{1,2}(z)],
/// z = lambda beta s / (lambda1+beta).
inline double fpt_density_en(long k, double s, const ModelParams& p,
                             const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || !(s > 0.0))
        throw std::domain_error("fpt_density_en: need k >= 1, s > 0");
    const double denom = p.lambda1 + p.beta;
    const double q = p.lambda1 / denom;
    const double z = p.lambda * p.beta * s / denom;
    const double pre = std::exp(-p.lambda * s) * p.lambda * p.beta / denom;
    return pre * detail::sum_series(
                     ctl,
                     [&](long i) {
                         const double j = static_cast<double>(k + i);
                         const double gamma = j + 1.0;
                         return std::pow(q, j) *
                                (mittag_leffler3(1.0, 1.0, gamma, z, ctl) -
                                 p.lambda * s * mittag_leffler3(1.0, 2.0, gamma, z, ctl));
                     },
                     "fpt_density_en");
}

}  // namespace cpg
