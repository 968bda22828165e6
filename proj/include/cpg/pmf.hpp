#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpg/models.hpp"
#include "cpg/quadrature.hpp"
#include "cpg/special_functions.hpp"

// Probability mass functions of the four time-changed Poisson counting
// processes, their probability generating function, and an independent
// oracle that reads the same probabilities off the Taylor coefficients of
// the pgf.  Every series folds its full log-prefactor into the terms so
// large k / large t stay in range.

namespace cpg {

enum class Counting { n1gn, n1en, n1gna, n1ena };

inline const char* family_name(Counting family) {
    switch (family) {
        case Counting::n1gn: return "n1gn";
        case Counting::n1en: return "n1en";
        case Counting::n1gna: return "n1gna";
        case Counting::n1ena: return "n1ena";
    }
    return "?";
}

namespace detail {

// log(Gamma(x + k) / Gamma(x)) for x >= 0; -inf at the x = 0 pole (k >= 1),
// so exp() of it erases the term.
inline double log_gamma_ratio(double x, long k) {
    if (k == 0) return 0.0;
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    return std::lgamma(x + static_cast<double>(k)) - std::lgamma(x);
}

}  // namespace detail

/// P{N1(G_N(t)) = k}: for k >= 1 the series
///   e^{-lambda t} / k! (lambda1/(lambda1+beta))^k
///     sum_{n>=1} w^n Gamma(alpha n + k) / (n! Gamma(alpha n)),
/// with w = lambda t beta^alpha / (lambda1+beta)^alpha; for k = 0 this is
/// exp(-t f(lambda1)).
inline double pmf_n1gn(long k, double t, const ModelParams& p,
                       const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0 || t < 0.0) throw std::domain_error("pmf_n1gn: need k >= 0, t >= 0");
    if (t == 0.0) return k == 0 ? 1.0 : 0.0;
    const double lx = detail::log_x(p);
    if (k == 0) return std::exp(p.lambda * t * std::expm1(p.alpha * lx));
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double logpre =
        -p.lambda * t + k * lq - std::lgamma(static_cast<double>(k) + 1.0);
    const double lw = std::log(p.lambda * t) + p.alpha * lx;
    const double alpha = p.alpha;
    return detail::sum_series(
        ctl,
        [=](long j) {
            const double n = static_cast<double>(j + 1);
            return std::exp(logpre + n * lw - std::lgamma(n + 1.0) +
                            detail::log_gamma_ratio(alpha * n, k));
        },
        "pmf_n1gn");
}

/// Same mass function written through the generalized Wright function
/// 1Psi1((k, alpha), (0, alpha); w); the n = 0 term dies at the Gamma pole.
inline double pmf_n1gn_wright(long k, double t, const ModelParams& p,
                              const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 1 || !(t > 0.0))
        throw std::domain_error("pmf_n1gn_wright: need k >= 1, t > 0");
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double logpre =
        -p.lambda * t + k * lq - std::lgamma(static_cast<double>(k) + 1.0);
    const double w = p.lambda * t * std::exp(p.alpha * detail::log_x(p));
    return std::exp(logpre) *
           wright_psi11(static_cast<double>(k), p.alpha, 0.0, p.alpha, w, ctl);
}

/// P{N1(E_N(t)) = k} (alpha = 1):
///   e^{-lambda t} lambda1^k lambda beta t / (lambda1+beta)^{k+1}
///     E^{k+1}_{1,2}(lambda beta t / (lambda1+beta))
/// for k >= 1, and exp(-lambda lambda1 t / (lambda1+beta)) at k = 0.
inline double pmf_n1en(long k, double t, const ModelParams& p,
                       const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0 || t < 0.0) throw std::domain_error("pmf_n1en: need k >= 0, t >= 0");
    if (t == 0.0) return k == 0 ? 1.0 : 0.0;
    const double denom = p.lambda1 + p.beta;
    if (k == 0) return std::exp(-p.lambda * p.lambda1 * t / denom);
    const double z = p.lambda * p.beta * t / denom;
    const double logpre = -p.lambda * t + k * (std::log(p.lambda1) - std::log(denom)) +
                          std::log(p.lambda * p.beta * t) - std::log(denom);
    return std::exp(logpre) *
           mittag_leffler3(1.0, 2.0, static_cast<double>(k) + 1.0, z, ctl);
}

/// P{N1(G(a t + N(t))) = k}:
///   e^{-lambda t} (beta/(lambda1+beta))^{alpha a t} / k!
///   (lambda1/(lambda1+beta))^k
///     sum_{n>=0} w^n / n! * Gamma(alpha(n+at)+k) / Gamma(alpha(n+at)).
/// At a = 0 the n = 0 term vanishes at the Gamma pole and the undrifted
/// series is recovered.
inline double pmf_n1gna(long k, double t, const ModelParams& p,
                        const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0 || t < 0.0) throw std::domain_error("pmf_n1gna: need k >= 0, t >= 0");
    if (t == 0.0) return k == 0 ? 1.0 : 0.0;
    const double lx = detail::log_x(p);
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double at = p.a * t;
    const double logpre = -p.lambda * t + p.alpha * at * lx + k * lq -
                          std::lgamma(static_cast<double>(k) + 1.0);
    const double lw = std::log(p.lambda * t) + p.alpha * lx;
    const double alpha = p.alpha;
    return detail::sum_series(
        ctl,
        [=](long j) {
            const double n = static_cast<double>(j);
            return std::exp(logpre + n * lw - std::lgamma(n + 1.0) +
                            detail::log_gamma_ratio(alpha * (n + at), k));
        },
        "pmf_n1gna");
}

/// P{N1(E(a t + N(t))) = k} (alpha = 1):
///   e^{-lambda t} Gamma(k+at)/k! (lambda1/(lambda1+beta))^k
///   (beta/(lambda1+beta))^{at} E^{k+at}_{1,at}(lambda beta t/(lambda1+beta)).
inline double pmf_n1ena(long k, double t, const ModelParams& p,
                        const SeriesControl& ctl = {}) {
    p.validate();
    if (k < 0 || t < 0.0) throw std::domain_error("pmf_n1ena: need k >= 0, t >= 0");
    if (p.a == 0.0) return pmf_n1en(k, t, p, ctl);
    if (t == 0.0) return k == 0 ? 1.0 : 0.0;
    const double denom = p.lambda1 + p.beta;
    const double at = p.a * t;
    const double z = p.lambda * p.beta * t / denom;
    const double logpre = -p.lambda * t + std::lgamma(static_cast<double>(k) + at) -
                          std::lgamma(static_cast<double>(k) + 1.0) +
                          k * (std::log(p.lambda1) - std::log(denom)) +
                          at * detail::log_x(p);
    return std::exp(logpre) *
           mittag_leffler3(1.0, at, static_cast<double>(k) + at, z, ctl);
}

inline double pmf(Counting family, long k, double t, const ModelParams& p,
                  const SeriesControl& ctl = {}) {
    switch (family) {
        case Counting::n1gn: return pmf_n1gn(k, t, p, ctl);
        case Counting::n1en: return pmf_n1en(k, t, p, ctl);
        case Counting::n1gna: return pmf_n1gna(k, t, p, ctl);
        case Counting::n1ena: return pmf_n1ena(k, t, p, ctl);
    }
    throw std::invalid_argument("pmf: unknown family");
}

/// Probability generating function G(u, t) = exp(-t f(lambda1 (1 - u))),
/// |u| <= 1.
inline double pgf(double u, double t, const LevyCharacterization& chr,
                  double lambda1) {
    if (std::abs(u) > 1.0) throw std::domain_error("pgf: need |u| <= 1");
    return std::exp(-t * chr.bernstein(lambda1 * (1.0 - u)));
}

namespace detail {

// Coefficients of exp(sum g_m u^m) from the coefficients of the exponent:
// h_0 = e^{g_0}, n h_n = sum_{j=1}^{n} j g_j h_{n-j}.
inline std::vector<double> exp_power_series(const std::vector<double>& g) {
    std::vector<double> h(g.size());
    h[0] = std::exp(g[0]);
    for (std::size_t n = 1; n < g.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            acc += static_cast<double>(j) * g[j] * h[n - j];
        h[n] = acc / static_cast<double>(n);
    }
    return h;
}

}  // namespace detail

/// Taylor coefficients p_0..p_order of the pgf expanded around u = 0, using
/// the exact jump-moment coefficients of the closed-form families.  This is
/// the independent oracle for the four series pmfs above: it never touches
/// a Gamma-ratio series, only the formal exponential of a polynomial.
inline std::vector<double> pgf_pmf_oracle(Counting family, const ModelParams& p,
                                          double t, int order) {
    p.validate();
    if (order < 0 || order > 128)
        throw std::invalid_argument("pgf_pmf_oracle: order must be in [0, 128]");
    const bool exponential =
        family == Counting::n1en || family == Counting::n1ena;
    const double alpha = exponential ? 1.0 : p.alpha;
    const double drift =
        (family == Counting::n1gna || family == Counting::n1ena) ? p.a : 0.0;
    const double lq = std::log(p.lambda1) - std::log(p.lambda1 + p.beta);
    const double lx = std::log(p.beta) - std::log(p.lambda1 + p.beta);
    std::vector<double> g(static_cast<std::size_t>(order) + 1);
    g[0] = -t * bernstein_gna(p.lambda1, p.lambda, alpha, p.beta, drift);
    const double lga = std::lgamma(alpha);
    for (int m = 1; m <= order; ++m) {
        const double jump_gamma = std::exp(alpha * lx + std::lgamma(alpha + m) -
                                           lga - std::lgamma(m + 1.0) + m * lq);
        const double jump_drift = drift * alpha * std::exp(m * lq) / m;
        g[static_cast<std::size_t>(m)] = t * (jump_drift + p.lambda * jump_gamma);
    }
    return detail::exp_power_series(g);
}

/// Generic pgf-coefficient extraction from an arbitrary characterization:
/// the exponent's Taylor coefficients come from the Levy measure's
/// exponentially weighted moments (by quadrature plus the discrete atoms)
/// and from the drift.
inline std::vector<double> pmf_via_pgf_table(double t,
                                             const LevyCharacterization& chr,
                                             double lambda1, int order,
                                             QuadratureOptions qopt = {}) {
    if (order < 0 || order > 128)
        throw std::invalid_argument("pmf_via_pgf_table: order must be in [0, 128]");
    std::vector<double> g(static_cast<std::size_t>(order) + 1);
    g[0] = -t * chr.bernstein(lambda1);
    for (int m = 1; m <= order; ++m) {
        double moment = integrate_to_inf(
            [&](double s) {
                return std::exp(-lambda1 * s + m * std::log(s)) *
                       chr.levy_density(s);
            },
            0.0, 1.0, qopt);
        for (const auto& [size, mass] : chr.levy_atoms)
            moment += mass * std::exp(-lambda1 * size + m * std::log(size));
        const double scale = std::exp(m * std::log(lambda1) - std::lgamma(m + 1.0));
        g[static_cast<std::size_t>(m)] =
            t * (scale * moment + (m == 1 ? chr.drift * lambda1 : 0.0));
    }
    return detail::exp_power_series(g);
}

/// Coefficient k of the pgf; reports failure when the truncation order is
/// too small to account for all but 1e-10 of the mass.
inline double pmf_via_pgf(long k, double t, const LevyCharacterization& chr,
                          double lambda1, int order) {
    if (k > order) throw std::invalid_argument("pmf_via_pgf: need k <= order");
    const auto table = pmf_via_pgf_table(t, chr, lambda1, order);
    double total = 0.0;
    for (double v : table) total += v;
    if (1.0 - total > 1e-10)
        throw truncation_error("pmf_via_pgf: order too small for the requested mass");
    return table[static_cast<std::size_t>(k)];
}

/// Smallest kmax certifying that the retained mass misses at most `target`:
/// starts at ceil(mean + 12 sd) and extends through the geometric jump-size
/// tail (whose per-k ratio approaches lambda1/(lambda1+beta)) until the
/// bounded remainder drops below the target.  The moment start alone can
/// leave a few 1e-9 behind at small t, where the single-big-jump regime
/// dominates the Gaussian width.
inline long adaptive_kmax(Counting family, const ModelParams& p, double t,
                          double target = 1e-9, const SeriesControl& ctl = {}) {
    const auto mom = moments(MomentFamily::n1gna, p, t);
    long kmax =
        static_cast<long>(std::ceil(mom.mean + 12.0 * std::sqrt(mom.variance)));
    double prev = pmf(family, kmax - 1, t, p, ctl);
    for (long extra = 0; extra <= 4000; ++extra, ++kmax) {
        const double cur = pmf(family, kmax, t, p, ctl);
        const double ratio = prev > 0.0 ? cur / prev : 0.0;
        if (ratio < 1.0 && cur * ratio / (1.0 - ratio) < 0.5 * target) return kmax;
        prev = cur;
    }
    throw truncation_error("adaptive_kmax: tail bound did not close");
}

/// A (t, k) probability grid with per-time tail bookkeeping; the unit of
/// CLI output.
struct PmfTable {
    Counting family = Counting::n1gn;
    ModelParams params;
    std::vector<double> times;
    long kmax = 0;
    std::vector<std::vector<double>> probs;  // probs[i][k] for times[i]
    std::vector<double> tail_mass;           // 1 - row sum
};

inline PmfTable build_table(Counting family, const ModelParams& p,
                            const std::vector<double>& times, long kmax,
                            double tail_bound = 1e-6, bool allow_tail = false,
                            const SeriesControl& ctl = {}) {
    p.validate();
    if (kmax < 0) throw std::invalid_argument("build_table: kmax must be >= 0");
    PmfTable table;
    table.family = family;
    table.params = p;
    table.times = times;
    table.kmax = kmax;
    for (double t : times) {
        std::vector<double> row(static_cast<std::size_t>(kmax) + 1);
        double total = 0.0;
        for (long k = 0; k <= kmax; ++k) {
            row[static_cast<std::size_t>(k)] = pmf(family, k, t, p, ctl);
            total += row[static_cast<std::size_t>(k)];
        }
        const double tail = 1.0 - total;
        if (!allow_tail && tail > tail_bound)
            throw truncation_error("build_table: tail mass " + std::to_string(tail) +
                                   " above bound at t = " + std::to_string(t));
        table.probs.push_back(std::move(row));
        table.tail_mass.push_back(tail);
    }
    return table;
}

namespace detail {

inline std::string format_g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

/// CSV serialization, schema `family,t,k,prob`, 12 significant digits.
inline std::string to_csv(const PmfTable& table) {
    std::string out = "family,t,k,prob\n";
    for (std::size_t i = 0; i < table.times.size(); ++i)
        for (long k = 0; k <= table.kmax; ++k) {
            out += family_name(table.family);
            out += ',';
            out += detail::format_g12(table.times[i]);
            out += ',';
            out += std::to_string(k);
            out += ',';
            out += detail::format_g12(table.probs[i][static_cast<std::size_t>(k)]);
            out += '\n';
        }
    return out;
}

inline nlohmann::json to_json(const PmfTable& table) {
    return nlohmann::json{
        {"family", family_name(table.family)},
        {"params",
         {{"lambda", table.params.lambda},
          {"alpha", table.params.alpha},
          {"beta", table.params.beta},
          {"lambda1", table.params.lambda1},
          {"a", table.params.a}}},
        {"times", table.times},
        {"kmax", table.kmax},
        {"probs", table.probs},
        {"tail_mass", table.tail_mass}};
}

}  // namespace cpg
