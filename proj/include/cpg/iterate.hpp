#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpg/models.hpp"
#include "cpg/quadrature.hpp"
#include "cpg/special_functions.hpp"

// Iterated Bessel transforms X_n(t) = E_n(a_n t + N_n(X_{n-1}(t))): the
// closed-form Levy measures and Bernstein functions of the homogeneous
// regimes, the subordination recursion that works for arbitrary chains, the
// collapse identity for equal-parameter stages, and the component list of
// the governing difference-differential system.

namespace cpg {

struct ChainStage {
    double a = 0.0;       // per-stage drift (applied to the original t)
    double beta = 1.0;    // exponential-process rate
    double lambda = 1.0;  // Poisson rate
};

/// An iteration chain; stages[0] is the innermost transform.  The base
/// clock is X_0(t) = base_scale * t (base_scale = 1 for the identity).
struct IterChain {
    std::vector<ChainStage> stages;
    double base_scale = 1.0;

    void validate() const {
        if (stages.empty()) throw std::invalid_argument("IterChain: no stages");
        if (!(base_scale > 0.0))
            throw std::invalid_argument("IterChain: base scale must be > 0");
        for (const auto& s : stages)
            if (!(s.beta > 0.0) || !(s.lambda > 0.0) || !(s.a >= 0.0))
                throw std::invalid_argument("IterChain: need beta, lambda > 0, a >= 0");
    }
};

enum class ChainRegime { unit, homogeneous, heterogeneous };

inline ChainRegime chain_regime(const IterChain& chain) {
    chain.validate();
    const double beta = chain.stages.front().beta;
    const double lambda = chain.stages.front().lambda;
    for (const auto& s : chain.stages)
        if (s.beta != beta || s.lambda != lambda) return ChainRegime::heterogeneous;
    return (beta == 1.0 && lambda == 1.0) ? ChainRegime::unit
                                          : ChainRegime::homogeneous;
}

/// gamma(lambda, beta, m) = sum_{j=1}^{m} lambda^{m-j} beta^{j-1}.  The sum
/// form stays finite at lambda = beta, where the quotient
/// (lambda^m - beta^m)/(lambda - beta) degenerates.
inline double gamma_sum(double lambda, double beta, long m) {
    double acc = 0.0;
    for (long j = 1; j <= m; ++j)
        acc += std::pow(lambda, static_cast<double>(m - j)) *
               std::pow(beta, static_cast<double>(j - 1));
    return acc;
}

namespace detail {

inline void require_closed_form(const IterChain& chain) {
    const ChainRegime regime = chain_regime(chain);
    if (regime == ChainRegime::heterogeneous)
        throw std::domain_error(
            "closed form unsupported for heterogeneous chains; use the "
            "composition/transform path");
    if (regime == ChainRegime::homogeneous && chain.base_scale != 1.0)
        throw std::domain_error(
            "scaled base is only available in closed form for unit-parameter chains");
}

}  // namespace detail

/// Closed-form Bernstein function f_n(u) of the chain (homogeneous regimes):
///   sum_{k=0}^{n-1} (a_{n-k} - a_{n-k-1})
///       log(1 + u gamma(k+1)/beta^{k+1})
///   + base_scale lambda^n u / (beta^n + u gamma(n)),
/// with a_0 = 0.  The unit regime is the beta = lambda = 1 special case.
inline double iter_bernstein(double u, const IterChain& chain) {
    detail::require_closed_form(chain);
    if (!(u >= 0.0)) throw std::domain_error("iter_bernstein: need u >= 0");
    const long n = static_cast<long>(chain.stages.size());
    const double beta = chain.stages.front().beta;
    const double lambda = chain.stages.front().lambda;
    auto drift = [&](long i) {  // a_i with a_0 = 0
        return i == 0 ? 0.0 : chain.stages[static_cast<std::size_t>(i - 1)].a;
    };
    double f = 0.0;
    for (long k = 0; k < n; ++k)
        f += (drift(n - k) - drift(n - k - 1)) *
             std::log1p(u * gamma_sum(lambda, beta, k + 1) /
                        std::pow(beta, static_cast<double>(k + 1)));
    const double bn = std::pow(beta, static_cast<double>(n));
    const double gn = gamma_sum(lambda, beta, n);
    f += chain.base_scale * std::pow(lambda, static_cast<double>(n)) * u /
         (bn + u * gn);
    return f;
}

/// Closed-form Levy density nu_n(x) of the chain (homogeneous regimes):
///   x^{-1} sum_{k=0}^{n-1} e^{-x beta^{k+1}/gamma(k+1)} (a_{n-k} - a_{n-k-1})
///   + base_scale e^{-x beta^n/gamma(n)} (lambda beta)^n / gamma(n)^2.
inline double iter_levy_density(double x, const IterChain& chain) {
    detail::require_closed_form(chain);
    if (!(x > 0.0)) throw std::domain_error("iter_levy_density: need x > 0");
    const long n = static_cast<long>(chain.stages.size());
    const double beta = chain.stages.front().beta;
    const double lambda = chain.stages.front().lambda;
    auto drift = [&](long i) {
        return i == 0 ? 0.0 : chain.stages[static_cast<std::size_t>(i - 1)].a;
    };
    double density = 0.0;
    for (long k = 0; k < n; ++k) {
        const double decay = std::pow(beta, static_cast<double>(k + 1)) /
                             gamma_sum(lambda, beta, k + 1);
        density += std::exp(-x * decay) * (drift(n - k) - drift(n - k - 1)) / x;
    }
    const double gn = gamma_sum(lambda, beta, n);
    const double decay_n = std::pow(beta, static_cast<double>(n)) / gn;
    density += chain.base_scale *
               std::pow(lambda * beta, static_cast<double>(n)) / (gn * gn) *
               std::exp(-x * decay_n);
    return density;
}

/// Bernstein function of an arbitrary chain by the subordination recursion
///   f_i(u) = a_i log(1 + u/beta_i) + f_{i-1}(lambda_i u/(beta_i + u)),
///   f_0(u) = base_scale * u.
/// This is the oracle for iter_bernstein and the only route for
/// heterogeneous chains.
inline double compose_bernstein(double u, const IterChain& chain) {
    chain.validate();
    if (!(u >= 0.0)) throw std::domain_error("compose_bernstein: need u >= 0");
    double arg = u;
    double logs = 0.0;
    for (std::size_t i = chain.stages.size(); i-- > 0;) {
        const auto& s = chain.stages[i];
        logs += s.a * std::log1p(arg / s.beta);
        arg = s.lambda * arg / (s.beta + arg);
    }
    return logs + chain.base_scale * arg;
}

/// Collapse of a chain with beta_i = lambda_i = 1/c_i and one common drift:
/// the chain is distributed as E_{1/c}(N_{1/c}(t) + a t) with c = sum c_i.
/// Returns the equivalent single-stage parameters (alpha = 1).
inline ModelParams collapse_chain(const IterChain& chain) {
    chain.validate();
    if (chain.base_scale != 1.0)
        throw std::domain_error("collapse_chain: requires the identity base");
    const double a = chain.stages.front().a;
    double c = 0.0;
    for (const auto& s : chain.stages) {
        if (std::abs(s.beta - s.lambda) > 1e-12 * std::max(s.beta, s.lambda))
            throw std::domain_error("collapse_chain: requires beta_i = lambda_i");
        if (s.a != a)
            throw std::domain_error("collapse_chain: requires a common drift");
        c += 1.0 / s.beta;
    }
    ModelParams out;
    out.lambda = 1.0 / c;
    out.alpha = 1.0;
    out.beta = 1.0 / c;
    out.lambda1 = 1.0;  // placeholder; the collapse concerns the subordinator
    out.a = a;
    return out;
}

/// One scalar component of the governing operator sum: the probabilities of
/// N_mu(X_n(t)) solve d/dt p_k = -sum_j f_{n,j}(mu(I-B)) p_k with these
/// f_{n,j}.
struct BernsteinComponent {
    std::string label;
    std::function<double(double)> eval;
};

/// Component list {f_{n,0}, ..., f_{n,n}} for the homogeneous regimes: n log
/// terms weighted by drift differences plus the rational term.  Their sum
/// equals iter_bernstein pointwise.
inline std::vector<BernsteinComponent> ode_coefficients(const IterChain& chain) {
    detail::require_closed_form(chain);
    const long n = static_cast<long>(chain.stages.size());
    const double beta = chain.stages.front().beta;
    const double lambda = chain.stages.front().lambda;
    auto drift = [&, n](long i) {
        return i == 0 ? 0.0 : chain.stages[static_cast<std::size_t>(i - 1)].a;
    };
    std::vector<BernsteinComponent> parts;
    for (long j = 0; j < n; ++j) {
        const double weight = drift(n - j) - drift(n - j - 1);
        const double slope = gamma_sum(lambda, beta, j + 1) /
                             std::pow(beta, static_cast<double>(j + 1));
        parts.push_back({"log j=" + std::to_string(j),
                         [weight, slope](double u) {
                             return weight * std::log1p(u * slope);
                         }});
    }
    const double bn = std::pow(beta, static_cast<double>(n));
    const double gn = gamma_sum(lambda, beta, n);
    const double num = chain.base_scale * std::pow(lambda, static_cast<double>(n));
    parts.push_back({"rational",
                     [num, bn, gn](double u) { return num * u / (bn + u * gn); }});
    return parts;
}

// ---------------------------------------------------------------------------
// Exponential-sum Levy measures: nu(x) = sum_i e^{-decay_i x}
// (x_inv_i / x + const_i).  The one-step Bessel transform maps this family
// into itself, so every chain-generated measure has an exact representation.

struct ExpSumTerm {
    double decay;
    double x_inv;   // weight of the x^{-1} part
    double flat;    // weight of the constant part
};

using ExpSumMeasure = std::vector<ExpSumTerm>;

inline double exp_sum_density(const ExpSumMeasure& measure, double x) {
    if (!(x > 0.0)) throw std::domain_error("exp_sum_density: need x > 0");
    double v = 0.0;
    for (const auto& term : measure)
        v += std::exp(-term.decay * x) * (term.x_inv / x + term.flat);
    return v;
}

/// int_0^inf e^{-mu s} s^m nu(ds) for integer m >= 1, in closed form.
inline double exp_sum_exp_moment(const ExpSumMeasure& measure, double mu, long m) {
    if (m < 1) throw std::invalid_argument("exp_sum_exp_moment: need m >= 1");
    double v = 0.0;
    for (const auto& term : measure) {
        const double rate = mu + term.decay;
        v += term.x_inv * std::exp(std::lgamma(static_cast<double>(m)) -
                                   m * std::log(rate));
        v += term.flat * std::exp(std::lgamma(static_cast<double>(m) + 1.0) -
                                  (m + 1.0) * std::log(rate));
    }
    return v;
}

namespace detail {

inline void exp_sum_add(ExpSumMeasure& measure, const ExpSumTerm& term) {
    for (auto& existing : measure)
        if (std::abs(existing.decay - term.decay) <=
            1e-12 * std::max(existing.decay, term.decay)) {
            existing.x_inv += term.x_inv;
            existing.flat += term.flat;
            return;
        }
    measure.push_back(term);
}

}  // namespace detail

/// One Bessel-transform step (alpha = 1) on an exponential-sum measure:
/// the transformed process E(a t + N(X(t))) has
///   nu_Z(x) = e^{-beta x} (a/x + int e^{-lambda u}
///             sqrt(lambda u beta / x) I_1(2 sqrt(lambda u beta x)) nu_X(du)),
/// and the u-integral evaluates term by term in closed form.
inline ExpSumMeasure bessel_transform_exp_measure(const ExpSumMeasure& nux,
                                                  double a, double beta,
                                                  double lambda) {
    ExpSumMeasure out;
    if (a != 0.0) detail::exp_sum_add(out, {beta, a, 0.0});
    for (const auto& term : nux) {
        const double rate = lambda + term.decay;
        const double shifted = beta * term.decay / rate;
        if (term.x_inv != 0.0) {
            detail::exp_sum_add(out, {beta, -term.x_inv, 0.0});
            detail::exp_sum_add(out, {shifted, term.x_inv, 0.0});
        }
        if (term.flat != 0.0)
            detail::exp_sum_add(out,
                                {shifted, 0.0, term.flat * lambda * beta / (rate * rate)});
    }
    return out;
}

/// Exact Levy measure of the chain, built by iterating the one-step
/// transform from nu_1(x) = e^{-beta_1 x}(a_1/x + base_scale lambda_1 beta_1).
/// Works for arbitrary (including heterogeneous) chains.
inline ExpSumMeasure chain_levy_measure(const IterChain& chain) {
    chain.validate();
    const auto& first = chain.stages.front();
    ExpSumMeasure measure;
    if (first.a != 0.0) measure.push_back({first.beta, first.a, 0.0});
    measure.push_back({first.beta, 0.0, chain.base_scale * first.lambda * first.beta});
    for (std::size_t i = 1; i < chain.stages.size(); ++i) {
        const auto& s = chain.stages[i];
        measure = bessel_transform_exp_measure(measure, s.a, s.beta, s.lambda);
    }
    return measure;
}

/// Generic one-step Bessel transform Z_G(t) = G(a t + N(X(t))) on an
/// arbitrary characterization, with the u-integral done by quadrature:
///   nu_Z(x) = e^{-beta x} (a alpha / x
///             + int e^{-lambda u} x^{-1} Phi(alpha, 0, lambda u (beta x)^alpha)
///               nu_X(du)).
inline LevyCharacterization bessel_transform_levy(const LevyCharacterization& nux,
                                                  double a, double beta,
                                                  double lambda, double alpha,
                                                  QuadratureOptions qopt = {}) {
    if (!(beta > 0.0) || !(lambda > 0.0) || !(alpha > 0.0) || !(a >= 0.0))
        throw std::invalid_argument("bessel_transform_levy: bad parameters");
    LevyCharacterization out;
    auto inner_f = nux.bernstein;
    out.bernstein = [=](double u) {
        const double l1p = std::log1p(u / beta);
        return a * alpha * l1p + inner_f(-lambda * std::expm1(-alpha * l1p));
    };
    auto density = nux.levy_density;
    auto atoms = nux.levy_atoms;
    const double drift_in = nux.drift;
    out.levy_density = [=](double x) {
        if (!(x > 0.0))
            throw std::domain_error("bessel_transform_levy: need x > 0");
        const double lbx = alpha * std::log(beta * x);
        auto kernel = [&](double u) {
            return std::exp(-lambda * u) *
                   wright_phi(alpha, 0.0, lambda * u * std::exp(lbx)) / x;
        };
        double integral = integrate_to_inf(
            [&](double u) { return kernel(u) * density(u); }, 0.0, 1.0, qopt);
        for (const auto& [size, mass] : atoms) integral += mass * kernel(size);
        // a linear drift in X contributes drift * (jump density of G at x)
        const double drift_part =
            drift_in * lambda *
            std::exp(alpha * std::log(beta) - std::lgamma(alpha) +
                     (alpha - 1.0) * std::log(x));
        return std::exp(-beta * x) * (a * alpha / x + drift_part + integral);
    };
    out.total_mass_finite = (a == 0.0);
    if (a == 0.0)
        out.atom_at_zero = [=](double t) { return std::exp(-t * inner_f(lambda)); };
    return out;
}

// ---------------------------------------------------------------------------
// Chain configuration files: {"stages": [{"a":..,"beta":..,"lambda":..},...],
// "base": "identity" | "scaled", "lambda0": <scale>}.

inline IterChain parse_chain(const nlohmann::json& j) {
    IterChain chain;
    if (!j.contains("stages") || !j["stages"].is_array())
        throw std::invalid_argument("parse_chain: missing \"stages\" array");
    for (const auto& stage : j["stages"]) {
        ChainStage s;
        s.a = stage.value("a", 0.0);
        s.beta = stage.at("beta").get<double>();
        s.lambda = stage.at("lambda").get<double>();
        chain.stages.push_back(s);
    }
    const std::string base = j.value("base", "identity");
    if (base == "identity") {
        chain.base_scale = 1.0;
    } else if (base == "scaled") {
        chain.base_scale = j.at("lambda0").get<double>();
    } else {
        throw std::invalid_argument("parse_chain: base must be identity or scaled");
    }
    chain.validate();
    return chain;
}

inline nlohmann::json chain_to_json(const IterChain& chain) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : chain.stages)
        stages.push_back({{"a", s.a}, {"beta", s.beta}, {"lambda", s.lambda}});
    nlohmann::json j{{"stages", stages}};
    if (chain.base_scale == 1.0) {
        j["base"] = "identity";
    } else {
        j["base"] = "scaled";
        j["lambda0"] = chain.base_scale;
    }
    return j;
}

}  // namespace cpg
