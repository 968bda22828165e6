#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

// Goodness-of-fit machinery: two-sample Kolmogorov-Smirnov with the
// asymptotic p-value, chi-square against an analytic pmf with small-bin
// pooling, and the regularized incomplete gamma it needs.

namespace cpg {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a), by the
/// series for x < a + 1 and the continued fraction otherwise.
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a, x) series
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

/// Kolmogorov survival function Q(z) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 z^2}.
inline double kolmogorov_sf(double z) {
    if (z <= 0.0) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * z * z);
        sum += (j & 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (effective size n m/(n+m), small-sample correction as usual).
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double va = a[ia], vb = b[ib];
        if (va <= vb) ++ia;
        if (vb <= va) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na -
                                 static_cast<double>(ib) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    KsResult out;
    out.statistic = d;
    out.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
    return out;
}

struct Chi2Result {
    double statistic = 0.0;
    long dof = 0;
    double p_value = 1.0;
};

/// Chi-square goodness of fit of observed counts against analytic cell
/// probabilities.  Cells with expected count below min_expected pool into
/// the tail cell, as do observed counts beyond the listed probabilities;
/// the residual probability mass forms the final cell.
inline Chi2Result chi_square_gof(const std::vector<long>& counts,
                                 const std::vector<double>& probs, long n,
                                 double min_expected = 5.0) {
    double residual_p = 1.0;
    for (double p : probs) residual_p -= p;
    double pooled_p = std::max(residual_p, 0.0);
    long pooled_count = 0;
    double stat = 0.0;
    long cells = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const long observed = k < counts.size() ? counts[k] : 0;
        const double expected = probs[k] * static_cast<double>(n);
        if (expected < min_expected) {
            pooled_p += probs[k];
            pooled_count += observed;
            continue;
        }
        const double diff = static_cast<double>(observed) - expected;
        stat += diff * diff / expected;
        ++cells;
    }
    for (std::size_t k = probs.size(); k < counts.size(); ++k)
        pooled_count += counts[k];
    const double pooled_expected = pooled_p * static_cast<double>(n);
    if (pooled_expected >= min_expected) {
        const double diff = static_cast<double>(pooled_count) - pooled_expected;
        stat += diff * diff / pooled_expected;
        ++cells;
    }
    Chi2Result out;
    out.statistic = stat;
    out.dof = std::max<long>(1, cells - 1);
    out.p_value = gamma_q(0.5 * static_cast<double>(out.dof), 0.5 * stat);
    return out;
}

}  // namespace cpg
