#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Counter-free splittable RNG plus the variate generators the simulators
// need.  Substreams are derived from (seed, index) by a fixed mixing rule,
// so a sample's draws depend only on its index -- results are identical for
// any worker count.

namespace cpg {

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1).
    double next_open() {
        for (;;) {
            const double u = next_double();
            if (u > 0.0) return u;
        }
    }
};

namespace detail {

inline std::uint64_t mix_bits(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Substream splitting rule: state = mix(mix(seed) + (index + 1) * phi64).
/// Draws for sample `index` never depend on how samples are partitioned
/// across workers.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64{detail::mix_bits(detail::mix_bits(seed) +
                                       0x9E3779B97F4A7C15ull * (index + 1))};
}

/// Standard normal by the Marsaglia polar method.
inline double sample_normal(SplitMix64& rng) {
    for (;;) {
        const double u = 2.0 * rng.next_double() - 1.0;
        const double v = 2.0 * rng.next_double() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

/// Gamma(shape, rate) by Marsaglia-Tsang squeeze/rejection; shapes below 1
/// are boosted through U^{1/shape} * Gamma(shape + 1).  shape = 0 is the
/// unit mass at 0 (the subordinators' atom).
inline double sample_gamma(double shape, double rate, SplitMix64& rng) {
    if (shape < 0.0 || !(rate > 0.0))
        throw std::invalid_argument("sample_gamma: need shape >= 0, rate > 0");
    if (shape == 0.0) return 0.0;
    if (shape < 1.0) {
        const double boost = std::pow(rng.next_open(), 1.0 / shape);
        return boost * sample_gamma(shape + 1.0, rate, rng);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = sample_normal(rng);
        const double base = 1.0 + c * x;
        if (base <= 0.0) continue;
        const double v = base * base * base;
        const double u = rng.next_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

/// Poisson(mean): inversion by multiplication below mean 10, Hormann's
/// transformed rejection (PTRS) above.
inline long sample_poisson(double mean, SplitMix64& rng) {
    if (mean < 0.0) throw std::invalid_argument("sample_poisson: need mean >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        const double floor_prob = std::exp(-mean);
        double prod = 1.0;
        long k = 0;
        for (;;) {
            prod *= rng.next_double();
            if (prod <= floor_prob) return k;
            ++k;
        }
    }
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.next_double() - 0.5;
        const double v = rng.next_double();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (kf < 0.0) continue;
        const long k = static_cast<long>(kf);
        if (us >= 0.07 && v <= v_r) return k;
        if (us < 0.013 && v > us) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mean + kf * log_mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return k;
    }
}

}  // namespace cpg
