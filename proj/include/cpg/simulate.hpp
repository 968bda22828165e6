#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cpg/iterate.hpp"
#include "cpg/models.hpp"
#include "cpg/passage.hpp"
#include "cpg/pmf.hpp"
#include "cpg/random.hpp"

// Monte Carlo engine: constructive sampling of the subordinators, the
// counting processes and the iterated chains, plus the embedded-jump-chain
// hitting simulator.  Every estimate is a pure function of
// (seed, n_samples): sample i draws from substream(seed, i), so the worker
// count never changes the result.

namespace cpg {

struct SimConfig {
    std::uint64_t seed = 0;
    long n_samples = 1;
    double t = 1.0;
    int workers = 1;

    void validate() const {
        if (n_samples < 1) throw std::invalid_argument("SimConfig: n_samples >= 1");
        if (workers < 1) throw std::invalid_argument("SimConfig: workers >= 1");
    }
};

struct EmpiricalPmf {
    std::vector<long> counts;
    long n_samples = 0;

    double prob(std::size_t k) const {
        return k < counts.size()
                   ? static_cast<double>(counts[k]) / static_cast<double>(n_samples)
                   : 0.0;
    }
    double stderr_at(std::size_t k) const {
        const double p = prob(k);
        return std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    }
};

/// One draw of the subordinator at time t: Poisson(lambda t) epochs, then a
/// Gamma variate with shape alpha (n + a t).
inline double sample_subordinator(Subordinator family, const ModelParams& p,
                                  double t, SplitMix64& rng) {
    p.validate();
    if (t < 0.0) throw std::domain_error("sample_subordinator: need t >= 0");
    switch (family) {
        case Subordinator::drifted_poisson:
            return p.a * t + static_cast<double>(sample_poisson(p.lambda * t, rng));
        case Subordinator::en:
        case Subordinator::ena:
            if (p.alpha != 1.0)
                throw std::invalid_argument("sample_subordinator: EN/ENa need alpha = 1");
            [[fallthrough]];
        case Subordinator::gn:
        case Subordinator::gna: {
            const bool drifted =
                family == Subordinator::gna || family == Subordinator::ena;
            const double clock =
                (drifted ? p.a * t : 0.0) +
                static_cast<double>(sample_poisson(p.lambda * t, rng));
            return sample_gamma(p.alpha * clock, p.beta, rng);
        }
    }
    throw std::invalid_argument("sample_subordinator: unknown family");
}

/// One draw of the counting process: outer Poisson on the subordinated clock.
inline long sample_counting(Counting family, const ModelParams& p, double t,
                            SplitMix64& rng) {
    Subordinator sub = Subordinator::gn;
    switch (family) {
        case Counting::n1gn: sub = Subordinator::gn; break;
        case Counting::n1en: sub = Subordinator::en; break;
        case Counting::n1gna: sub = Subordinator::gna; break;
        case Counting::n1ena: sub = Subordinator::ena; break;
    }
    const double clock = sample_subordinator(sub, p, t, rng);
    return sample_poisson(p.lambda1 * clock, rng);
}

/// One draw of the iterated chain, innermost stage out:
/// X_i = Gamma(shape = a_i t + Poisson(lambda_i X_{i-1}), rate beta_i).
inline double sample_chain(const IterChain& chain, double t, SplitMix64& rng) {
    chain.validate();
    double x = chain.base_scale * t;
    for (const auto& stage : chain.stages) {
        const double clock =
            stage.a * t + static_cast<double>(sample_poisson(stage.lambda * x, rng));
        x = sample_gamma(clock, stage.beta, rng);
    }
    return x;
}

namespace detail {

// Runs fn(i) for i in [0, n) over cfg.workers threads on disjoint index
// ranges.  fn must only touch slot i of shared storage.
template <class Fn>
void parallel_for_samples(long n, int workers, Fn&& fn) {
    const int used = static_cast<int>(std::max<long>(1, std::min<long>(workers, n)));
    if (used == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (n + used - 1) / used;
    for (int w = 0; w < used; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// n_samples draws of the chain (or any sampler) collected into a vector;
/// slot i always holds the draw of substream i.
inline std::vector<double> sample_many_chain(const IterChain& chain,
                                             const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> out(static_cast<std::size_t>(cfg.n_samples));
    detail::parallel_for_samples(cfg.n_samples, cfg.workers, [&](long i) {
        SplitMix64 rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = sample_chain(chain, cfg.t, rng);
    });
    return out;
}

inline std::vector<double> sample_many_subordinator(Subordinator family,
                                                    const ModelParams& p,
                                                    const SimConfig& cfg) {
    cfg.validate();
    std::vector<double> out(static_cast<std::size_t>(cfg.n_samples));
    detail::parallel_for_samples(cfg.n_samples, cfg.workers, [&](long i) {
        SplitMix64 rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = sample_subordinator(family, p, cfg.t, rng);
    });
    return out;
}

/// Empirical pmf of a counting family.  Deterministic in (seed, n_samples);
/// counts merge exactly, so the worker split is invisible.
inline EmpiricalPmf empirical_pmf(Counting family, const ModelParams& p,
                                  const SimConfig& cfg) {
    cfg.validate();
    std::vector<long> draws(static_cast<std::size_t>(cfg.n_samples));
    detail::parallel_for_samples(cfg.n_samples, cfg.workers, [&](long i) {
        SplitMix64 rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
        draws[static_cast<std::size_t>(i)] = sample_counting(family, p, cfg.t, rng);
    });
    EmpiricalPmf out;
    out.n_samples = cfg.n_samples;
    const long kmax = *std::max_element(draws.begin(), draws.end());
    out.counts.assign(static_cast<std::size_t>(kmax) + 1, 0);
    for (long d : draws) ++out.counts[static_cast<std::size_t>(d)];
    return out;
}

struct HitEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    long n = 0;
};

/// Monte Carlo estimate of P{T_k < infinity}: walk the embedded jump chain
/// until level >= k and record exact hits.  The walk is capped at 64 k
/// jumps; the geometric jump tail puts the probability of needing more
/// below 1e-12 for the parameter grids used here.
inline HitEstimate simulate_hit(long k, const JumpDistribution& jd,
                                const SimConfig& cfg) {
    cfg.validate();
    if (k < 1) throw std::invalid_argument("simulate_hit: need k >= 1");
    std::vector<double> cumulative(jd.q.size());
    double acc = 0.0;
    for (std::size_t j = 1; j < jd.q.size(); ++j) {
        acc += jd.q[j];
        cumulative[j] = acc;
    }
    std::vector<unsigned char> hit(static_cast<std::size_t>(cfg.n_samples));
    const long max_jumps = 64 * k;
    detail::parallel_for_samples(cfg.n_samples, cfg.workers, [&](long i) {
        SplitMix64 rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
        long level = 0;
        for (long step = 0; step < max_jumps && level < k; ++step) {
            const double u = rng.next_double() * acc;
            const auto it = std::lower_bound(cumulative.begin() + 1, cumulative.end(), u);
            level += static_cast<long>(it - cumulative.begin());
        }
        hit[static_cast<std::size_t>(i)] = level == k ? 1 : 0;
    });
    long hits = 0;
    for (unsigned char h : hit) hits += h;
    HitEstimate est;
    est.n = cfg.n_samples;
    est.estimate = static_cast<double>(hits) / static_cast<double>(cfg.n_samples);
    est.standard_error = std::sqrt(est.estimate * (1.0 - est.estimate) /
                                   static_cast<double>(cfg.n_samples));
    return est;
}

}  // namespace cpg
