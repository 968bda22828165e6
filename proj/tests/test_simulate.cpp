#include <catch2/catch.hpp>

#include <cmath>

#include "cpg/simulate.hpp"
#include "cpg/stats.hpp"
#include "test_util.hpp"

using namespace cpg;

TEST_CASE("sampling edge cases") {
    SplitMix64 rng = substream(7, 0);
    ModelParams p{1.0, 2.0, 0.8, 1.0, 0.0};
    // no clock, no mass
    CHECK(sample_subordinator(Subordinator::gn, p, 0.0, rng) == 0.0);
    CHECK(sample_gamma(0.0, 1.0, rng) == 0.0);
    CHECK(sample_poisson(0.0, rng) == 0);
}

TEST_CASE("substream determinism is independent of the worker count") {
    const auto p = testutil::fig1();
    SimConfig one{42, 20000, 1.0, 1};
    SimConfig four{42, 20000, 1.0, 4};
    const auto a = empirical_pmf(Counting::n1gn, p, one);
    const auto b = empirical_pmf(Counting::n1gn, p, four);
    CHECK(a.counts == b.counts);
    const auto c = empirical_pmf(Counting::n1gn, p, one);
    CHECK(a.counts == c.counts);

    SimConfig single{9, 1, 1.0, 1};
    const auto lone = empirical_pmf(Counting::n1gn, p, single);
    long nonzero = 0;
    for (long v : lone.counts) nonzero += v != 0 ? 1 : 0;
    CHECK(nonzero == 1);
}

TEST_CASE("sampled moments match the closed forms", "[mc]") {
    // E N1(G(a t + N(t))) at the drifted-figure parameters is 15 t
    const auto p = testutil::fig3();
    SimConfig cfg{42, 400000, 1.0, 4};
    double sum = 0.0, sumsq = 0.0;
    const auto emp = empirical_pmf(Counting::n1gna, p, cfg);
    for (std::size_t k = 0; k < emp.counts.size(); ++k) {
        sum += static_cast<double>(k) * emp.counts[k];
        sumsq += static_cast<double>(k) * static_cast<double>(k) * emp.counts[k];
    }
    const double n = static_cast<double>(cfg.n_samples);
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    const auto mom = moments(MomentFamily::n1gna, p, 1.0);
    CHECK(std::abs(mean - mom.mean) < 3.0 * std::sqrt(var / n));

    // Var G(a t + N(t)) against its formula
    const auto draws =
        sample_many_subordinator(Subordinator::gna, p, SimConfig{43, 400000, 1.0, 4});
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (double d : draws) m1 += d;
    m1 /= n;
    for (double d : draws) {
        const double c = d - m1;
        m2 += c * c;
        m4 += c * c * c * c;
    }
    m2 /= n;
    m4 /= n;
    const auto gmom = moments(MomentFamily::gna, p, 1.0);
    const double var_se = std::sqrt((m4 - m2 * m2) / n);
    CHECK(std::abs(m2 - gmom.variance) < 3.0 * var_se);
}

TEST_CASE("empirical pmf sits on the analytic one", "[mc]") {
    const struct {
        Counting family;
        ModelParams p;
        double tv_bound;
    } cases[] = {{Counting::n1gn, testutil::fig1(), 0.002},
                 {Counting::n1en, testutil::fig2(), 0.004},
                 {Counting::n1gna, testutil::fig3(), 0.004},
                 {Counting::n1ena, testutil::fig4(), 0.004}};
    std::uint64_t seed = 11;
    for (const auto& c : cases) {
        SimConfig cfg{seed++, 1000000, 1.0, 4};
        const auto emp = empirical_pmf(c.family, c.p, cfg);
        std::vector<double> probs;
        double tv = 0.0;
        for (std::size_t k = 0; k < emp.counts.size(); ++k) {
            const double pk = pmf(c.family, static_cast<long>(k), 1.0, c.p);
            probs.push_back(pk);
            tv += std::abs(emp.prob(k) - pk);
            if (pk * static_cast<double>(cfg.n_samples) >= 20.0)
                CHECK(std::abs(emp.prob(k) - pk) <= 3.0 * emp.stderr_at(k) + 3e-9);
        }
        tv *= 0.5;
        CHECK(tv < c.tv_bound);
        const auto chi2 = chi_square_gof(emp.counts, probs, cfg.n_samples);
        CHECK(chi2.p_value > 0.001);
    }
}

TEST_CASE("hitting simulation agrees with the oracles", "[mc]") {
    ModelParams pe{1.0, 1.0, 0.8, 1.0, 0.0};
    const auto jd_e = jump_distribution(pe);
    SimConfig cfg{42, 1000000, 1.0, 4};
    const auto est = simulate_hit(5, jd_e, cfg);
    CHECK(std::abs(est.estimate - 4.0 / 9.0) < 3.0 * est.standard_error);
    CHECK(est.standard_error < 7e-4);

    ModelParams p2{1.0, 2.0, 1.0, 1.0, 0.0};
    const auto jd2 = jump_distribution(p2);
    const auto est2 = simulate_hit(1, jd2, SimConfig{43, 1000000, 1.0, 4});
    CHECK(std::abs(est2.estimate - 1.0 / 3.0) < 3.0 * est2.standard_error);

    // renewal agreement for k <= 10 within 3 sigma
    for (long k : {2L, 6L, 10L}) {
        const auto mc = simulate_hit(k, jd2, SimConfig{44 + static_cast<std::uint64_t>(k),
                                                       200000, 1.0, 4});
        CHECK(std::abs(mc.estimate - hit_prob_renewal(k, jd2)) <
              3.0 * mc.standard_error);
    }

    // degenerate unit jumps always land exactly, even far past the guard level
    JumpDistribution unit;
    unit.rate = 1.0;
    unit.q = {0.0, 1.0};
    const auto sure = simulate_hit(50, unit, SimConfig{1, 2000, 1.0, 2});
    CHECK(sure.estimate == 1.0);
}

TEST_CASE("two-sample KS behaves") {
    std::vector<double> same;
    SplitMix64 rng = substream(5, 0);
    for (int i = 0; i < 500; ++i) same.push_back(sample_gamma(2.0, 1.0, rng));
    const auto self = ks_two_sample(same, same);
    CHECK(self.statistic == 0.0);
    CHECK(self.p_value == 1.0);
    CHECK_THROWS_AS(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST_CASE("distribution-level identities by KS", "[mc]") {
    // GN and GNa at a = 0 are the same law
    const auto p = testutil::fig1();
    const auto gn = sample_many_subordinator(Subordinator::gn, p, SimConfig{21, 50000, 1.0, 4});
    const auto gna = sample_many_subordinator(Subordinator::gna, p, SimConfig{22, 50000, 1.0, 4});
    CHECK(ks_two_sample(gn, gna).p_value > 0.01);

    // nested two-stage chain vs its collapsed single stage
    IterChain nested{{{0.5, 0.5, 0.5}, {0.5, 1.0 / 3.0, 1.0 / 3.0}}, 1.0};
    IterChain collapsed{{{0.5, 0.2, 0.2}}, 1.0};
    const auto xn = sample_many_chain(nested, SimConfig{23, 100000, 1.0, 4});
    const auto xc = sample_many_chain(collapsed, SimConfig{24, 100000, 1.0, 4});
    CHECK(ks_two_sample(xn, xc).p_value > 0.01);
}

TEST_CASE("chi-square harness sanity") {
    // a fair four-sided die
    std::vector<long> counts{260, 240, 255, 245};
    std::vector<double> probs{0.25, 0.25, 0.25, 0.25};
    const auto ok = chi_square_gof(counts, probs, 1000);
    CHECK(ok.p_value > 0.05);
    // a loaded one
    std::vector<long> bad{400, 200, 200, 200};
    const auto reject = chi_square_gof(bad, probs, 1000);
    CHECK(reject.p_value < 1e-6);
}
