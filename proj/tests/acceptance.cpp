// Acceptance suite: the project-level checks, one printed line per
// criterion.  Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cpg/iterate.hpp"
#include "cpg/models.hpp"
#include "cpg/ode_check.hpp"
#include "cpg/passage.hpp"
#include "cpg/pmf.hpp"
#include "cpg/quadrature.hpp"
#include "cpg/simulate.hpp"
#include "cpg/special_functions.hpp"
#include "cpg/stats.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
    bool pass;
    std::string detail;
};

struct FigCase {
    cpg::Counting family;
    cpg::ModelParams p;
};

std::vector<FigCase> figure_cases() {
    return {{cpg::Counting::n1gn, {2.0, 2.0, 0.8, 1.0, 0.0}},
            {cpg::Counting::n1en, {4.0, 1.0, 0.8, 1.0, 0.0}},
            {cpg::Counting::n1gna, {1.0, 2.0, 0.8, 1.0, 5.0}},
            {cpg::Counting::n1ena, {1.0, 1.0, 0.8, 1.0, 5.0}}};
}


// 1. constant hitting probability across levels for the exponential family
Criterion criterion_hitting_constant() {
    const auto start = Clock::now();
    cpg::ModelParams p{1.0, 1.0, 0.8, 1.0, 0.0};
    double worst = 0.0;
    for (long k = 1; k <= 20; ++k)
        worst = std::max(worst, std::abs(cpg::hit_prob_n1gn(k, p) - 4.0 / 9.0));
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << "max |P{T_k<inf} - 4/9| = " << worst << " over k in [1,20], " << elapsed
      << " s";
    return {worst <= 1e-12 && elapsed < 1.0, d.str()};
}

// 2. level-1 hitting probability 1/3 through three analytic routes plus MC
Criterion criterion_three_routes() {
    const auto start = Clock::now();
    cpg::ModelParams p{1.0, 2.0, 1.0, 1.0, 0.0};
    const double series = cpg::hit_prob_n1gn(1, p);
    const double closed = cpg::hit_prob_alpha2(1, p);
    const auto jd = cpg::jump_distribution(p);
    const double renewal = cpg::hit_prob_renewal(1, jd);
    const double worst =
        std::max({std::abs(series - 1.0 / 3.0), std::abs(closed - 1.0 / 3.0),
                  std::abs(renewal - 1.0 / 3.0)});
    cpg::SimConfig cfg{20260808, 1000000, 1.0, 4};
    const auto est = cpg::simulate_hit(1, jd, cfg);
    const double z = std::abs(est.estimate - 1.0 / 3.0) / est.standard_error;
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << "route spread " << worst << ", MC z = " << z << ", " << elapsed << " s";
    return {worst <= 1e-10 && z <= 3.0 && elapsed < 30.0, d.str()};
}

// 3. hitting probabilities ignore the inner Poisson rate
Criterion criterion_lambda_invariance() {
    double worst = 0.0;
    for (double alpha : {0.5, 1.0, 2.0, 3.0})
        for (double beta : {0.5, 1.0, 2.0})
            for (double lambda1 : {0.5, 1.0, 2.0})
                for (long k = 1; k <= 10; ++k) {
                    double lo = 2.0, hi = -1.0;
                    for (double lambda : {0.5, 2.0, 7.0}) {
                        cpg::ModelParams p{lambda, alpha, beta, lambda1, 0.0};
                        const double v = cpg::hit_prob_n1gn(k, p);
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                    worst = std::max(worst, hi - lo);
                }
    std::ostringstream d;
    d << "max spread across lambda = " << worst;
    return {worst < 1e-14, d.str()};
}

// 4. closed-form pmfs equal pgf-coefficient extraction; adaptive-kmax mass
Criterion criterion_pmf_oracle() {
    double worst = 0.0, worst_tail = 0.0;
    for (const auto& fig : figure_cases())
        for (double t : {1.0, 2.0, 3.0}) {
            const auto oracle = cpg::pgf_pmf_oracle(fig.family, fig.p, t, 80);
            for (long k = 0; k <= 15; ++k)
                worst = std::max(worst,
                                 std::abs(cpg::pmf(fig.family, k, t, fig.p) -
                                          oracle[static_cast<std::size_t>(k)]));
            const long kmax = cpg::adaptive_kmax(fig.family, fig.p, t);
            double total = 0.0;
            for (long k = 0; k <= kmax; ++k) total += cpg::pmf(fig.family, k, t, fig.p);
            worst_tail = std::max(worst_tail, std::abs(1.0 - total));
        }
    std::ostringstream d;
    d << "max |pmf - oracle| = " << worst << ", max tail deficit = " << worst_tail;
    return {worst <= 1e-9 && worst_tail <= 1e-9, d.str()};
}

// 5. difference-differential residuals with second-order decay
Criterion criterion_ode_residuals() {
    const auto start = Clock::now();
    const auto figs = figure_cases();
    struct Row {
        cpg::OdeSystem system;
        cpg::Counting family;
        cpg::ModelParams p;
        long k;
        double t;
    };
    const std::vector<Row> rows = {
        {cpg::OdeSystem::gn, figs[0].family, figs[0].p, 3, 1.0},
        {cpg::OdeSystem::en, figs[1].family, figs[1].p, 4, 2.0},
        {cpg::OdeSystem::gna, figs[2].family, figs[2].p, 3, 1.0},
        {cpg::OdeSystem::gna, figs[3].family, figs[3].p, 4, 1.0},
    };
    double worst_res = 0.0, worst_ratio_err = 0.0;
    for (const auto& row : rows) {
        worst_res = std::max(worst_res, cpg::ode_residual(row.system, row.family,
                                                          row.k, row.t, row.p, 1e-4));
        const double ratio =
            cpg::ode_residual(row.system, row.family, row.k, row.t, row.p, 2e-3) /
            cpg::ode_residual(row.system, row.family, row.k, row.t, row.p, 1e-3);
        worst_ratio_err = std::max(worst_ratio_err, std::abs(ratio - 4.0));
    }
    const cpg::IterChain chain{{{0.5, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.5, 1.0, 1.0}}, 1.0};
    worst_res = std::max(worst_res, cpg::ode_residual_chain(chain, 1.0, 3, 1.0, 1e-4));
    const double chain_ratio = cpg::ode_residual_chain(chain, 1.0, 3, 1.0, 2e-3) /
                               cpg::ode_residual_chain(chain, 1.0, 3, 1.0, 1e-3);
    worst_ratio_err = std::max(worst_ratio_err, std::abs(chain_ratio - 4.0));
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << "max residual(h=1e-4) = " << worst_res << ", max |ratio-4| = "
      << worst_ratio_err << ", " << elapsed << " s";
    return {worst_res < 1e-6 && worst_ratio_err <= 0.5 && elapsed < 60.0, d.str()};
}

// 6. closed-form chain exponents vs the subordination recursion
Criterion criterion_chain_bernstein() {
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
        cpg::IterChain unit, homog;
        for (int i = 0; i < n; ++i) {
            unit.stages.push_back({0.25 * (i + 1), 1.0, 1.0});
            homog.stages.push_back({0.25 * (i + 1), 2.0, 3.0});
        }
        for (int g = 0; g < 30; ++g) {
            const double u = 1e-3 * std::pow(1e4, g / 29.0);
            worst = std::max(worst, std::abs(cpg::iter_bernstein(u, unit) -
                                             cpg::compose_bernstein(u, unit)));
            worst = std::max(worst, std::abs(cpg::iter_bernstein(u, homog) -
                                             cpg::compose_bernstein(u, homog)));
        }
    }
    double worst_rel = 0.0;
    for (const auto& chain :
         {cpg::IterChain{{{0.5, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.5, 1.0, 1.0}}, 1.0},
          cpg::IterChain{{{0.5, 2.0, 3.0}, {1.0, 2.0, 3.0}}, 1.0}})
        for (double u : {0.3, 1.0, 4.0}) {
            const double f = cpg::iter_bernstein(u, chain);
            const double integral = cpg::integrate_to_inf(
                [&](double x) {
                    return -std::expm1(-u * x) * cpg::iter_levy_density(x, chain);
                },
                0.0, 1.0);
            worst_rel = std::max(worst_rel, std::abs(integral - f) / std::abs(f));
        }
    std::ostringstream d;
    d << "max |closed - composed| = " << worst << ", max quadrature rel err = "
      << worst_rel;
    return {worst <= 1e-12 && worst_rel <= 1e-7, d.str()};
}

// 7. one-step closure and the equal-parameter collapse, analytic and sampled
Criterion criterion_closure_collapse() {
    const auto start = Clock::now();
    const double a = 0.7, gamma = 1.3, alpha = 2.1;
    const cpg::ExpSumMeasure in{{gamma, a, gamma * gamma}};
    const auto one_step = cpg::bessel_transform_exp_measure(in, a, alpha, alpha);
    const double rho = alpha * gamma / (alpha + gamma);
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double x = 0.5 * i;
        worst = std::max(worst, std::abs(cpg::exp_sum_density(one_step, x) -
                                         std::exp(-rho * x) * (a / x + rho * rho)));
    }
    cpg::IterChain nested{{{0.5, 0.5, 0.5}, {0.5, 1.0 / 3.0, 1.0 / 3.0}}, 1.0};
    const auto collapsed = cpg::collapse_chain(nested);
    const auto nested_measure = cpg::chain_levy_measure(nested);
    for (int i = 1; i <= 10; ++i) {
        const double x = 0.5 * i;
        const double direct = std::exp(-x * collapsed.beta) *
                              (collapsed.a / x + collapsed.beta * collapsed.beta);
        worst = std::max(worst,
                         std::abs(cpg::exp_sum_density(nested_measure, x) - direct));
    }
    cpg::IterChain single{{{0.5, 0.2, 0.2}}, 1.0};
    const auto xn = cpg::sample_many_chain(nested, cpg::SimConfig{77, 100000, 1.0, 4});
    const auto xc = cpg::sample_many_chain(single, cpg::SimConfig{78, 100000, 1.0, 4});
    const auto ks = cpg::ks_two_sample(xn, xc);
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << "max pointwise density gap = " << worst << ", KS p = " << ks.p_value
      << ", " << elapsed << " s";
    return {worst <= 1e-10 && ks.p_value > 0.01 && elapsed < 60.0, d.str()};
}

// 8. Monte Carlo moments of the drifted clock and its counting process
Criterion criterion_mc_moments() {
    const cpg::ModelParams p{1.0, 2.0, 0.8, 1.0, 5.0};
    const long n = 1000000;
    const auto draws = cpg::sample_many_subordinator(cpg::Subordinator::gna, p,
                                                     cpg::SimConfig{101, n, 1.0, 4});
    double m1 = 0.0;
    for (double v : draws) m1 += v;
    m1 /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double v : draws) {
        const double c = v - m1;
        m2 += c * c;
        m4 += c * c * c * c;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    const auto gmom = cpg::moments(cpg::MomentFamily::gna, p, 1.0);
    const double z_mean =
        std::abs(m1 - gmom.mean) / std::sqrt(m2 / static_cast<double>(n));
    const double z_var = std::abs(m2 - gmom.variance) /
                         std::sqrt((m4 - m2 * m2) / static_cast<double>(n));

    const auto emp =
        cpg::empirical_pmf(cpg::Counting::n1gna, p, cpg::SimConfig{102, n, 1.0, 4});
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t k = 0; k < emp.counts.size(); ++k) {
        c1 += static_cast<double>(k) * emp.counts[k];
        c2 += static_cast<double>(k) * static_cast<double>(k) * emp.counts[k];
    }
    c1 /= static_cast<double>(n);
    c2 /= static_cast<double>(n);
    const double cvar = c2 - c1 * c1;
    const auto nmom = cpg::moments(cpg::MomentFamily::n1gna, p, 1.0);
    const double z_cmean =
        std::abs(c1 - nmom.mean) / std::sqrt(cvar / static_cast<double>(n));
    std::ostringstream d;
    d << "z(mean G) = " << z_mean << ", z(var G) = " << z_var
      << ", z(mean count) = " << z_cmean;
    return {z_mean <= 3.0 && z_var <= 3.0 && z_cmean <= 3.0, d.str()};
}

// 9. special-function identities at library precision
Criterion criterion_special_identities() {
    const auto start = Clock::now();
    double worst_rel = 0.0;
    for (double at : {0.3, 1.0, 2.5, 5.0})
        for (double z : {0.5, 3.0, 10.0, 20.0}) {
            const double lhs = cpg::wright_phi(1.0, at, z);
            const double rhs = std::pow(z, 0.5 * (1.0 - at)) *
                               cpg::bessel_i(at - 1.0, 2.0 * std::sqrt(z));
            worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::abs(rhs));
        }
    // alpha = 1, delta = 0 route used by the transform kernels
    for (double z : {0.5, 4.0, 16.0}) {
        const double lhs = cpg::wright_phi(1.0, 0.0, z);
        const double rhs = std::sqrt(z) * cpg::bessel_i(1.0, 2.0 * std::sqrt(z));
        worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::abs(rhs));
    }
    double worst_fd = 0.0;
    for (double a : {0.5, 1.7})
        for (double g : {1.0, 3.5})
            for (double s : {0.4, 1.2}) {
                auto f = [&](double u) {
                    return a * u * cpg::mittag_leffler3(1.0, 2.0, g, a * u);
                };
                const double h = 2e-5;
                const double fd = (f(s + h) - f(s - h)) / (2.0 * h);
                const double analytic = a * cpg::mittag_leffler3(1.0, 1.0, g, a * s);
                worst_fd = std::max(worst_fd, std::abs(fd - analytic));
            }
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << "max identity rel err = " << worst_rel << ", max derivative FD gap = "
      << worst_fd << ", " << elapsed << " s";
    return {worst_rel <= 1e-10 && worst_fd <= 1e-6 && elapsed < 5.0, d.str()};
}

// 10. figure-data regeneration through the CLI plus per-bin MC agreement
Criterion criterion_figure_data() {
    const std::string cli = CPG_CLI_PATH;
    const char* names[4] = {"n1gn", "n1en", "n1gna", "n1ena"};
    const std::string flags[4] = {
        " --lambda 2 --alpha 2 --beta 0.8 --lambda1 1",
        " --lambda 4 --beta 0.8 --lambda1 1",
        " --lambda 1 --alpha 2 --beta 0.8 --lambda1 1 --a 5",
        " --lambda 1 --beta 0.8 --lambda1 1 --a 5"};
    const auto figs = figure_cases();
    double worst_csv = 0.0, worst_z = 0.0;
    for (int f = 0; f < 4; ++f) {
        const long kmax = cpg::adaptive_kmax(figs[f].family, figs[f].p, 3.0);
        const std::string out = std::string("acc_fig_") + names[f] + ".csv";
        const std::string cmd = cli + " pmf --family " + names[f] + flags[f] +
                                " --t 1,2,3 --kmax " + std::to_string(kmax) +
                                " --out " + out;
        if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
        std::ifstream in(out);
        if (!in.good()) return {false, "missing CLI output " + out};
        std::string line;
        std::getline(in, line);
        if (line != "family,t,k,prob") return {false, "bad CSV header: " + line};
        const std::vector<double> times{1.0, 2.0, 3.0};
        for (std::size_t ti = 0; ti < times.size(); ++ti)
            for (long k = 0; k <= kmax; ++k) {
                std::getline(in, line);
                std::stringstream ls(line);
                std::string fam, tcell, kcell, pcell;
                std::getline(ls, fam, ',');
                std::getline(ls, tcell, ',');
                std::getline(ls, kcell, ',');
                std::getline(ls, pcell, ',');
                const double expected = cpg::pmf(figs[f].family, k, times[ti], figs[f].p);
                worst_csv = std::max(
                    worst_csv, std::abs(std::stod(pcell) - expected) /
                                   std::max(1e-300, std::abs(expected)));
            }
        std::remove(out.c_str());
        std::remove((out + ".manifest.json").c_str());

        for (double t : times) {
            cpg::SimConfig cfg{900 + static_cast<std::uint64_t>(10 * t) +
                                   static_cast<std::uint64_t>(f),
                               1000000, t, 4};
            const auto emp = cpg::empirical_pmf(figs[f].family, figs[f].p, cfg);
            for (std::size_t k = 0; k < emp.counts.size(); ++k) {
                const double pk = cpg::pmf(figs[f].family, static_cast<long>(k), t, figs[f].p);
                if (pk * static_cast<double>(cfg.n_samples) < 20.0) continue;
                const double se = std::sqrt(pk * (1.0 - pk) /
                                            static_cast<double>(cfg.n_samples));
                worst_z = std::max(worst_z, std::abs(emp.prob(k) - pk) / se);
            }
        }
    }
    std::ostringstream d;
    d << "max CSV rel gap = " << worst_csv << ", worst per-bin z = " << worst_z;
    return {worst_csv <= 1e-10 && worst_z <= 3.0, d.str()};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Criterion (*run)();
    };
    const Entry entries[] = {
        {"1 hitting probability constant across levels (exponential clock)",
         criterion_hitting_constant},
        {"2 level-1 hitting probability via three routes + Monte Carlo",
         criterion_three_routes},
        {"3 hitting probabilities invariant in the inner rate",
         criterion_lambda_invariance},
        {"4 pmf closed forms equal pgf-coefficient oracle; mass accounted",
         criterion_pmf_oracle},
        {"5 difference-differential residuals, second-order decay",
         criterion_ode_residuals},
        {"6 chain Bernstein closed forms vs composition; Levy consistency",
         criterion_chain_bernstein},
        {"7 one-step closure and chain collapse, analytic + KS",
         criterion_closure_collapse},
        {"8 Monte Carlo moments of the drifted clock and its counts",
         criterion_mc_moments},
        {"9 special-function identities", criterion_special_identities},
        {"10 figure-data regeneration via the CLI + per-bin MC",
         criterion_figure_data},
    };
    int failures = 0;
    for (const auto& entry : entries) {
        Criterion result{false, "exception"};
        try {
            result = entry.run();
        } catch (const std::exception& e) {
            result.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %s: %s\n", result.pass ? "PASS" : "FAIL",
                    entry.name, result.detail.c_str());
        if (!result.pass) ++failures;
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", std::size(entries));
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures;
}
