// Command-line surface: pmf tables, hitting/first-passage laws, iterated
// chains, and the verification suites.
//
// Exit codes: 0 success, 1 validation/parse error, 2 numerical failure
// (series truncation / quadrature), 3 verification failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpg/iterate.hpp"
#include "cpg/models.hpp"
#include "cpg/ode_check.hpp"
#include "cpg/passage.hpp"
#include "cpg/pmf.hpp"
#include "cpg/report.hpp"
#include "cpg/simulate.hpp"
#include "cpg/stats.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string g12(double v) { return cpg::detail::format_g12(v); }

cpg::SeriesControl default_series_control() {
    cpg::SeriesControl ctl;
    if (const char* env = std::getenv("CPG_SERIES_TOL")) {
        const double tol = std::atof(env);
        if (tol > 0.0) ctl.tol = tol;
    }
    return ctl;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

// "1..10", "4", or "1,3,9"; empty string means an empty range.
std::vector<long> parse_k_range(const std::string& text) {
    std::vector<long> out;
    if (text.empty()) return out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const long lo = std::stol(text.substr(0, dots));
        const long hi = std::stol(text.substr(dots + 2));
        for (long k = lo; k <= hi; ++k) out.push_back(k);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stol(item));
    return out;
}

// "lo:hi:count" inclusive grid, linear or log-spaced.
std::vector<double> parse_grid(const std::string& text, bool log_spaced) {
    std::vector<double> out;
    double lo = 0.0, hi = 0.0;
    long count = 0;
    char c1 = 0, c2 = 0;
    std::stringstream ss(text);
    if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
        throw CLI::ValidationError("--grid/--s expects lo:hi:count");
    if (count == 1) return {lo};
    for (long i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(log_spaced ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
    }
    return out;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

void write_output(const std::string& payload, const std::optional<std::string>& out,
                  const nlohmann::json& manifest_params, const std::string& command,
                  std::uint64_t seed = 0) {
    if (!out) {
        std::cout << payload;
        return;
    }
    std::ofstream file(*out);
    if (!file) throw CLI::ValidationError("cannot open output file " + *out);
    file << payload;
    file.close();
    nlohmann::json manifest{{"command", command},
                            {"params", manifest_params},
                            {"seed", seed},
                            {"version", std::string("cpg ") + kVersion},
                            {"timestamp", timestamp_utc()},
                            {"outputs", {*out}}};
    std::ofstream mf(*out + ".manifest.json");
    mf << manifest.dump(2) << "\n";
}

struct PmfArgs {
    std::string family = "n1gn";
    cpg::ModelParams p;
    std::string times = "1";
    long kmax = 20;
    std::string format = "csv";
    std::optional<std::string> out;
    double tail_bound = 1e-6;
    bool enforce_tail = false;  // set when --tail-bound is given explicitly
};

cpg::Counting counting_from_name(const std::string& name) {
    if (name == "n1gn") return cpg::Counting::n1gn;
    if (name == "n1en") return cpg::Counting::n1en;
    if (name == "n1gna") return cpg::Counting::n1gna;
    if (name == "n1ena") return cpg::Counting::n1ena;
    throw CLI::ValidationError("unknown family " + name);
}

int run_pmf(const PmfArgs& args) {
    cpg::ModelParams p = args.p;
    const cpg::Counting family = counting_from_name(args.family);
    if (family == cpg::Counting::n1en || family == cpg::Counting::n1ena)
        p.alpha = 1.0;
    const auto times = parse_double_list(args.times);
    const auto table = cpg::build_table(family, p, times, args.kmax, args.tail_bound,
                                        !args.enforce_tail, default_series_control());
    const std::string payload =
        args.format == "json" ? cpg::to_json(table).dump(2) + "\n" : cpg::to_csv(table);
    nlohmann::json params{{"family", args.family}, {"lambda", p.lambda},
                          {"alpha", p.alpha},      {"beta", p.beta},
                          {"lambda1", p.lambda1},  {"a", p.a},
                          {"t", args.times},       {"kmax", args.kmax},
                          {"format", args.format}};
    write_output(payload, args.out, params, "pmf");
    return 0;
}

struct HittingArgs {
    std::string kind = "prob";
    cpg::ModelParams p;
    std::string krange = "1..10";
    std::string sgrid = "0.1:5:25";
    std::string format = "csv";
    std::optional<std::string> out;
};

int run_hitting(const HittingArgs& args) {
    const auto ks = parse_k_range(args.krange);
    const auto ctl = default_series_control();
    nlohmann::json rows = nlohmann::json::array();
    std::string csv;
    if (args.kind == "prob") {
        csv = "k,value\n";
        for (long k : ks) {
            const double v = cpg::hit_prob_n1gn(k, args.p, ctl);
            csv += std::to_string(k) + "," + g12(v) + "\n";
            rows.push_back({{"k", k}, {"value", v}});
        }
    } else {
        const auto sgrid = parse_grid(args.sgrid, false);
        csv = "k,s,value\n";
        for (long k : ks)
            for (double s : sgrid) {
                double v = 0.0;
                if (args.kind == "density")
                    v = cpg::hit_density_n1gn(k, s, args.p, ctl);
                else if (args.kind == "fpt-cdf")
                    v = cpg::fpt_cdf(k, s, args.p, ctl);
                else if (args.kind == "fpt-density")
                    v = cpg::fpt_density(k, s, args.p, ctl);
                else
                    throw CLI::ValidationError("unknown kind " + args.kind);
                csv += std::to_string(k) + "," + g12(s) + "," + g12(v) + "\n";
                rows.push_back({{"k", k}, {"s", s}, {"value", v}});
            }
    }
    nlohmann::json params{{"kind", args.kind},     {"lambda", args.p.lambda},
                          {"alpha", args.p.alpha}, {"beta", args.p.beta},
                          {"lambda1", args.p.lambda1}, {"a", args.p.a},
                          {"k", args.krange},      {"s", args.sgrid}};
    const std::string payload = args.format == "json"
                                    ? nlohmann::json{{"kind", args.kind}, {"rows", rows}}.dump(2) + "\n"
                                    : csv;
    write_output(payload, args.out, params, "hitting");
    return 0;
}

struct IterateArgs {
    std::string chainfile;
    std::string action = "bernstein";
    std::string grid = "0.001:10:30";
    bool log_grid = false;
    std::string format = "csv";
    std::optional<std::string> out;
};

int run_iterate(const IterateArgs& args) {
    std::ifstream in(args.chainfile);
    if (!in) throw CLI::ValidationError("cannot open chain file " + args.chainfile);
    nlohmann::json cj;
    in >> cj;
    const cpg::IterChain chain = cpg::parse_chain(cj);
    const bool closed_form =
        cpg::chain_regime(chain) != cpg::ChainRegime::heterogeneous &&
        (cpg::chain_regime(chain) == cpg::ChainRegime::unit || chain.base_scale == 1.0);
    std::string csv;
    nlohmann::json jout;
    nlohmann::json params{{"chain", cpg::chain_to_json(chain)},
                          {"action", args.action},
                          {"grid", args.grid}};

    if (args.action == "collapse") {
        const cpg::ModelParams eq = cpg::collapse_chain(chain);
        csv = "lambda,alpha,beta,a\n" + g12(eq.lambda) + "," + g12(eq.alpha) + "," +
              g12(eq.beta) + "," + g12(eq.a) + "\n";
        jout = {{"lambda", eq.lambda}, {"alpha", eq.alpha}, {"beta", eq.beta}, {"a", eq.a}};
    } else if (args.action == "bernstein") {
        const auto grid = parse_grid(args.grid, args.log_grid);
        double max_diff = 0.0;
        nlohmann::json rows = nlohmann::json::array();
        csv = closed_form ? "u,closed_form,composed,abs_diff\n" : "u,composed\n";
        for (double u : grid) {
            const double composed = cpg::compose_bernstein(u, chain);
            if (closed_form) {
                const double closed = cpg::iter_bernstein(u, chain);
                const double diff = std::abs(closed - composed);
                max_diff = std::max(max_diff, diff);
                csv += g12(u) + "," + g12(closed) + "," + g12(composed) + "," +
                       g12(diff) + "\n";
                rows.push_back({{"u", u}, {"closed_form", closed}, {"composed", composed}});
            } else {
                csv += g12(u) + "," + g12(composed) + "\n";
                rows.push_back({{"u", u}, {"composed", composed}});
            }
        }
        if (closed_form) {
            std::cerr << "max_abs_diff=" << g12(max_diff) << "\n";
            jout["max_abs_diff"] = max_diff;
        }
        jout["rows"] = rows;
    } else if (args.action == "levy") {
        const auto grid = parse_grid(args.grid, args.log_grid);
        const auto measure = cpg::chain_levy_measure(chain);
        nlohmann::json rows = nlohmann::json::array();
        csv = closed_form ? "x,closed_form,iterated\n" : "x,iterated\n";
        for (double x : grid) {
            const double iterated = cpg::exp_sum_density(measure, x);
            if (closed_form) {
                const double closed = cpg::iter_levy_density(x, chain);
                csv += g12(x) + "," + g12(closed) + "," + g12(iterated) + "\n";
                rows.push_back({{"x", x}, {"closed_form", closed}, {"iterated", iterated}});
            } else {
                csv += g12(x) + "," + g12(iterated) + "\n";
                rows.push_back({{"x", x}, {"iterated", iterated}});
            }
        }
        jout["rows"] = rows;
    } else if (args.action == "ode") {
        const auto grid = parse_grid(args.grid, args.log_grid);
        const auto components = cpg::ode_coefficients(chain);
        csv = "u";
        for (const auto& c : components) csv += "," + c.label;
        csv += ",sum,bernstein\n";
        nlohmann::json rows = nlohmann::json::array();
        for (double u : grid) {
            csv += g12(u);
            double sum = 0.0;
            nlohmann::json row{{"u", u}};
            for (const auto& c : components) {
                const double v = c.eval(u);
                sum += v;
                csv += "," + g12(v);
                row[c.label] = v;
            }
            const double f = cpg::iter_bernstein(u, chain);
            csv += "," + g12(sum) + "," + g12(f) + "\n";
            row["sum"] = sum;
            row["bernstein"] = f;
            rows.push_back(row);
        }
        jout["rows"] = rows;
    } else {
        throw CLI::ValidationError("unknown action " + args.action);
    }
    const std::string payload =
        args.format == "json" ? jout.dump(2) + "\n" : csv;
    write_output(payload, args.out, params, "iterate");
    return 0;
}

// --------------------------------------------------------------------------
// verify suites

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 42;
    long n = 1000000;
    int workers = 1;
    std::optional<std::string> out;
};

struct FigParams {
    cpg::Counting family;
    cpg::ModelParams p;
};

std::vector<FigParams> figure_params() {
    return {{cpg::Counting::n1gn, {2.0, 2.0, 0.8, 1.0, 0.0}},
            {cpg::Counting::n1en, {4.0, 1.0, 0.8, 1.0, 0.0}},
            {cpg::Counting::n1gna, {1.0, 2.0, 0.8, 1.0, 5.0}},
            {cpg::Counting::n1ena, {1.0, 1.0, 0.8, 1.0, 5.0}}};
}

cpg::CheckResult bound_check(std::string name, double observed, double lower_bound) {
    cpg::CheckResult c;
    c.name = std::move(name);
    c.expected = lower_bound;
    c.observed = observed;
    c.tolerance = 0.0;
    c.pass = observed >= lower_bound;
    return c;
}

void verify_pmf(std::vector<cpg::CheckResult>& checks, const VerifyArgs& args) {
    const auto figs = figure_params();
    for (const auto& fig : figs) {
        // closed form vs pgf-coefficient oracle
        const auto oracle = cpg::pgf_pmf_oracle(fig.family, fig.p, 1.0, 40);
        double worst = 0.0;
        for (long k = 0; k <= 15; ++k)
            worst = std::max(worst, std::abs(cpg::pmf(fig.family, k, 1.0, fig.p) -
                                             oracle[static_cast<std::size_t>(k)]));
        checks.push_back(cpg::make_check(
            std::string("pmf oracle max|diff| ") + cpg::family_name(fig.family), 0.0,
            worst, 1e-9));

        // normalization at the adaptive truncation point
        const long kmax = cpg::adaptive_kmax(fig.family, fig.p, 3.0);
        const auto table = cpg::build_table(fig.family, fig.p, {3.0}, kmax, 1e-9);
        checks.push_back(cpg::make_check(
            std::string("pmf tail mass ") + cpg::family_name(fig.family), 0.0,
            std::abs(table.tail_mass[0]), 1e-9));

        // Monte Carlo per-bin 3 sigma plus chi-square
        cpg::SimConfig cfg;
        cfg.seed = args.seed;
        cfg.n_samples = args.n;
        cfg.t = 1.0;
        cfg.workers = args.workers;
        const auto emp = cpg::empirical_pmf(fig.family, fig.p, cfg);
        double worst_sigma = 0.0;
        std::vector<double> probs;
        for (std::size_t k = 0; k < emp.counts.size(); ++k) {
            const double pk = cpg::pmf(fig.family, static_cast<long>(k), 1.0, fig.p);
            probs.push_back(pk);
            if (pk * static_cast<double>(args.n) < 20.0) continue;
            const double se =
                std::sqrt(pk * (1.0 - pk) / static_cast<double>(args.n));
            worst_sigma = std::max(worst_sigma, std::abs(emp.prob(k) - pk) / se);
        }
        checks.push_back(cpg::make_check(
            std::string("pmf MC worst z-score ") + cpg::family_name(fig.family), 0.0,
            worst_sigma, 3.0));
        const auto chi2 = cpg::chi_square_gof(emp.counts, probs, args.n);
        checks.push_back(bound_check(
            std::string("pmf chi-square p ") + cpg::family_name(fig.family),
            chi2.p_value, 0.001));
    }
}

void verify_hitting(std::vector<cpg::CheckResult>& checks, const VerifyArgs& args) {
    // Constant hitting probability at alpha = 1
    cpg::ModelParams pe{1.0, 1.0, 0.8, 1.0, 0.0};
    double worst = 0.0;
    for (long k = 1; k <= 20; ++k)
        worst = std::max(worst, std::abs(cpg::hit_prob_n1gn(k, pe) - 4.0 / 9.0));
    checks.push_back(cpg::make_check("hitting constant alpha=1", 0.0, worst, 1e-12));

    // Spot value 1/3 through three routes
    cpg::ModelParams p2{1.0, 2.0, 1.0, 1.0, 0.0};
    checks.push_back(cpg::make_check("hitting series alpha=2 k=1", 1.0 / 3.0,
                                     cpg::hit_prob_n1gn(1, p2), 1e-10));
    checks.push_back(cpg::make_check("hitting closed-form alpha=2 k=1", 1.0 / 3.0,
                                     cpg::hit_prob_alpha2(1, p2), 1e-10));
    const auto jd2 = cpg::jump_distribution(p2);
    checks.push_back(cpg::make_check("hitting renewal alpha=2 k=1", 1.0 / 3.0,
                                     cpg::hit_prob_renewal(1, jd2), 1e-10));

    // Renewal oracle across a parameter grid
    double worst_grid = 0.0;
    for (double alpha : {0.5, 1.0, 2.0})
        for (double beta : {0.5, 1.0, 2.0})
            for (double lambda1 : {0.5, 1.0, 2.0}) {
                cpg::ModelParams pg{1.0, alpha, beta, lambda1, 0.0};
                const auto jd = cpg::jump_distribution(pg);
                for (long k = 1; k <= 10; ++k)
                    worst_grid = std::max(worst_grid,
                                          std::abs(cpg::hit_prob_n1gn(k, pg) -
                                                   cpg::hit_prob_renewal(k, jd)));
            }
    checks.push_back(cpg::make_check("hitting renewal-oracle grid", 0.0, worst_grid, 1e-10));

    // Monte Carlo agreement
    cpg::SimConfig cfg;
    cfg.seed = args.seed;
    cfg.n_samples = args.n;
    cfg.workers = args.workers;
    const auto jd_e = cpg::jump_distribution(pe);
    const auto est = cpg::simulate_hit(5, jd_e, cfg);
    checks.push_back(cpg::make_check("hitting MC alpha=1 k=5", 4.0 / 9.0, est.estimate,
                                     3.0 * est.standard_error));
    const auto est2 = cpg::simulate_hit(1, jd2, cfg);
    checks.push_back(cpg::make_check("hitting MC alpha=2 k=1", 1.0 / 3.0, est2.estimate,
                                     3.0 * est2.standard_error));
}

void verify_ode(std::vector<cpg::CheckResult>& checks, const VerifyArgs&) {
    const auto figs = figure_params();
    struct Row {
        cpg::OdeSystem system;
        cpg::Counting family;
        cpg::ModelParams p;
        long k;
        double t;
        const char* name;
    };
    const std::vector<Row> rows = {
        {cpg::OdeSystem::gn, figs[0].family, figs[0].p, 0, 1.0, "gn k=0"},
        {cpg::OdeSystem::gn, figs[0].family, figs[0].p, 3, 1.0, "gn k=3"},
        {cpg::OdeSystem::en, figs[1].family, figs[1].p, 4, 2.0, "en k=4"},
        {cpg::OdeSystem::gna, figs[2].family, figs[2].p, 3, 1.0, "gna k=3"},
        {cpg::OdeSystem::generic, figs[0].family, figs[0].p, 2, 1.0, "generic k=2"},
    };
    for (const auto& row : rows) {
        const double res =
            cpg::ode_residual(row.system, row.family, row.k, row.t, row.p, 1e-4);
        checks.push_back(cpg::make_check(std::string("ode residual ") + row.name, 0.0,
                                         res, 1e-6));
        const double r1 =
            cpg::ode_residual(row.system, row.family, row.k, row.t, row.p, 2e-3);
        const double r2 =
            cpg::ode_residual(row.system, row.family, row.k, row.t, row.p, 1e-3);
        checks.push_back(cpg::make_check(std::string("ode Richardson ") + row.name, 4.0,
                                         r1 / r2, 0.5));
    }
    const cpg::IterChain chain{{{0.5, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.5, 1.0, 1.0}}, 1.0};
    const double res = cpg::ode_residual_chain(chain, 1.0, 3, 1.0, 1e-4);
    checks.push_back(cpg::make_check("ode residual chain k=3", 0.0, res, 1e-6));
    const double ratio = cpg::ode_residual_chain(chain, 1.0, 3, 1.0, 2e-3) /
                         cpg::ode_residual_chain(chain, 1.0, 3, 1.0, 1e-3);
    checks.push_back(cpg::make_check("ode Richardson chain k=3", 4.0, ratio, 0.5));
}

void verify_iterate(std::vector<cpg::CheckResult>& checks, const VerifyArgs& args) {
    // closed form vs composition, both regimes, n <= 5
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
        cpg::IterChain unit, homog;
        for (int i = 0; i < n; ++i) {
            unit.stages.push_back({0.25 * (i + 1), 1.0, 1.0});
            homog.stages.push_back({0.25 * (i + 1), 2.0, 3.0});
        }
        for (int g = 0; g < 30; ++g) {
            const double u = 1e-3 * std::pow(10.0 / 1e-3, g / 29.0);
            worst = std::max(worst, std::abs(cpg::iter_bernstein(u, unit) -
                                             cpg::compose_bernstein(u, unit)));
            worst = std::max(worst, std::abs(cpg::iter_bernstein(u, homog) -
                                             cpg::compose_bernstein(u, homog)));
        }
    }
    checks.push_back(cpg::make_check("iterate closed vs composed", 0.0, worst, 1e-12));

    // Levy / Bernstein consistency by quadrature
    cpg::IterChain chain{{{0.5, 2.0, 3.0}, {1.0, 2.0, 3.0}}, 1.0};
    double worst_rel = 0.0;
    for (double u : {0.5, 1.0, 4.0}) {
        const double f = cpg::iter_bernstein(u, chain);
        const double integral = cpg::integrate_to_inf(
            [&](double x) {
                return -std::expm1(-u * x) * cpg::iter_levy_density(x, chain);
            },
            0.0, 1.0);
        worst_rel = std::max(worst_rel, std::abs(integral - f) / std::abs(f));
    }
    checks.push_back(cpg::make_check("iterate Levy/Bernstein rel", 0.0, worst_rel, 1e-7));

    // one-step closure on the exponential family
    const double a = 0.7, gamma = 1.3, alpha = 2.1;
    const cpg::ExpSumMeasure in{{gamma, a, gamma * gamma}};
    const auto out_measure = cpg::bessel_transform_exp_measure(in, a, alpha, alpha);
    const double rho = alpha * gamma / (alpha + gamma);
    double worst_closure = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double x = 0.5 * i;
        const double expected = std::exp(-rho * x) * (a / x + rho * rho);
        worst_closure = std::max(
            worst_closure, std::abs(cpg::exp_sum_density(out_measure, x) - expected));
    }
    checks.push_back(cpg::make_check("iterate one-step closure", 0.0, worst_closure, 1e-10));

    // collapse identity at the Laplace-exponent level
    cpg::IterChain nested{{{0.5, 0.5, 0.5}, {0.5, 1.0 / 3.0, 1.0 / 3.0}}, 1.0};
    const auto collapsed = cpg::collapse_chain(nested);
    double worst_collapse = 0.0;
    for (double u : {0.01, 0.1, 1.0, 10.0})
        worst_collapse = std::max(
            worst_collapse,
            std::abs(cpg::compose_bernstein(u, nested) -
                     cpg::bernstein_gna(u, collapsed.lambda, 1.0, collapsed.beta,
                                        collapsed.a)));
    checks.push_back(cpg::make_check("iterate collapse identity", 0.0, worst_collapse, 1e-12));

    // distributional collapse by a two-sample KS test
    cpg::SimConfig cfg;
    cfg.seed = args.seed;
    cfg.n_samples = std::min<long>(args.n, 100000);
    cfg.t = 1.0;
    cfg.workers = args.workers;
    const auto nested_draws = cpg::sample_many_chain(nested, cfg);
    cpg::IterChain single{{{0.5, 0.2, 0.2}}, 1.0};
    cpg::SimConfig cfg2 = cfg;
    cfg2.seed = args.seed + 1;
    const auto collapsed_draws = cpg::sample_many_chain(single, cfg2);
    const auto ks = cpg::ks_two_sample(nested_draws, collapsed_draws);
    checks.push_back(bound_check("iterate collapse KS p", ks.p_value, 0.01));
}

int run_verify(const VerifyArgs& args) {
    std::vector<cpg::CheckResult> checks;
    if (args.suite == "all" || args.suite == "pmf") verify_pmf(checks, args);
    if (args.suite == "all" || args.suite == "hitting") verify_hitting(checks, args);
    if (args.suite == "all" || args.suite == "ode") verify_ode(checks, args);
    if (args.suite == "all" || args.suite == "iterate") verify_iterate(checks, args);
    if (checks.empty()) throw CLI::ValidationError("unknown suite " + args.suite);
    const nlohmann::json report = cpg::to_json(checks);
    nlohmann::json params{{"suite", args.suite}, {"n", args.n}, {"workers", args.workers}};
    write_output(report.dump(2) + "\n", args.out, params, "verify", args.seed);
    return cpg::all_pass(checks) ? 0 : 3;
}

void add_model_flags(CLI::App* cmd, cpg::ModelParams& p) {
    cmd->add_option("--lambda", p.lambda, "inner Poisson rate");
    cmd->add_option("--alpha", p.alpha, "Gamma shape per unit");
    cmd->add_option("--beta", p.beta, "Gamma rate");
    cmd->add_option("--lambda1", p.lambda1, "outer Poisson rate");
    cmd->add_option("--a", p.a, "clock drift");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-changed Poisson process toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("cpg ") + kVersion);

    PmfArgs pmf_args;
    auto* pmf_cmd = app.add_subcommand("pmf", "tabulate counting-process pmfs");
    pmf_cmd->add_option("--family", pmf_args.family, "n1gn|n1en|n1gna|n1ena");
    add_model_flags(pmf_cmd, pmf_args.p);
    pmf_cmd->add_option("--t", pmf_args.times, "comma-separated times");
    pmf_cmd->add_option("--kmax", pmf_args.kmax, "largest k");
    pmf_cmd->add_option("--format", pmf_args.format, "csv|json");
    pmf_cmd->add_option("--out", pmf_args.out, "output path");
    auto* tail_opt = pmf_cmd->add_option("--tail-bound", pmf_args.tail_bound,
                                         "fail when tail mass exceeds this bound");

    HittingArgs hit_args;
    auto* hit_cmd = app.add_subcommand("hitting", "hitting / first-passage laws");
    hit_cmd->add_option("--kind", hit_args.kind, "prob|density|fpt-cdf|fpt-density");
    add_model_flags(hit_cmd, hit_args.p);
    hit_cmd->add_option("--k", hit_args.krange, "k range: 1..10, 4, or 1,3,9");
    hit_cmd->add_option("--s", hit_args.sgrid, "s grid lo:hi:count");
    hit_cmd->add_option("--format", hit_args.format, "csv|json");
    hit_cmd->add_option("--out", hit_args.out, "output path");

    IterateArgs iter_args;
    auto* iter_cmd = app.add_subcommand("iterate", "iterated Bessel transforms");
    iter_cmd->add_option("--chain", iter_args.chainfile, "chain JSON file")->required();
    iter_cmd->add_option("--action", iter_args.action, "bernstein|levy|collapse|ode");
    iter_cmd->add_option("--grid", iter_args.grid, "grid lo:hi:count");
    iter_cmd->add_flag("--log-grid", iter_args.log_grid, "log-spaced grid");
    iter_cmd->add_option("--format", iter_args.format, "csv|json");
    iter_cmd->add_option("--out", iter_args.out, "output path");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
    verify_cmd->add_option("--suite", verify_args.suite, "all|pmf|hitting|ode|iterate");
    verify_cmd->add_option("--seed", verify_args.seed, "RNG seed");
    verify_cmd->add_option("--n", verify_args.n, "Monte Carlo sample count");
    verify_cmd->add_option("--workers", verify_args.workers, "sampling threads");
    verify_cmd->add_option("--out", verify_args.out, "report path");

    try {
        app.parse(argc, argv);
        pmf_args.enforce_tail = tail_opt->count() > 0;
        if (pmf_cmd->parsed()) return run_pmf(pmf_args);
        if (hit_cmd->parsed()) return run_hitting(hit_args);
        if (iter_cmd->parsed()) return run_iterate(iter_args);
        if (verify_cmd->parsed()) return run_verify(verify_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const cpg::truncation_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const cpg::quadrature_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
