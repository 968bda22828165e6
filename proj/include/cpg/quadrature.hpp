#pragma once

#include <cmath>
#include <stdexcept>

// Adaptive Gauss-Kronrod (G7, K15) integration.  Bisects until the local
// Kronrod-vs-Gauss discrepancy is below the interval's share of the
// tolerance.  Handles the mildly singular integrands that arise here
// (integrable x^{c-1} endpoints, smooth exponential tails).

namespace cpg {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_depth = 48;
};

class quadrature_error : public std::runtime_error {
  public:
    explicit quadrature_error(const std::string& what_arg)
        : std::runtime_error(what_arg) {}
};

namespace detail {

// K15 nodes (positive half) and weights; G7 reuses the odd-indexed nodes.
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGkWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
struct GkEstimate {
    double kronrod;
    double error;
};

template <class F>
GkEstimate<F> gk15(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kronrod = kGkWeights[7] * f(mid);
    double gauss = kGaussWeights[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGkNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kGkWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

template <class F>
double integrate_impl(F& f, double a, double b, double tol, double rel_tol,
                      int depth) {
    auto est = gk15(f, a, b);
    if (!std::isfinite(est.kronrod))
        throw quadrature_error("integrate: non-finite integrand estimate");
    if (est.error <= tol || est.error <= rel_tol * std::abs(est.kronrod))
        return est.kronrod;
    if (depth <= 0)
        throw quadrature_error("integrate: subdivision limit reached");
    const double mid = 0.5 * (a + b);
    return integrate_impl(f, a, mid, 0.5 * tol, rel_tol, depth - 1) +
           integrate_impl(f, mid, b, 0.5 * tol, rel_tol, depth - 1);
}

}  // namespace detail

/// Integral of f over the finite interval [a, b].
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
    if (!(b >= a)) throw std::invalid_argument("integrate: bad interval");
    if (a == b) return 0.0;
    return detail::integrate_impl(f, a, b, opt.abs_tol, opt.rel_tol,
                                  opt.max_depth);
}

/// Integral of f over [a, inf) for integrands with an exponentially decaying
/// tail.  Advances over doubling panels until two consecutive panels add
/// less than the absolute tolerance.
template <class F>
double integrate_to_inf(F&& f, double a, double first_width = 1.0,
                        QuadratureOptions opt = {}) {
    double total = 0.0;
    double lo = a;
    double width = first_width;
    int quiet = 0;
    for (int panel = 0; panel < 80; ++panel) {
        const double piece = integrate(f, lo, lo + width, opt);
        total += piece;
        if (std::abs(piece) <= opt.abs_tol + opt.rel_tol * std::abs(total)) {
            if (++quiet >= 2) return total;
        } else {
            quiet = 0;
        }
        lo += width;
        width *= 2.0;
    }
    throw quadrature_error("integrate_to_inf: tail did not settle");
}

}  // namespace cpg
