#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpg {

/// Tolerance / truncation policy governing every infinite-series evaluation
/// in the library.  `tol` is a relative tail bound; `max_terms` is a hard cap
/// after which evaluation reports failure instead of silently truncating.
struct SeriesControl {
    double tol = 1e-14;
    long max_terms = 10000;
};

/// Thrown when a series does not meet its tail bound within max_terms.
class truncation_error : public std::runtime_error {
  public:
    explicit truncation_error(const std::string& what_arg)
        : std::runtime_error(what_arg) {}
};

namespace detail {

// Sums term(0) + term(1) + ... and stops once |term| <= tol * |sum| for
// three consecutive terms.  The run of three guards against the even/odd
// magnitude alternation that shows up in the psi-series with step 2 in the
// gamma arguments.
template <class Term>
double sum_series(const SeriesControl& ctl, Term&& term, const char* label) {
    if (!(ctl.tol > 0.0) || ctl.max_terms < 1)
        throw std::invalid_argument(std::string(label) + ": invalid SeriesControl");
    double sum = 0.0;
    int quiet = 0;
    bool started = false;
    for (long k = 0; k < ctl.max_terms; ++k) {
        const double t = term(k);
        sum += t;
        started = started || t != 0.0;
        if (!started) continue;  // leading zero terms (gamma poles) don't count
        if (std::abs(t) <= ctl.tol * std::abs(sum)) {
            if (++quiet >= 3) return sum;
        } else {
            quiet = 0;
        }
    }
    if (!started) return 0.0;  // every term underflowed: the sum is below range
    throw truncation_error(std::string(label) +
                           ": tail bound not reached within max_terms");
}

}  // namespace detail
}  // namespace cpg
