#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "bergman/errors.hpp"

namespace bergman {

/// Tolerances and budget for the adaptive integrators.
struct QuadratureSpec {
    double rel_tol = 1e-12;       ///< target relative tolerance
    double abs_floor = 1e-300;    ///< absolute tolerance floor (integrals below it count as converged)
    int max_subdivisions = 4000;  ///< budget of interval splits before giving up
};

struct IntegralResult {
    double value = 0.0;
    double abs_error = 0.0;  ///< conservative error estimate (Kronrod minus Gauss)
    int evaluations = 0;
    bool converged = false;
};

/// Result of a log-scale integration: value = exp(log_value), which may not be
/// representable as a double.
struct LogIntegralResult {
    double log_value = -std::numeric_limits<double>::infinity();
    double rel_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using RealFn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b]. Never evaluates the endpoints,
/// so integrable endpoint singularities are admissible.
IntegralResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec = {});

/// Same, but throws AccuracyError when the budget runs out before convergence.
double integrate_or_throw(const RealFn& f, double a, double b, const QuadratureSpec& spec = {});

/// Computes log of  int_a^b exp(log_f(t)) dt  without underflow by shifting the
/// integrand by its maximum. `peak` must lie in [a, b] and be a point at (or near)
/// the maximum of log_f; use find_log_peak when no analytic location is available.
/// log_f may return -inf where the integrand vanishes.
LogIntegralResult log_integrate(const RealFn& log_f, double a, double b, double peak,
                                const QuadratureSpec& spec = {});

/// Locates the maximum of log_f over the seed points, then refines by golden
/// section between the seed's neighbours. Seeds must be sorted ascending.
double find_log_peak(const RealFn& log_f, const std::vector<double>& seeds);

/// Golden-section maximization on [lo, hi] for a unimodal function.
double golden_max(const RealFn& f, double lo, double hi, int iters = 160);

/// Bisection for the root of a monotone function with f(lo) and f(hi) of opposite sign.
double bisect(const RealFn& f, double lo, double hi, int iters = 200);

/// Walks outward from `from` towards `direction_limit` until log_f drops below
/// `threshold`, then bisects; returns a point where the integrand is negligible.
/// Used to trim the effective support of sharply localised log-scale integrands.
double log_support_edge(const RealFn& log_f, double from, double direction_limit,
                        double threshold);

} // namespace bergman
