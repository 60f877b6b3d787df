#pragma once

// Adaptive Gauss-Kronrod (10/21-point) integration and fixed Gauss-Legendre
// rules.

#include <functional>
#include <span>
#include <vector>

namespace mogfade::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive bisection on [a, b]; the interval with the largest error
/// estimate is split until sum(error) <= max(abs_tol, rel_tol * |value|).
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [a, inf) via x = a + t / (1 - t).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opts = {});

/// Integral over [a, b] split at the given interior breakpoints.
Result integrate_pieces(const Integrand& f, std::span<const double> breakpoints,
                        const Options& opts = {});

/// As `integrate`, but throws NonConvergenceError (carrying the estimate) on failure.
double integrate_or_throw(const Integrand& f, double a, double b, const Options& opts = {});
double integrate_to_infinity_or_throw(const Integrand& f, double a, const Options& opts = {});

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule. Rules for n = 64 and n = 128 are cached.
const GaussLegendreRule& gauss_legendre(int n);

/// Fixed-order rule mapped onto [a, b].
double gauss_legendre_integrate(const Integrand& f, double a, double b, int n);

}  // namespace mogfade::quad
