#pragma once

// Real-argument special functions used by the fading densities and the
// closed-form performance metrics. All functions are pure and thread-safe.

#include <cstdint>

namespace mogfade::special {

/// Termination control for the infinite series evaluated in this header.
struct SeriesPolicy {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  int max_terms = 500;

  /// Throws std::invalid_argument when the invariants are violated.
  void validate() const;
};

/// Gamma function for x in (0, 170]. Lanczos approximation (g = 7, 9 terms).
/// Throws std::domain_error for x <= 0 and std::overflow_error for x > 170.
double gamma_fn(double x);

/// ln Gamma(x) for any x > 0.
double log_gamma(double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x), computed without
/// cancellation on the side where P is small.
double gamma_p(double a, double x);

/// Unregularized upper incomplete gamma Gamma(a, x). Series for x <= a + 1,
/// continued fraction above.
double upper_incomplete_gamma(double a, double x);

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

/// Modified Bessel function of the first kind I_nu(x) for nu >= -0.999 and
/// x >= 0. With `scaled` the value exp(-x) I_nu(x) is returned instead.
double bessel_i(double nu, double x, bool scaled = false);

/// ln I_nu(x); finite for arguments where I_nu itself would overflow.
double log_bessel_i(double nu, double x);

/// Confluent hypergeometric 1F1(a; b; z). Terminates exactly when a is a
/// non-positive integer. Throws NonConvergenceError if `policy.max_terms`
/// is reached first.
double kummer_1f1(double a, double b, double z, const SeriesPolicy& policy = {});

/// exp(log_scale) * 1F1(a; b; z) for z >= 0, accumulated in log space so that
/// large z paired with a large negative log_scale neither overflows nor
/// underflows. The term cap grows with z.
double kummer_1f1_scaled(double a, double b, double z, double log_scale,
                         const SeriesPolicy& policy = {});

/// Parabolic cylinder function D_order(z) for order <= 0.
double parabolic_cylinder_d(double order, double z, const SeriesPolicy& policy = {});

/// Generalized Marcum Q-function Q_u(a, b) for integer u >= 1, summed as a
/// Poisson mixture of regularized upper incomplete gamma functions.
double marcum_q(int u, double a, double b, const SeriesPolicy& policy = {});

/// Humbert confluent series
///   Psi1(a, b; c, d; x, y) = sum_{m,n} (a)_{m+n} (b)_m / ((c)_m (d)_n) x^m y^n / (m! n!)
/// Requires |x| < 1; throws DivergenceError otherwise.
double humbert_psi1(double a, double b, double c, double d, double x, double y,
                    const SeriesPolicy& policy = {});

/// exp(log_scale) * Psi1(a, b; c, d; x, y) for positive parameters,
/// 0 <= x < 1 and y >= 0, with every term kept in log space.
double humbert_psi1_scaled(double a, double b, double c, double d, double x, double y,
                           double log_scale, const SeriesPolicy& policy = {});

/// Gauss hypergeometric 2F1(a, b; c; x) for |x| < 1 by direct series.
double hyp2f1(double a, double b, double c, double x, const SeriesPolicy& policy = {});

/// Rising factorial (x)_k.
double pochhammer(double x, std::uint32_t k);

namespace detail {
// Branches of bessel_i, exposed so the switchover at x = 30 can be checked.
double bessel_i_series(double nu, double x);
double bessel_i_asymptotic_scaled(double nu, double x);
}  // namespace detail

}  // namespace mogfade::special
