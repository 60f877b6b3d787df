#include "mogfade/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

#include "mogfade/errors.hpp"

namespace mogfade::quad {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077685520856330, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes kXgk[1], kXgk[3], ...
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  std::array<double, 10> lo{};
  std::array<double, 10> hi{};
  double gauss = 0.0;
  double kronrod = fc * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    lo[j] = f(center - dx);
    hi[j] = f(center + dx);
    const double fsum = lo[j] + hi[j];
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  const double mean = 0.5 * kronrod;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));
  kronrod *= half;
  gauss *= half;
  resasc *= std::abs(half);
  double err = std::abs(kronrod - gauss);
  // QUADPACK-style sharpening of the raw |K - G| estimate.
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  if (!std::isfinite(kronrod)) err = std::numeric_limits<double>::infinity();
  return {a, b, kronrod, err};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
  if (a == b) return {0.0, 0.0, 0, true};
  if (!(std::isfinite(a) && std::isfinite(b))) throw std::domain_error("integrate: finite limits required");

  std::priority_queue<Segment> heap;
  Segment first = kronrod21(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int intervals = 1;

  auto done = [&] { return total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

  while (!done() && intervals < opts.max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval can no longer be split in double precision.
      heap.push(worst);
      break;
    }
    Segment left = kronrod21(f, worst.a, mid);
    Segment right = kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum to shed drift accumulated by incremental updates.
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  Result r{value, err, intervals, false};
  r.converged = std::isfinite(value) && err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  return r;
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& opts) {
  auto g = [&f, a](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx / (one_minus * one_minus);
  };
  return integrate(g, 0.0, 1.0, opts);
}

Result integrate_pieces(const Integrand& f, std::span<const double> breakpoints, const Options& opts) {
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate_pieces: need at least two breakpoints");
  Result total{0.0, 0.0, 0, true};
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Result piece = integrate(f, breakpoints[i], breakpoints[i + 1], opts);
    total.value += piece.value;
    total.abs_error += piece.abs_error;
    total.intervals += piece.intervals;
    total.converged = total.converged && piece.converged;
  }
  return total;
}

double integrate_or_throw(const Integrand& f, double a, double b, const Options& opts) {
  Result r = integrate(f, a, b, opts);
  if (!r.converged) {
    throw NonConvergenceError("adaptive quadrature did not reach tolerance on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]",
                              r.value, r.abs_error);
  }
  return r.value;
}

double integrate_to_infinity_or_throw(const Integrand& f, double a, const Options& opts) {
  Result r = integrate_to_infinity(f, a, opts);
  if (!r.converged) {
    throw NonConvergenceError("adaptive quadrature did not reach tolerance on [" + std::to_string(a) + ", inf)",
                              r.value, r.abs_error);
  }
  return r.value;
}

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, refined by Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n == 1) rule.weights[0] = 2.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static const GaussLegendreRule rule64 = build_rule(64);
  static const GaussLegendreRule rule128 = build_rule(128);
  if (n == 64) return rule64;
  if (n == 128) return rule128;

  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
  return *slot;
}

double gauss_legendre_integrate(const Integrand& f, double a, double b, int n) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(center + half * rule.nodes[i]);
  return sum * half;
}

}  // namespace mogfade::quad
