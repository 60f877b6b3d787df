#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mog_integral.hpp"
#include "mogfade/errors.hpp"
#include "mogfade/metrics.hpp"
#include "mogfade/special_fn.hpp"

namespace mogfade {

void DetectorSpec::validate() const {
  if (u < 1) throw std::invalid_argument("DetectorSpec: u must be >= 1");
  if (lambda.has_value() == target_pf.has_value()) {
    throw std::invalid_argument("DetectorSpec: exactly one of lambda and target_pf must be given");
  }
  if (lambda && !(*lambda > 0.0)) throw std::invalid_argument("DetectorSpec: lambda must be positive");
  if (target_pf && !(*target_pf > 0.0 && *target_pf < 1.0)) {
    throw std::invalid_argument("DetectorSpec: target_pf must lie in (0, 1)");
  }
}

double DetectorSpec::threshold() const {
  validate();
  return lambda ? *lambda : threshold_from_pf(u, *target_pf);
}

void to_json(nlohmann::json& j, const DetectorSpec& det) {
  j = {{"u", det.u}};
  if (det.lambda) j["lambda"] = *det.lambda;
  if (det.target_pf) j["target_pf"] = *det.target_pf;
}

void from_json(const nlohmann::json& j, DetectorSpec& det) {
  if (!j.is_object()) throw std::invalid_argument("DetectorSpec JSON: expected an object");
  DetectorSpec out;
  for (const auto& [key, value] : j.items()) {
    if (key == "u") out.u = value.get<int>();
    else if (key == "lambda") out.lambda = value.get<double>();
    else if (key == "target_pf") out.target_pf = value.get<double>();
    else throw std::invalid_argument("DetectorSpec JSON: unknown key '" + key + "'");
  }
  out.validate();
  det = out;
}

double awgn_pd(int u, double snr, double lambda) {
  if (u < 1) throw std::invalid_argument("awgn_pd: u must be >= 1");
  if (!(snr >= 0.0)) throw std::domain_error("awgn_pd: snr must be >= 0");
  if (!(lambda > 0.0)) throw std::domain_error("awgn_pd: lambda must be positive");
  return special::marcum_q(u, std::sqrt(2.0 * snr), std::sqrt(lambda));
}

double false_alarm_prob(int u, double lambda) {
  if (u < 1) throw std::invalid_argument("false_alarm_prob: u must be >= 1");
  if (!(lambda > 0.0)) throw std::domain_error("false_alarm_prob: lambda must be positive");
  return special::gamma_q(u, 0.5 * lambda);
}

double threshold_from_pf(int u, double pf) {
  if (u < 1) throw std::invalid_argument("threshold_from_pf: u must be >= 1");
  if (!(pf > 0.0 && pf < 1.0)) throw std::domain_error("threshold_from_pf: pf must lie in (0, 1)");
  double lo = 0.0;
  double hi = 2.0 * u + 2.0;
  while (false_alarm_prob(u, hi) > pf) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("threshold_from_pf: no bracketing threshold");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || false_alarm_prob(u, mid) > pf) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Per-component quantities of the parabolic cylinder series:
//   term_n = pref Gamma(2n+1)/n! r^(n+1/2) D_{-(2n+1)}(z),
//   pref = w / (sqrt(2 pi avg) eta) exp(-mu^2/(2 eta^2) (1 - 1/(4 avg eta^2 + 2))).
struct SeriesComponent {
  double log_pref = 0.0;
  double r = 0.0;
  double z = 0.0;
  double w = 0.0;  // z^2 / 2
  double weight = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

SeriesComponent series_component(const MoGComponent& c, double avg) {
  SeriesComponent s;
  const double a = avg * c.std * c.std;
  s.r = a / (2.0 * a + 1.0);
  s.z = -c.mean / (c.std * std::sqrt(2.0 * a + 1.0));
  s.w = 0.5 * s.z * s.z;
  const double e = -c.mean * c.mean / (2.0 * c.std * c.std) * (1.0 - 1.0 / (4.0 * a + 2.0));
  s.log_pref = std::log(c.weight) - 0.5 * std::log(2.0 * std::numbers::pi * avg) - std::log(c.std) + e;
  s.weight = c.weight;
  s.mean = c.mean;
  s.std = c.std;
  return s;
}

double series_term(const SeriesComponent& s, int n) {
  using special::log_gamma;
  const double log_c = s.log_pref + log_gamma(2.0 * n + 1.0) - log_gamma(n + 1.0) + (n + 0.5) * std::log(s.r);
  double term = 0.0;
  if (s.z <= 0.0) {
    // D_{-(2n+1)}(z) through its two confluent hypergeometric parts, both
    // positive here, with every scale factor folded into the logarithm.
    const double base = log_c + 0.5 * std::log(std::numbers::pi) - 0.5 * s.w - (n + 0.5) * std::numbers::ln2;
    term = special::kummer_1f1_scaled(n + 0.5, 0.5, s.w, base - log_gamma(n + 1.0));
    if (s.z < 0.0) {
      term += special::kummer_1f1_scaled(n + 1.0, 1.5, s.w,
                                         base + std::log(std::numbers::sqrt2 * -s.z) - log_gamma(n + 0.5));
    }
  } else {
    term = std::exp(log_c) * special::parabolic_cylinder_d(-(2.0 * n + 1.0), s.z);
  }
  if (!std::isfinite(term)) {
    throw std::overflow_error("avg_pd_series: term " + std::to_string(n) + " is not finite");
  }
  return term;
}

// pref * tau with tau = sum_n Gamma(2n+1)/n! r^(n+1/2) D_{-(2n+1)}(z)
//   = exp(-z^2/4) [sqrt(pi r / 2) Psi1(1/2, 1; 1, 1/2; 2r, w) - z sqrt(r) Psi1(1, 1; 1, 3/2; 2r, w)].
double scaled_tau(const SeriesComponent& s) {
  const double base = s.log_pref - 0.5 * s.w;
  double value = special::humbert_psi1_scaled(0.5, 1.0, 1.0, 0.5, 2.0 * s.r, s.w,
                                              base + 0.5 * std::log(0.5 * std::numbers::pi * s.r));
  if (s.z != 0.0) {
    const double odd = special::humbert_psi1_scaled(1.0, 1.0, 1.0, 1.5, 2.0 * s.r, s.w,
                                                    base + std::log(std::abs(s.z)) + 0.5 * std::log(s.r));
    value += s.z < 0.0 ? odd : -odd;
  }
  return value;
}

// Humbert closed form: prefactor w exp(-mu^2/(2 eta^2)) / sqrt(2 pi avg eta),
// Psi1 argument x = pi avg eta^2 / (4 avg eta^2 + 2), and the subtracted
// partial sum scaled by exp(w/2) relative to the series prefactor.
double psi1_closed_form_bound(const SeriesComponent& s, double avg, double partial_with_detector, bool with_pi) {
  const double a = avg * s.std * s.std;
  const double x = (with_pi ? std::numbers::pi : 1.0) * a / (4.0 * a + 2.0);
  const double log_p = std::log(s.weight) - s.mean * s.mean / (2.0 * s.std * s.std) -
                       0.5 * std::log(2.0 * std::numbers::pi * avg * s.std);
  double value = special::humbert_psi1_scaled(0.5, 3.0, 1.0, 0.5, x, s.w, log_p + 0.5 * std::log(x));
  if (s.mean != 0.0) {
    const double second = special::humbert_psi1_scaled(1.0, 3.0, 1.0, 1.5, x, s.w,
                                                       log_p + std::log(std::abs(s.mean)) +
                                                           0.5 * std::log(avg * std::numbers::pi));
    value += s.mean > 0.0 ? second : -second;
  }
  value -= partial_with_detector * std::exp(log_p + 0.5 * s.w - s.log_pref);
  return value;
}

void check_truncation(int p) {
  if (p < 0) throw std::invalid_argument("truncation_p must be >= 0");
}

}  // namespace

double avg_pd_series(const MoGModel& model, const DetectorSpec& det, int truncation_p, bool renormalize) {
  check_truncation(truncation_p);
  const double lambda = det.threshold();
  double total = 0.0;
  for (const auto& c : model.components()) {
    const SeriesComponent s = series_component(c, model.avg_snr());
    for (int n = 0; n <= truncation_p; ++n) total += special::gamma_q(det.u + n, 0.5 * lambda) * series_term(s, n);
  }
  return renormalize ? total / normalization_mass(model) : total;
}

double avg_pd_quadrature(const MoGModel& model, const DetectorSpec& det) {
  const double lambda = det.threshold();
  const double avg = model.avg_snr();
  const double b = std::sqrt(lambda);
  return internal::integrate_against_mog(model, [&](double x) {
    return special::marcum_q(det.u, std::sqrt(2.0 * avg) * x, b);
  });
}

double pd_truncation_bound(const MoGModel& model, const DetectorSpec& det, int truncation_p,
                           TruncationBound variant) {
  check_truncation(truncation_p);
  const double lambda = det.threshold();
  double total = 0.0;
  for (const auto& c : model.components()) {
    const SeriesComponent s = series_component(c, model.avg_snr());
    double partial = 0.0;
    double partial_with_detector = 0.0;
    for (int n = 0; n <= truncation_p; ++n) {
      const double t = series_term(s, n);
      partial += t;
      partial_with_detector += special::gamma_q(det.u + n, 0.5 * lambda) * t;
    }
    switch (variant) {
      case TruncationBound::Exact:
        // The tail is a sum of positive terms; rounding can leave a negative residue.
        total += std::max(scaled_tau(s) - partial, 0.0);
        break;
      case TruncationBound::PartialSumWithDetector:
        total += scaled_tau(s) - partial_with_detector;
        break;
      case TruncationBound::Psi1ClosedForm:
        total += psi1_closed_form_bound(s, model.avg_snr(), partial_with_detector, true);
        break;
      case TruncationBound::Psi1ClosedFormNoPi:
        total += psi1_closed_form_bound(s, model.avg_snr(), partial_with_detector, false);
        break;
    }
  }
  return total;
}

std::vector<std::pair<double, double>> roc_curve(const MoGModel& model, int u, std::span<const double> pf_grid,
                                                 int truncation_p) {
  if (pf_grid.empty()) throw std::invalid_argument("roc_curve: empty pf grid");
  std::vector<std::pair<double, double>> out;
  double prev = 0.0;
  for (double pf : pf_grid) {
    if (!(pf > 0.0 && pf < 1.0)) throw std::invalid_argument("roc_curve: pf values must lie in (0, 1)");
    if (!out.empty() && !(pf > prev)) throw std::invalid_argument("roc_curve: pf grid must be strictly increasing");
    DetectorSpec det{u, threshold_from_pf(u, pf), std::nullopt};
    out.emplace_back(pf, avg_pd_series(model, det, truncation_p));
    prev = pf;
  }
  return out;
}

}  // namespace mogfade
