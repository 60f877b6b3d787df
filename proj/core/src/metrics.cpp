#include "mogfade/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mog_integral.hpp"
#include "mogfade/quadrature.hpp"
#include "mogfade/special_fn.hpp"

namespace mogfade {

using special::gaussian_q;

double mgf(const MoGModel& model, double s) {
  if (!(s >= 0.0)) throw std::domain_error("mgf: s must be >= 0");
  const double avg = model.avg_snr();
  double sum = 0.0;
  for (const auto& c : model.components()) {
    const double beta = 1.0 + 2.0 * c.std * c.std * avg * s;
    sum += c.weight / std::sqrt(beta) * std::exp(-c.mean * c.mean * avg * s / beta) *
           gaussian_q(-c.mean / (c.std * std::sqrt(beta)));
  }
  return sum;
}

double raw_moment(const MoGModel& model, int n) {
  if (n < 0) throw std::domain_error("raw_moment: n must be >= 0");
  const double avg = model.avg_snr();
  const double shape = std::exp(n * std::numbers::ln2 + special::log_gamma(n + 0.5) - 0.5 * std::log(std::numbers::pi));
  double sum = 0.0;
  for (const auto& c : model.components()) {
    const double var = c.std * c.std;
    sum += c.weight * std::pow(avg * var, n) * shape *
           special::kummer_1f1(-n, 0.5, -c.mean * c.mean / (2.0 * var));
  }
  return sum;
}

double raw_moment_via_mgf(const MoGModel& model, int n) {
  if (n < 0) throw std::domain_error("raw_moment_via_mgf: n must be >= 0");
  double sum = 0.0;
  for (const auto& c : model.components()) {
    // Derivatives of exp(mu s + eta^2 s^2 / 2) at s = 0.
    double prev = 1.0;
    double cur = c.mean;
    if (n == 0) cur = 1.0;
    for (int k = 1; k < 2 * n; ++k) {
      const double next = c.mean * cur + k * c.std * c.std * prev;
      prev = cur;
      cur = next;
    }
    sum += c.weight * cur;
  }
  return std::pow(model.avg_snr(), n) * sum;
}

double amount_of_fading(const MoGModel& model) {
  double m2 = 0.0;
  double m4 = 0.0;
  for (const auto& c : model.components()) {
    const double mu2 = c.mean * c.mean;
    const double var = c.std * c.std;
    m2 += c.weight * (mu2 + var);
    m4 += c.weight * (mu2 * mu2 + 6.0 * mu2 * var + 3.0 * var * var);
  }
  return m4 / (m2 * m2) - 1.0;
}

double outage_probability(const MoGModel& model, double gamma_th) {
  if (!(gamma_th >= 0.0)) throw std::domain_error("outage_probability: gamma_th must be >= 0");
  const double x = std::sqrt(gamma_th / model.avg_snr());
  double sum = 0.0;
  for (const auto& c : model.components()) {
    sum += c.weight * (gaussian_q(-c.mean / c.std) - gaussian_q((x - c.mean) / c.std));
  }
  return sum;
}

double ergodic_capacity(const MoGModel& model, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("ergodic_capacity: bandwidth must be positive");
  const double m1 = raw_moment(model, 1);
  const double m2 = raw_moment(model, 2);
  const double variance_term = (m2 - m1 * m1) / (2.0 * (1.0 + m1) * (1.0 + m1));
  return bandwidth / std::numbers::ln2 * (std::log1p(m1) - variance_term);
}

double ergodic_capacity_quadrature(const MoGModel& model, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("ergodic_capacity_quadrature: bandwidth must be positive");
  const double avg = model.avg_snr();
  const double nats = internal::integrate_against_mog(model, [avg](double x) { return std::log1p(avg * x * x); });
  return bandwidth / std::numbers::ln2 * nats;
}

double mrc_mgf(std::span<const MoGModel> branches, double s) {
  if (branches.empty()) throw std::invalid_argument("mrc_mgf: need at least one branch");
  double prod = 1.0;
  for (const auto& m : branches) prod *= mgf(m, s);
  return prod;
}

void SerScheme::validate() const {
  switch (kind) {
    case Kind::CoherentBinary:
      if (!(g > 0.0)) throw std::invalid_argument("SerScheme: g must be positive");
      break;
    case Kind::MPSK:
      if (order < 2) throw std::invalid_argument("SerScheme: M-PSK needs M >= 2");
      break;
    case Kind::SquareMQAM: {
      const auto root = static_cast<int>(std::lround(std::sqrt(order)));
      if (order < 4 || root * root != order) {
        throw std::invalid_argument("SerScheme: M-QAM needs a perfect square M >= 4");
      }
      break;
    }
  }
}

double SerScheme::g_qam() const { return 3.0 / (2.0 * (order - 1)); }

void to_json(nlohmann::json& j, const SerScheme& scheme) {
  switch (scheme.kind) {
    case SerScheme::Kind::CoherentBinary: j = {{"kind", "binary"}, {"g", scheme.g}}; break;
    case SerScheme::Kind::MPSK: j = {{"kind", "mpsk"}, {"M", scheme.order}}; break;
    case SerScheme::Kind::SquareMQAM: j = {{"kind", "mqam"}, {"M", scheme.order}}; break;
  }
}

void from_json(const nlohmann::json& j, SerScheme& scheme) {
  if (!j.is_object()) throw std::invalid_argument("SerScheme JSON: expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "g" && key != "M") throw std::invalid_argument("SerScheme JSON: unknown key '" + key + "'");
  }
  const auto kind = j.at("kind").get<std::string>();
  SerScheme out;
  if (kind == "bpsk") out = SerScheme::bpsk();
  else if (kind == "bfsk") out = SerScheme::bfsk();
  else if (kind == "binary") out = SerScheme::binary(j.at("g").get<double>());
  else if (kind == "mpsk") out = SerScheme::mpsk(j.at("M").get<int>());
  else if (kind == "mqam") out = SerScheme::mqam(j.at("M").get<int>());
  else throw std::invalid_argument("SerScheme JSON: unknown kind '" + kind + "'");
  out.validate();
  scheme = out;
}

namespace {

// (1/pi) int_0^upper f(c / sin^2 theta) d theta. Near theta = 0 the integrand
// behaves like exp(-k / theta^2), which slows Gauss-Legendre down, so the
// range is cut into panels halving towards the origin.
template <typename F>
double craig(const F& f, double c, double upper, int nodes) {
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    return f(c / (s * s));
  };
  double sum = 0.0;
  double hi = upper;
  for (int k = 0; k < 5; ++k) {
    const double lo = k == 4 ? 0.0 : 0.5 * hi;
    sum += quad::gauss_legendre_integrate(integrand, lo, hi, nodes);
    hi = lo;
  }
  return sum / std::numbers::pi;
}

template <typename F>
double ser_from_kernel(const SerScheme& scheme, const F& kernel, int nodes) {
  constexpr double pi = std::numbers::pi;
  switch (scheme.kind) {
    case SerScheme::Kind::CoherentBinary:
      return craig(kernel, scheme.g, pi / 2.0, nodes);
    case SerScheme::Kind::MPSK: {
      const double s = std::sin(pi / scheme.order);
      return craig(kernel, s * s, (scheme.order - 1) * pi / scheme.order, nodes);
    }
    case SerScheme::Kind::SquareMQAM: {
      const double root = std::sqrt(static_cast<double>(scheme.order));
      const double q = (root - 1.0) / root;
      const double g = scheme.g_qam();
      return 4.0 * q * (craig(kernel, g, pi / 2.0, nodes) - q * craig(kernel, g, pi / 4.0, nodes));
    }
  }
  throw std::logic_error("ser: unknown scheme");
}

}  // namespace

double ser(std::span<const MoGModel> branches, const SerScheme& scheme, int nodes) {
  scheme.validate();
  if (branches.empty()) throw std::invalid_argument("ser: need at least one branch");
  return ser_from_kernel(scheme, [&](double s) { return mrc_mgf(branches, s); }, nodes);
}

double ser_from_mgf(const std::function<double(double)>& combined_mgf, const SerScheme& scheme, int nodes) {
  scheme.validate();
  return ser_from_kernel(scheme, combined_mgf, nodes);
}

double conditional_ser(const SerScheme& scheme, double gamma) {
  scheme.validate();
  if (!(gamma >= 0.0)) throw std::domain_error("conditional_ser: gamma must be >= 0");
  switch (scheme.kind) {
    case SerScheme::Kind::CoherentBinary:
      return gaussian_q(std::sqrt(2.0 * scheme.g * gamma));
    case SerScheme::Kind::MPSK:
      return ser_from_kernel(scheme, [gamma](double s) { return std::exp(-s * gamma); }, 64);
    case SerScheme::Kind::SquareMQAM: {
      const double root = std::sqrt(static_cast<double>(scheme.order));
      const double q = (root - 1.0) / root;
      const double p = gaussian_q(std::sqrt(2.0 * scheme.g_qam() * gamma));
      return 4.0 * q * p - 4.0 * q * q * p * p;
    }
  }
  throw std::logic_error("conditional_ser: unknown scheme");
}

MetricRow make_row(std::string scenario, std::string metric, double abscissa, double analytic, double oracle) {
  return {std::move(scenario), std::move(metric), abscissa, analytic, oracle, std::abs(analytic - oracle)};
}

std::string csv_header() { return "scenario,metric,abscissa,analytic,oracle,abs_error"; }

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const MetricRow& row) {
  return field(row.scenario) + "," + field(row.metric) + "," + num(row.abscissa) + "," + num(row.analytic) + "," +
         num(row.oracle) + "," + num(row.abs_error);
}

}  // namespace mogfade
