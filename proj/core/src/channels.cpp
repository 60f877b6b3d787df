#include "mogfade/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mogfade/errors.hpp"
#include "mogfade/parallel.hpp"
#include "mogfade/quadrature.hpp"
#include "mogfade/special_fn.hpp"

namespace mogfade {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kSampleChunk = 1 << 16;

using special::log_gamma;

void fail(const std::string& what) { throw std::invalid_argument("ChannelSpec: " + what); }

double need(const std::optional<double>& v, const char* name) {
  if (!v) fail(std::string("missing field '") + name + "'");
  return *v;
}

bool is_shadowed_lognormal(ChannelKind k) {
  return k == ChannelKind::NakagamiLognormal || k == ChannelKind::RayleighLognormal;
}

// Nakagami fading parameter for the Nakagami-family kinds.
double nakagami_m_of(const ChannelSpec& s) {
  switch (s.kind) {
    case ChannelKind::Rayleigh:
    case ChannelKind::RayleighLognormal:
      return 1.0;
    default:
      return *s.m;
  }
}

struct EtaMuShape {
  double h;
  double big_h;  // |H|; the density is even in H
};

EtaMuShape eta_mu_shape(const ChannelSpec& s) {
  const double eta = *s.eta;
  if (s.eta_format.value_or(1) == 1) return {(2.0 + 1.0 / eta + eta) / 4.0, std::abs(1.0 / eta - eta) / 4.0};
  const double d = 1.0 - eta * eta;
  return {1.0 / d, std::abs(eta) / d};
}

// log of the Gamma(shape, scale) density at x > 0.
double log_gamma_pdf(double x, double shape, double scale) {
  return -shape * std::log(scale) + (shape - 1.0) * std::log(x) - x / scale - log_gamma(shape);
}

// Density of a Gamma(shape, scale) variate, including the x = 0 limit.
double gamma_pdf(double x, double shape, double scale) {
  if (x > 0.0) return std::exp(log_gamma_pdf(x, shape, scale));
  if (shape > 1.0) return 0.0;
  if (shape == 1.0) return 1.0 / scale;
  return kInf;
}

// Nakagami-lognormal SNR density: Gamma(m, avg_snr e^t / m) averaged over
// t = ln(sigma) ~ N(lambda M, (lambda zeta)^2).
double nl_snr_pdf(const ChannelSpec& s, double gamma) {
  const double m = nakagami_m_of(s);
  const double mean_t = s.log_sigma_mean();
  const double sd_t = s.log_sigma_sd();
  if (sd_t == 0.0) return gamma_pdf(gamma, m, s.avg_snr * std::exp(mean_t) / m);
  if (gamma == 0.0) {
    if (m > 1.0) return 0.0;
    if (m < 1.0) return kInf;
  }
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sd_t);
  auto integrand = [&](double t) {
    const double z = (t - mean_t) / sd_t;
    const double scale = s.avg_snr * std::exp(t) / m;
    const double log_g = gamma > 0.0 ? log_gamma_pdf(gamma, m, scale) : -std::log(scale);
    return norm * std::exp(log_g - 0.5 * z * z);
  };
  quad::Options opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-300;
  const double lo = mean_t - 10.0 * sd_t;
  const double hi = mean_t + 10.0 * sd_t;
  return quad::integrate_or_throw(integrand, lo, hi, opts);
}

double kappa_mu_snr_pdf(double kappa, double mu, double avg, double gamma) {
  if (kappa == 0.0) return gamma_pdf(gamma, mu, avg / mu);
  const double log_pref = std::log(mu) + 0.5 * (mu + 1.0) * std::log((1.0 + kappa) / avg) -
                          0.5 * (mu - 1.0) * std::log(kappa) - mu * kappa;
  if (gamma == 0.0) {
    if (mu > 1.0) return 0.0;
    if (mu < 1.0) return kInf;
    return (1.0 + kappa) * std::exp(-kappa) / avg;
  }
  const double arg = 2.0 * mu * std::sqrt(kappa * (1.0 + kappa) * gamma / avg);
  return std::exp(log_pref + 0.5 * (mu - 1.0) * std::log(gamma) - mu * (1.0 + kappa) * gamma / avg +
                  special::log_bessel_i(mu - 1.0, arg));
}

double eta_mu_snr_pdf(const ChannelSpec& s, double gamma) {
  const double mu = *s.mu;
  const double avg = s.avg_snr;
  const auto [h, big_h] = eta_mu_shape(s);
  if (big_h == 0.0) return gamma_pdf(gamma, 2.0 * mu, avg / (2.0 * mu));
  if (gamma == 0.0) {
    if (mu > 0.5) return 0.0;
    if (mu < 0.5) return kInf;
  }
  const double nu = mu - 0.5;
  const double log_pref = std::log(2.0 * std::sqrt(std::numbers::pi)) + (mu + 0.5) * std::log(mu) +
                          mu * std::log(h) - log_gamma(mu) - nu * std::log(big_h) - (mu + 0.5) * std::log(avg);
  if (gamma == 0.0) {
    // I_nu(z) ~ (z/2)^nu / Gamma(nu + 1) with nu = 0.
    return std::exp(log_pref);
  }
  const double arg = 2.0 * mu * big_h * gamma / avg;
  return std::exp(log_pref + nu * std::log(gamma) - 2.0 * mu * h * gamma / avg + special::log_bessel_i(nu, arg));
}

double shadowed_snr_pdf(double kappa, double mu, double m, double avg, double gamma) {
  const double log_pref = mu * std::log(mu) + m * std::log(m) + mu * std::log1p(kappa) - log_gamma(mu) -
                          std::log(avg) - m * std::log(mu * kappa + m);
  if (gamma == 0.0) {
    if (mu > 1.0) return 0.0;
    if (mu < 1.0) return kInf;
    return std::exp(log_pref);
  }
  const double ratio = gamma / avg;
  const double z = mu * mu * kappa * (1.0 + kappa) * ratio / (mu * kappa + m);
  const double log_scale = log_pref + (mu - 1.0) * std::log(ratio) - mu * (1.0 + kappa) * ratio;
  if (z == 0.0) return std::exp(log_scale);
  return special::kummer_1f1_scaled(m, mu, z, log_scale);
}

// ---------------------------------------------------------------------------
// Sampling

// Draws E[alpha^2]-scaled envelope power alpha^2.
class PowerSampler {
 public:
  explicit PowerSampler(const ChannelSpec& s) : spec_(s) {}

  double operator()(std::mt19937_64& rng) const {
    switch (spec_.kind) {
      case ChannelKind::Rayleigh:
      case ChannelKind::NakagamiM:
        return nakagami_power(rng, nakagami_m_of(spec_));
      case ChannelKind::NakagamiLognormal:
      case ChannelKind::RayleighLognormal: {
        const double per_db = spec_.db_scale.value_or(DbScale::Power) == DbScale::Power ? 10.0 : 20.0;
        std::normal_distribution<double> v(spec_.mean_db.value_or(0.0), *spec_.zeta_db);
        const double sigma = std::pow(10.0, v(rng) / per_db);
        return sigma * nakagami_power(rng, nakagami_m_of(spec_));
      }
      case ChannelKind::KappaMu:
        return kappa_mu_power(rng, *spec_.kappa, *spec_.mu, 1.0);
      case ChannelKind::EtaMu: {
        double eta = *spec_.eta;
        if (spec_.eta_format.value_or(1) == 2) eta = convert_eta_format(eta, 2);
        const double mu = *spec_.mu;
        std::gamma_distribution<double> g(mu, 1.0);
        const double p = eta / (1.0 + eta);
        const double x = g(rng);
        const double y = g(rng);
        return (p * x + (1.0 - p) * y) / mu;
      }
      case ChannelKind::KappaMuShadowed: {
        const double m = *spec_.m;
        std::gamma_distribution<double> xi2(m, 1.0 / m);
        return kappa_mu_power(rng, *spec_.kappa, *spec_.mu, xi2(rng));
      }
    }
    return 0.0;
  }

 private:
  static double nakagami_power(std::mt19937_64& rng, double m) {
    std::gamma_distribution<double> g(m, 1.0 / m);
    return g(rng);
  }

  // Noncentral chi-square with 2 mu degrees of freedom and noncentrality
  // 2 mu kappa xi2, realised as a Poisson mixture of Gammas, scaled to unit
  // mean power when xi2 = 1 on average.
  static double kappa_mu_power(std::mt19937_64& rng, double kappa, double mu, double xi2) {
    double shape = mu;
    const double lambda = mu * kappa * xi2;
    if (lambda > 0.0) {
      std::poisson_distribution<long long> poisson(lambda);
      shape += static_cast<double>(poisson(rng));
    }
    std::gamma_distribution<double> g(shape, 1.0);
    return g(rng) / (mu * (1.0 + kappa));
  }

  ChannelSpec spec_;
};

}  // namespace

// ---------------------------------------------------------------------------
// ChannelSpec

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::NakagamiLognormal: return "NakagamiLognormal";
    case ChannelKind::RayleighLognormal: return "RayleighLognormal";
    case ChannelKind::KappaMu: return "KappaMu";
    case ChannelKind::EtaMu: return "EtaMu";
    case ChannelKind::KappaMuShadowed: return "KappaMuShadowed";
    case ChannelKind::NakagamiM: return "NakagamiM";
    case ChannelKind::Rayleigh: return "Rayleigh";
  }
  return "unknown";
}

ChannelKind channel_kind_from_string(std::string_view name) {
  for (ChannelKind k : {ChannelKind::NakagamiLognormal, ChannelKind::RayleighLognormal, ChannelKind::KappaMu,
                        ChannelKind::EtaMu, ChannelKind::KappaMuShadowed, ChannelKind::NakagamiM,
                        ChannelKind::Rayleigh}) {
    if (to_string(k) == name) return k;
  }
  fail("unknown kind '" + std::string(name) + "'");
  return ChannelKind::Rayleigh;
}

std::string_view to_string(DbScale scale) { return scale == DbScale::Power ? "power" : "amplitude"; }

DbScale db_scale_from_string(std::string_view name) {
  if (name == "power") return DbScale::Power;
  if (name == "amplitude") return DbScale::Amplitude;
  fail("db_scale must be 'power' or 'amplitude', got '" + std::string(name) + "'");
  return DbScale::Power;
}

ChannelSpec ChannelSpec::nakagami_lognormal(double m, double zeta_db, double mean_db, double avg_snr) {
  ChannelSpec s;
  s.kind = ChannelKind::NakagamiLognormal;
  s.m = m;
  s.zeta_db = zeta_db;
  s.mean_db = mean_db;
  s.avg_snr = avg_snr;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::rayleigh_lognormal(double zeta_db, double mean_db, double avg_snr) {
  ChannelSpec s;
  s.kind = ChannelKind::RayleighLognormal;
  s.zeta_db = zeta_db;
  s.mean_db = mean_db;
  s.avg_snr = avg_snr;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::kappa_mu(double kappa, double mu, double avg_snr) {
  ChannelSpec s;
  s.kind = ChannelKind::KappaMu;
  s.kappa = kappa;
  s.mu = mu;
  s.avg_snr = avg_snr;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::eta_mu(double eta, double mu, int format, double avg_snr) {
  ChannelSpec s;
  s.kind = ChannelKind::EtaMu;
  s.eta = eta;
  s.mu = mu;
  s.eta_format = format;
  s.avg_snr = avg_snr;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::kappa_mu_shadowed(double kappa, double mu, double m, double avg_snr) {
  ChannelSpec s;
  s.kind = ChannelKind::KappaMuShadowed;
  s.kappa = kappa;
  s.mu = mu;
  s.m = m;
  s.avg_snr = avg_snr;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::nakagami_m(double m, double avg_snr) {
  ChannelSpec s;
  s.kind = ChannelKind::NakagamiM;
  s.m = m;
  s.avg_snr = avg_snr;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::rayleigh(double avg_snr) {
  ChannelSpec s;
  s.kind = ChannelKind::Rayleigh;
  s.avg_snr = avg_snr;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::with_avg_snr(double avg) const {
  ChannelSpec s = *this;
  s.avg_snr = avg;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::with_db_scale(DbScale scale) const {
  ChannelSpec s = *this;
  s.db_scale = scale;
  s.validate();
  return s;
}

// lambda = ln(10) / 10 for power dB, half that for amplitude dB.
double ChannelSpec::log_sigma_sd() const {
  if (!is_shadowed_lognormal(kind)) return 0.0;
  const double per_db = db_scale.value_or(DbScale::Power) == DbScale::Power ? 10.0 : 20.0;
  return std::numbers::ln10 / per_db * *zeta_db;
}

double ChannelSpec::log_sigma_mean() const {
  if (!is_shadowed_lognormal(kind)) return 0.0;
  const double per_db = db_scale.value_or(DbScale::Power) == DbScale::Power ? 10.0 : 20.0;
  return std::numbers::ln10 / per_db * mean_db.value_or(0.0);
}

void ChannelSpec::validate() const {
  if (!(avg_snr > 0.0) || !std::isfinite(avg_snr)) fail("avg_snr must be positive and finite");
  switch (kind) {
    case ChannelKind::NakagamiLognormal:
      if (!(need(m, "m") >= 0.5)) fail("m must be >= 0.5");
      [[fallthrough]];
    case ChannelKind::RayleighLognormal:
      if (!(need(zeta_db, "zeta_db") >= 0.0)) fail("zeta_db must be >= 0");
      if (mean_db && !std::isfinite(*mean_db)) fail("mean_db must be finite");
      break;
    case ChannelKind::NakagamiM:
      if (!(need(m, "m") >= 0.5)) fail("m must be >= 0.5");
      break;
    case ChannelKind::Rayleigh:
      break;
    case ChannelKind::KappaMu:
      if (!(need(kappa, "kappa") >= 0.0)) fail("kappa must be >= 0");
      if (!(need(mu, "mu") > 0.0)) fail("mu must be > 0");
      break;
    case ChannelKind::KappaMuShadowed:
      if (!(need(kappa, "kappa") >= 0.0)) fail("kappa must be >= 0");
      if (!(need(mu, "mu") > 0.0)) fail("mu must be > 0");
      if (!(need(m, "m") > 0.0)) fail("m must be > 0");
      break;
    case ChannelKind::EtaMu: {
      if (!(need(mu, "mu") > 0.0)) fail("mu must be > 0");
      const double e = need(eta, "eta");
      const int format = eta_format.value_or(1);
      if (format == 1) {
        if (!(e > 0.0) || !std::isfinite(e)) fail("Format 1 eta must lie in (0, inf)");
      } else if (format == 2) {
        if (!(e > -1.0 && e < 1.0)) fail("Format 2 eta must lie in (-1, 1)");
      } else {
        fail("eta_format must be 1 or 2");
      }
      break;
    }
  }
}

std::vector<std::string> ChannelSpec::unused_fields() const {
  std::set<std::string> used;
  switch (kind) {
    case ChannelKind::NakagamiLognormal: used = {"m", "zeta_db", "mean_db", "db_scale"}; break;
    case ChannelKind::RayleighLognormal: used = {"zeta_db", "mean_db", "db_scale"}; break;
    case ChannelKind::KappaMu: used = {"kappa", "mu"}; break;
    case ChannelKind::EtaMu: used = {"eta", "mu", "eta_format"}; break;
    case ChannelKind::KappaMuShadowed: used = {"kappa", "mu", "m"}; break;
    case ChannelKind::NakagamiM: used = {"m"}; break;
    case ChannelKind::Rayleigh: break;
  }
  std::vector<std::string> out;
  auto check = [&](const char* name, bool present) {
    if (present && !used.contains(name)) out.emplace_back(name);
  };
  check("m", m.has_value());
  check("zeta_db", zeta_db.has_value());
  check("mean_db", mean_db.has_value());
  check("kappa", kappa.has_value());
  check("mu", mu.has_value());
  check("eta", eta.has_value());
  check("eta_format", eta_format.has_value());
  check("db_scale", db_scale.has_value());
  return out;
}

void to_json(nlohmann::json& j, const ChannelSpec& s) {
  j = nlohmann::json::object();
  j["kind"] = std::string(to_string(s.kind));
  if (s.m) j["m"] = *s.m;
  if (s.zeta_db) j["zeta_db"] = *s.zeta_db;
  if (s.mean_db) j["mean_db"] = *s.mean_db;
  if (s.kappa) j["kappa"] = *s.kappa;
  if (s.mu) j["mu"] = *s.mu;
  if (s.eta) j["eta"] = *s.eta;
  if (s.eta_format) j["eta_format"] = *s.eta_format;
  if (s.db_scale) j["db_scale"] = std::string(to_string(*s.db_scale));
  j["avg_snr"] = s.avg_snr;
}

void from_json(const nlohmann::json& j, ChannelSpec& s) {
  if (!j.is_object()) fail("expected a JSON object");
  static const std::set<std::string> known = {"kind", "m",   "zeta_db", "mean_db",   "kappa",
                                              "mu",   "eta", "eta_format", "db_scale", "avg_snr"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) fail("unknown key '" + key + "'");
  }
  ChannelSpec out;
  out.kind = channel_kind_from_string(j.at("kind").get<std::string>());
  auto opt = [&](const char* key, std::optional<double>& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  opt("m", out.m);
  opt("zeta_db", out.zeta_db);
  opt("mean_db", out.mean_db);
  opt("kappa", out.kappa);
  opt("mu", out.mu);
  opt("eta", out.eta);
  if (j.contains("eta_format")) out.eta_format = j.at("eta_format").get<int>();
  if (j.contains("db_scale")) out.db_scale = db_scale_from_string(j.at("db_scale").get<std::string>());
  if (j.contains("avg_snr")) out.avg_snr = j.at("avg_snr").get<double>();
  out.validate();
  s = out;
}

// ---------------------------------------------------------------------------
// Densities

double exact_snr_pdf(const ChannelSpec& spec, double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("exact_snr_pdf: gamma must be >= 0");
  switch (spec.kind) {
    case ChannelKind::Rayleigh:
    case ChannelKind::NakagamiM: {
      const double m = nakagami_m_of(spec);
      return gamma_pdf(gamma, m, spec.avg_snr / m);
    }
    case ChannelKind::NakagamiLognormal:
    case ChannelKind::RayleighLognormal:
      return nl_snr_pdf(spec, gamma);
    case ChannelKind::KappaMu:
      return kappa_mu_snr_pdf(*spec.kappa, *spec.mu, spec.avg_snr, gamma);
    case ChannelKind::EtaMu:
      return eta_mu_snr_pdf(spec, gamma);
    case ChannelKind::KappaMuShadowed:
      return shadowed_snr_pdf(*spec.kappa, *spec.mu, *spec.m, spec.avg_snr, gamma);
  }
  return 0.0;
}

double snr_pdf_origin_exponent(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelKind::Rayleigh:
    case ChannelKind::RayleighLognormal:
      return 0.0;
    case ChannelKind::NakagamiM:
    case ChannelKind::NakagamiLognormal:
      return *spec.m - 1.0;
    case ChannelKind::KappaMu:
    case ChannelKind::KappaMuShadowed:
      return *spec.mu - 1.0;
    case ChannelKind::EtaMu:
      return 2.0 * *spec.mu - 1.0;
  }
  return 0.0;
}

double exact_envelope_pdf(const ChannelSpec& spec, double alpha) {
  if (!(alpha >= 0.0)) throw std::domain_error("exact_envelope_pdf: alpha must be >= 0");
  if (alpha == 0.0) {
    const double p = snr_pdf_origin_exponent(spec);
    if (p > -0.5) return 0.0;
    if (p < -0.5) return kInf;
    // f_gamma ~ c / sqrt(gamma): the envelope density is finite at 0.
    alpha = 1e-150;
  }
  const double g = spec.avg_snr * alpha * alpha;
  if (g < 1e-290) {
    // gamma underflows: scale from a representable point using f_gamma ~ c gamma^p.
    const double g0 = 1e-290;
    const double p = snr_pdf_origin_exponent(spec);
    const double log_ratio = std::log(spec.avg_snr) + 2.0 * std::log(alpha) - std::log(g0);
    return 2.0 * spec.avg_snr * alpha * exact_snr_pdf(spec, g0) * std::exp(p * log_ratio);
  }
  return 2.0 * spec.avg_snr * alpha * exact_snr_pdf(spec, g);
}

double exact_envelope_cdf(const ChannelSpec& spec, double alpha) {
  if (!(alpha >= 0.0)) throw std::domain_error("exact_envelope_cdf: alpha must be >= 0");
  if (alpha == 0.0) return 0.0;
  switch (spec.kind) {
    case ChannelKind::Rayleigh:
    case ChannelKind::NakagamiM: {
      const double m = nakagami_m_of(spec);
      return special::gamma_p(m, m * alpha * alpha);
    }
    case ChannelKind::NakagamiLognormal:
    case ChannelKind::RayleighLognormal: {
      const double m = nakagami_m_of(spec);
      const double mean_t = spec.log_sigma_mean();
      const double sd_t = spec.log_sigma_sd();
      if (sd_t == 0.0) return special::gamma_p(m, m * alpha * alpha / std::exp(mean_t));
      const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sd_t);
      auto integrand = [&](double t) {
        const double z = (t - mean_t) / sd_t;
        return norm * std::exp(-0.5 * z * z) * special::gamma_p(m, m * alpha * alpha * std::exp(-t));
      };
      quad::Options opts;
      opts.rel_tol = 1e-11;
      opts.abs_tol = 1e-300;
      return quad::integrate_or_throw(integrand, mean_t - 10.0 * sd_t, mean_t + 10.0 * sd_t, opts);
    }
    default:
      break;
  }
  quad::Options opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-14;
  opts.max_intervals = 5000;
  auto f = [&spec](double a) { return a > 0.0 ? exact_envelope_pdf(spec, a) : 0.0; };
  return std::min(1.0, quad::integrate_or_throw(f, 0.0, alpha, opts));
}

double exact_snr_cdf(const ChannelSpec& spec, double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("exact_snr_cdf: gamma must be >= 0");
  return exact_envelope_cdf(spec, std::sqrt(gamma / spec.avg_snr));
}

double mean_envelope_power(const ChannelSpec& spec) {
  if (is_shadowed_lognormal(spec.kind)) {
    const double mean_t = spec.log_sigma_mean();
    const double sd_t = spec.log_sigma_sd();
    return std::exp(mean_t + 0.5 * sd_t * sd_t);
  }
  return 1.0;
}

std::vector<double> sample_envelope(const ChannelSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  std::vector<double> out(n);
  const PowerSampler draw(spec);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(seed, c));
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(n, begin + kSampleChunk);
    for (std::size_t i = begin; i < end; ++i) out[i] = std::sqrt(draw(rng));
  });
  return out;
}

std::vector<double> sample_snr(const ChannelSpec& spec, std::size_t n, std::uint64_t seed) {
  std::vector<double> out = sample_envelope(spec, n, seed);
  for (double& a : out) a = spec.avg_snr * a * a;
  return out;
}

double convert_eta_format(double eta, int from_format) {
  if (from_format == 2) {
    if (!(eta > -1.0 && eta < 1.0)) throw std::domain_error("convert_eta_format: Format 2 eta must lie in (-1, 1)");
  } else if (from_format == 1) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw std::domain_error("convert_eta_format: Format 1 eta must be > 0");
  } else {
    throw std::domain_error("convert_eta_format: format must be 1 or 2");
  }
  return (1.0 - eta) / (1.0 + eta);
}

ChannelSpec shadowed_reduction_spec(double eta, double mu, double m_large, double avg_snr) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("shadowed_reduction_spec: Format 1 eta must lie in (0, 1]");
  if (!(mu > 0.0)) throw std::domain_error("shadowed_reduction_spec: mu must be > 0");
  return ChannelSpec::kappa_mu_shadowed((1.0 - eta) / (2.0 * eta), 2.0 * mu, m_large, avg_snr);
}

}  // namespace mogfade
