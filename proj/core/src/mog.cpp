#include "mogfade/mog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mogfade/parallel.hpp"
#include "mogfade/quadrature.hpp"
#include "mogfade/special_fn.hpp"

namespace mogfade {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr std::size_t kSampleChunk = 1 << 16;

double gaussian(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return kInvSqrt2Pi / sd * std::exp(-0.5 * z * z);
}

// log-sum-exp so the far tail of a narrow mixture does not underflow to log(0).
double log_mog_envelope_pdf(const MoGModel& model, double x) {
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(model.size());
  for (const auto& c : model.components()) {
    const double z = (x - c.mean) / c.std;
    terms.push_back(std::log(c.weight * kInvSqrt2Pi / c.std) - 0.5 * z * z);
    peak = std::max(peak, terms.back());
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

}  // namespace

MoGModel::MoGModel(std::vector<MoGComponent> components, double avg_snr)
    : components_(std::move(components)), avg_snr_(avg_snr) {
  if (components_.empty()) throw std::invalid_argument("MoGModel: at least one component required");
  if (!(avg_snr_ > 0.0) || !std::isfinite(avg_snr_)) throw std::invalid_argument("MoGModel: avg_snr must be positive");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0)) throw std::invalid_argument("MoGModel: weights must be positive");
    if (!(c.std > 0.0) || !std::isfinite(c.std)) throw std::invalid_argument("MoGModel: stds must be positive");
    if (!std::isfinite(c.mean)) throw std::invalid_argument("MoGModel: means must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("MoGModel: weights must sum to 1");
}

MoGModel MoGModel::normalized(std::vector<MoGComponent> components, double avg_snr) {
  double total = 0.0;
  for (const auto& c : components) total += c.weight;
  if (!(total > 0.0)) throw std::invalid_argument("MoGModel: weights must be positive");
  for (auto& c : components) c.weight /= total;
  return MoGModel(std::move(components), avg_snr);
}

MoGModel MoGModel::with_avg_snr(double avg_snr) const { return MoGModel(components_, avg_snr); }

void to_json(nlohmann::json& j, const MoGModel& model) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : model.components()) comps.push_back({{"w", c.weight}, {"mu", c.mean}, {"eta", c.std}});
  j = {{"avg_snr", model.avg_snr()}, {"components", comps}};
}

MoGModel mog_model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("MoGModel JSON: expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "avg_snr" && key != "components") throw std::invalid_argument("MoGModel JSON: unknown key '" + key + "'");
  }
  std::vector<MoGComponent> comps;
  double total = 0.0;
  for (const auto& c : j.at("components")) {
    for (const auto& [key, _] : c.items()) {
      if (key != "w" && key != "mu" && key != "eta") {
        throw std::invalid_argument("MoGModel JSON: unknown component key '" + key + "'");
      }
    }
    comps.push_back({c.at("w").get<double>(), c.at("mu").get<double>(), c.at("eta").get<double>()});
    total += comps.back().weight;
  }
  if (std::abs(total - 1.0) > 1e-3) throw std::invalid_argument("MoGModel JSON: weights must sum to 1");
  return MoGModel::normalized(std::move(comps), j.value("avg_snr", 1.0));
}

double mog_envelope_pdf(const MoGModel& model, double x) {
  if (!(x >= 0.0)) throw std::domain_error("mog_envelope_pdf: x must be >= 0");
  double sum = 0.0;
  for (const auto& c : model.components()) sum += c.weight * gaussian(x, c.mean, c.std);
  return sum;
}

double mog_snr_pdf(const MoGModel& model, double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("mog_snr_pdf: gamma must be >= 0");
  if (gamma == 0.0) return std::numeric_limits<double>::infinity();
  const double x = std::sqrt(gamma / model.avg_snr());
  return mog_envelope_pdf(model, x) / (2.0 * std::sqrt(model.avg_snr() * gamma));
}

double mog_envelope_cdf(const MoGModel& model, double x) {
  if (!(x >= 0.0)) throw std::domain_error("mog_envelope_cdf: x must be >= 0");
  double sum = 0.0;
  for (const auto& c : model.components()) {
    sum += c.weight * (special::gaussian_q(-c.mean / c.std) - special::gaussian_q((x - c.mean) / c.std));
  }
  return sum;
}

double normalization_mass(const MoGModel& model) {
  double sum = 0.0;
  for (const auto& c : model.components()) sum += c.weight * special::gaussian_q(-c.mean / c.std);
  return sum;
}

std::vector<double> posteriors(const MoGModel& model, double x) {
  const double log_total = log_mog_envelope_pdf(model, x);
  std::vector<double> out;
  out.reserve(model.size());
  for (const auto& c : model.components()) {
    const double z = (x - c.mean) / c.std;
    out.push_back(std::exp(std::log(c.weight * kInvSqrt2Pi / c.std) - 0.5 * z * z - log_total));
  }
  return out;
}

std::vector<double> sample_mog(const MoGModel& model, std::size_t n, std::uint64_t seed) {
  std::vector<double> weights;
  for (const auto& c : model.components()) weights.push_back(c.weight);
  std::vector<double> out(n);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t k) {
    std::mt19937_64 rng(derive_seed(seed, k));
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t begin = k * kSampleChunk;
    const std::size_t end = std::min(n, begin + kSampleChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const auto& c = model[pick(rng)];
      out[i] = c.mean + c.std * normal(rng);
    }
  });
  return out;
}

double kl_divergence(const Density& exact, const MoGModel& model) {
  auto integrand = [&](double x) {
    const double f = exact(x);
    if (!(f >= 1e-300) || !std::isfinite(f)) return 0.0;
    return f * (std::log(f) - log_mog_envelope_pdf(model, x));
  };
  quad::Options opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-9;
  opts.max_intervals = 4000;
  const double pieces[] = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 5.0};
  double total = quad::integrate_pieces(integrand, pieces, opts).value;
  total += quad::integrate_to_infinity_or_throw(integrand, 5.0, opts);
  return total;
}

double kl_divergence(const ChannelSpec& exact, const MoGModel& model) {
  return kl_divergence([&exact](double x) { return exact_envelope_pdf(exact, x); }, model);
}

double mse_criterion(const Density& exact_snr, const MoGModel& model, double x_max, int points) {
  if (!(x_max > 0.0) || points < 1) throw std::invalid_argument("mse_criterion: need x_max > 0 and points >= 1");
  double sum = 0.0;
  const double h = x_max / points;
  for (int k = 0; k < points; ++k) {
    const double g = (k + 0.5) * h;
    const double d = mog_snr_pdf(model, g) - exact_snr(g);
    sum += d * d;
  }
  return sum / points;
}

double mse_criterion(const ChannelSpec& exact, const MoGModel& model, double x_max, int points) {
  return mse_criterion([&exact](double g) { return exact_snr_pdf(exact, g); }, model, x_max, points);
}

}  // namespace mogfade
