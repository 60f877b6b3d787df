#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mogfade/errors.hpp"
#include "mogfade/mog.hpp"
#include "mogfade/parallel.hpp"

namespace mogfade {
namespace {

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;
};

SampleStats sample_stats(std::span<const double> xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

void check_samples(std::span<const double> xs, std::size_t components) {
  if (components < 1) throw std::invalid_argument("em_fit: need at least one component");
  if (xs.empty()) throw DegenerateDataError("em_fit: no samples");
  for (double x : xs) {
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("em_fit: samples must be finite amplitudes >= 0");
  }
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const auto distinct = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  if (distinct < components) {
    throw DegenerateDataError("em_fit: " + std::to_string(distinct) + " distinct values cannot support " +
                              std::to_string(components) + " components");
  }
}

// One pass over the data: L(theta) as a mean log-likelihood plus the
// sufficient statistics of the next M-step, accumulated around the old means.
struct Pass {
  double loglik_total = 0.0;
  std::vector<double> n, s1, s2;
  std::size_t worst = 0;  // sample with the lowest mixture density
};

Pass e_step(std::span<const double> xs, const std::vector<MoGComponent>& comps) {
  const std::size_t c = comps.size();
  std::vector<double> offset(c), scale(c), mean(c);
  for (std::size_t j = 0; j < c; ++j) {
    offset[j] = std::log(comps[j].weight) - std::log(comps[j].std) - kLogSqrt2Pi;
    scale[j] = 0.5 / (comps[j].std * comps[j].std);
    mean[j] = comps[j].mean;
  }
  Pass pass;
  pass.n.assign(c, 0.0);
  pass.s1.assign(c, 0.0);
  pass.s2.assign(c, 0.0);
  std::vector<double> t(c);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j) {
      const double d = x - mean[j];
      t[j] = offset[j] - scale[j] * d * d;
      peak = std::max(peak, t[j]);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      t[j] = t[j] - peak > -745.0 ? std::exp(t[j] - peak) : 0.0;
      sum += t[j];
    }
    const double lse = peak + std::log(sum);
    pass.loglik_total += lse;
    if (lse < lowest) {
      lowest = lse;
      pass.worst = i;
    }
    const double inv = 1.0 / sum;
    for (std::size_t j = 0; j < c; ++j) {
      const double r = t[j] * inv;
      const double d = x - mean[j];
      pass.n[j] += r;
      pass.s1[j] += r * d;
      pass.s2[j] += r * d * d;
    }
  }
  return pass;
}

FitResult run_em(std::span<const double> xs, std::vector<MoGComponent> comps, double avg_snr,
                 const FitConfig& config, double min_std) {
  const std::size_t c = comps.size();
  const auto n = static_cast<double>(xs.size());
  FitReport report;
  report.n_samples = xs.size();
  const int max_reinit = 10 * static_cast<int>(c);
  for (;;) {
    Pass pass = e_step(xs, comps);
    const double mean_ll = pass.loglik_total / n;

    auto empty = std::find_if(pass.n.begin(), pass.n.end(), [&](double nj) { return nj < 1e-10 * n; });
    if (empty != pass.n.end() && report.reinitializations < max_reinit) {
      auto& comp = comps[static_cast<std::size_t>(empty - pass.n.begin())];
      comp.mean = xs[pass.worst];
      comp.std = std::max(min_std, sample_stats(xs).std / static_cast<double>(c));
      comp.weight = 1.0 / static_cast<double>(c);
      double total = 0.0;
      for (const auto& k : comps) total += k.weight;
      for (auto& k : comps) k.weight /= total;
      ++report.reinitializations;
      report.loglik_trace.clear();
      continue;
    }

    report.loglik_trace.push_back(mean_ll);
    report.loglik_total = pass.loglik_total;
    const std::size_t len = report.loglik_trace.size();
    if (len >= 2 && std::abs(report.loglik_trace[len - 1] - report.loglik_trace[len - 2]) < config.delta) {
      report.converged = true;
      break;
    }
    if (report.iterations >= config.max_iters) break;

    for (std::size_t j = 0; j < c; ++j) {
      const double nj = pass.n[j];
      if (!(nj > 0.0)) continue;  // only reachable once the reinitialization budget is spent
      const double shift = pass.s1[j] / nj;
      const double var = std::max(pass.s2[j] / nj - shift * shift, 0.0);
      comps[j].mean += shift;
      comps[j].std = std::max(std::sqrt(var), min_std);
      comps[j].weight = nj / n;
    }
    double total = 0.0;
    for (const auto& k : comps) total += k.weight;
    for (auto& k : comps) k.weight /= total;
    ++report.iterations;
  }

  std::erase_if(comps, [](const MoGComponent& k) { return !(k.weight > 0.0); });
  MoGModel model = MoGModel::normalized(std::move(comps), avg_snr);
  report.bic = bic_score(report.loglik_total, static_cast<int>(model.size()), xs.size());
  report.normalization_mass = normalization_mass(model);
  report.mass_flagged = report.normalization_mass < 0.995;
  return {std::move(model), std::move(report)};
}

double resolve_min_std(std::span<const double> xs, const FitConfig& config) {
  if (config.min_std) return *config.min_std;
  const double s = sample_stats(xs).std;
  return s > 0.0 ? 1e-6 * s : 1e-12;
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

void FitConfig::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("FitConfig: delta must be positive");
  if (max_iters < 1) throw std::invalid_argument("FitConfig: max_iters must be >= 1");
  if (restarts < 1) throw std::invalid_argument("FitConfig: restarts must be >= 1");
  if (min_std && !(*min_std > 0.0)) throw std::invalid_argument("FitConfig: min_std must be positive");
}

void to_json(nlohmann::json& j, const FitConfig& config) {
  j = {{"delta", config.delta}, {"max_iters", config.max_iters}, {"restarts", config.restarts}, {"seed", config.seed}};
  if (config.min_std) j["min_std"] = *config.min_std;
}

void from_json(const nlohmann::json& j, FitConfig& config) {
  if (!j.is_object()) throw std::invalid_argument("FitConfig JSON: expected an object");
  FitConfig out;
  for (const auto& [key, value] : j.items()) {
    if (key == "delta") out.delta = value.get<double>();
    else if (key == "max_iters") out.max_iters = value.get<int>();
    else if (key == "restarts") out.restarts = value.get<int>();
    else if (key == "min_std") out.min_std = value.get<double>();
    else if (key == "seed") out.seed = value.get<std::uint64_t>();
    else throw std::invalid_argument("FitConfig JSON: unknown key '" + key + "'");
  }
  out.validate();
  config = out;
}

void to_json(nlohmann::json& j, const FitReport& report) {
  j = {{"loglik_trace", report.loglik_trace},
       {"iterations", report.iterations},
       {"converged", report.converged},
       {"loglik_total", report.loglik_total},
       {"bic", report.bic},
       {"n_samples", report.n_samples},
       {"restart", report.restart},
       {"reinitializations", report.reinitializations},
       {"normalization_mass", report.normalization_mass},
       {"mass_flagged", report.mass_flagged}};
}

double bic_score(double loglik_total, int components, std::size_t n_samples) {
  if (components < 1 || n_samples == 0) throw std::invalid_argument("bic_score: need C >= 1 and M >= 1");
  return -2.0 * loglik_total + components * std::log(static_cast<double>(n_samples));
}

FitResult em_fit_from(std::span<const double> samples, const MoGModel& initial, const FitConfig& config) {
  config.validate();
  check_samples(samples, initial.size());
  return run_em(samples, initial.components(), initial.avg_snr(), config, resolve_min_std(samples, config));
}

FitResult em_fit(std::span<const double> samples, int components, const FitConfig& config) {
  config.validate();
  if (components < 1) throw std::invalid_argument("em_fit: need at least one component");
  const auto c = static_cast<std::size_t>(components);
  check_samples(samples, c);
  const double min_std = resolve_min_std(samples, config);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const SampleStats stats = sample_stats(samples);
  const double init_std = std::max(stats.std / static_cast<double>(c), min_std);

  std::vector<std::optional<FitResult>> runs(static_cast<std::size_t>(config.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    std::vector<MoGComponent> comps(c);
    std::mt19937_64 rng(derive_seed(config.seed, r));
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    for (std::size_t j = 0; j < c; ++j) {
      comps[j].mean = quantile(sorted, (static_cast<double>(j) + 0.5) / static_cast<double>(c));
      if (r > 0) comps[j].mean += jitter(rng) * stats.std;
      comps[j].std = init_std;
      comps[j].weight = 1.0 / static_cast<double>(c);
    }
    runs[r] = run_em(samples, std::move(comps), 1.0, config, min_std);
    runs[r]->report.restart = static_cast<int>(r);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r]->report.loglik_total > runs[best]->report.loglik_total) best = r;
  }
  return std::move(*runs[best]);
}

Selection select_components(std::span<const double> samples, int c_min, int c_max, const FitConfig& config) {
  if (c_min < 1 || c_max < c_min || c_max > 32)
    throw std::invalid_argument("select_components: need 1 <= c_min <= c_max <= 32");
  std::optional<FitResult> best;
  std::vector<BicRow> table;
  for (int c = c_min; c <= c_max; ++c) {
    FitResult fit = em_fit(samples, c, config);
    table.push_back({c, fit.report.bic, fit.report.loglik_total, fit.report.iterations, fit.report.converged});
    if (!best || fit.report.bic < best->report.bic) best = std::move(fit);
  }
  return {std::move(best->model), std::move(best->report), std::move(table)};
}

}  // namespace mogfade
