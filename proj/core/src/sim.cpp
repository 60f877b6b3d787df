#include "mogfade/sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "mogfade/parallel.hpp"
#include "mogfade/special_fn.hpp"

namespace mogfade {

void SimConfig::validate() const {
  if (n_samples < 1000) throw std::invalid_argument("SimConfig: n_samples must be >= 1000");
  if (chunk_size < 1) throw std::invalid_argument("SimConfig: chunk_size must be >= 1");
  std::visit(
      [](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, ChannelSpec>) {
          src.validate();
        } else if constexpr (std::is_same_v<T, ConstantSnr>) {
          if (!(src.gamma >= 0.0)) throw std::invalid_argument("SimConfig: constant SNR must be >= 0");
        }
      },
      source);
}

namespace {

std::size_t chunk_count(const SimConfig& cfg) { return (cfg.n_samples + cfg.chunk_size - 1) / cfg.chunk_size; }

std::size_t chunk_length(const SimConfig& cfg, std::size_t chunk) {
  const std::size_t begin = chunk * cfg.chunk_size;
  return std::min(cfg.chunk_size, cfg.n_samples - begin);
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Per-chunk sums of k estimands, merged in chunk order.
template <typename PerChunk>
std::vector<Moments> reduce(const SimConfig& cfg, std::size_t k, const PerChunk& per_chunk) {
  cfg.validate();
  const std::size_t chunks = chunk_count(cfg);
  std::vector<std::vector<Moments>> partial(chunks, std::vector<Moments>(k));
  parallel_for(chunks, [&](std::size_t c) { per_chunk(c, partial[c]); });
  std::vector<Moments> total(k);
  for (const auto& p : partial) {
    for (std::size_t j = 0; j < k; ++j) {
      total[j].sum += p[j].sum;
      total[j].sum_sq += p[j].sum_sq;
    }
  }
  return total;
}

Estimate finish(const Moments& m, std::size_t n) {
  const auto nn = static_cast<double>(n);
  const double mean = m.sum / nn;
  const double var = std::max(m.sum_sq / nn - mean * mean, 0.0) * nn / (nn - 1.0);
  return {mean, std::sqrt(var / nn)};
}

template <typename F>
Estimate mean_of(const SimConfig& cfg, const F& h) {
  const auto total = reduce(cfg, 1, [&](std::size_t c, std::vector<Moments>& acc) {
    for (double g : snr_draws(cfg, c)) {
      const double v = g >= 0.0 ? h(g) : 0.0;
      acc[0].sum += v;
      acc[0].sum_sq += v * v;
    }
  });
  return finish(total[0], cfg.n_samples);
}

}  // namespace

std::vector<double> snr_draws(const SimConfig& cfg, std::size_t chunk, std::size_t branch) {
  const std::size_t len = chunk_length(cfg, chunk);
  const std::uint64_t seed = derive_seed(derive_seed(cfg.seed, branch), chunk);
  return std::visit(
      [&](const auto& src) -> std::vector<double> {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, ChannelSpec>) {
          return sample_snr(src, len, seed);
        } else if constexpr (std::is_same_v<T, MoGModel>) {
          std::vector<double> xs = sample_mog(src, len, seed);
          for (double& x : xs) x = x >= 0.0 ? src.avg_snr() * x * x : -1.0;
          return xs;
        } else {
          return std::vector<double>(len, src.gamma);
        }
      },
      cfg.source);
}

std::vector<Estimate> empirical_outage(const SimConfig& cfg, std::span<const double> gamma_th_grid) {
  const std::size_t k = gamma_th_grid.size();
  const auto total = reduce(cfg, k, [&](std::size_t c, std::vector<Moments>& acc) {
    for (double g : snr_draws(cfg, c)) {
      if (g < 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (g < gamma_th_grid[j]) acc[j].sum += 1.0;
      }
    }
  });
  std::vector<Estimate> out;
  const auto n = static_cast<double>(cfg.n_samples);
  for (const auto& m : total) {
    const double p = m.sum / n;
    out.push_back({p, std::sqrt(p * (1.0 - p) / n)});
  }
  return out;
}

Estimate empirical_ser(const SimConfig& cfg, int branches, const SerScheme& scheme) {
  if (branches < 1) throw std::invalid_argument("empirical_ser: need at least one branch");
  scheme.validate();
  const auto total = reduce(cfg, 1, [&](std::size_t c, std::vector<Moments>& acc) {
    std::vector<double> sum = snr_draws(cfg, c, 0);
    for (int b = 1; b < branches; ++b) {
      const std::vector<double> more = snr_draws(cfg, c, static_cast<std::size_t>(b));
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = (sum[i] < 0.0 || more[i] < 0.0) ? -1.0 : sum[i] + more[i];
    }
    for (double g : sum) {
      const double v = g >= 0.0 ? conditional_ser(scheme, g) : 0.0;
      acc[0].sum += v;
      acc[0].sum_sq += v * v;
    }
  });
  return finish(total[0], cfg.n_samples);
}

Estimate empirical_capacity(const SimConfig& cfg) {
  return mean_of(cfg, [](double g) { return std::log2(1.0 + g); });
}

Estimate empirical_pd(const SimConfig& cfg, const DetectorSpec& det) {
  const double b = std::sqrt(det.threshold());
  return mean_of(cfg, [&](double g) { return special::marcum_q(det.u, std::sqrt(2.0 * g), b); });
}

}  // namespace mogfade
