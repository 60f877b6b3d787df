#pragma once

// Monte-Carlo estimates of outage, symbol error rate, capacity and detection
// probability, each with its standard error. Draws are generated in chunks
// with per-chunk seeds, so results do not depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "mogfade/channels.hpp"
#include "mogfade/metrics.hpp"
#include "mogfade/mog.hpp"

namespace mogfade {

/// Deterministic SNR, for degenerate checks.
struct ConstantSnr {
  double gamma = 0.0;
};

using SnrSource = std::variant<ChannelSpec, MoGModel, ConstantSnr>;

struct SimConfig {
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t chunk_size = 1 << 16;
  SnrSource source = ChannelSpec::rayleigh();

  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

/// SNR draws of chunk `chunk` for branch `branch`. A MoG source draws signed
/// envelopes; draws below zero carry no mass in the half-line model and are
/// returned as -1.
std::vector<double> snr_draws(const SimConfig& cfg, std::size_t chunk, std::size_t branch = 0);

/// Fraction of draws with 0 <= gamma < gamma_th, one estimate per threshold,
/// with the binomial standard error.
std::vector<Estimate> empirical_outage(const SimConfig& cfg, std::span<const double> gamma_th_grid);

/// Semi-analytic MRC symbol error rate: mean over draws of the conditional
/// error probability at the summed SNR of `branches` independent branches.
Estimate empirical_ser(const SimConfig& cfg, int branches, const SerScheme& scheme);

/// Mean of log2(1 + gamma) in bits/s/Hz.
Estimate empirical_capacity(const SimConfig& cfg);

/// Mean of Q_u(sqrt(2 gamma), sqrt(lambda)).
Estimate empirical_pd(const SimConfig& cfg, const DetectorSpec& det);

}  // namespace mogfade
