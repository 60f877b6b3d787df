#pragma once

// Mixture-of-Gaussians envelope model: densities, EM fitting, BIC selection
// and the accuracy criteria against an exact channel.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mogfade/channels.hpp"

namespace mogfade {

struct MoGComponent {
  double weight = 1.0;
  double mean = 0.0;
  double std = 1.0;  // eta_j; EM produces the variance eta_j^2 and stores its root

  friend bool operator==(const MoGComponent&, const MoGComponent&) = default;
};

/// Envelope mixture sum_j w_j N(x; mu_j, eta_j^2) restricted to x >= 0, plus
/// the average SNR used by the SNR-domain forms.
class MoGModel {
 public:
  /// Strict: weights > 0 summing to 1 within 1e-12, stds > 0, C >= 1.
  MoGModel(std::vector<MoGComponent> components, double avg_snr = 1.0);

  /// Rescales the weights to sum to one before the strict checks (for
  /// parameter tables rounded to a few digits).
  static MoGModel normalized(std::vector<MoGComponent> components, double avg_snr = 1.0);

  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<MoGComponent>& components() const noexcept { return components_; }
  const MoGComponent& operator[](std::size_t i) const { return components_[i]; }
  double avg_snr() const noexcept { return avg_snr_; }
  MoGModel with_avg_snr(double avg_snr) const;

  friend bool operator==(const MoGModel&, const MoGModel&) = default;

 private:
  std::vector<MoGComponent> components_;
  double avg_snr_;
};

void to_json(nlohmann::json& j, const MoGModel& model);
/// Accepts weights summing to 1 within 1e-3 and renormalizes them.
MoGModel mog_model_from_json(const nlohmann::json& j);

struct FitConfig {
  double delta = 1e-6;            // threshold on |L(m+1) - L(m)|, L the mean log-likelihood
  int max_iters = 1000;
  int restarts = 5;
  std::optional<double> min_std;  // floor on eta_j; default 1e-6 * sample std
  std::uint64_t seed = 1;

  void validate() const;
};

void to_json(nlohmann::json& j, const FitConfig& config);
void from_json(const nlohmann::json& j, FitConfig& config);

struct FitReport {
  std::vector<double> loglik_trace;  // mean log-likelihood per EM iteration
  int iterations = 0;
  bool converged = false;
  double loglik_total = 0.0;         // sum over samples
  double bic = 0.0;
  std::size_t n_samples = 0;
  int restart = 0;                   // index of the winning initialization
  int reinitializations = 0;         // empty components re-seeded; the trace restarts at each
  double normalization_mass = 1.0;
  bool mass_flagged = false;         // normalization_mass below 0.995
};

void to_json(nlohmann::json& j, const FitReport& report);

struct FitResult {
  MoGModel model;
  FitReport report;
};

/// Best-of-restarts EM fit of a C-component mixture to envelope samples.
/// Throws DegenerateDataError when fewer than C distinct values are present.
FitResult em_fit(std::span<const double> samples, int components, const FitConfig& config = {});

/// Single EM run started from `initial`.
FitResult em_fit_from(std::span<const double> samples, const MoGModel& initial, const FitConfig& config = {});

/// -2 L_C + C ln(M) with L_C the total log-likelihood over M samples.
double bic_score(double loglik_total, int components, std::size_t n_samples);

struct BicRow {
  int components = 0;
  double bic = 0.0;
  double loglik_total = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct Selection {
  MoGModel model;
  FitReport report;
  std::vector<BicRow> table;
};

/// Fits every C in [c_min, c_max] and keeps the minimum-BIC model, preferring
/// the smaller C on ties.
Selection select_components(std::span<const double> samples, int c_min, int c_max, const FitConfig& config = {});

double mog_envelope_pdf(const MoGModel& model, double x);
/// Returns +inf at gamma = 0 (integrable 1/sqrt(gamma) pole).
double mog_snr_pdf(const MoGModel& model, double gamma);
double mog_envelope_cdf(const MoGModel& model, double x);
/// sum_i w_i Q(-mu_i / eta_i): mass of the mixture on [0, inf).
double normalization_mass(const MoGModel& model);

/// Posterior component probabilities at x (the E-step responsibilities).
std::vector<double> posteriors(const MoGModel& model, double x);

/// Signed draws from the untruncated mixture; negative values represent the
/// mass the half-line model does not carry.
std::vector<double> sample_mog(const MoGModel& model, std::size_t n, std::uint64_t seed);

using Density = std::function<double(double)>;

/// KL(f || f_mog) in nats. The SNR-domain divergence equals the envelope-domain
/// one under gamma = avg_snr x^2, so the integral runs over the envelope.
double kl_divergence(const ChannelSpec& exact, const MoGModel& model);
double kl_divergence(const Density& exact_envelope_pdf, const MoGModel& model);

/// Mean of (f_mog(gamma) - f(gamma))^2 over `points` midpoints of [0, x_max].
double mse_criterion(const ChannelSpec& exact, const MoGModel& model, double x_max, int points);
double mse_criterion(const Density& exact_snr_pdf, const MoGModel& model, double x_max, int points);

}  // namespace mogfade
