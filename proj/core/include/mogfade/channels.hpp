#pragma once

// Exact fading models: SNR and envelope densities, CDFs and samplers.
//
// Conventions: the envelope alpha and SNR gamma are related by
// gamma = avg_snr * alpha^2. Every model except the lognormal-shadowed ones
// has E[alpha^2] = 1; with shadowing, E[alpha^2] = E[sigma] where sigma is the
// lognormal local mean power. By default 10 log10 sigma ~ N(mean_db, zeta_db^2);
// with DbScale::Amplitude it is 20 log10 sigma instead, which halves the spread
// of ln sigma for the same zeta_db.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mogfade {

enum class ChannelKind {
  NakagamiLognormal,
  RayleighLognormal,
  KappaMu,
  EtaMu,
  KappaMuShadowed,
  NakagamiM,
  Rayleigh,
};

std::string_view to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(std::string_view name);

/// Which logarithm zeta_db and mean_db refer to.
enum class DbScale {
  Power,      // V = 10 log10 sigma
  Amplitude,  // V = 20 log10 sigma
};

std::string_view to_string(DbScale scale);
DbScale db_scale_from_string(std::string_view name);

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Rayleigh;
  std::optional<double> m;
  std::optional<double> zeta_db;
  std::optional<double> mean_db;
  std::optional<double> kappa;
  std::optional<double> mu;
  std::optional<double> eta;
  std::optional<int> eta_format;
  std::optional<DbScale> db_scale;  // lognormal kinds; Power when unset
  double avg_snr = 1.0;

  static ChannelSpec nakagami_lognormal(double m, double zeta_db, double mean_db = 0.0, double avg_snr = 1.0);
  static ChannelSpec rayleigh_lognormal(double zeta_db, double mean_db = 0.0, double avg_snr = 1.0);
  static ChannelSpec kappa_mu(double kappa, double mu, double avg_snr = 1.0);
  static ChannelSpec eta_mu(double eta, double mu, int format = 1, double avg_snr = 1.0);
  static ChannelSpec kappa_mu_shadowed(double kappa, double mu, double m, double avg_snr = 1.0);
  static ChannelSpec nakagami_m(double m, double avg_snr = 1.0);
  static ChannelSpec rayleigh(double avg_snr = 1.0);

  /// Strict parameter check; throws std::invalid_argument naming the field.
  void validate() const;

  /// Fields that are set but have no meaning for `kind`.
  std::vector<std::string> unused_fields() const;

  /// Copy with a different average SNR.
  ChannelSpec with_avg_snr(double avg_snr) const;

  /// Copy with the given dB convention for the shadowing parameters.
  ChannelSpec with_db_scale(DbScale scale) const;

  /// Standard deviation and mean of ln(sigma) for the lognormal kinds.
  double log_sigma_sd() const;
  double log_sigma_mean() const;

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

void to_json(nlohmann::json& j, const ChannelSpec& spec);
/// Rejects unknown keys and invalid parameter combinations.
void from_json(const nlohmann::json& j, ChannelSpec& spec);

/// Exact SNR density. Lognormal-shadowed models integrate over the shadowing
/// in t = ln(sigma) by adaptive Gauss-Kronrod; the others are closed form.
double exact_snr_pdf(const ChannelSpec& spec, double gamma);

/// f_alpha(alpha) = 2 avg_snr alpha f_gamma(avg_snr alpha^2).
double exact_envelope_pdf(const ChannelSpec& spec, double alpha);

/// P(gamma_inst <= gamma) by quadrature of the density (closed form for
/// Nakagami-m and Rayleigh).
double exact_snr_cdf(const ChannelSpec& spec, double gamma);

/// P(alpha_inst <= alpha).
double exact_envelope_cdf(const ChannelSpec& spec, double alpha);

/// E[alpha^2] implied by this ChannelSpec.
double mean_envelope_power(const ChannelSpec& spec);

/// Exponent p of the small-gamma behaviour f_gamma ~ c gamma^p.
double snr_pdf_origin_exponent(const ChannelSpec& spec);

/// n i.i.d. envelope draws. Output depends only on (spec, n, seed): the
/// stream is cut into fixed-size chunks, each with its own derived seed, so
/// chunks may be generated concurrently.
std::vector<double> sample_envelope(const ChannelSpec& spec, std::size_t n, std::uint64_t seed);

/// n i.i.d. SNR draws, gamma = avg_snr * alpha^2.
std::vector<double> sample_snr(const ChannelSpec& spec, std::size_t n, std::uint64_t seed);

/// eta_F1 = (1 - eta_F2) / (1 + eta_F2); the same map sends F1 back to F2.
double convert_eta_format(double eta, int from_format);

/// kappa-mu shadowed spec with mu_s = 2 mu, kappa_s = (1 - eta) / (2 eta) and
/// m_s = m_large; equals eta-mu(eta, mu) in distribution when m_large = mu.
/// eta is Format 1 and must lie in (0, 1].
ChannelSpec shadowed_reduction_spec(double eta, double mu, double m_large, double avg_snr = 1.0);

}  // namespace mogfade
