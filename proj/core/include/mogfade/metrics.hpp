#pragma once

// Closed-form performance metrics of a MoG fading model: MGF, moments,
// amount of fading, outage, capacity, MRC symbol error rates and energy
// detection.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mogfade/mog.hpp"

namespace mogfade {

/// E[exp(-s gamma)] over the half-line mixture, s >= 0:
///   sum_i w_i / sqrt(b_i) exp(-mu_i^2 avg s / b_i) Q(-mu_i / (eta_i sqrt(b_i))),
/// b_i = 1 + 2 eta_i^2 avg s.
double mgf(const MoGModel& model, double s);

/// E[gamma^n] from the full-line Gaussian moments,
///   sum_i w_i avg^n eta_i^(2n) 2^n Gamma(n + 1/2) / sqrt(pi) 1F1(-n; 1/2; -mu_i^2 / (2 eta_i^2)).
/// The negative tail is included, so n = 0 gives sum w_i = 1.
double raw_moment(const MoGModel& model, int n);

/// Same moment from derivatives of the component Gaussian MGF at zero,
/// using M^(k+1) = mu M^(k) + k eta^2 M^(k-1).
double raw_moment_via_mgf(const MoGModel& model, int n);

/// Var[gamma] / E[gamma]^2 from the envelope moments; independent of avg_snr.
double amount_of_fading(const MoGModel& model);

/// P(gamma < gamma_th) = sum_i w_i [Q(-mu_i/eta_i) - Q((sqrt(gamma_th/avg) - mu_i)/eta_i)].
double outage_probability(const MoGModel& model, double gamma_th);

/// Second-order Taylor approximation of B E[log2(1 + gamma)] in bits/s.
double ergodic_capacity(const MoGModel& model, double bandwidth);

/// B E[log2(1 + gamma)] by quadrature over the MoG SNR pdf.
double ergodic_capacity_quadrature(const MoGModel& model, double bandwidth);

/// Product of the branch MGFs (independent, possibly non-identical branches).
double mrc_mgf(std::span<const MoGModel> branches, double s);

struct SerScheme {
  enum class Kind { CoherentBinary, MPSK, SquareMQAM };

  Kind kind = Kind::CoherentBinary;
  double g = 1.0;  // binary only: 1 for BPSK, 1/2 for BFSK
  int order = 2;   // constellation size M for MPSK / MQAM

  static SerScheme bpsk() { return {Kind::CoherentBinary, 1.0, 2}; }
  static SerScheme bfsk() { return {Kind::CoherentBinary, 0.5, 2}; }
  static SerScheme binary(double g) { return {Kind::CoherentBinary, g, 2}; }
  static SerScheme mpsk(int m) { return {Kind::MPSK, 1.0, m}; }
  static SerScheme mqam(int m) { return {Kind::SquareMQAM, 1.0, m}; }

  void validate() const;
  /// 3 / (2 (M - 1)) for square M-QAM.
  double g_qam() const;
};

void to_json(nlohmann::json& j, const SerScheme& scheme);
void from_json(const nlohmann::json& j, SerScheme& scheme);

/// Symbol error rate over MRC with one model per branch, as a finite integral
/// over theta of the MGF product, by `nodes`-point Gauss-Legendre on each of
/// five panels that halve towards theta = 0.
double ser(std::span<const MoGModel> branches, const SerScheme& scheme, int nodes = 64);

/// The same finite-range integral for any combined MGF s -> E[exp(-s gamma_MRC)],
/// e.g. one computed numerically from an exact channel.
double ser_from_mgf(const std::function<double(double)>& combined_mgf, const SerScheme& scheme, int nodes = 64);

/// Conditional symbol error rate at a fixed SNR gamma (the AWGN expression
/// that the fading average is taken over).
double conditional_ser(const SerScheme& scheme, double gamma);

struct DetectorSpec {
  int u = 1;                         // time-bandwidth product
  std::optional<double> lambda;      // energy threshold
  std::optional<double> target_pf;   // alternatively, the false-alarm target

  void validate() const;
  /// lambda, or the threshold that meets target_pf.
  double threshold() const;
};

void to_json(nlohmann::json& j, const DetectorSpec& det);
void from_json(const nlohmann::json& j, DetectorSpec& det);

/// Q_u(sqrt(2 snr), sqrt(lambda)).
double awgn_pd(int u, double snr, double lambda);

/// Gamma(u, lambda/2) / Gamma(u).
double false_alarm_prob(int u, double lambda);

/// lambda with false_alarm_prob(u, lambda) = pf, by bisection.
double threshold_from_pf(int u, double pf);

inline constexpr int kDefaultTruncation = 12;

/// Average detection probability over the MoG SNR pdf, as the parabolic
/// cylinder series truncated after n = truncation_p. With `renormalize` the
/// result is divided by normalization_mass(model).
double avg_pd_series(const MoGModel& model, const DetectorSpec& det, int truncation_p = kDefaultTruncation,
                     bool renormalize = false);

/// Average detection probability by quadrature of Q_u against the MoG SNR pdf.
double avg_pd_quadrature(const MoGModel& model, const DetectorSpec& det);

enum class TruncationBound {
  /// sum_i pref_i (tau_i - sum_{n<=p} T_n), tau_i through Humbert Psi1 with
  /// arguments 2r and z^2/2; bounds every Q(u+n, lambda/2) by one.
  Exact,
  /// As Exact, but subtracting the partial sum that still carries
  /// Q(u+n, lambda/2). Valid but does not vanish as p grows.
  PartialSumWithDetector,
  /// The Humbert closed form with prefactor exp(-mu^2/(2 eta^2)),
  /// Psi1(1/2, 3; 1, 1/2) and Psi1(1, 3; 1, 3/2) at x = pi avg eta^2 / (4 avg eta^2 + 2).
  /// Kept for comparison; it exceeds 1 on typical models.
  Psi1ClosedForm,
  /// As Psi1ClosedForm, with the series ratio avg eta^2 / (4 avg eta^2 + 2) (no pi),
  /// which keeps the Psi1 argument below 1/4. Not a bound in general.
  Psi1ClosedFormNoPi,
};

/// Upper bound on the truncation error of avg_pd_series at truncation_p.
double pd_truncation_bound(const MoGModel& model, const DetectorSpec& det, int truncation_p = kDefaultTruncation,
                           TruncationBound variant = TruncationBound::Exact);

/// (pf, pd) pairs; pd from avg_pd_series at truncation_p.
std::vector<std::pair<double, double>> roc_curve(const MoGModel& model, int u, std::span<const double> pf_grid,
                                                 int truncation_p = kDefaultTruncation);

/// One line of the comparison tables written by the metrics and sim modules.
struct MetricRow {
  std::string scenario;
  std::string metric;
  double abscissa = 0.0;
  double analytic = 0.0;
  double oracle = 0.0;
  double abs_error = 0.0;
};

MetricRow make_row(std::string scenario, std::string metric, double abscissa, double analytic, double oracle);

/// Header line "scenario,metric,abscissa,analytic,oracle,abs_error".
std::string csv_header();
/// Numbers printed with 17 significant digits so reruns compare byte for byte.
std::string to_csv(const MetricRow& row);

}  // namespace mogfade
