#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mogfade/channels.hpp"
#include "oracles.hpp"

using namespace mogfade;

namespace {

constexpr double kNeperPerDb = std::numbers::ln10 / 10.0;

// NL SNR density integrated over t = ln(sigma) with Boost.
double nl_snr_pdf_oracle(double m, double zeta_db, double avg, double g) {
  const double sd = kNeperPerDb * zeta_db;
  auto f = [&](double t) {
    const double omega = avg * std::exp(t);
    const double nak = std::exp(m * std::log(m / omega) + (m - 1.0) * std::log(g) - m * g / omega - std::lgamma(m));
    return nak * std::exp(-0.5 * t * t / (sd * sd)) / (std::sqrt(2.0 * std::numbers::pi) * sd);
  };
  return oracle::integrate(f, -12.0 * sd, 12.0 * sd, 1e-14);
}

std::vector<ChannelSpec> fixture_specs() {
  return {ChannelSpec::rayleigh_lognormal(3.0),  ChannelSpec::nakagami_lognormal(2.0, 1.0),
          ChannelSpec::nakagami_lognormal(4.0, 1.0), ChannelSpec::kappa_mu(1.0, 0.5),
          ChannelSpec::kappa_mu(3.0, 1.0),        ChannelSpec::eta_mu(0.5, 0.2),
          ChannelSpec::eta_mu(5.0, 10.0),         ChannelSpec::kappa_mu_shadowed(1.0, 3.0, 3.0)};
}

// Envelope CDF tabulated on a grid and interpolated linearly; the grid error
// is far below the KS critical values used here.
class TabulatedCdf {
 public:
  TabulatedCdf(const ChannelSpec& spec, double hi, int points) : hi_(hi), step_(hi / points) {
    values_.reserve(points + 1);
    for (int k = 0; k <= points; ++k) values_.push_back(exact_envelope_cdf(spec, k * step_));
  }
  double operator()(double x) const {
    if (x >= hi_) return values_.back();
    const double pos = x / step_;
    const auto k = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(k);
    return values_[k] + frac * (values_[k + 1] - values_[k]);
  }

 private:
  double hi_;
  double step_;
  std::vector<double> values_;
};

}  // namespace

TEST(ChannelPdf, KappaMuDegeneratesToNakagami) {
  const auto km = ChannelSpec::kappa_mu(1e-9, 2.0);
  EXPECT_NEAR(exact_snr_pdf(km, 1.0), 4.0 * std::exp(-2.0), 1e-8);
  EXPECT_NEAR(exact_snr_pdf(km, 1.0), 0.541341, 1e-6);
  const auto nak = ChannelSpec::nakagami_m(2.0);
  double sup = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double g = 10.0 * k / 1000.0;
    sup = std::max(sup, std::abs(exact_snr_pdf(km, g) - exact_snr_pdf(nak, g)));
  }
  EXPECT_LT(sup, 1e-6);
}

TEST(ChannelPdf, VanishesAtOriginWhenMuAboveOne) {
  EXPECT_EQ(exact_snr_pdf(ChannelSpec::kappa_mu(2.0, 1.5), 0.0), 0.0);
  EXPECT_EQ(exact_snr_pdf(ChannelSpec::eta_mu(0.5, 1.5), 0.0), 0.0);
  EXPECT_EQ(exact_snr_pdf(ChannelSpec::kappa_mu_shadowed(1.0, 3.0, 3.0), 0.0), 0.0);
  EXPECT_EQ(exact_envelope_pdf(ChannelSpec::nakagami_m(2.0), 0.0), 0.0);
}

TEST(ChannelPdf, NakagamiLognormalMatchesOracle) {
  for (double g : {0.05, 0.5, 1.0, 3.0}) {
    EXPECT_NEAR(exact_snr_pdf(ChannelSpec::nakagami_lognormal(2.0, 1.0), g) / nl_snr_pdf_oracle(2.0, 1.0, 1.0, g), 1.0,
                1e-9)
        << g;
  }
  const double env = exact_envelope_pdf(ChannelSpec::nakagami_lognormal(4.0, 1.0), 1.0);
  EXPECT_NEAR(env / (2.0 * nl_snr_pdf_oracle(4.0, 1.0, 1.0, 1.0)), 1.0, 1e-9);
}

TEST(ChannelPdf, RayleighEnvelope) {
  EXPECT_NEAR(exact_envelope_pdf(ChannelSpec::rayleigh(), 1.0), 2.0 * std::exp(-1.0), 1e-14);
  EXPECT_NEAR(exact_envelope_pdf(ChannelSpec::rayleigh(), 1.0), 0.735759, 1e-6);
  EXPECT_EQ(exact_envelope_pdf(ChannelSpec::rayleigh(), 0.0), 0.0);
}

TEST(ChannelPdf, FixtureSpecsIntegrateToOne) {
  for (const auto& spec : fixture_specs()) {
    const double cuts[] = {0.01, 0.1, 0.5, 1.0, 1.5, 2.5, 4.0};
    const double mass =
        oracle::integrate_half_line([&](double a) { return a > 0.0 ? exact_envelope_pdf(spec, a) : 0.0; }, cuts, 1e-10);
    EXPECT_NEAR(mass, 1.0, 1e-6) << to_string(spec.kind);
  }
}

TEST(ChannelPdf, EnvelopeSnrJacobian) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> alpha(0.05, 2.5);
  std::uniform_real_distribution<double> avg(0.3, 20.0);
  auto specs = fixture_specs();
  for (int i = 0; i < 20; ++i) {
    const auto spec = specs[static_cast<std::size_t>(i) % specs.size()].with_avg_snr(avg(rng));
    const double a = alpha(rng);
    const double lhs = exact_envelope_pdf(spec, a);
    const double rhs = 2.0 * spec.avg_snr * a * exact_snr_pdf(spec, spec.avg_snr * a * a);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
  }
}

TEST(ChannelPdf, EtaMuMatchesShadowedReduction) {
  for (auto [eta, mu] : {std::pair{0.5, 1.0}, std::pair{0.2, 0.75}, std::pair{1.0, 2.0}}) {
    const auto em = ChannelSpec::eta_mu(eta, mu);
    const auto kms = shadowed_reduction_spec(eta, mu, mu);
    double sup = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double g = 4.0 * k / 50.0;
      sup = std::max(sup, std::abs(exact_snr_pdf(em, g) - exact_snr_pdf(kms, g)));
    }
    EXPECT_LT(sup, 1e-8) << eta << " " << mu;
  }
}

TEST(ChannelCdf, MatchesPdfIntegral) {
  for (const auto& spec : fixture_specs()) {
    const double x = 0.8;
    // alpha = u^4 removes the integrable power singularity of severe eta-mu at the origin.
    const double quad = oracle::integrate(
        [&](double u) { return u > 0.0 ? 4.0 * u * u * u * exact_envelope_pdf(spec, u * u * u * u) : 0.0; }, 0.0,
        std::pow(x, 0.25), 1e-12);
    EXPECT_NEAR(exact_envelope_cdf(spec, x), quad, 1e-8) << to_string(spec.kind);
    EXPECT_NEAR(exact_snr_cdf(spec.with_avg_snr(4.0), 4.0 * x * x), quad, 1e-8);
  }
}

TEST(ChannelSampler, RayleighUnitPower) {
  const auto xs = sample_envelope(ChannelSpec::rayleigh(), 1'000'000, 3);
  double s = 0.0;
  double s2 = 0.0;
  for (double a : xs) {
    s += a * a;
    s2 += a * a * a * a;
  }
  const double n = static_cast<double>(xs.size());
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, 1.0, 5.0 * se);
}

TEST(ChannelSampler, NakagamiAmountOfFading) {
  const auto gs = sample_snr(ChannelSpec::nakagami_m(2.0), 1'000'000, 4);
  // AF per batch, then the spread of the batch estimates gives the standard error.
  const std::size_t batches = 50;
  const std::size_t per = gs.size() / batches;
  std::vector<double> af;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) {
      s += gs[i];
      s2 += gs[i] * gs[i];
    }
    const double m = s / per;
    af.push_back((s2 / per - m * m) / (m * m));
  }
  double mean = 0.0;
  for (double v : af) mean += v;
  mean /= batches;
  double var = 0.0;
  for (double v : af) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (batches - 1) / batches);
  EXPECT_NEAR(mean, 0.5, 3.0 * se + 1e-3);
}

TEST(ChannelSampler, LognormalMeanIsAScale) {
  // Mean-level scaling: the shadowing mean only rescales the power by 10^(M/10),
  // i.e. the envelope by 10^(M/20).
  auto shifted = sample_envelope(ChannelSpec::nakagami_lognormal(2.0, 2.0, 6.0), 200'000, 8);
  const auto base = sample_envelope(ChannelSpec::nakagami_lognormal(2.0, 2.0, 0.0), 200'000, 9);
  const double scale = std::pow(10.0, 6.0 / 20.0);
  for (double& a : shifted) a /= scale;
  std::sort(shifted.begin(), shifted.end());
  std::vector<double> ref(base);
  std::sort(ref.begin(), ref.end());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < shifted.size() && j < ref.size()) {
    if (shifted[i] <= ref[j]) ++i;
    else ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / shifted.size() - static_cast<double>(j) / ref.size()));
  }
  const double n = 200'000.0;
  EXPECT_LT(d, 1.63 * std::sqrt(2.0 / n));
}

TEST(ChannelSampler, KolmogorovSmirnovAgainstExactCdf) {
  for (const auto& spec : fixture_specs()) {
    const auto xs = sample_envelope(spec, 1'000'000, 21);
    const double hi = *std::max_element(xs.begin(), xs.end()) * 1.0001;
    const TabulatedCdf cdf(spec, hi, 3000);
    const double d = oracle::ks_statistic(xs, [&](double x) { return cdf(x); });
    EXPECT_LT(d, oracle::ks_critical(xs.size(), 0.01)) << to_string(spec.kind);
  }
}

TEST(ChannelSampler, DeterministicAcrossWorkerCounts) {
  const auto spec = ChannelSpec::kappa_mu_shadowed(1.0, 3.0, 3.0);
  setenv("MOGFADE_THREADS", "1", 1);
  const auto one = sample_envelope(spec, 300'000, 77);
  setenv("MOGFADE_THREADS", "4", 1);
  const auto four = sample_envelope(spec, 300'000, 77);
  unsetenv("MOGFADE_THREADS");
  EXPECT_EQ(one, four);
  EXPECT_NE(one, sample_envelope(spec, 300'000, 78));
}

TEST(EtaFormat, Conversion) {
  EXPECT_DOUBLE_EQ(convert_eta_format(0.0, 2), 1.0);
  EXPECT_NEAR(convert_eta_format(1.0 / 3.0, 2), 0.5, 1e-15);
  EXPECT_NEAR(convert_eta_format(convert_eta_format(0.7, 1), 2), 0.7, 1e-15);
  EXPECT_THROW(convert_eta_format(1.0, 2), std::domain_error);
  EXPECT_THROW(convert_eta_format(-1.0, 2), std::domain_error);
  EXPECT_THROW(convert_eta_format(0.0, 1), std::domain_error);
  EXPECT_THROW(convert_eta_format(0.5, 3), std::domain_error);
}

TEST(EtaFormat, BothFormatsGiveTheSameChannel) {
  const auto f1 = ChannelSpec::eta_mu(0.5, 1.2, 1);
  const auto f2 = ChannelSpec::eta_mu(1.0 / 3.0, 1.2, 2);
  for (double g : {0.1, 0.7, 2.0}) EXPECT_NEAR(exact_snr_pdf(f1, g), exact_snr_pdf(f2, g), 1e-13);
}

TEST(ShadowedReduction, Mapping) {
  const auto a = shadowed_reduction_spec(0.5, 1.0, 1.0);
  EXPECT_EQ(a.kind, ChannelKind::KappaMuShadowed);
  EXPECT_DOUBLE_EQ(*a.kappa, 0.5);
  EXPECT_DOUBLE_EQ(*a.mu, 2.0);
  const auto b = shadowed_reduction_spec(1.0, 2.0, 2.0);
  EXPECT_DOUBLE_EQ(*b.kappa, 0.0);
  EXPECT_DOUBLE_EQ(*b.mu, 4.0);
  EXPECT_THROW(shadowed_reduction_spec(1.5, 1.0, 1.0), std::domain_error);
  EXPECT_THROW(shadowed_reduction_spec(0.0, 1.0, 1.0), std::domain_error);
}

TEST(ChannelSpecJson, RoundTripAndStrictness) {
  for (const auto& spec : fixture_specs()) {
    nlohmann::json j = spec;
    EXPECT_EQ(j.get<ChannelSpec>(), spec);
  }
  EXPECT_THROW(nlohmann::json::parse(R"({"kind":"KappaMu","kappa":1,"mu":1,"colour":2})").get<ChannelSpec>(),
               std::invalid_argument);
  EXPECT_THROW(nlohmann::json::parse(R"({"kind":"Rician"})").get<ChannelSpec>(), std::invalid_argument);
  EXPECT_THROW(nlohmann::json::parse(R"({"kind":"KappaMu","kappa":-1,"mu":1})").get<ChannelSpec>(),
               std::invalid_argument);
}

TEST(ChannelSpecValidation, StrictRanges) {
  EXPECT_THROW(ChannelSpec::nakagami_m(0.4).validate(), std::invalid_argument);
  EXPECT_THROW(ChannelSpec::kappa_mu(1.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(ChannelSpec::eta_mu(1.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(ChannelSpec::eta_mu(1.2, 1.0, 2).validate(), std::invalid_argument);
  EXPECT_THROW(ChannelSpec::rayleigh(-1.0).validate(), std::invalid_argument);
  ChannelSpec odd = ChannelSpec::rayleigh();
  odd.kappa = 2.0;
  EXPECT_EQ(odd.unused_fields(), std::vector<std::string>{"kappa"});
  EXPECT_TRUE(ChannelSpec::kappa_mu(1.0, 1.0).unused_fields().empty());
}

TEST(DbScale, AmplitudeHalvesTheLogSpread) {
  const auto amp = ChannelSpec::nakagami_lognormal(2.0, 2.0, 1.0).with_db_scale(DbScale::Amplitude);
  const auto pow = ChannelSpec::nakagami_lognormal(2.0, 1.0, 0.5);
  EXPECT_NEAR(amp.log_sigma_sd(), pow.log_sigma_sd(), 1e-15);
  EXPECT_NEAR(amp.log_sigma_mean(), pow.log_sigma_mean(), 1e-15);
  for (double g : {0.05, 0.4, 1.0, 2.5}) EXPECT_NEAR(exact_snr_pdf(amp, g), exact_snr_pdf(pow, g), 1e-13) << g;
  EXPECT_NEAR(mean_envelope_power(amp), mean_envelope_power(pow), 1e-15);
  // Same draws: the amplitude convention divides V by 20 instead of 10.
  const auto a = sample_envelope(amp, 1000, 5);
  const auto b = sample_envelope(ChannelSpec::nakagami_lognormal(2.0, 1.0, 0.5), 1000, 5);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * b[i]);
}

TEST(DbScale, JsonAndUnusedFields) {
  const auto spec = ChannelSpec::rayleigh_lognormal(3.0).with_db_scale(DbScale::Amplitude);
  nlohmann::json j = spec;
  EXPECT_EQ(j.at("db_scale"), "amplitude");
  EXPECT_EQ(j.get<ChannelSpec>(), spec);
  EXPECT_FALSE(nlohmann::json(ChannelSpec::rayleigh_lognormal(3.0)).contains("db_scale"));
  EXPECT_THROW(nlohmann::json::parse(R"({"kind":"RayleighLognormal","zeta_db":3,"db_scale":"neper"})").get<ChannelSpec>(),
               std::invalid_argument);
  EXPECT_EQ(ChannelSpec::kappa_mu(1.0, 1.0).with_db_scale(DbScale::Power).unused_fields(),
            std::vector<std::string>{"db_scale"});
}
