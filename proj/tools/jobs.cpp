#include "jobs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unistd.h>

#include "mogfade/errors.hpp"
#include "mogfade/quadrature.hpp"
#include "mogfade/sim.hpp"

namespace mogfade::cli {

namespace {

const std::set<std::string> kCommands = {"fit", "select", "eval", "simulate", "roc", "validate"};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_grid(const std::vector<double>& grid, const char* name) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError(std::string(name) + " must be strictly increasing");
  }
  for (double v : grid) {
    if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
  }
}

std::vector<double> number_list(const nlohmann::json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(name) + " must be a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(std::string(name) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t count_value(const nlohmann::json& j, const char* name) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw ConfigError(std::string(name) + " must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

struct FixtureEntry {
  std::string name;
  MoGModel model;
  std::optional<ChannelSpec> channel;
};

std::vector<FixtureEntry> load_fixture_index(const std::filesystem::path& dir) {
  const auto index = read_json_file(dir / "index.json");
  std::vector<FixtureEntry> out;
  for (const auto& e : index.at("fixtures")) {
    FixtureEntry f{e.at("name").get<std::string>(),
                   mog_model_from_json(read_json_file(dir / e.at("model").get<std::string>())), std::nullopt};
    if (e.contains("channel")) f.channel = e.at("channel").get<ChannelSpec>();
    out.push_back(std::move(f));
  }
  return out;
}

std::string describe(const ChannelSpec& spec) {
  std::string s(to_string(spec.kind));
  std::vector<std::string> parts;
  auto add = [&](const char* key, const std::optional<double>& v) {
    if (v) parts.push_back(std::string(key) + "=" + num(*v));
  };
  add("m", spec.m);
  add("zeta_db", spec.zeta_db);
  if (spec.mean_db && *spec.mean_db != 0.0) add("mean_db", spec.mean_db);
  add("kappa", spec.kappa);
  add("mu", spec.mu);
  add("eta", spec.eta);
  if (spec.db_scale == DbScale::Amplitude) parts.push_back("db_scale=amplitude");
  if (parts.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ";" : "") + parts[i];
  return s + ")";
}

// Composite Gauss-Legendre rule for expectations over an envelope density:
// geometric panels near the origin (where the density may have an
// integrable power singularity) and uniform panels out to a tail cut-off.
class EnvelopeRule {
 public:
  explicit EnvelopeRule(const std::function<double(double)>& pdf) {
    double hi = 2.0;
    while (hi < 200.0 && pdf(hi) > 1e-16) hi *= 1.25;
    std::vector<double> edges = {0.0};
    for (double e = 1e-10; e < 0.05; e *= 4.0) edges.push_back(e);
    for (double e = 0.05; e < hi; e += 0.05) edges.push_back(e);
    edges.push_back(hi);
    const auto& gl = quad::gauss_legendre(16);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double mid = 0.5 * (edges[p] + edges[p + 1]);
      const double half = 0.5 * (edges[p + 1] - edges[p]);
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double x = mid + half * gl.nodes[k];
        nodes_.push_back(x);
        weights_.push_back(half * gl.weights[k] * pdf(x));
      }
    }
  }

  double expect(const std::function<double(double)>& h) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) s += weights_[k] * h(nodes_[k]);
    return s;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// int_0^inf h(x) f_mog(x) dx with breakpoints around every component.
double mog_expectation(const MoGModel& model, const std::function<double(double)>& h) {
  std::vector<double> cuts = {0.0};
  double hi = 0.0;
  for (const auto& c : model.components()) {
    for (double k : {-8.0, -3.0, 0.0, 3.0, 8.0}) {
      const double x = c.mean + k * c.std;
      if (x > 0.0) cuts.push_back(x);
    }
    hi = std::max(hi, c.mean + 40.0 * c.std);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  quad::Options opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-12;
  opts.max_intervals = 4000;
  const auto r = quad::integrate_pieces([&](double x) { return h(x) * mog_envelope_pdf(model, x); }, cuts, opts);
  if (!r.converged) throw NonConvergenceError("mog_expectation: quadrature did not converge", r.value, r.abs_error);
  return r.value;
}

// sum_i w_i int h(x) phi_i(x) dx over the whole line, i.e. without truncation at 0.
double full_line_expectation(const MoGModel& model, const std::function<double(double)>& h) {
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-12;
  opts.max_intervals = 4000;
  double sum = 0.0;
  for (const auto& c : model.components()) {
    std::vector<double> cuts;
    for (double k : {-40.0, -8.0, -3.0, 0.0, 3.0, 8.0, 40.0}) cuts.push_back(c.mean + k * c.std);
    auto f = [&](double x) {
      const double z = (x - c.mean) / c.std;
      return h(x) * std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * c.std);
    };
    const auto r = quad::integrate_pieces(f, cuts, opts);
    if (!r.converged) throw NonConvergenceError("full_line_expectation: quadrature did not converge", r.value, r.abs_error);
    sum += c.weight * r.value;
  }
  return sum;
}

double fit_x_max(const ChannelSpec& spec) {
  // SNR-domain grid end covering 99.99% of the exact mass.
  double g = 1.0;
  while (exact_snr_cdf(spec, g) < 0.9999) g *= 1.5;
  return g;
}

struct Artifacts {
  std::vector<std::pair<std::filesystem::path, std::string>> files;
};

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct ResolvedModel {
  MoGModel model;
  std::string label;
  std::optional<ChannelSpec> channel;
};

ResolvedModel resolve_model(const JobConfig& job) {
  if (job.model) return {*job.model, job.channel ? describe(*job.channel) : "model", job.channel};
  if (job.fixture) {
    for (auto& f : load_fixture_index(job.fixture_dir)) {
      if (f.name == *job.fixture) {
        auto ch = job.channel ? job.channel : f.channel;
        return {f.model, f.name, ch};
      }
    }
    throw ConfigError("unknown fixture '" + *job.fixture + "'");
  }
  const auto xs = sample_envelope(*job.channel, job.samples, job.fit.seed);
  auto fit = em_fit(xs, job.components, job.fit);
  return {fit.model, describe(*job.channel) + ";C=" + std::to_string(job.components), job.channel};
}

Artifacts job_fit(const JobConfig& job) {
  const auto xs = sample_envelope(*job.channel, job.samples, job.fit.seed);
  const auto fit = em_fit(xs, job.components, job.fit);
  const auto unit = job.channel->with_avg_snr(1.0);
  nlohmann::json out;
  out["channel"] = *job.channel;
  out["model"] = fit.model;
  out["report"] = fit.report;
  out["kl_divergence"] = kl_divergence(unit, fit.model);
  out["mse"] = mse_criterion(unit, fit.model, fit_x_max(unit), 10'000);
  return {{{job.output.empty() ? "fit.json" : job.output, dump(out)}}};
}

Artifacts job_select(const JobConfig& job) {
  const auto xs = sample_envelope(*job.channel, job.samples, job.fit.seed);
  const auto sel = select_components(xs, job.c_range.first, job.c_range.second, job.fit);
  nlohmann::json out;
  out["channel"] = *job.channel;
  out["components"] = sel.model.size();
  out["model"] = sel.model;
  out["report"] = sel.report;
  std::string csv = "components,bic,loglik_total,iterations,converged\n";
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : sel.table) {
    csv += std::to_string(row.components) + "," + num(row.bic) + "," + num(row.loglik_total) + "," +
           std::to_string(row.iterations) + "," + (row.converged ? "true" : "false") + "\n";
    table.push_back({{"components", row.components}, {"bic", row.bic}, {"loglik_total", row.loglik_total}});
  }
  out["bic_table"] = table;
  const std::string name = job.output.empty() ? "select.json" : job.output;
  return {{{name, dump(out)}, {std::filesystem::path(name).stem().string() + "_bic.csv", csv}}};
}

Artifacts job_eval(const JobConfig& job) {
  const auto r = resolve_model(job);
  std::function<double(double)> pdf;
  if (r.channel) {
    const auto unit = r.channel->with_avg_snr(1.0);
    pdf = [unit](double a) { return a > 0.0 ? exact_envelope_pdf(unit, a) : 0.0; };
  } else {
    pdf = [m = r.model](double a) { return mog_envelope_pdf(m, a); };
  }
  // Envelope densities are normalized to unit power, so one rule serves every SNR.
  const EnvelopeRule rule(pdf);
  const double th = db_to_linear(job.outage_threshold_db);
  std::string csv = csv_header() + "\n";
  auto emit = [&](const std::string& metric, double x, double analytic, double oracle) {
    csv += to_csv(make_row(r.label, metric, x, analytic, oracle)) + "\n";
  };
  const double p2 = rule.expect([](double a) { return a * a; });
  const double p4 = rule.expect([](double a) { return a * a * a * a; });
  emit("amount_of_fading", 0.0, amount_of_fading(r.model), p4 / (p2 * p2) - 1.0);
  for (double db : job.snr_db) {
    const double avg = db_to_linear(db);
    const auto m = r.model.with_avg_snr(avg);
    quad::Options opts;
    opts.abs_tol = 1e-14;
    const double out_oracle = quad::integrate_or_throw(pdf, 0.0, std::sqrt(th / avg), opts);
    emit("outage", db, outage_probability(m, th), out_oracle);
    const double cap = job.bandwidth * rule.expect([avg](double a) { return std::log2(1.0 + avg * a * a); });
    emit("capacity", db, ergodic_capacity(m, job.bandwidth), cap);
    emit("capacity_quadrature", db, ergodic_capacity_quadrature(m, job.bandwidth), cap);
    for (const auto& req : job.ser) {
      const std::vector<MoGModel> branches(static_cast<std::size_t>(req.branches), m);
      const double oracle = ser_from_mgf(
          [&](double s) { return std::pow(rule.expect([&](double a) { return std::exp(-s * avg * a * a); }), req.branches); },
          req.scheme);
      nlohmann::json sj = req.scheme;
      const std::string name = "ser:" + sj["kind"].get<std::string>() +
                               (req.scheme.kind == SerScheme::Kind::CoherentBinary ? "" : std::to_string(req.scheme.order)) +
                               ":L" + std::to_string(req.branches);
      emit(name, db, ser(branches, req.scheme), oracle);
    }
  }
  return {{{job.output.empty() ? "eval.csv" : job.output, csv}}};
}

Artifacts job_simulate(const JobConfig& job) {
  const auto r = resolve_model(job);
  if (!job.sim.from_model && !r.channel) throw ConfigError("simulate: no channel to draw from; set sim.source to \"model\"");
  const double th = db_to_linear(job.outage_threshold_db);
  std::string csv = csv_header() + ",std_err\n";
  auto emit = [&](const std::string& metric, double x, double analytic, const Estimate& e) {
    csv += to_csv(make_row(r.label, metric, x, analytic, e.value)) + "," + num(e.std_err) + "\n";
  };
  for (double db : job.snr_db) {
    const double avg = db_to_linear(db);
    const auto m = r.model.with_avg_snr(avg);
    SimConfig cfg;
    cfg.n_samples = job.sim.n_samples;
    cfg.chunk_size = job.sim.chunk_size;
    cfg.seed = job.fit.seed;
    if (job.sim.from_model) cfg.source = m;
    else cfg.source = r.channel->with_avg_snr(avg);
    const std::vector<double> grid = {th};
    emit("outage", db, outage_probability(m, th), empirical_outage(cfg, grid)[0]);
    emit("capacity", db, ergodic_capacity_quadrature(m, 1.0), empirical_capacity(cfg));
    for (const auto& req : job.ser) {
      const std::vector<MoGModel> branches(static_cast<std::size_t>(req.branches), m);
      nlohmann::json sj = req.scheme;
      const std::string name = "ser:" + sj["kind"].get<std::string>() +
                               (req.scheme.kind == SerScheme::Kind::CoherentBinary ? "" : std::to_string(req.scheme.order)) +
                               ":L" + std::to_string(req.branches);
      emit(name, db, ser(branches, req.scheme), empirical_ser(cfg, req.branches, req.scheme));
    }
    if (job.detector) emit("pd", db, avg_pd_series(m, *job.detector, job.truncation), empirical_pd(cfg, *job.detector));
  }
  return {{{job.output.empty() ? "simulate.csv" : job.output, csv}}};
}

Artifacts job_roc(const JobConfig& job) {
  const auto r = resolve_model(job);
  std::vector<double> snrs = job.snr_db;
  if (snrs.empty()) snrs.push_back(10.0 * std::log10(r.model.avg_snr()));
  std::string csv = csv_header() + "\n";
  for (double db : snrs) {
    const auto m = r.model.with_avg_snr(db_to_linear(db));
    const std::string label = r.label + ";snr_db=" + num(db);
    for (double pf : job.pf) {
      DetectorSpec det;
      det.u = job.detector->u;
      det.lambda = threshold_from_pf(det.u, pf);
      const double series = avg_pd_series(m, det, job.truncation);
      csv += to_csv(make_row(label, "pd", pf, series, avg_pd_quadrature(m, det))) + "\n";
      const double residual = std::abs(avg_pd_series(m, det, 40) - series);
      csv += to_csv(make_row(label, "truncation_bound", pf, pd_truncation_bound(m, det, job.truncation), residual)) + "\n";
    }
  }
  return {{{job.output.empty() ? "roc.csv" : job.output, csv}}};
}

struct Check {
  std::string fixture;
  std::string name;
  double value;
  double reference;
  double tolerance;
  bool pass;
};

// Invariant suite over the shipped fixture models.
std::vector<Check> validation_checks(const FixtureEntry& f) {
  std::vector<Check> out;
  auto near = [&](const std::string& name, double v, double ref, double tol) {
    out.push_back({f.name, name, v, ref, tol, std::abs(v - ref) <= tol});
  };
  auto rel = [&](const std::string& name, double v, double ref, double tol) {
    out.push_back({f.name, name, v, ref, tol, std::abs(v - ref) <= tol * std::abs(ref)});
  };
  auto at_most = [&](const std::string& name, double v, double bound) {
    out.push_back({f.name, name, v, bound, 0.0, v <= bound});
  };
  for (double avg : {1.0, 10.0}) {
    const auto m = f.model.with_avg_snr(avg);
    const std::string at = "@avg=" + num(avg);
    const double mass = normalization_mass(m);
    near("mgf(0)=mass" + at, mgf(m, 0.0), mass, 1e-14);
    for (double s : {0.1, 1.0, 10.0})
      rel("mgf_vs_quadrature(s=" + num(s) + ")" + at, mgf(m, s),
          mog_expectation(m, [&](double x) { return std::exp(-s * avg * x * x); }), 1e-8);
    double increase = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 50; ++k) increase = std::max(increase, mgf(m, 2.0 * k) - mgf(m, 2.0 * (k - 1)));
    at_most("mgf_max_increase" + at, increase, 0.0);
    for (int n = 1; n <= 2; ++n)
      rel("moment_vs_mgf(n=" + std::to_string(n) + ")" + at, raw_moment(m, n), raw_moment_via_mgf(m, n), 1e-12);
    // The closed-form moments integrate each Gaussian over the whole line; the
    // half-line moment differs by the negative tail, which is checked separately.
    for (int n = 1; n <= 4; ++n) {
      auto power = [&](double x) { return std::pow(avg * x * x, n); };
      const std::string tag = "(n=" + std::to_string(n) + ")" + at;
      const double closed = raw_moment(m, n);
      const double full = full_line_expectation(m, power);
      const double half = mog_expectation(m, power);
      rel("moment_vs_full_line_quadrature" + tag, closed, full, 1e-10);
      at_most("moment_negative_tail_share" + tag, (closed - half) / closed, 1e-5);
    }
    const double m1 = raw_moment(m, 1);
    near("af_vs_moments" + at, amount_of_fading(m), (raw_moment(m, 2) - m1 * m1) / (m1 * m1), 1e-12);
    near("outage(0)" + at, outage_probability(m, 0.0), 0.0, 1e-15);
    near("outage(inf)" + at, outage_probability(m, 1e9 * avg), mass, 1e-9);
    double drop = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 1000; ++k)
      drop = std::max(drop, outage_probability(m, 0.02 * (k - 1) * avg) - outage_probability(m, 0.02 * k * avg));
    at_most("outage_max_decrease" + at, drop, 0.0);
    const std::vector<MoGModel> one{m};
    const std::vector<MoGModel> two{m, m};
    at_most("ser_bpsk_minus_bfsk" + at, ser(one, SerScheme::bpsk()) - ser(one, SerScheme::bfsk()), 0.0);
    for (const auto& s : {SerScheme::bpsk(), SerScheme::mpsk(8), SerScheme::mqam(16)}) {
      nlohmann::json sj = s;
      near("ser_64_vs_128_nodes(" + sj["kind"].get<std::string>() + ")" + at, ser(two, s, 64), ser(two, s, 128), 1e-10);
    }
  }
  const double mass = normalization_mass(f.model);
  at_most("negative_mass", 1.0 - mass, 0.005);
  const auto m5 = f.model.with_avg_snr(std::pow(10.0, 0.5));
  DetectorSpec open;
  open.u = 3;
  open.lambda = 1e-12;
  int p_open = 40;
  while (pd_truncation_bound(m5, open, p_open) > 1e-8 && p_open < 2000) p_open *= 2;
  near("pd_series(lambda->0,p=" + std::to_string(p_open) + ")", avg_pd_series(m5, open, p_open), mass, 1e-6);
  DetectorSpec det;
  det.u = 3;
  det.target_pf = 0.1;
  double pd_drop = -std::numeric_limits<double>::infinity();
  for (int p = 1; p <= 20; ++p) pd_drop = std::max(pd_drop, avg_pd_series(m5, det, p - 1) - avg_pd_series(m5, det, p));
  at_most("pd_series_max_decrease", pd_drop, 0.0);
  const double ref = avg_pd_quadrature(m5, det);
  for (int p : {4, 8, 12, 40})
    at_most("pd_residual_minus_bound(p=" + std::to_string(p) + ")",
            std::abs(ref - avg_pd_series(m5, det, p)) - pd_truncation_bound(m5, det, p), 1e-9);
  at_most("pd_bound_decrease(p=12->40)", pd_truncation_bound(m5, det, 40) - pd_truncation_bound(m5, det, 12), 0.0);
  return out;
}

Artifacts job_validate(const JobConfig& job, bool& all_pass) {
  std::string csv = "fixture,check,value,reference,tolerance,pass\n";
  all_pass = true;
  for (const auto& f : load_fixture_index(job.fixture_dir)) {
    if (job.fixture && f.name != *job.fixture) continue;
    for (const auto& c : validation_checks(f)) {
      all_pass = all_pass && c.pass;
      csv += c.fixture + "," + c.name + "," + num(c.value) + "," + num(c.reference) + "," + num(c.tolerance) + "," +
             (c.pass ? "pass" : "FAIL") + "\n";
    }
  }
  return {{{job.output.empty() ? "validate.csv" : job.output, csv}}};
}

}  // namespace

void JobConfig::validate() const {
  if (!kCommands.count(command)) throw ConfigError("unknown command '" + command + "'");
  const bool needs_channel = command == "fit" || command == "select";
  if (needs_channel && !channel) throw ConfigError(command + ": 'channel' is required");
  if ((command == "eval" || command == "simulate" || command == "roc") && !model && !fixture && !channel)
    throw ConfigError(command + ": one of 'model', 'fixture' or 'channel' is required");
  if (model && fixture) throw ConfigError("give either 'model' or 'fixture', not both");
  if ((command == "eval" || command == "simulate") && snr_db.empty()) throw ConfigError(command + ": 'snr_db' is required");
  if (command == "roc") {
    if (pf.empty()) throw ConfigError("roc: 'pf' is required");
    if (!detector) throw ConfigError("roc: 'detector' is required (its u is used)");
    for (double p : pf)
      if (!(p > 0.0 && p < 1.0)) throw ConfigError("roc: pf values must lie in (0, 1)");
  }
  if (samples < 1000) throw ConfigError("samples must be >= 1000");
  if (components < 1 || components > 32) throw ConfigError("components must lie in [1, 32]");
  if (c_range.first < 1 || c_range.second < c_range.first || c_range.second > 32)
    throw ConfigError("c_range must satisfy 1 <= c_min <= c_max <= 32");
  if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
  if (truncation < 0) throw ConfigError("truncation must be >= 0");
  if (sim.n_samples < 1000) throw ConfigError("sim.n_samples must be >= 1000");
  if (sim.chunk_size < 1) throw ConfigError("sim.chunk_size must be >= 1");
  for (const auto& r : ser)
    if (r.branches < 1) throw ConfigError("ser branches must be >= 1");
  check_grid(snr_db, "snr_db");
  check_grid(pf, "pf");
  if (!output.empty() && std::filesystem::path(output).filename() != output)
    throw ConfigError("output must be a bare file name");
}

JobConfig parse_job(const nlohmann::json& j, const std::string& default_fixture_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  JobConfig job;
  job.fixture_dir = default_fixture_dir;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") job.command = v.get<std::string>();
      else if (key == "channel") job.channel = v.get<ChannelSpec>();
      else if (key == "model") {
        if (v.is_string()) job.model = mog_model_from_json(read_json_file(v.get<std::string>()));
        else job.model = mog_model_from_json(v);
      } else if (key == "fixture") job.fixture = v.get<std::string>();
      else if (key == "fixture_dir") job.fixture_dir = v.get<std::string>();
      else if (key == "fit") job.fit = v.get<FitConfig>();
      else if (key == "samples") job.samples = count_value(v, "samples");
      else if (key == "components") job.components = static_cast<int>(count_value(v, "components"));
      else if (key == "c_range") {
        if (!v.is_array() || v.size() != 2) throw ConfigError("c_range must be [c_min, c_max]");
        job.c_range = {static_cast<int>(count_value(v[0], "c_range")), static_cast<int>(count_value(v[1], "c_range"))};
      } else if (key == "detector") {
        DetectorSpec d;
        for (const auto& [dk, dv] : v.items()) {
          if (dk == "u") d.u = static_cast<int>(count_value(dv, "detector.u"));
          else if (dk == "lambda") d.lambda = dv.get<double>();
          else if (dk == "target_pf") d.target_pf = dv.get<double>();
          else throw ConfigError("detector: unknown key '" + dk + "'");
        }
        // roc only needs u; the others need a complete detector
        if (d.lambda || d.target_pf) d.validate();
        job.detector = d;
      } else if (key == "snr_db") job.snr_db = number_list(v, "snr_db");
      else if (key == "pf") job.pf = number_list(v, "pf");
      else if (key == "outage_threshold_db") job.outage_threshold_db = v.get<double>();
      else if (key == "bandwidth") job.bandwidth = v.get<double>();
      else if (key == "ser") {
        if (!v.is_array()) throw ConfigError("ser must be an array");
        for (const auto& item : v) {
          SerRequest r;
          for (const auto& [sk, sv] : item.items()) {
            if (sk == "scheme") r.scheme = sv.get<SerScheme>();
            else if (sk == "branches") r.branches = static_cast<int>(count_value(sv, "ser.branches"));
            else throw ConfigError("ser: unknown key '" + sk + "'");
          }
          job.ser.push_back(r);
        }
      } else if (key == "truncation") {
        if (!v.is_number_integer()) throw ConfigError("truncation must be an integer");
        job.truncation = v.get<int>();
      } else if (key == "sim") {
        for (const auto& [sk, sv] : v.items()) {
          if (sk == "n_samples") job.sim.n_samples = count_value(sv, "sim.n_samples");
          else if (sk == "chunk_size") job.sim.chunk_size = count_value(sv, "sim.chunk_size");
          else if (sk == "source") {
            const auto s = sv.get<std::string>();
            if (s != "channel" && s != "model") throw ConfigError("sim.source must be \"channel\" or \"model\"");
            job.sim.from_model = s == "model";
          } else throw ConfigError("sim: unknown key '" + sk + "'");
        }
      } else if (key == "output") job.output = v.get<std::string>();
      else throw ConfigError("unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  return job;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

JobOutcome run_job(const JobConfig& job, const std::filesystem::path& out_dir) {
  job.validate();
  Artifacts art;
  bool pass = true;
  if (job.command == "fit") art = job_fit(job);
  else if (job.command == "select") art = job_select(job);
  else if (job.command == "eval") art = job_eval(job);
  else if (job.command == "simulate") art = job_simulate(job);
  else if (job.command == "roc") art = job_roc(job);
  else art = job_validate(job, pass);
  std::filesystem::create_directories(out_dir);
  JobOutcome outcome;
  for (const auto& [name, content] : art.files) {
    write_atomic(out_dir / name, content);
    outcome.written.push_back(out_dir / name);
  }
  if (!pass) {
    outcome.exit_code = kValidationFailure;
    outcome.message = "validation failed; see " + outcome.written.front().string();
  }
  return outcome;
}

int run_command(const std::string& command, const std::filesystem::path& config_path,
                std::optional<std::uint64_t> seed, const std::filesystem::path& out_dir, std::ostream& err) {
  JobConfig job;
  try {
    job = parse_job(read_json_file(config_path), MOGFADE_DEFAULT_FIXTURE_DIR);
    if (!job.command.empty() && job.command != command)
      throw ConfigError("config is for '" + job.command + "' but the command is '" + command + "'");
    job.command = command;
    if (seed) job.fit.seed = *seed;
    job.validate();
  } catch (const ConfigError& e) {
    err << "mogfade: config error: " << e.what() << "\n";
    return kParseError;
  }
  try {
    const auto outcome = run_job(job, out_dir);
    if (!outcome.message.empty()) err << "mogfade: " << outcome.message << "\n";
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    err << "mogfade: config error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "mogfade: numeric failure: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace mogfade::cli
