#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "jobs.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mogfade_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  int run(const std::string& command, const fs::path& config, const fs::path& out, const std::string& extra = "") {
    const std::string cmd = std::string(MOGFADE_CLI_PATH) + " " + command + " --config " + config.string() +
                            " --out " + out.string() + " " + extra + " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

std::size_t entries(const fs::path& p) {
  if (!fs::exists(p)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(p), fs::directory_iterator()));
}

}  // namespace

TEST_F(CliTest, FitWritesModelAndReport) {
  const auto cfg = write("fit.json", R"({
    "channel": {"kind": "NakagamiLognormal", "m": 2, "zeta_db": 1},
    "samples": 50000, "components": 4, "fit": {"restarts": 2, "seed": 3}})");
  ASSERT_EQ(run("fit", cfg, dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  const auto j = nlohmann::json::parse(slurp(dir_ / "out" / "fit.json"));
  EXPECT_EQ(j["model"]["components"].size(), 4u);
  EXPECT_TRUE(j["report"].contains("loglik_trace"));
  EXPECT_TRUE(j["report"]["converged"].get<bool>());
  EXPECT_LT(j["kl_divergence"].get<double>(), 0.01);
  const auto model = mogfade::mog_model_from_json(j["model"]);
  EXPECT_EQ(model.size(), 4u);
}

TEST_F(CliTest, ValidateFixturesPasses) {
  const auto cfg = write("validate.json", "{}");
  EXPECT_EQ(run("validate", cfg, dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  const auto csv = slurp(dir_ / "out" / "validate.csv");
  EXPECT_EQ(csv.find("FAIL"), std::string::npos);
  EXPECT_NE(csv.find("table8_kms_k1_mu3_m3"), std::string::npos);
}

TEST_F(CliTest, ValidationBreachExitsFour) {
  const auto fixtures = dir_ / "fixtures";
  fs::create_directories(fixtures);
  // a zero-mean component puts half the mass on the negative axis
  std::ofstream(fixtures / "bad.json") << R"({"avg_snr":1,"components":[{"w":1,"mu":0,"eta":1}]})";
  std::ofstream(fixtures / "index.json") << R"({"fixtures":[{"name":"bad","model":"bad.json"}]})";
  const auto cfg = write("validate.json", R"({"fixture_dir": ")" + fixtures.string() + R"("})");
  EXPECT_EQ(run("validate", cfg, dir_ / "out"), 4);
  EXPECT_NE(slurp(dir_ / "out" / "validate.csv").find("FAIL"), std::string::npos);
}

TEST_F(CliTest, MalformedJsonExitsTwoWithoutOutputs) {
  const auto cfg = write("broken.json", R"({"channel": {"kind": "Rayleigh"}, )");
  EXPECT_EQ(run("fit", cfg, dir_ / "out"), 2);
  EXPECT_EQ(entries(dir_ / "out"), 0u);
  EXPECT_FALSE(slurp(dir_ / "stderr.txt").empty());
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("fit", write("a.json", R"({"channel": {"kind": "Rayleigh"}, "colour": 1})"), dir_ / "out"), 2);
  EXPECT_EQ(run("fit", write("b.json", R"({"channel": {"kind": "KappaMu", "kappa": -1, "mu": 1}})"), dir_ / "out"), 2);
  EXPECT_EQ(run("eval", write("c.json", R"({"fixture": "table2_nl_m2_z1", "snr_db": [10, 5]})"), dir_ / "out"), 2);
  EXPECT_EQ(run("fit", write("d.json", R"({"command": "roc", "channel": {"kind": "Rayleigh"}})"), dir_ / "out"), 2);
  EXPECT_EQ(run("roc", write("e.json", R"({"fixture": "table2_nl_m2_z1", "pf": [0.1]})"), dir_ / "out"), 2);
  EXPECT_EQ(run("fit", dir_ / "missing.json", dir_ / "out"), 2);
  EXPECT_EQ(entries(dir_ / "out"), 0u);
}

TEST_F(CliTest, EvalIsByteIdenticalOnRerun) {
  const auto cfg = write("eval.json", R"({
    "fixture": "table5_km_k3_mu1", "snr_db": [0, 10, 20], "outage_threshold_db": 3,
    "ser": [{"scheme": {"kind": "bpsk"}, "branches": 1}, {"scheme": {"kind": "mqam", "M": 16}, "branches": 2}]})");
  ASSERT_EQ(run("eval", cfg, dir_ / "a"), 0) << slurp(dir_ / "stderr.txt");
  ASSERT_EQ(run("eval", cfg, dir_ / "a"), 0);
  ASSERT_EQ(run("eval", cfg, dir_ / "b"), 0);
  const auto a = slurp(dir_ / "a" / "eval.csv");
  EXPECT_EQ(a, slurp(dir_ / "b" / "eval.csv"));
  EXPECT_EQ(a.rfind("scenario,metric,abscissa,analytic,oracle,abs_error\n", 0), 0u);
  EXPECT_NE(a.find("ser:mqam16:L2"), std::string::npos);
  EXPECT_EQ(entries(dir_ / "a"), 1u);
}

TEST_F(CliTest, SimulateSeedOverride) {
  const auto cfg = write("sim.json", R"({
    "fixture": "table3_nl_m4_z1", "snr_db": [5], "sim": {"n_samples": 20000, "source": "model"},
    "ser": [{"scheme": {"kind": "bpsk"}}], "detector": {"u": 3, "target_pf": 0.1}})");
  ASSERT_EQ(run("simulate", cfg, dir_ / "a", "--seed 5"), 0) << slurp(dir_ / "stderr.txt");
  ASSERT_EQ(run("simulate", cfg, dir_ / "b", "--seed 5"), 0);
  ASSERT_EQ(run("simulate", cfg, dir_ / "c", "--seed 6"), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "simulate.csv"), slurp(dir_ / "b" / "simulate.csv"));
  EXPECT_NE(slurp(dir_ / "a" / "simulate.csv"), slurp(dir_ / "c" / "simulate.csv"));
}

TEST_F(CliTest, RocRows) {
  const auto cfg = write("roc.json", R"({
    "fixture": "table2_nl_m2_z1", "snr_db": [5], "pf": [0.01, 0.1, 0.5], "detector": {"u": 3}, "output": "fig9.csv"})");
  ASSERT_EQ(run("roc", cfg, dir_ / "out"), 0) << slurp(dir_ / "stderr.txt");
  std::istringstream in(slurp(dir_ / "out" / "fig9.csv"));
  std::string line;
  int pd_rows = 0;
  while (std::getline(in, line))
    if (line.find(",pd,") != std::string::npos) ++pd_rows;
  EXPECT_EQ(pd_rows, 3);
}

TEST(JobConfig, ParseDefaultsAndStrictness) {
  const auto job = mogfade::cli::parse_job(nlohmann::json::parse(R"({"fixture": "x", "snr_db": [1, 2]})"), "/tmp");
  EXPECT_EQ(job.fixture_dir, "/tmp");
  EXPECT_EQ(job.fit.restarts, 5);
  EXPECT_EQ(job.truncation, 12);
  EXPECT_THROW(mogfade::cli::parse_job(nlohmann::json::parse(R"({"sim": {"threads": 2}})"), "/tmp"),
               mogfade::cli::ConfigError);
  EXPECT_THROW(mogfade::cli::parse_job(nlohmann::json::parse(R"({"samples": "many"})"), "/tmp"),
               mogfade::cli::ConfigError);
  EXPECT_THROW(mogfade::cli::parse_job(nlohmann::json::parse("[1]"), "/tmp"), mogfade::cli::ConfigError);
}

TEST(WriteAtomic, ReplacesWithoutLeftovers) {
  const auto dir = fs::temp_directory_path() / "mogfade_atomic";
  fs::remove_all(dir);
  fs::create_directories(dir);
  mogfade::cli::write_atomic(dir / "f.txt", "one");
  mogfade::cli::write_atomic(dir / "f.txt", "two");
  std::ifstream in(dir / "f.txt");
  std::string s;
  in >> s;
  EXPECT_EQ(s, "two");
  EXPECT_EQ(entries(dir), 1u);
  fs::remove_all(dir);
}
