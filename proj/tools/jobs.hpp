#pragma once

// Batch jobs behind the `mogfade` command line tool. Each job reads one JSON
// config, computes, and writes its artifacts atomically into an output
// directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mogfade/metrics.hpp"
#include "mogfade/mog.hpp"

namespace mogfade::cli {

enum ExitCode : int { kOk = 0, kParseError = 2, kNumericError = 3, kValidationFailure = 4 };

/// Malformed or inconsistent configuration (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SerRequest {
  SerScheme scheme;
  int branches = 1;
};

struct SimSettings {
  std::size_t n_samples = 1'000'000;
  std::size_t chunk_size = 1 << 16;
  bool from_model = false;  // draw from the MoG model instead of the exact channel
};

struct JobConfig {
  std::string command;
  std::optional<ChannelSpec> channel;
  std::optional<MoGModel> model;
  std::optional<std::string> fixture;
  std::string fixture_dir;
  FitConfig fit;
  std::size_t samples = 200'000;
  int components = 4;
  std::pair<int, int> c_range{1, 8};
  std::optional<DetectorSpec> detector;
  std::vector<double> snr_db;
  std::vector<double> pf;
  double outage_threshold_db = 0.0;
  double bandwidth = 1.0;
  std::vector<SerRequest> ser;
  int truncation = kDefaultTruncation;
  SimSettings sim;
  std::string output;  // file name inside the output directory

  /// Checks that the fields the command needs are present and well formed.
  void validate() const;
};

/// Strict parse: unknown keys, wrong types and invalid values raise ConfigError.
JobConfig parse_job(const nlohmann::json& j, const std::string& default_fixture_dir);

struct JobOutcome {
  int exit_code = kOk;
  std::vector<std::filesystem::path> written;
  std::string message;  // human-readable summary for stderr
};

/// Runs a parsed job. Numeric failures propagate as exceptions.
JobOutcome run_job(const JobConfig& job, const std::filesystem::path& out_dir);

/// Full command line entry: parse, override, run; maps failures to exit codes.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                std::optional<std::uint64_t> seed, const std::filesystem::path& out_dir, std::ostream& err);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mogfade::cli
