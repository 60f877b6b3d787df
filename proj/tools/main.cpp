#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "jobs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mixture-of-Gaussians fading models: fit, select, evaluate, simulate, roc, validate"};
  app.require_subcommand(1);
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  for (const char* name : {"fit", "select", "eval", "simulate", "roc", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON job file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "overrides fit.seed");
    sub->add_option("--out", out, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mogfade::cli::kParseError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return mogfade::cli::run_command(command, config, seed, out, std::cerr);
}
