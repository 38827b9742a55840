// Copyright 2026 The gpilc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line harness: runs the iterative learning experiment against the
// simulated two-link arm and exports plot-ready CSV logs.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpilc/config.hpp"
#include "gpilc/errors.hpp"
#include "gpilc/runner.hpp"
#include "gpilc/scenarios.hpp"
#include "gpilc/trajectory.hpp"

namespace {

struct CliOptions {
  std::string scenario;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_dir = "out";
  bool verbose = false;
};

gpilc::AppConfig effective_config(const CliOptions& options) {
  gpilc::AppConfig config;
  if (!options.config_path.empty()) {
    config = gpilc::load_config(options.config_path);
  }
  if (!options.scenario.empty()) {
    config.scenario = options.scenario;
  }
  if (options.trials) {
    config.learn.max_trials = *options.trials;
  }
  if (options.seed) {
    config.learn.seed = *options.seed;
  }
  config.validate();
  return config;
}

std::vector<gpilc::ScenarioId> selected_scenarios(const std::string& name) {
  if (name == "all") {
    return {gpilc::ScenarioId::s1_point_to_point,
            gpilc::ScenarioId::s2_sinusoid,
            gpilc::ScenarioId::s3_multiharmonic};
  }
  return {gpilc::parse_scenario_id(name)};
}

int run_command(const CliOptions& options) {
  const gpilc::AppConfig config = effective_config(options);
  bool any_failed = false;
  for (const gpilc::ScenarioId id : selected_scenarios(config.scenario)) {
    const gpilc::ScenarioSpec spec = gpilc::build_reference(
        id, config.num_samples, config.dt, config.initial_pose);
    const std::filesystem::path scenario_dir =
        std::filesystem::path(options.out_dir) / gpilc::short_name(id);
    const gpilc::RunReport report = gpilc::run_scenario(
        spec, config, scenario_dir,
        options.verbose
            ? gpilc::ProgressCallback([&](int trial, double epsilon) {
                std::printf("%s trial %d: epsilon = %.4f\n",
                            gpilc::short_name(id).c_str(), trial, epsilon);
                std::fflush(stdout);
              })
            : gpilc::ProgressCallback{});
    if (report.failed) {
      any_failed = true;
      std::fprintf(stderr, "%s: FAILED after %zu trials: %s\n",
                   report.scenario.c_str(), report.epsilons.size(),
                   report.error_message.c_str());
    } else {
      std::printf("%s: %zu trials, final epsilon %.4f (%.1f s) -> %s\n",
                  report.scenario.c_str(), report.epsilons.size(),
                  report.epsilons.empty() ? 0.0 : report.epsilons.back(),
                  report.wall_seconds, scenario_dir.string().c_str());
    }
  }
  return any_failed ? 2 : 0;
}

int reference_command(const CliOptions& options) {
  const gpilc::AppConfig config = effective_config(options);
  for (const gpilc::ScenarioId id : selected_scenarios(config.scenario)) {
    const gpilc::ScenarioSpec spec = gpilc::build_reference(
        id, config.num_samples, config.dt, config.initial_pose);
    const std::filesystem::path out(options.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    const std::filesystem::path path =
        out / ("reference_" + gpilc::short_name(id) + ".csv");
    gpilc::write_csv_file(spec.reference, path);
    std::printf("%s\n", path.string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative learning of feedforward input trajectories on a "
               "simulated two-link arm"};
  app.require_subcommand(1);

  CliOptions options;

  CLI::App* run = app.add_subcommand(
      "run", "Run the learning experiment and export CSV logs");
  run->add_option("--scenario", options.scenario,
                  "Reference scenario: s1, s2, s3, or all")
      ->required();
  run->add_option("--trials", options.trials, "Trial budget (default 15)");
  run->add_option("--seed", options.seed, "Random seed (default 42)");
  run->add_option("--config", options.config_path, "Config file path")
      ->check(CLI::ExistingFile);
  run->add_option("--out", options.out_dir,
                  "Output directory (default ./out)");
  run->add_flag("--verbose", options.verbose,
                "Print per-trial progress while running");

  CLI::App* reference = app.add_subcommand(
      "reference", "Write the reference trajectory CSV without running");
  reference
      ->add_option("--scenario", options.scenario,
                   "Reference scenario: s1, s2, s3, or all")
      ->required();
  reference->add_option("--config", options.config_path, "Config file path")
      ->check(CLI::ExistingFile);
  reference->add_option("--out", options.out_dir,
                        "Output directory (default ./out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      return run_command(options);
    }
    return reference_command(options);
  } catch (const gpilc::ConfigError& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  } catch (const gpilc::Error& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 2;
  }
}
