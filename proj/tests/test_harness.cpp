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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpilc/config.hpp"
#include "gpilc/errors.hpp"
#include "gpilc/runner.hpp"
#include "gpilc/scenarios.hpp"
#include "gpilc/trajectory.hpp"

namespace {

using gpilc::AppConfig;
using gpilc::ConfigError;
using gpilc::LiftedTrajectory;
using gpilc::RunReport;
using gpilc::ScenarioId;
using gpilc::ScenarioSpec;
using gpilc::StructuralError;

constexpr double kPi = 3.14159265358979323846;

struct Horizon {
  int num_samples;
  double dt;
};

const std::vector<Horizon>& horizon_grid() {
  static const std::vector<Horizon> grid = {
      {200, 0.02}, {64, 0.05}, {16, 0.1}, {333, 0.01}};
  return grid;
}

const std::vector<ScenarioId>& all_scenarios() {
  static const std::vector<ScenarioId> ids = {
      ScenarioId::s1_point_to_point, ScenarioId::s2_sinusoid,
      ScenarioId::s3_multiharmonic};
  return ids;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  REQUIRE(static_cast<bool>(stream));
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "gpilc_harness_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("references start at the rest pose with flat boundaries") {
  for (const Horizon& h : horizon_grid()) {
    for (ScenarioId id : all_scenarios()) {
      CAPTURE(h.num_samples);
      CAPTURE(h.dt);
      const Eigen::Vector2d pose(0.15, -0.4);
      const ScenarioSpec spec =
          gpilc::build_reference(id, h.num_samples, h.dt, pose);

      CHECK(spec.id == id);
      CHECK(spec.num_samples == h.num_samples);
      CHECK(spec.dt == h.dt);
      CHECK(spec.initial_pose == pose);
      CHECK(spec.reference.num_samples() == h.num_samples);
      CHECK(spec.reference.dim_per_sample() == 2);
      CHECK(spec.reference.sample_period() == h.dt);

      const Eigen::VectorXd first = spec.reference.sample(0);
      const Eigen::VectorXd second = spec.reference.sample(1);
      const Eigen::VectorXd last =
          spec.reference.sample(h.num_samples - 1);
      const Eigen::VectorXd second_last =
          spec.reference.sample(h.num_samples - 2);
      // Starting pose and boundary first differences are exact, not merely
      // close: the learning loop relies on the first trial starting with
      // zero position error and zero commanded velocity.
      CHECK(first[0] == pose[0]);
      CHECK(first[1] == pose[1]);
      CHECK((second - first).cwiseAbs().maxCoeff() == 0.0);
      CHECK((last - second_last).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("windowed references pin two samples at each end to the pose") {
  for (const Horizon& h : horizon_grid()) {
    for (ScenarioId id : {ScenarioId::s2_sinusoid,
                          ScenarioId::s3_multiharmonic}) {
      const Eigen::Vector2d pose = gpilc::default_initial_pose();
      const ScenarioSpec spec =
          gpilc::build_reference(id, h.num_samples, h.dt, pose);
      for (int n : {0, 1, h.num_samples - 2, h.num_samples - 1}) {
        const Eigen::VectorXd sample = spec.reference.sample(n);
        CHECK(sample[0] == pose[0]);
        CHECK(sample[1] == pose[1]);
      }
    }
  }
}

TEST_CASE("point-to-point reference moves by the commanded joint deltas") {
  for (const Horizon& h : horizon_grid()) {
    const Eigen::Vector2d pose = gpilc::default_initial_pose();
    const ScenarioSpec spec = gpilc::build_reference(
        ScenarioId::s1_point_to_point, h.num_samples, h.dt, pose);
    const double total = h.num_samples * h.dt;

    const Eigen::VectorXd last = spec.reference.sample(h.num_samples - 1);
    CHECK(last[0] - pose[0] == doctest::Approx(0.5 * kPi).epsilon(1e-12));
    CHECK(last[1] - pose[1] == doctest::Approx(-kPi / 3.0).epsilon(1e-12));

    // Dwell segments: exactly the pose before the motion starts and exactly
    // the target after it ends (the interpolation coefficient clamps).
    for (int n = 0; n < h.num_samples; ++n) {
      const double t = n * h.dt;
      const Eigen::VectorXd sample = spec.reference.sample(n);
      if (t <= 0.2 * total) {
        CHECK(sample[0] == pose[0]);
        CHECK(sample[1] == pose[1]);
      } else if (t >= 0.8 * total) {
        CHECK(sample[0] == pose[0] + 0.5 * kPi);
        CHECK(sample[1] == pose[1] + -kPi / 3.0 * 1.0);
      }
    }
  }
}

TEST_CASE("sinusoid reference matches the commanded tones on the plateau") {
  for (const Horizon& h : {Horizon{200, 0.02}, Horizon{120, 0.025}}) {
    const Eigen::Vector2d pose = gpilc::default_initial_pose();
    const ScenarioSpec spec = gpilc::build_reference(
        ScenarioId::s2_sinusoid, h.num_samples, h.dt, pose);
    const double total = h.num_samples * h.dt;
    int checked = 0;
    for (int n = 0; n < h.num_samples; ++n) {
      const double t = n * h.dt;
      if (t < 0.3 * total || t > 0.7 * total) {
        continue;  // inside the amplitude ramps
      }
      const Eigen::VectorXd sample = spec.reference.sample(n);
      const double alpha = pose[0] + 0.8 * std::sin(2.0 * kPi * 0.5 * t);
      const double beta = pose[1] + 0.6 * std::sin(2.0 * kPi * 0.75 * t);
      CHECK(std::abs(sample[0] - alpha) < 1e-12);
      CHECK(std::abs(sample[1] - beta) < 1e-12);
      ++checked;
    }
    CHECK(checked > h.num_samples / 3);
  }
}

TEST_CASE("two-harmonic reference commands the same waveform on both joints") {
  for (const Horizon& h : horizon_grid()) {
    const Eigen::Vector2d pose(0.3, 0.9);
    const ScenarioSpec spec = gpilc::build_reference(
        ScenarioId::s3_multiharmonic, h.num_samples, h.dt, pose);
    const Eigen::VectorXd alpha = gpilc::variable_block(spec.reference, 0);
    const Eigen::VectorXd beta = gpilc::variable_block(spec.reference, 1);
    const Eigen::VectorXd deviation_alpha =
        alpha.array() - pose[0];
    const Eigen::VectorXd deviation_beta = beta.array() - pose[1];
    CHECK((deviation_alpha - deviation_beta).cwiseAbs().maxCoeff() < 1e-12);
    // The waveform actually moves on the plateau.
    CHECK(deviation_alpha.cwiseAbs().maxCoeff() > 0.3);

    const double total = h.num_samples * h.dt;
    for (int n = 0; n < h.num_samples; ++n) {
      const double t = n * h.dt;
      if (t < 0.3 * total || t > 0.7 * total) {
        continue;
      }
      const double wave = 0.6 * std::sin(2.0 * kPi * 0.4 * t) +
                          0.25 * std::sin(2.0 * kPi * 1.2 * t);
      CHECK(std::abs(deviation_alpha[n] - wave) < 1e-12);
    }
  }
}

TEST_CASE("reference construction rejects short horizons and bad periods") {
  CHECK_THROWS_AS(gpilc::build_reference(ScenarioId::s1_point_to_point, 15),
                  StructuralError);
  CHECK_THROWS_AS(gpilc::build_reference(ScenarioId::s2_sinusoid, 0),
                  StructuralError);
  CHECK_THROWS_AS(
      gpilc::build_reference(ScenarioId::s1_point_to_point, 200, 0.0),
      StructuralError);
  CHECK_THROWS_AS(
      gpilc::build_reference(ScenarioId::s1_point_to_point, 200, -0.02),
      StructuralError);
  CHECK_THROWS_AS(gpilc::build_reference(ScenarioId::s3_multiharmonic, 200,
                                         std::nan("")),
                  StructuralError);
}

TEST_CASE("scenario names round-trip between short and long forms") {
  for (ScenarioId id : all_scenarios()) {
    CHECK(gpilc::parse_scenario_id(gpilc::short_name(id)) == id);
    CHECK(gpilc::parse_scenario_id(gpilc::to_string(id)) == id);
  }
  CHECK(gpilc::short_name(ScenarioId::s1_point_to_point) == "s1");
  CHECK(gpilc::short_name(ScenarioId::s2_sinusoid) == "s2");
  CHECK(gpilc::short_name(ScenarioId::s3_multiharmonic) == "s3");
  CHECK(gpilc::to_string(ScenarioId::s1_point_to_point) ==
        "s1_point_to_point");
  CHECK_THROWS_AS(gpilc::parse_scenario_id("s4"), ConfigError);
  CHECK_THROWS_AS(gpilc::parse_scenario_id(""), ConfigError);
  CHECK_THROWS_AS(gpilc::parse_scenario_id("S1"), ConfigError);
}

TEST_CASE("default rest pose bends the elbow away from the singularity") {
  const Eigen::Vector2d pose = gpilc::default_initial_pose();
  CHECK(pose[0] == 0.0);
  CHECK(pose[1] == kPi / 6.0);
  // The config default must agree bit-for-bit so an empty config reproduces
  // the built-in experiment.
  CHECK(AppConfig{}.initial_pose[0] == pose[0]);
  CHECK(AppConfig{}.initial_pose[1] == pose[1]);
}

TEST_CASE("an empty config stream yields the documented defaults") {
  std::istringstream empty;
  const AppConfig parsed = gpilc::parse_config(empty);
  const AppConfig defaults;

  CHECK(parsed.scenario == defaults.scenario);
  CHECK(parsed.num_samples == defaults.num_samples);
  CHECK(parsed.dt == defaults.dt);
  CHECK(parsed.initial_pose == defaults.initial_pose);
  CHECK(parsed.plant_noise_std == defaults.plant_noise_std);

  CHECK(parsed.learn.window_size == defaults.learn.window_size);
  CHECK(parsed.learn.max_trials == defaults.learn.max_trials);
  CHECK(!parsed.learn.input_variance.has_value());
  CHECK(parsed.learn.spectral_threshold == defaults.learn.spectral_threshold);
  CHECK(parsed.learn.epsilon_stop == defaults.learn.epsilon_stop);
  CHECK(parsed.learn.noise_level == defaults.learn.noise_level);
  CHECK(parsed.learn.effort_scale == defaults.learn.effort_scale);
  CHECK(parsed.learn.effort_scale_initial ==
        defaults.learn.effort_scale_initial);
  CHECK(parsed.learn.effort_decay == defaults.learn.effort_decay);
  CHECK(parsed.learn.seed == defaults.learn.seed);
  CHECK(parsed.learn.train.num_restarts == defaults.learn.train.num_restarts);

  CHECK(parsed.plant.l1 == defaults.plant.l1);
  CHECK(parsed.plant.l2 == defaults.plant.l2);
  CHECK(parsed.plant.m1 == defaults.plant.m1);
  CHECK(parsed.plant.m2 == defaults.plant.m2);
  CHECK(parsed.plant.I1 == defaults.plant.I1);
  CHECK(parsed.plant.I2 == defaults.plant.I2);
  CHECK(parsed.plant.r1 == defaults.plant.r1);
  CHECK(parsed.plant.r2 == defaults.plant.r2);
  CHECK(parsed.plant.d1 == defaults.plant.d1);
  CHECK(parsed.plant.d2 == defaults.plant.d2);
  CHECK(parsed.plant.torque_limit == defaults.plant.torque_limit);
}

TEST_CASE("config keys set every documented field") {
  std::istringstream text(
      "seed = 17\n"
      "learn.window_size = 4\n"
      "learn.max_trials = 21\n"
      "learn.input_variance = 0.125\n"
      "learn.spectral_threshold = 0.05\n"
      "learn.epsilon_stop = 0.002\n"
      "learn.noise_level = 0.01\n"
      "learn.effort_scale = 0.5\n"
      "learn.effort_scale_initial = 0.75\n"
      "learn.effort_decay = 0.25\n"
      "learn.gp_restarts = 7\n"
      "plant.l1 = 0.31\n"
      "plant.l2 = 0.32\n"
      "plant.m1 = 1.1\n"
      "plant.m2 = 1.2\n"
      "plant.I1 = 0.008\n"
      "plant.I2 = 0.009\n"
      "plant.r1 = 0.151\n"
      "plant.r2 = 0.152\n"
      "plant.d1 = 0.051\n"
      "plant.d2 = 0.052\n"
      "plant.torque_limit = 6.5\n"
      "plant.noise_std = 0.003\n"
      "scenario.id = s2\n"
      "scenario.num_samples = 128\n"
      "scenario.dt = 0.025\n"
      "scenario.alpha0 = 0.2\n"
      "scenario.beta0 = 0.7\n");
  const AppConfig config = gpilc::parse_config(text);

  CHECK(config.learn.seed == 17);
  CHECK(config.learn.window_size == 4);
  CHECK(config.learn.max_trials == 21);
  REQUIRE(config.learn.input_variance.has_value());
  CHECK(*config.learn.input_variance == 0.125);
  CHECK(config.learn.spectral_threshold == 0.05);
  CHECK(config.learn.epsilon_stop == 0.002);
  CHECK(config.learn.noise_level == 0.01);
  CHECK(config.learn.effort_scale == 0.5);
  CHECK(config.learn.effort_scale_initial == 0.75);
  CHECK(config.learn.effort_decay == 0.25);
  CHECK(config.learn.train.num_restarts == 7);
  CHECK(config.plant.l1 == 0.31);
  CHECK(config.plant.l2 == 0.32);
  CHECK(config.plant.m1 == 1.1);
  CHECK(config.plant.m2 == 1.2);
  CHECK(config.plant.I1 == 0.008);
  CHECK(config.plant.I2 == 0.009);
  CHECK(config.plant.r1 == 0.151);
  CHECK(config.plant.r2 == 0.152);
  CHECK(config.plant.d1 == 0.051);
  CHECK(config.plant.d2 == 0.052);
  CHECK(config.plant.torque_limit == 6.5);
  CHECK(config.plant_noise_std == 0.003);
  CHECK(config.scenario == "s2");
  CHECK(config.num_samples == 128);
  CHECK(config.dt == 0.025);
  CHECK(config.initial_pose[0] == 0.2);
  CHECK(config.initial_pose[1] == 0.7);
}

TEST_CASE("the seed key is an alias for learn.seed") {
  std::istringstream bare("seed = 7\n");
  CHECK(gpilc::parse_config(bare).learn.seed == 7);
  std::istringstream namespaced("learn.seed = 8\n");
  CHECK(gpilc::parse_config(namespaced).learn.seed == 8);
}

TEST_CASE("input variance can be reset to automatic calibration") {
  std::istringstream text(
      "learn.input_variance = 0.25\n"
      "learn.input_variance = auto\n");
  CHECK(!gpilc::parse_config(text).learn.input_variance.has_value());
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
  std::istringstream text(
      "# a full-line comment\n"
      "\n"
      "   \t \n"
      "seed = 9   # trailing comment\n"
      "   plant.m1   =   2.5  \n");
  const AppConfig config = gpilc::parse_config(text);
  CHECK(config.learn.seed == 9);
  CHECK(config.plant.m1 == 2.5);
}

TEST_CASE("config errors name the offending line and key") {
  {
    std::istringstream text("seed = 1\n\nsedd = 3\n");
    CHECK_THROWS_WITH_AS(gpilc::parse_config(text),
                         "config line 3: unknown key 'sedd'", ConfigError);
  }
  {
    std::istringstream text("learn.max_trials = banana\n");
    CHECK_THROWS_WITH_AS(gpilc::parse_config(text),
                         "config line 1: expected an integer, got 'banana'",
                         ConfigError);
  }
  {
    std::istringstream text("plant.m1 = heavy\n");
    CHECK_THROWS_WITH_AS(gpilc::parse_config(text),
                         "config line 1: expected a number, got 'heavy'",
                         ConfigError);
  }
  {
    std::istringstream text("just some words\n");
    CHECK_THROWS_AS(gpilc::parse_config(text), ConfigError);
  }
  {
    std::istringstream text("seed =\n");
    CHECK_THROWS_AS(gpilc::parse_config(text), ConfigError);
  }
  {
    std::istringstream text("scenario.id = s9\n");
    CHECK_THROWS_AS(gpilc::parse_config(text), ConfigError);
  }
}

TEST_CASE("parsing validates the assembled configuration") {
  std::istringstream text("scenario.num_samples = 8\n");
  CHECK_THROWS_AS(gpilc::parse_config(text), ConfigError);
  std::istringstream negative_dt("scenario.dt = -0.5\n");
  CHECK_THROWS_AS(gpilc::parse_config(negative_dt), ConfigError);
}

TEST_CASE("load_config reports missing files with the path") {
  const std::filesystem::path missing =
      std::filesystem::temp_directory_path() / "gpilc_no_such_config.txt";
  std::filesystem::remove(missing);
  CHECK_THROWS_AS(gpilc::load_config(missing), ConfigError);
}

TEST_CASE("config validation rejects out-of-range fields") {
  {
    AppConfig config;
    config.num_samples = 8;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  {
    AppConfig config;
    config.dt = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  {
    AppConfig config;
    config.plant_noise_std = -0.1;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  {
    AppConfig config;
    config.scenario = "zz";
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  {
    AppConfig config;
    config.initial_pose[1] = std::nan("");
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
  {
    AppConfig config;
    config.scenario = "all";
    CHECK_NOTHROW(config.validate());
  }
}

TEST_CASE("the experiment runner writes the full artifact set") {
  AppConfig config;
  config.num_samples = 64;
  config.dt = 0.02;
  config.learn.max_trials = 3;
  config.learn.input_variance = 4e-4;
  config.learn.train.num_restarts = 2;
  config.learn.seed = 42;
  const ScenarioSpec spec =
      gpilc::build_reference(ScenarioId::s1_point_to_point,
                             config.num_samples, config.dt,
                             config.initial_pose);

  const std::filesystem::path dir = fresh_dir("runner_a");
  std::vector<std::pair<int, double>> progress;
  const RunReport report = gpilc::run_scenario(
      spec, config, dir,
      [&](int trial, double epsilon) { progress.emplace_back(trial, epsilon); });

  CHECK(report.scenario == "s1");
  CHECK(!report.failed);
  CHECK(report.error_message.empty());
  CHECK(report.out_dir == dir);
  CHECK(report.input_variance == 4e-4);
  CHECK(report.calibration_probes == 0);
  CHECK(!report.cutoff_fallback);
  CHECK(report.cutoff_hz > 0.0);
  CHECK(report.wall_seconds > 0.0);

  const int trials = static_cast<int>(report.epsilons.size());
  REQUIRE(trials >= 2);
  CHECK(trials <= config.learn.max_trials);
  CHECK(report.epsilons.front() == 1.0);

  // The progress callback saw every trial in order with the same values.
  REQUIRE(progress.size() == report.epsilons.size());
  for (int j = 0; j < trials; ++j) {
    CHECK(progress[j].first == j + 1);
    CHECK(progress[j].second == report.epsilons[j]);
  }

  // One reference file, four files per trial, one epsilon file.
  CHECK(report.csv_paths.size() == 2 + 4 * static_cast<std::size_t>(trials));
  CHECK(std::filesystem::exists(dir / "reference.csv"));
  CHECK(std::filesystem::exists(dir / "epsilon.csv"));
  CHECK(std::filesystem::exists(dir / "report.txt"));
  for (int j = 1; j <= trials; ++j) {
    const std::string stem = "trial_" + std::to_string(j);
    CHECK(std::filesystem::exists(dir / (stem + "_input.csv")));
    CHECK(std::filesystem::exists(dir / (stem + "_states.csv")));
    CHECK(std::filesystem::exists(dir / (stem + "_output.csv")));
    CHECK(std::filesystem::exists(dir / ("taskspace_" + stem + ".csv")));
  }

  const std::string epsilon_text = read_file(dir / "epsilon.csv");
  CHECK(epsilon_text.rfind("trial,epsilon\n1,1\n", 0) == 0);
  const std::string report_text = read_file(dir / "report.txt");
  CHECK(report_text.find("scenario=s1\n") != std::string::npos);
  CHECK(report_text.find("failed=0\n") != std::string::npos);
  CHECK(report_text.find("effort_scale=5e-05\n") != std::string::npos);
  CHECK(report_text.find("effort_scale_initial=0.01\n") != std::string::npos);
  CHECK(report_text.find("effort_decay=0.05\n") != std::string::npos);
  CHECK(report_text.find("num_samples=64\n") != std::string::npos);
  CHECK(report_text.find("trials=" + std::to_string(trials) + "\n") !=
        std::string::npos);

  // Written trajectories round-trip through the CSV reader.
  const LiftedTrajectory reference =
      gpilc::read_csv_file(dir / "reference.csv", config.dt);
  CHECK(reference.num_samples() == config.num_samples);
  CHECK((reference.data() - spec.reference.data()).cwiseAbs().maxCoeff() <
        1e-14);

  // A second run with the same configuration is byte-identical.
  const std::filesystem::path dir_b = fresh_dir("runner_b");
  const RunReport report_b = gpilc::run_scenario(spec, config, dir_b);
  CHECK(report_b.epsilons == report.epsilons);
  CHECK(read_file(dir_b / "epsilon.csv") == epsilon_text);
  for (int j = 1; j <= trials; ++j) {
    const std::string name = "trial_" + std::to_string(j) + "_input.csv";
    CHECK(read_file(dir_b / name) == read_file(dir / name));
  }
}
