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

#include "gpilc/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>

#include "gpilc/errors.hpp"
#include "gpilc/ilc.hpp"
#include "gpilc/random.hpp"
#include "gpilc/scara.hpp"
#include "gpilc/trajectory.hpp"

namespace gpilc {
namespace {

// Seed-stream tag for the plant's measurement noise; the learning loop uses
// tags 1-3 internally.
constexpr std::uint64_t kStreamPlantNoise = 4;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream stream(path);
  if (!stream) {
    throw Error("cannot open output file '" + path.string() + "'");
  }
  return stream;
}

void write_taskspace_csv(const LiftedTrajectory& output,
                         const PlantParameters& params,
                         const std::filesystem::path& path) {
  std::ofstream stream = open_output(path);
  stream << "sample,x,y\n";
  char buffer[96];
  for (int n = 0; n < output.num_samples(); ++n) {
    const Eigen::Vector2d position =
        forward_kinematics(output.sample(n), params);
    std::snprintf(buffer, sizeof(buffer), "%d,%.15g,%.15g\n", n + 1,
                  position[0], position[1]);
    stream << buffer;
  }
  if (!stream) {
    throw Error("failed writing '" + path.string() + "'");
  }
}

void write_epsilon_csv(const std::vector<double>& epsilons,
                       const std::filesystem::path& path) {
  std::ofstream stream = open_output(path);
  stream << "trial,epsilon\n";
  char buffer[64];
  for (std::size_t j = 0; j < epsilons.size(); ++j) {
    std::snprintf(buffer, sizeof(buffer), "%zu,%.12g\n", j + 1, epsilons[j]);
    stream << buffer;
  }
  if (!stream) {
    throw Error("failed writing '" + path.string() + "'");
  }
}

}  // namespace

RunReport run_scenario(const ScenarioSpec& spec, const AppConfig& config,
                       const std::filesystem::path& out_dir,
                       const ProgressCallback& progress) {
  config.validate();
  std::error_code dir_error;
  std::filesystem::create_directories(out_dir, dir_error);
  if (dir_error) {
    throw Error("cannot create output directory '" + out_dir.string() +
                "': " + dir_error.message());
  }

  RunReport report;
  report.scenario = short_name(spec.id);
  report.out_dir = out_dir;

  const auto started = std::chrono::steady_clock::now();

  ScaraPlant plant(config.plant,
                   PlantState{spec.initial_pose[0], spec.initial_pose[1], 0.0,
                              0.0},
                   spec.num_samples, spec.dt, config.plant_noise_std,
                   mix_seed(config.learn.seed, kStreamPlantNoise));

  {
    const std::filesystem::path path = out_dir / "reference.csv";
    write_csv_file(spec.reference, path);
    report.csv_paths.push_back(path);
  }

  const TrialCallback on_trial = [&](const TrialRecord& record,
                                     double epsilon) {
    const std::string stem = "trial_" + std::to_string(record.trial_index);
    const std::filesystem::path input_path = out_dir / (stem + "_input.csv");
    const std::filesystem::path states_path = out_dir / (stem + "_states.csv");
    const std::filesystem::path output_path = out_dir / (stem + "_output.csv");
    const std::filesystem::path task_path =
        out_dir / ("taskspace_" + stem + ".csv");
    write_csv_file(record.input, input_path);
    write_csv_file(record.states, states_path);
    write_csv_file(record.output, output_path);
    write_taskspace_csv(record.output, config.plant, task_path);
    report.csv_paths.insert(report.csv_paths.end(),
                            {input_path, states_path, output_path, task_path});
    report.epsilons.push_back(epsilon);
    if (progress) {
      progress(record.trial_index, epsilon);
    }
  };

  try {
    const LearningHistory history =
        run_learning(plant, spec.reference, config.learn, on_trial);
    report.cutoff_hz = history.cutoff_hz;
    report.cutoff_fallback = history.cutoff_fallback;
    report.input_variance = history.input_variance;
    report.calibration_probes = history.calibration_probes;
  } catch (const Error& error) {
    report.failed = true;
    report.error_message = error.what();
  }

  {
    const std::filesystem::path path = out_dir / "epsilon.csv";
    write_epsilon_csv(report.epsilons, path);
    report.csv_paths.push_back(path);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();

  {
    std::ofstream stream = open_output(out_dir / "report.txt");
    char buffer[128];
    stream << "scenario=" << report.scenario << "\n";
    stream << "trials=" << report.epsilons.size() << "\n";
    stream << "failed=" << (report.failed ? 1 : 0) << "\n";
    if (report.failed) {
      stream << "error=" << report.error_message << "\n";
    }
    if (!report.epsilons.empty()) {
      std::snprintf(buffer, sizeof(buffer), "epsilon_final=%.12g\n",
                    report.epsilons.back());
      stream << buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "cutoff_hz=%.12g\n",
                  report.cutoff_hz);
    stream << buffer;
    stream << "cutoff_fallback=" << (report.cutoff_fallback ? 1 : 0) << "\n";
    std::snprintf(buffer, sizeof(buffer), "input_variance=%.12g\n",
                  report.input_variance);
    stream << buffer;
    stream << "calibration_probes=" << report.calibration_probes << "\n";
    stream << "num_samples=" << spec.num_samples << "\n";
    std::snprintf(buffer, sizeof(buffer), "dt=%.12g\n", spec.dt);
    stream << buffer;
    stream << "window_size=" << config.learn.window_size << "\n";
    stream << "max_trials=" << config.learn.max_trials << "\n";
    std::snprintf(buffer, sizeof(buffer), "effort_scale=%.12g\n",
                  config.learn.effort_scale);
    stream << buffer;
    std::snprintf(buffer, sizeof(buffer), "effort_scale_initial=%.12g\n",
                  config.learn.effort_scale_initial);
    stream << buffer;
    std::snprintf(buffer, sizeof(buffer), "effort_decay=%.12g\n",
                  config.learn.effort_decay);
    stream << buffer;
    stream << "seed=" << config.learn.seed << "\n";
    std::snprintf(buffer, sizeof(buffer), "wall_seconds=%.3f\n",
                  report.wall_seconds);
    stream << buffer;
    if (!stream) {
      throw Error("failed writing '" + (out_dir / "report.txt").string() +
                  "'");
    }
  }
  return report;
}

}  // namespace gpilc
