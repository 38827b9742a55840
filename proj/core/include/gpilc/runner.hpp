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

#ifndef GPILC_RUNNER_HPP_
#define GPILC_RUNNER_HPP_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gpilc/config.hpp"
#include "gpilc/scenarios.hpp"

namespace gpilc {

// Called after every executed trial with its index and normalized error.
using ProgressCallback = std::function<void(int, double)>;

struct RunReport {
  std::string scenario;
  std::vector<double> epsilons;  // one entry per executed trial
  double wall_seconds = 0.0;
  // True when the learning loop raised (divergence, conditioning,
  // calibration); partial outputs stay on disk and the message is recorded.
  bool failed = false;
  std::string error_message;
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> csv_paths;
  double cutoff_hz = 0.0;
  bool cutoff_fallback = false;
  double input_variance = 0.0;
  int calibration_probes = 0;
};

// Runs the full learning experiment for one scenario against the simulated
// plant and writes, into out_dir: `trial_<j>_{input,states,output}.csv` and
// `taskspace_trial_<j>.csv` per executed trial (streamed as trials finish,
// so failures keep partial results), `reference.csv`, `epsilon.csv`
// (header `trial,epsilon`), and a plain-text `report.txt` summary. Learning
// failures are captured in the report; I/O failures throw with the path.
RunReport run_scenario(const ScenarioSpec& spec, const AppConfig& config,
                       const std::filesystem::path& out_dir,
                       const ProgressCallback& progress = {});

}  // namespace gpilc

#endif  // GPILC_RUNNER_HPP_
