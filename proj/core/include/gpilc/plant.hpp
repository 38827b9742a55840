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

#ifndef GPILC_PLANT_HPP_
#define GPILC_PLANT_HPP_

#include <Eigen/Core>

#include "gpilc/trajectory.hpp"

namespace gpilc {

struct TrialResult {
  LiftedTrajectory states;
  LiftedTrajectory output;
};

// Contract for anything the learning loop can run trials on. A trial
// applies a full input trajectory to the system starting from its
// trial-invariant initial state and returns the measured state and
// output trajectories with matching N and dt.
//
// The dynamics behind run_trial are treated as unknown; only the output
// matrix (how outputs combine state variables) and the initial state are
// assumed known. The trial index is provided so stochastic plants can
// seed per-trial noise reproducibly; implementations must not otherwise
// change behaviour across trials.
class TrialPlant {
 public:
  virtual ~TrialPlant() = default;

  virtual int input_dim() const = 0;
  virtual int state_dim() const = 0;
  virtual int output_dim() const = 0;
  virtual int horizon() const = 0;
  virtual double sample_period() const = 0;

  /// Known output matrix C (output_dim x state_dim).
  virtual Eigen::MatrixXd output_matrix() const = 0;

  /// Trial-invariant initial state (state_dim).
  virtual Eigen::VectorXd initial_state() const = 0;

  virtual TrialResult run_trial(const LiftedTrajectory& input,
                                int trial_index) = 0;
};

}  // namespace gpilc

#endif  // GPILC_PLANT_HPP_
