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

#ifndef GPILC_DYNAMICS_MODEL_HPP_
#define GPILC_DYNAMICS_MODEL_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gpilc/gp.hpp"
#include "gpilc/trajectory.hpp"

namespace gpilc {

// Sliding window over the most recent trials used as model training data.
// Appending beyond the window size evicts the oldest record.
class TrialWindow {
 public:
  explicit TrialWindow(int window_size);

  void push(TrialRecord record);
  const std::vector<TrialRecord>& records() const { return records_; }
  int window_size() const { return window_size_; }
  bool empty() const { return records_.empty(); }

 private:
  int window_size_;
  std::vector<TrialRecord> records_;  // oldest first
};

// One regression problem per state variable: each trial of length N
// contributes N-1 pairs whose regressor stacks the state and input at
// sample n and whose observation is state variable m at sample n+1.
std::vector<TrainingSet> assemble_training_data(const TrialWindow& window);

// A one-step state predictor assembled from per-state-variable GPs, plus
// the fixed quantities needed to roll it out over a trial horizon.
struct DynamicsModel {
  std::vector<GaussianProcess> state_gps;  // one per state variable
  Eigen::MatrixXd output_matrix;           // output_dim x state_dim
  Eigen::VectorXd initial_state;           // state_dim
  int horizon = 0;
  double sample_period = 0.0;

  int state_dim() const { return static_cast<int>(initial_state.size()); }
  int input_dim() const {
    return state_gps.empty()
               ? 0
               : state_gps.front().training_data().input_dim() - state_dim();
  }
  int output_dim() const { return static_cast<int>(output_matrix.rows()); }

  // Throws StructuralError unless there is one GP per state variable, all
  // GPs take state_dim + input_dim regressors, and the output matrix has
  // state_dim columns.
  void validate() const;
};

struct TrainOptions {
  int num_restarts = 5;
  OptimizerOptions optimizer;
};

// Fits one GP per state variable on the window's transition pairs, with
// hyperparameters optimized independently per variable. Deterministic for a
// fixed seed. Conditioning failures are reported with the state variable
// they occurred in.
DynamicsModel train_model(const TrialWindow& window,
                          const Eigen::MatrixXd& output_matrix,
                          const Eigen::VectorXd& initial_state,
                          std::uint64_t seed, const TrainOptions& options = {});

// Deterministic roll-out of the one-step predictor from the model's initial
// state: column n holds the predicted state at sample n.
Eigen::MatrixXd rollout_states(const DynamicsModel& model,
                               const LiftedTrajectory& input);

// Predicted output trajectory of the roll-out (output matrix applied to
// every predicted state).
LiftedTrajectory rollout(const DynamicsModel& model,
                         const LiftedTrajectory& input);

// Exact Jacobian of the roll-out map from the lifted input to the lifted
// output, assembled by forward accumulation of the state sensitivity.
// Strictly block lower-triangular: the output at sample n depends only on
// inputs at samples before n.
Eigen::MatrixXd rollout_jacobian(const DynamicsModel& model,
                                 const LiftedTrajectory& input);

}  // namespace gpilc

#endif  // GPILC_DYNAMICS_MODEL_HPP_
