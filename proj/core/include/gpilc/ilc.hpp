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

#ifndef GPILC_ILC_HPP_
#define GPILC_ILC_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gpilc/dynamics_model.hpp"
#include "gpilc/plant.hpp"
#include "gpilc/trajectory.hpp"

namespace gpilc {

// Largest significant frequency of a reference trajectory, read off its
// per-channel discrete amplitude spectra after mean removal. A bin counts
// as significant when its amplitude exceeds the threshold fraction of that
// channel's peak amplitude. Spectrally empty references fall back to
// 5 / (N * dt) with the fallback flag set.
struct CutoffResult {
  double frequency_hz = 0.0;
  bool fallback_used = false;
};

CutoffResult detect_cutoff_frequency(const LiftedTrajectory& reference,
                                     double spectral_threshold = 0.01);

// Per input channel: N independent N(0, input_variance) draws pushed
// through the zero-phase brick-wall low-pass at cutoff_hz, so the result
// has no energy in bins strictly above the cutoff. Deterministic per seed.
LiftedTrajectory generate_initial_input(int input_dim, int num_samples,
                                        double sample_period, double cutoff_hz,
                                        double input_variance,
                                        std::uint64_t seed);

// Doubles the input variance from (0.01)^2 until a probe trial's output
// deviates from its initial value by more than max(10 * noise_level, 1e-3),
// for at most 20 doublings. Each probe uses a fresh filtered-noise input
// and a negative trial index (probes are not learning trials).
struct CalibrationResult {
  double input_variance = 0.0;
  int probes_run = 0;
};

CalibrationResult calibrate_input_variance(TrialPlant& plant, double cutoff_hz,
                                           double noise_level,
                                           std::uint64_t seed);

// Tracking-error and input-effort weights with Kronecker structure
// identity-over-samples x diagonal-over-variables. Stored as the
// per-variable diagonal blocks; dense forms are provided for checks.
class WeightPair {
 public:
  WeightPair(Eigen::VectorXd output_block, Eigen::VectorXd input_block,
             int num_samples);

  // W-bar diagonal, one entry per output variable.
  const Eigen::VectorXd& output_block() const { return output_block_; }
  // S-bar diagonal, one entry per input variable.
  const Eigen::VectorXd& input_block() const { return input_block_; }
  int num_samples() const { return num_samples_; }

  // Diagonals of the full lifted weights (sample-major interleaving).
  Eigen::VectorXd output_diagonal() const;
  Eigen::VectorXd input_diagonal() const;
  Eigen::MatrixXd output_dense() const;
  Eigen::MatrixXd input_dense() const;

 private:
  Eigen::VectorXd output_block_;
  Eigen::VectorXd input_block_;
  int num_samples_;
};

// Weight selection from the linearized lifted model: for each output
// variable o, W-bar_o is the inverse spectral norm of the rows of P
// belonging to o; for each input variable r, S-bar_r is the spectral norm
// of the columns of P belonging to r. A zero block norm means a variable
// is disconnected in the model and raises DegenerateWeightsError.
WeightPair compute_weights(const Eigen::MatrixXd& p, int output_dim,
                           int input_dim, int num_samples);

// One norm-optimal input update: returns input + delta where delta is the
// unique minimizer of |error - P delta|^2_W + |delta|^2_S, i.e.
// delta = (P^T W P + S)^-1 P^T W error.
LiftedTrajectory norm_optimal_update(const Eigen::MatrixXd& p,
                                     const Eigen::MatrixXd& w,
                                     const Eigen::MatrixXd& s,
                                     const LiftedTrajectory& input,
                                     const LiftedTrajectory& error);
LiftedTrajectory norm_optimal_update(const Eigen::MatrixXd& p,
                                     const WeightPair& weights,
                                     const LiftedTrajectory& input,
                                     const LiftedTrajectory& error);

struct LearningConfig {
  int window_size = 3;
  int max_trials = 15;
  // Initial-input variance in squared torque units; auto-calibrated when
  // unset.
  std::optional<double> input_variance;
  double spectral_threshold = 0.01;
  // Stop once the normalized error norm falls below this threshold (the
  // trial cap usually binds first).
  double epsilon_stop = 0.01;
  // Known output noise level in output units; enters the calibration
  // excitation threshold.
  double noise_level = 0.0;
  // Effort-weight schedule. Update j scales the input-effort weight S by
  // gamma_j = max(effort_scale, effort_scale_initial * effort_decay^(j-1)).
  //
  // The self-normalizing weight selection alone steps so conservatively
  // that error directions whose singular value is much below the largest
  // one barely move and the error plateaus; scaling the effort penalty by
  // gamma lets directions with singular values above about sqrt(gamma) of
  // the largest converge. Early updates must stay conservative because the
  // model is fitted to barely-exciting trials and its weak directions are
  // untrustworthy, so gamma starts near the plain self-normalized step and
  // decays geometrically toward the floor as the trial window fills with
  // informative data. The defaults clear the oscillatory references without
  // driving the arm into torque saturation.
  double effort_scale = 1.0e-4;
  double effort_scale_initial = 1.0e-2;
  double effort_decay = 0.1;
  std::uint64_t seed = 42;
  TrainOptions train;

  void validate() const;
};

struct LearningHistory {
  std::vector<TrialRecord> records;
  // Normalized error norms; epsilons[0] == 1 by construction.
  std::vector<double> epsilons;
  LiftedTrajectory reference;
  LearningConfig config;
  double cutoff_hz = 0.0;
  bool cutoff_fallback = false;
  double input_variance = 0.0;
  int calibration_probes = 0;
};

// Invoked after every executed trial with its record and normalized error
// norm; lets callers persist partial results before a later trial fails.
using TrialCallback = std::function<void(const TrialRecord&, double)>;

// The full learning loop: cutoff detection, input-variance calibration
// (when not configured), initial trial, then per iteration a model trained
// on the recent-trial window, linearization, weight selection, norm-optimal
// update, and the next trial. Stops at max_trials or once the normalized
// error norm drops below epsilon_stop. Deterministic given the seed.
LearningHistory run_learning(TrialPlant& plant,
                             const LiftedTrajectory& reference,
                             const LearningConfig& config,
                             const TrialCallback& on_trial = {});

}  // namespace gpilc

#endif  // GPILC_ILC_HPP_
