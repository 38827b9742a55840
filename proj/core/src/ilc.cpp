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

#include "gpilc/ilc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "gpilc/errors.hpp"
#include "gpilc/random.hpp"
#include "gpilc/spectral.hpp"

namespace gpilc {
namespace {

// Seed-stream tags so that every random purpose inside a learning run draws
// from an independent stream of the configured seed.
constexpr std::uint64_t kStreamInitialInput = 1;
constexpr std::uint64_t kStreamCalibration = 2;
constexpr std::uint64_t kStreamTraining = 3;

constexpr double kCalibrationStartVariance = 1e-4;  // (0.01 torque units)^2
constexpr double kCalibrationFloor = 1e-3;          // output units
constexpr int kCalibrationMaxDoublings = 20;

Eigen::VectorXd gaussian_vector(int n, double std_dev, std::uint64_t seed) {
  Eigen::VectorXd draw(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std_dev);
  for (int i = 0; i < n; ++i) {
    draw[i] = gauss(rng);
  }
  return draw;
}

}  // namespace

CutoffResult detect_cutoff_frequency(const LiftedTrajectory& reference,
                                     double spectral_threshold) {
  if (!(spectral_threshold > 0.0) || !(spectral_threshold < 1.0)) {
    throw StructuralError(
        "detect_cutoff_frequency: spectral threshold must lie in (0, 1)");
  }
  const int n = reference.num_samples();
  if (n < 8) {
    throw StructuralError(
        "detect_cutoff_frequency: need at least 8 samples, got " +
        std::to_string(n));
  }

  const double fallback = 5.0 / reference.duration();
  int best_bin = 0;
  for (int channel = 0; channel < reference.dim_per_sample(); ++channel) {
    Eigen::VectorXd signal = variable_block(reference, channel);
    const double magnitude = signal.cwiseAbs().maxCoeff();
    signal.array() -= signal.mean();
    const AmplitudeSpectrum spectrum =
        amplitude_spectrum(signal, reference.sample_period());

    // Peak over the non-constant bins; a channel whose residual spectrum is
    // at rounding level carries no frequency content.
    double peak = 0.0;
    for (Eigen::Index k = 1; k < spectrum.amplitude.size(); ++k) {
      peak = std::max(peak, spectrum.amplitude[k]);
    }
    if (peak <= 1e-12 * std::max(1.0, magnitude)) {
      continue;
    }
    for (Eigen::Index k = spectrum.amplitude.size() - 1; k >= 1; --k) {
      if (spectrum.amplitude[k] > spectral_threshold * peak) {
        best_bin = std::max(best_bin, static_cast<int>(k));
        break;
      }
    }
  }

  if (best_bin == 0) {
    return {fallback, true};
  }
  return {best_bin / reference.duration(), false};
}

LiftedTrajectory generate_initial_input(int input_dim, int num_samples,
                                        double sample_period, double cutoff_hz,
                                        double input_variance,
                                        std::uint64_t seed) {
  if (input_dim < 1 || num_samples < 1) {
    throw StructuralError("generate_initial_input: dimensions must be >= 1");
  }
  if (input_variance < 0.0 || !std::isfinite(input_variance)) {
    throw StructuralError(
        "generate_initial_input: input variance must be finite and >= 0");
  }
  std::vector<Eigen::VectorXd> channels;
  channels.reserve(input_dim);
  const double std_dev = std::sqrt(input_variance);
  for (int r = 0; r < input_dim; ++r) {
    if (input_variance == 0.0) {
      channels.emplace_back(Eigen::VectorXd::Zero(num_samples));
      continue;
    }
    Eigen::VectorXd noise = gaussian_vector(
        num_samples, std_dev, mix_seed(seed, static_cast<std::uint64_t>(r)));
    channels.push_back(brick_wall_lowpass(noise, cutoff_hz, sample_period));
  }
  return from_channels(channels, sample_period);
}

CalibrationResult calibrate_input_variance(TrialPlant& plant, double cutoff_hz,
                                           double noise_level,
                                           std::uint64_t seed) {
  if (noise_level < 0.0 || !std::isfinite(noise_level)) {
    throw StructuralError(
        "calibrate_input_variance: noise level must be finite and >= 0");
  }
  const double threshold = std::max(10.0 * noise_level, kCalibrationFloor);

  double variance = kCalibrationStartVariance;
  for (int probe = 0; probe <= kCalibrationMaxDoublings; ++probe) {
    const LiftedTrajectory input = generate_initial_input(
        plant.input_dim(), plant.horizon(), plant.sample_period(), cutoff_hz,
        variance, mix_seed(seed, static_cast<std::uint64_t>(probe)));
    const TrialResult result = plant.run_trial(input, -(probe + 1));

    double deviation = 0.0;
    const Eigen::Map<const Eigen::VectorXd> rest = result.output.sample(0);
    for (int n = 1; n < result.output.num_samples(); ++n) {
      deviation = std::max(
          deviation,
          (result.output.sample(n) - rest).cwiseAbs().maxCoeff());
    }
    if (deviation > threshold) {
      return {variance, probe + 1};
    }
    variance *= 2.0;
  }
  throw CalibrationError(
      "calibrate_input_variance: output deviation stayed below " +
      std::to_string(threshold) + " after " +
      std::to_string(kCalibrationMaxDoublings) + " doublings");
}

WeightPair::WeightPair(Eigen::VectorXd output_block,
                       Eigen::VectorXd input_block, int num_samples)
    : output_block_(std::move(output_block)),
      input_block_(std::move(input_block)),
      num_samples_(num_samples) {
  if (num_samples_ < 1 || output_block_.size() == 0 ||
      input_block_.size() == 0) {
    throw StructuralError("WeightPair: empty blocks or horizon");
  }
  if (output_block_.minCoeff() <= 0.0 || input_block_.minCoeff() <= 0.0) {
    throw DegenerateWeightsError(
        "WeightPair: all diagonal weights must be strictly positive");
  }
}

Eigen::VectorXd WeightPair::output_diagonal() const {
  return output_block_.replicate(num_samples_, 1);
}

Eigen::VectorXd WeightPair::input_diagonal() const {
  return input_block_.replicate(num_samples_, 1);
}

Eigen::MatrixXd WeightPair::output_dense() const {
  return Eigen::MatrixXd(output_diagonal().asDiagonal());
}

Eigen::MatrixXd WeightPair::input_dense() const {
  return Eigen::MatrixXd(input_diagonal().asDiagonal());
}

namespace {

// Spectral norm via the eigenvalues of the smaller Gram matrix.
double spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd gram;
  if (m.rows() <= m.cols()) {
    gram.noalias() = m * m.transpose();
  } else {
    gram.noalias() = m.transpose() * m;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gram,
                                                       Eigen::EigenvaluesOnly);
  if (eigen.info() != Eigen::Success) {
    throw NumericError("spectral_norm: eigenvalue computation failed");
  }
  return std::sqrt(std::max(0.0, eigen.eigenvalues().maxCoeff()));
}

Eigen::MatrixXd select_rows_of_variable(const Eigen::MatrixXd& p, int var,
                                        int dim, int num_samples) {
  Eigen::MatrixXd rows(num_samples, p.cols());
  for (int n = 0; n < num_samples; ++n) {
    rows.row(n) = p.row(static_cast<Eigen::Index>(n) * dim + var);
  }
  return rows;
}

Eigen::MatrixXd select_cols_of_variable(const Eigen::MatrixXd& p, int var,
                                        int dim, int num_samples) {
  Eigen::MatrixXd cols(p.rows(), num_samples);
  for (int n = 0; n < num_samples; ++n) {
    cols.col(n) = p.col(static_cast<Eigen::Index>(n) * dim + var);
  }
  return cols;
}

}  // namespace

WeightPair compute_weights(const Eigen::MatrixXd& p, int output_dim,
                           int input_dim, int num_samples) {
  if (p.rows() != static_cast<Eigen::Index>(output_dim) * num_samples ||
      p.cols() != static_cast<Eigen::Index>(input_dim) * num_samples) {
    throw StructuralError("compute_weights: matrix is " +
                          std::to_string(p.rows()) + "x" +
                          std::to_string(p.cols()) + ", expected " +
                          std::to_string(output_dim * num_samples) + "x" +
                          std::to_string(input_dim * num_samples));
  }
  if (!p.allFinite()) {
    throw NumericError("compute_weights: non-finite linearized model");
  }

  // The spectral norm is invariant under row/column permutations, so the
  // interleaved rows (columns) of a variable can be used directly in place
  // of the de-interleaved block matrices.
  Eigen::VectorXd output_block(output_dim);
  for (int o = 0; o < output_dim; ++o) {
    const double norm =
        spectral_norm(select_rows_of_variable(p, o, output_dim, num_samples));
    if (!(norm > 0.0)) {
      throw DegenerateWeightsError(
          "compute_weights: output variable " + std::to_string(o) +
          " is disconnected in the linearized model");
    }
    output_block[o] = 1.0 / norm;
  }
  Eigen::VectorXd input_block(input_dim);
  for (int r = 0; r < input_dim; ++r) {
    const double norm =
        spectral_norm(select_cols_of_variable(p, r, input_dim, num_samples));
    if (!(norm > 0.0)) {
      throw DegenerateWeightsError(
          "compute_weights: input variable " + std::to_string(r) +
          " is disconnected in the linearized model");
    }
    input_block[r] = norm;
  }
  return WeightPair(std::move(output_block), std::move(input_block),
                    num_samples);
}

namespace {

LiftedTrajectory solve_update(const Eigen::MatrixXd& gram,
                              const Eigen::VectorXd& rhs,
                              const LiftedTrajectory& input) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError(
        "norm_optimal_update: P^T W P + S failed to factorize; the "
        "linearized model is likely non-finite");
  }
  const Eigen::VectorXd delta = llt.solve(rhs);
  return LiftedTrajectory(input.data() + delta, input.dim_per_sample(),
                          input.sample_period());
}

void check_update_shapes(const Eigen::MatrixXd& p,
                         const LiftedTrajectory& input,
                         const LiftedTrajectory& error) {
  if (p.cols() != input.data().size() || p.rows() != error.data().size()) {
    throw StructuralError(
        "norm_optimal_update: model is " + std::to_string(p.rows()) + "x" +
        std::to_string(p.cols()) + " but input has " +
        std::to_string(input.data().size()) + " and error " +
        std::to_string(error.data().size()) + " entries");
  }
}

}  // namespace

LiftedTrajectory norm_optimal_update(const Eigen::MatrixXd& p,
                                     const Eigen::MatrixXd& w,
                                     const Eigen::MatrixXd& s,
                                     const LiftedTrajectory& input,
                                     const LiftedTrajectory& error) {
  check_update_shapes(p, input, error);
  if (w.rows() != p.rows() || w.cols() != p.rows() || s.rows() != p.cols() ||
      s.cols() != p.cols()) {
    throw StructuralError("norm_optimal_update: weight shapes do not match "
                          "the model");
  }
  const Eigen::MatrixXd wp = w * p;
  Eigen::MatrixXd gram = p.transpose() * wp + s;
  gram = 0.5 * (gram + gram.transpose()).eval();
  return solve_update(gram, wp.transpose() * error.data(), input);
}

LiftedTrajectory norm_optimal_update(const Eigen::MatrixXd& p,
                                     const WeightPair& weights,
                                     const LiftedTrajectory& input,
                                     const LiftedTrajectory& error) {
  check_update_shapes(p, input, error);
  const Eigen::VectorXd w_diag = weights.output_diagonal();
  const Eigen::VectorXd s_diag = weights.input_diagonal();
  if (w_diag.size() != p.rows() || s_diag.size() != p.cols()) {
    throw StructuralError("norm_optimal_update: weight shapes do not match "
                          "the model");
  }
  const Eigen::MatrixXd wp = w_diag.asDiagonal() * p;
  Eigen::MatrixXd gram = p.transpose() * wp;
  gram.diagonal() += s_diag;
  gram = 0.5 * (gram + gram.transpose()).eval();
  return solve_update(gram, wp.transpose() * error.data(), input);
}

void LearningConfig::validate() const {
  if (window_size < 1) {
    throw ConfigError("LearningConfig: window_size must be >= 1");
  }
  if (max_trials < 1) {
    throw ConfigError("LearningConfig: max_trials must be >= 1");
  }
  if (input_variance &&
      (!(*input_variance >= 0.0) || !std::isfinite(*input_variance))) {
    throw ConfigError("LearningConfig: input_variance must be finite and >= 0");
  }
  if (!(spectral_threshold > 0.0) || !(spectral_threshold < 1.0)) {
    throw ConfigError("LearningConfig: spectral_threshold must lie in (0, 1)");
  }
  if (!(epsilon_stop > 0.0)) {
    throw ConfigError("LearningConfig: epsilon_stop must be > 0");
  }
  if (noise_level < 0.0 || !std::isfinite(noise_level)) {
    throw ConfigError("LearningConfig: noise_level must be finite and >= 0");
  }
  if (!(effort_scale > 0.0) || !std::isfinite(effort_scale)) {
    throw ConfigError("LearningConfig: effort_scale must be finite and > 0");
  }
  if (!(effort_scale_initial >= effort_scale) ||
      !std::isfinite(effort_scale_initial)) {
    throw ConfigError(
        "LearningConfig: effort_scale_initial must be finite and >= "
        "effort_scale");
  }
  if (!(effort_decay > 0.0) || !(effort_decay <= 1.0)) {
    throw ConfigError("LearningConfig: effort_decay must lie in (0, 1]");
  }
  if (train.num_restarts < 1) {
    throw ConfigError("LearningConfig: train.num_restarts must be >= 1");
  }
}

LearningHistory run_learning(TrialPlant& plant,
                             const LiftedTrajectory& reference,
                             const LearningConfig& config,
                             const TrialCallback& on_trial) {
  config.validate();
  if (reference.num_samples() != plant.horizon() ||
      reference.sample_period() != plant.sample_period() ||
      reference.dim_per_sample() != plant.output_dim()) {
    throw StructuralError(
        "run_learning: reference shape does not match the plant (" +
        std::to_string(reference.num_samples()) + " samples of " +
        std::to_string(reference.dim_per_sample()) + " vs plant horizon " +
        std::to_string(plant.horizon()) + " of " +
        std::to_string(plant.output_dim()) + ")");
  }

  const int num_samples = plant.horizon();
  const int input_dim = plant.input_dim();
  const int output_dim = plant.output_dim();
  const double dt = plant.sample_period();

  const CutoffResult cutoff =
      detect_cutoff_frequency(reference, config.spectral_threshold);

  double input_variance = 0.0;
  int calibration_probes = 0;
  if (config.input_variance) {
    input_variance = *config.input_variance;
  } else {
    const CalibrationResult calibration = calibrate_input_variance(
        plant, cutoff.frequency_hz, config.noise_level,
        mix_seed(config.seed, kStreamCalibration));
    input_variance = calibration.input_variance;
    calibration_probes = calibration.probes_run;
  }

  LearningHistory history{{},
                          {},
                          reference,
                          config,
                          cutoff.frequency_hz,
                          cutoff.fallback_used,
                          input_variance,
                          calibration_probes};

  TrialWindow window(config.window_size);
  double first_error_norm = 0.0;

  auto execute_trial = [&](const LiftedTrajectory& input, int trial) {
    TrialResult result = [&] {
      try {
        return plant.run_trial(input, trial);
      } catch (const DivergenceError& error) {
        throw DivergenceError("run_learning: trial " + std::to_string(trial) +
                                  ": " + error.what(),
                              error.sample_index());
      }
    }();
    TrialRecord record = make_trial_record(trial, input,
                                           std::move(result.states),
                                           std::move(result.output),
                                           reference);
    if (trial == 1) {
      first_error_norm = record.error.data().norm();
      if (!(first_error_norm > 0.0)) {
        throw DegenerateNormalizationError(
            "run_learning: the first trial tracked the reference exactly; "
            "the normalized error norm is undefined");
      }
    }
    const double epsilon = record.error.data().norm() / first_error_norm;
    window.push(record);
    history.records.push_back(std::move(record));
    history.epsilons.push_back(epsilon);
    if (on_trial) {
      on_trial(history.records.back(), epsilon);
    }
    return epsilon;
  };

  const LiftedTrajectory initial_input = generate_initial_input(
      input_dim, num_samples, dt, cutoff.frequency_hz, input_variance,
      mix_seed(config.seed, kStreamInitialInput));
  double epsilon = execute_trial(initial_input, 1);

  while (static_cast<int>(history.records.size()) < config.max_trials &&
         epsilon >= config.epsilon_stop) {
    const int trial = static_cast<int>(history.records.size());
    const LiftedTrajectory& current_input = history.records.back().input;
    const LiftedTrajectory& current_error = history.records.back().error;
    try {
      const DynamicsModel model = train_model(
          window, plant.output_matrix(), plant.initial_state(),
          mix_seed(config.seed, kStreamTraining,
                   static_cast<std::uint64_t>(trial)),
          config.train);
      const Eigen::MatrixXd p = rollout_jacobian(model, current_input);
      const WeightPair base_weights =
          compute_weights(p, output_dim, input_dim, num_samples);
      const double effort_gamma =
          std::max(config.effort_scale,
                   config.effort_scale_initial *
                       std::pow(config.effort_decay, trial - 1));
      const WeightPair weights(base_weights.output_block(),
                               effort_gamma * base_weights.input_block(),
                               num_samples);
      const LiftedTrajectory updated =
          norm_optimal_update(p, weights, current_input, current_error);
      // Keep the input change inside the reference's frequency band. Every
      // trial then keeps exciting only that band, which is exactly where
      // the windowed training data informs the model; unrestricted updates
      // let model error in never-excited high-frequency directions inject
      // large spurious inputs (the self-normalizing weights amplify
      // corrections in low-gain directions) and destabilize the run.
      std::vector<Eigen::VectorXd> channels(
          static_cast<std::size_t>(input_dim));
      for (int r = 0; r < input_dim; ++r) {
        const Eigen::VectorXd delta = variable_block(updated, r) -
                                      variable_block(current_input, r);
        channels[static_cast<std::size_t>(r)] =
            variable_block(current_input, r) +
            brick_wall_lowpass(delta, cutoff.frequency_hz, dt);
      }
      const LiftedTrajectory next_input = from_channels(channels, dt);
      epsilon = execute_trial(next_input, trial + 1);
    } catch (const ConditioningError& error) {
      throw ConditioningError("run_learning: update after trial " +
                              std::to_string(trial) + ": " + error.what());
    } catch (const DegenerateWeightsError& error) {
      throw DegenerateWeightsError("run_learning: update after trial " +
                                   std::to_string(trial) + ": " +
                                   error.what());
    }
  }
  return history;
}

}  // namespace gpilc
