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

#ifndef GPILC_GP_HPP_
#define GPILC_GP_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace gpilc {

// Hyperparameters of a squared-exponential kernel with one automatic
// relevance determination length scale per regressor dimension, plus an
// additive observation-noise variance.
struct KernelHyperparameters {
  Eigen::VectorXd length_scales;
  double noise_variance = 0.0;

  // Throws StructuralError unless every length scale is strictly positive
  // and the noise variance is finite and non-negative.
  void validate() const;
};

// A set of scalar regression data: one regressor column and one observation
// per data point.
struct TrainingSet {
  Eigen::MatrixXd regressors;    // input_dim x count, one column per point
  Eigen::VectorXd observations;  // count entries

  int count() const { return static_cast<int>(observations.size()); }
  int input_dim() const { return static_cast<int>(regressors.rows()); }

  // Throws StructuralError on count mismatch or non-finite entries.
  void validate() const;
};

// k(v, v') = exp(-1/2 * sum_i ((v_i - v'_i) / l_i)^2); in (0, 1], and 1
// exactly when v == v'.
double se_kernel(const Eigen::VectorXd& v, const Eigen::VectorXd& v_prime,
                 const KernelHyperparameters& hyper);

// Gram matrix of the squared-exponential kernel between the columns of a
// (rows) and the columns of b (columns).
Eigen::MatrixXd se_kernel_matrix(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const Eigen::VectorXd& length_scales);

// Log marginal likelihood of the observations under the kernel, together
// with its gradient in unconstrained space: the gradient entries correspond
// to [log l_1, ..., log l_V, log noise_variance].
struct EvidenceResult {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// Evaluates -1/2 z^T A^-1 z - 1/2 log det A - T/2 log 2pi with
// A = K + noise_variance * I on the data exactly as given (no internal
// rescaling). Factorization failures escalate through the shared jitter
// ladder before raising ConditioningError.
EvidenceResult log_marginal_likelihood(const KernelHyperparameters& hyper,
                                       const TrainingSet& data);

struct OptimizerOptions {
  int max_iterations = 60;
  // Ascent stops once the euclidean norm of the log-space gradient falls
  // below this value.
  double gradient_tolerance = 1e-3;
  // Initial line-search step and line-search accuracy passed to the
  // quasi-Newton minimizer.
  double initial_step = 0.5;
  double line_search_tolerance = 0.1;
  // Lower bound applied to the returned noise variance.
  double noise_floor = 1e-10;
};

// Outcome of the multi-restart evidence maximization. The winning
// hyperparameters are expressed on the original observation scale; the
// recorded evidence values refer to the internally standardized
// observations, which is the space the search runs in.
struct HyperparameterSearch {
  KernelHyperparameters hyper;
  double log_evidence = 0.0;
  // False when no restart improved on its initialization, in which case the
  // best initialization itself is returned.
  bool improved_over_init = false;
  int best_restart = 0;
  std::vector<double> initial_log_evidence;
  std::vector<double> final_log_evidence;
};

// Maximizes the log marginal likelihood over log-hyperparameters with a
// quasi-Newton ascent from `num_restarts` random initializations: length
// scales log-uniform in [0.1, 10] times the per-dimension regressor
// standard deviation, noise variance starting at 1e-4 times the observation
// variance. Deterministic for a fixed seed. Requires count >= 2.
HyperparameterSearch optimize_hyperparameters(
    const TrainingSet& data, int num_restarts, std::uint64_t seed,
    const OptimizerOptions& options = {});

// A fitted single-output Gaussian process. Observations are standardized
// internally (their mean and population standard deviation are stored and
// undone on prediction), so far from all training data the posterior mean
// reverts to the observation mean. Immutable once constructed; safe for
// concurrent prediction.
class GaussianProcess {
 public:
  // Precomputes the Cholesky factor of K + noise_variance * I and the
  // weight vector. A noise variance of zero is accepted; if the plain
  // factorization fails, diagonal jitter escalates multiplicatively from
  // 1e-12 to 1e-6 before a ConditioningError naming the levels tried.
  static GaussianProcess fit(TrainingSet data, KernelHyperparameters hyper);

  double predict_mean(const Eigen::VectorXd& v) const;
  // Analytic gradient of predict_mean with respect to v.
  Eigen::VectorXd predict_mean_gradient(const Eigen::VectorXd& v) const;

  const TrainingSet& training_data() const { return data_; }
  const KernelHyperparameters& hyperparameters() const { return hyper_; }
  // Lower-triangular factor L with L L^T = K + sigma^2/scale^2 I in the
  // standardized observation space (+ jitter I if escalation was needed).
  const Eigen::MatrixXd& kernel_factor() const { return factor_; }
  // (K + sigma^2 I)^-1 z in the standardized observation space.
  const Eigen::VectorXd& weight_vector() const { return weights_; }
  double observation_mean() const { return observation_mean_; }
  double observation_scale() const { return observation_scale_; }
  // Diagonal jitter that had to be added for the factorization; 0 if none.
  double applied_jitter() const { return applied_jitter_; }

 private:
  GaussianProcess() = default;

  TrainingSet data_;
  KernelHyperparameters hyper_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd weights_;
  double observation_mean_ = 0.0;
  double observation_scale_ = 1.0;
  double applied_jitter_ = 0.0;
};

}  // namespace gpilc

#endif  // GPILC_GP_HPP_
