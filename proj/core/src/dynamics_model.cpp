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

#include "gpilc/dynamics_model.hpp"

#include <string>
#include <utility>

#include "gpilc/errors.hpp"
#include "gpilc/random.hpp"

namespace gpilc {

TrialWindow::TrialWindow(int window_size) : window_size_(window_size) {
  if (window_size_ < 1) {
    throw StructuralError("TrialWindow: window size must be >= 1");
  }
}

void TrialWindow::push(TrialRecord record) {
  if (!records_.empty()) {
    const TrialRecord& first = records_.front();
    if (!record.states.same_shape(first.states) ||
        !record.input.same_shape(first.input)) {
      throw StructuralError(
          "TrialWindow::push: record shape differs from existing records");
    }
  }
  records_.push_back(std::move(record));
  if (static_cast<int>(records_.size()) > window_size_) {
    records_.erase(records_.begin());
  }
}

std::vector<TrainingSet> assemble_training_data(const TrialWindow& window) {
  if (window.empty()) {
    throw StructuralError("assemble_training_data: empty trial window");
  }
  const std::vector<TrialRecord>& records = window.records();
  const int state_dim = records.front().states.dim_per_sample();
  const int input_dim = records.front().input.dim_per_sample();
  const int num_samples = records.front().states.num_samples();
  const int pairs_per_trial = num_samples - 1;
  const int total =
      pairs_per_trial * static_cast<int>(records.size());

  Eigen::MatrixXd regressors(state_dim + input_dim, total);
  std::vector<TrainingSet> sets(state_dim);
  for (int m = 0; m < state_dim; ++m) {
    sets[m].observations.resize(total);
  }

  int column = 0;
  for (const TrialRecord& record : records) {
    for (int n = 0; n < pairs_per_trial; ++n) {
      regressors.col(column).head(state_dim) = record.states.sample(n);
      regressors.col(column).tail(input_dim) = record.input.sample(n);
      for (int m = 0; m < state_dim; ++m) {
        sets[m].observations[column] = record.states.at(n + 1, m);
      }
      ++column;
    }
  }
  for (int m = 0; m < state_dim; ++m) {
    sets[m].regressors = regressors;
    sets[m].validate();
  }
  return sets;
}

void DynamicsModel::validate() const {
  if (state_gps.empty()) {
    throw StructuralError("DynamicsModel: no state predictors");
  }
  const int m = state_dim();
  if (static_cast<int>(state_gps.size()) != m) {
    throw StructuralError(
        "DynamicsModel: " + std::to_string(state_gps.size()) +
        " predictors for " + std::to_string(m) + " state variables");
  }
  const int v = state_gps.front().training_data().input_dim();
  if (v <= m) {
    throw StructuralError(
        "DynamicsModel: regressor dimension must exceed the state dimension");
  }
  for (const GaussianProcess& gp : state_gps) {
    if (gp.training_data().input_dim() != v) {
      throw StructuralError(
          "DynamicsModel: inconsistent regressor dimensions across "
          "predictors");
    }
  }
  if (output_matrix.cols() != m) {
    throw StructuralError("DynamicsModel: output matrix has " +
                          std::to_string(output_matrix.cols()) +
                          " columns for " + std::to_string(m) +
                          " state variables");
  }
  if (horizon < 1 || !(sample_period > 0.0)) {
    throw StructuralError("DynamicsModel: invalid horizon or sample period");
  }
}

DynamicsModel train_model(const TrialWindow& window,
                          const Eigen::MatrixXd& output_matrix,
                          const Eigen::VectorXd& initial_state,
                          std::uint64_t seed, const TrainOptions& options) {
  std::vector<TrainingSet> sets = assemble_training_data(window);
  const int state_dim = static_cast<int>(sets.size());
  if (initial_state.size() != state_dim) {
    throw StructuralError("train_model: initial state has " +
                          std::to_string(initial_state.size()) +
                          " entries for " + std::to_string(state_dim) +
                          " state variables");
  }

  DynamicsModel model;
  model.output_matrix = output_matrix;
  model.initial_state = initial_state;
  model.horizon = window.records().front().states.num_samples();
  model.sample_period = window.records().front().states.sample_period();
  model.state_gps.reserve(state_dim);
  for (int m = 0; m < state_dim; ++m) {
    try {
      HyperparameterSearch search = optimize_hyperparameters(
          sets[m], options.num_restarts,
          mix_seed(seed, static_cast<std::uint64_t>(m)), options.optimizer);
      model.state_gps.push_back(
          GaussianProcess::fit(std::move(sets[m]), std::move(search.hyper)));
    } catch (const ConditioningError& error) {
      throw ConditioningError("train_model: state variable " +
                              std::to_string(m) + ": " + error.what());
    }
  }
  model.validate();
  return model;
}

namespace {

void check_rollout_input(const DynamicsModel& model,
                         const LiftedTrajectory& input) {
  model.validate();
  if (input.dim_per_sample() != model.input_dim() ||
      input.num_samples() != model.horizon) {
    throw StructuralError(
        "rollout: input shape (" + std::to_string(input.dim_per_sample()) +
        " per sample, " + std::to_string(input.num_samples()) +
        " samples) does not match the model (" +
        std::to_string(model.input_dim()) + " per sample, " +
        std::to_string(model.horizon) + " samples)");
  }
}

}  // namespace

Eigen::MatrixXd rollout_states(const DynamicsModel& model,
                               const LiftedTrajectory& input) {
  check_rollout_input(model, input);
  const int m = model.state_dim();
  const int r = model.input_dim();
  const int n = model.horizon;

  Eigen::MatrixXd states(m, n);
  states.col(0) = model.initial_state;
  Eigen::VectorXd regressor(m + r);
  for (int k = 0; k + 1 < n; ++k) {
    regressor.head(m) = states.col(k);
    regressor.tail(r) = input.sample(k);
    for (int i = 0; i < m; ++i) {
      states(i, k + 1) = model.state_gps[i].predict_mean(regressor);
    }
    if (!states.col(k + 1).allFinite()) {
      throw DivergenceError(
          "rollout: non-finite state prediction at sample " +
              std::to_string(k + 1),
          k + 1);
    }
  }
  return states;
}

LiftedTrajectory rollout(const DynamicsModel& model,
                         const LiftedTrajectory& input) {
  const Eigen::MatrixXd states = rollout_states(model, input);
  const Eigen::MatrixXd outputs = model.output_matrix * states;
  const int o = model.output_dim();
  Eigen::VectorXd data(static_cast<Eigen::Index>(o) * model.horizon);
  for (int k = 0; k < model.horizon; ++k) {
    data.segment(static_cast<Eigen::Index>(o) * k, o) = outputs.col(k);
  }
  return LiftedTrajectory(std::move(data), o, model.sample_period);
}

Eigen::MatrixXd rollout_jacobian(const DynamicsModel& model,
                                 const LiftedTrajectory& input) {
  const Eigen::MatrixXd states = rollout_states(model, input);
  const int m = model.state_dim();
  const int r = model.input_dim();
  const int o = model.output_dim();
  const int n = model.horizon;

  // sensitivity(:, block k) = d state(sample) / d input(sample k); the
  // initial state does not depend on the input, so it starts at zero.
  Eigen::MatrixXd sensitivity =
      Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(r) * n);
  Eigen::MatrixXd jacobian =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(o) * n,
                            static_cast<Eigen::Index>(r) * n);

  Eigen::VectorXd regressor(m + r);
  Eigen::MatrixXd step_state(m, m);  // d state(k+1) / d state(k)
  Eigen::MatrixXd step_input(m, r);  // d state(k+1) / d input(k)
  for (int k = 0; k + 1 < n; ++k) {
    regressor.head(m) = states.col(k);
    regressor.tail(r) = input.sample(k);
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd grad =
          model.state_gps[i].predict_mean_gradient(regressor);
      step_state.row(i) = grad.head(m).transpose();
      step_input.row(i) = grad.tail(r).transpose();
    }
    // Only the first k input blocks can be non-zero so far.
    const Eigen::Index active = static_cast<Eigen::Index>(r) * (k + 1);
    sensitivity.leftCols(active) =
        (step_state * sensitivity.leftCols(active)).eval();
    sensitivity.middleCols(static_cast<Eigen::Index>(r) * k, r) += step_input;
    jacobian.middleRows(static_cast<Eigen::Index>(o) * (k + 1), o).noalias() =
        model.output_matrix * sensitivity;
  }
  return jacobian;
}

}  // namespace gpilc
