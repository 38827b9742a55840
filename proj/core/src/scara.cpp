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

#include "gpilc/scara.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "gpilc/errors.hpp"
#include "gpilc/random.hpp"

namespace gpilc {

void PlantParameters::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw StructuralError(std::string("PlantParameters: ") + name +
                            " must be strictly positive");
    }
  };
  positive(l1, "l1");
  positive(l2, "l2");
  positive(m1, "m1");
  positive(m2, "m2");
  positive(I1, "I1");
  positive(I2, "I2");
  positive(r1, "r1");
  positive(r2, "r2");
  positive(torque_limit, "torque_limit");
  if (d1 < 0.0 || d2 < 0.0 || !std::isfinite(d1) || !std::isfinite(d2)) {
    throw StructuralError("PlantParameters: damping must be non-negative");
  }
  if (r1 > l1 || r2 > l2) {
    throw StructuralError(
        "PlantParameters: COM distances must satisfy 0 < r_i <= l_i");
  }
}

Eigen::Matrix2d inertia_matrix(const PlantState& s,
                               const PlantParameters& p) {
  const double cb = std::cos(s.beta);
  const double m11 = p.I1 + p.I2 + p.m1 * p.r1 * p.r1 +
                     p.m2 * (p.l1 * p.l1 + p.r2 * p.r2 + 2.0 * p.l1 * p.r2 * cb);
  const double m12 = p.I2 + p.m2 * (p.r2 * p.r2 + p.l1 * p.r2 * cb);
  const double m22 = p.I2 + p.m2 * p.r2 * p.r2;
  Eigen::Matrix2d m;
  m << m11, m12, m12, m22;
  return m;
}

Eigen::Matrix2d coriolis_matrix(const PlantState& s,
                                const PlantParameters& p) {
  const double h = -p.m2 * p.l1 * p.r2 * std::sin(s.beta);
  Eigen::Matrix2d c;
  c << h * s.beta_dot, h * (s.alpha_dot + s.beta_dot),
      -h * s.alpha_dot, 0.0;
  return c;
}

Eigen::Vector4d dynamics_rhs(const PlantState& state,
                             const Eigen::Vector2d& torque,
                             const PlantParameters& params) {
  if (!state.to_vector().allFinite() || !torque.allFinite()) {
    throw NumericError("dynamics_rhs: non-finite state or torque");
  }
  const Eigen::Vector2d qd(state.alpha_dot, state.beta_dot);
  const Eigen::Vector2d damping(params.d1 * state.alpha_dot,
                                params.d2 * state.beta_dot);
  const Eigen::Vector2d rhs =
      torque - coriolis_matrix(state, params) * qd - damping;
  // 2x2 symmetric solve; M is positive definite for valid parameters.
  const Eigen::Matrix2d m = inertia_matrix(state, params);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(0, 1);
  const Eigen::Vector2d qdd(
      (m(1, 1) * rhs[0] - m(0, 1) * rhs[1]) / det,
      (m(0, 0) * rhs[1] - m(0, 1) * rhs[0]) / det);
  return {qd[0], qd[1], qdd[0], qdd[1]};
}

Eigen::Vector2d output_map(const PlantState& state) {
  return {state.alpha, state.beta};
}

Eigen::MatrixXd scara_output_matrix() {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 4);
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  return c;
}

double kinetic_energy(const PlantState& s, const PlantParameters& p) {
  const Eigen::Vector2d qd(s.alpha_dot, s.beta_dot);
  return 0.5 * qd.dot(inertia_matrix(s, p) * qd);
}

Eigen::Vector2d forward_kinematics(const Eigen::Vector2d& joint_angles,
                                   const PlantParameters& params) {
  const double a = joint_angles[0];
  const double ab = joint_angles[0] + joint_angles[1];
  return {params.l1 * std::cos(a) + params.l2 * std::cos(ab),
          params.l1 * std::sin(a) + params.l2 * std::sin(ab)};
}

namespace {

Eigen::Vector4d rk4_step(const Eigen::Vector4d& x, const Eigen::Vector2d& u,
                         const PlantParameters& p, double h) {
  auto f = [&](const Eigen::Vector4d& y) {
    return dynamics_rhs(PlantState::from_vector(y), u, p);
  };
  const Eigen::Vector4d k1 = f(x);
  const Eigen::Vector4d k2 = f(x + 0.5 * h * k1);
  const Eigen::Vector4d k3 = f(x + 0.5 * h * k2);
  const Eigen::Vector4d k4 = f(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

SimulatedTrial simulate_trial(const LiftedTrajectory& input,
                              const PlantState& x0,
                              const PlantParameters& params, int substeps,
                              double divergence_bound) {
  if (input.dim_per_sample() != 2) {
    throw StructuralError("simulate_trial: input must have 2 torques per "
                          "sample, got D=" +
                          std::to_string(input.dim_per_sample()));
  }
  if (substeps < 1) {
    throw StructuralError("simulate_trial: substeps must be >= 1");
  }
  params.validate();
  if (!x0.to_vector().allFinite()) {
    throw NumericError("simulate_trial: non-finite initial state");
  }

  const int n = input.num_samples();
  const double dt = input.sample_period();
  const double h = dt / substeps;

  Eigen::VectorXd states(4 * n);
  Eigen::VectorXd output(2 * n);
  Eigen::Vector4d x = x0.to_vector();
  for (int k = 0; k < n; ++k) {
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > divergence_bound) {
      throw DivergenceError(
          "simulate_trial: state diverged at sample " + std::to_string(k), k);
    }
    states.segment<4>(4 * k) = x;
    output.segment<2>(2 * k) = Eigen::Vector2d(x[0], x[1]);
    if (k + 1 < n) {
      const Eigen::Vector2d u =
          input.sample(k).cwiseMax(-params.torque_limit)
              .cwiseMin(params.torque_limit);
      for (int s = 0; s < substeps; ++s) {
        x = rk4_step(x, u, params, h);
      }
    }
  }
  return {LiftedTrajectory(std::move(states), 4, dt),
          LiftedTrajectory(std::move(output), 2, dt)};
}

ScaraPlant::ScaraPlant(PlantParameters params, PlantState initial, int horizon,
                       double sample_period, double noise_std,
                       std::uint64_t seed)
    : params_(std::move(params)),
      initial_(initial),
      horizon_(horizon),
      sample_period_(sample_period),
      noise_std_(noise_std),
      seed_(seed) {
  params_.validate();
  if (horizon_ < 1) {
    throw StructuralError("ScaraPlant: horizon must be >= 1");
  }
  if (!(sample_period_ > 0.0)) {
    throw StructuralError("ScaraPlant: sample period must be positive");
  }
  if (noise_std_ < 0.0) {
    throw StructuralError("ScaraPlant: noise_std must be non-negative");
  }
}

TrialResult ScaraPlant::run_trial(const LiftedTrajectory& input,
                                  int trial_index) {
  if (input.num_samples() != horizon_ ||
      input.sample_period() != sample_period_) {
    throw StructuralError("ScaraPlant::run_trial: input horizon/dt does not "
                          "match the plant");
  }
  SimulatedTrial sim = simulate_trial(input, initial_, params_);
  if (noise_std_ > 0.0) {
    std::mt19937_64 rng(mix_seed(
        seed_, static_cast<std::uint64_t>(
                   static_cast<std::int64_t>(trial_index))));
    std::normal_distribution<double> gauss(0.0, noise_std_);
    Eigen::VectorXd noisy = sim.output.data();
    for (Eigen::Index i = 0; i < noisy.size(); ++i) {
      noisy[i] += gauss(rng);
    }
    return {std::move(sim.states),
            LiftedTrajectory(std::move(noisy), 2, sample_period_)};
  }
  return {std::move(sim.states), std::move(sim.output)};
}

}  // namespace gpilc
