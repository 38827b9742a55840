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

#ifndef GPILC_SCARA_HPP_
#define GPILC_SCARA_HPP_

#include <Eigen/Core>
#include <cstdint>

#include "gpilc/plant.hpp"
#include "gpilc/trajectory.hpp"

namespace gpilc {

// Mechanical parameters of a two-link arm rotating in the horizontal
// plane (the first two axes of a SCARA-style robot, so gravity exerts no
// joint torque). Both joints are motor driven with symmetric torque
// saturation and viscous damping.
struct PlantParameters {
  double l1 = 0.3;   ///< link lengths [m]
  double l2 = 0.3;
  double m1 = 1.0;   ///< link masses [kg]
  double m2 = 1.0;
  double I1 = 0.0075;  ///< link inertias about COM [kg m^2] (uniform rod)
  double I2 = 0.0075;
  double r1 = 0.15;  ///< COM distances from the driving joint [m]
  double r2 = 0.15;
  double d1 = 0.05;  ///< joint viscous damping [N m s / rad]
  double d2 = 0.05;
  double torque_limit = 5.0;  ///< symmetric saturation [N m]

  static PlantParameters defaults() { return {}; }
  void validate() const;
};

/// Joint state: absolute angle of link one, angle of link two relative to
/// link one, and their rates.
struct PlantState {
  double alpha = 0.0;      ///< [rad]
  double beta = 0.0;       ///< [rad]
  double alpha_dot = 0.0;  ///< [rad/s]
  double beta_dot = 0.0;   ///< [rad/s]

  Eigen::Vector4d to_vector() const {
    return {alpha, beta, alpha_dot, beta_dot};
  }
  static PlantState from_vector(const Eigen::Vector4d& v) {
    return {v[0], v[1], v[2], v[3]};
  }
};

/// Continuous-time dynamics M(q) qdd + C(q, qd) qd + D qd = u with no
/// gravity term; returns [alpha_dot, beta_dot, alpha_dd, beta_dd].
/// Torques are taken as already saturated.
Eigen::Vector4d dynamics_rhs(const PlantState& state,
                             const Eigen::Vector2d& torque,
                             const PlantParameters& params);

/// Joint inertia matrix M(q); symmetric positive definite for all q.
Eigen::Matrix2d inertia_matrix(const PlantState& state,
                               const PlantParameters& params);

/// Coriolis/centrifugal matrix built with the Christoffel convention, so
/// dM/dt - 2C is skew-symmetric.
Eigen::Matrix2d coriolis_matrix(const PlantState& state,
                                const PlantParameters& params);

/// Measured output (alpha, beta): the output matrix is [I 0].
Eigen::Vector2d output_map(const PlantState& state);

/// The 2x4 output matrix selecting the two joint angles.
Eigen::MatrixXd scara_output_matrix();

/// Kinetic energy of the arm [J]; used by energy-balance checks.
double kinetic_energy(const PlantState& state, const PlantParameters& params);

/// End-effector position in the plane for a pair of joint angles.
Eigen::Vector2d forward_kinematics(const Eigen::Vector2d& joint_angles,
                                   const PlantParameters& params);

struct SimulatedTrial {
  LiftedTrajectory states;  // 4 per sample
  LiftedTrajectory output;  // 2 per sample
};

/// Integrates one trial: fixed-step RK4 with `substeps` steps per sample
/// period and zero-order-hold torque, saturated at the torque limit.
/// states sample n is the state at sample n with sample 0 equal to x0;
/// output is the angle pair at each sample. Deterministic; throws
/// DivergenceError naming the sample index if the state leaves
/// [-divergence_bound, divergence_bound].
SimulatedTrial simulate_trial(const LiftedTrajectory& input,
                              const PlantState& x0,
                              const PlantParameters& params, int substeps = 4,
                              double divergence_bound = 1.0e6);

// TrialPlant adapter around simulate_trial. Optional additive Gaussian
// measurement noise on the output trajectory (states stay exact), seeded
// per trial so repeated runs are reproducible.
class ScaraPlant final : public TrialPlant {
 public:
  ScaraPlant(PlantParameters params, PlantState initial, int horizon,
             double sample_period, double noise_std = 0.0,
             std::uint64_t seed = 0);

  int input_dim() const override { return 2; }
  int state_dim() const override { return 4; }
  int output_dim() const override { return 2; }
  int horizon() const override { return horizon_; }
  double sample_period() const override { return sample_period_; }
  Eigen::MatrixXd output_matrix() const override {
    return scara_output_matrix();
  }
  Eigen::VectorXd initial_state() const override {
    return initial_.to_vector();
  }
  TrialResult run_trial(const LiftedTrajectory& input,
                        int trial_index) override;

  const PlantParameters& parameters() const { return params_; }

 private:
  PlantParameters params_;
  PlantState initial_;
  int horizon_;
  double sample_period_;
  double noise_std_;
  std::uint64_t seed_;
};

}  // namespace gpilc

#endif  // GPILC_SCARA_HPP_
