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

#ifndef GPILC_SCENARIOS_HPP_
#define GPILC_SCENARIOS_HPP_

#include <string>

#include <Eigen/Dense>

#include "gpilc/trajectory.hpp"

namespace gpilc {

// The three built-in joint-space reference trajectories. They are versioned
// constants of the harness (not config-tunable) so that benchmark numbers
// stay comparable across runs.
enum class ScenarioId {
  s1_point_to_point,
  s2_sinusoid,
  s3_multiharmonic,
};

// Accepts the short form ("s1") and the full enumerator name
// ("s1_point_to_point"); anything else raises ConfigError.
ScenarioId parse_scenario_id(const std::string& text);
std::string to_string(ScenarioId id);
// Short form: "s1", "s2", "s3".
std::string short_name(ScenarioId id);

// Default rest pose (alpha, beta) = (0, pi/6); beta != 0 keeps the start
// away from the stretched-arm kinematic singularity.
Eigen::Vector2d default_initial_pose();

struct ScenarioSpec {
  ScenarioId id;
  int num_samples;
  double dt;
  Eigen::Vector2d initial_pose;
  LiftedTrajectory reference;  // two joint angles per sample
};

// Deterministic analytic references over the horizon N * dt:
//  - s1: minimum-jerk point-to-point motion of (+pi/2, -pi/3) over the
//    middle half of the horizon, dwelling at both ends;
//  - s2: amplitude-windowed sinusoids, 0.8 rad at 0.5 Hz on the first joint
//    and 0.6 rad at 0.75 Hz on the second;
//  - s3: a windowed two-harmonic sum, 0.6 rad at 0.4 Hz plus 0.25 rad at
//    1.2 Hz, on both joints.
// Every reference starts at the initial pose and has exactly zero first
// differences at both boundary samples. Requires num_samples >= 16.
ScenarioSpec build_reference(ScenarioId id, int num_samples = 200,
                             double dt = 0.02,
                             const Eigen::Vector2d& initial_pose =
                                 default_initial_pose());

}  // namespace gpilc

#endif  // GPILC_SCENARIOS_HPP_
