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

#include "gpilc/scenarios.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "gpilc/errors.hpp"

namespace gpilc {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// C-infinity step: 0 for x <= 0, 1 for x >= 1, with every derivative
// vanishing at both ends.
double smooth_step(double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  const double rise = std::exp(-1.0 / x);
  const double fall = std::exp(-1.0 / (1.0 - x));
  return rise / (rise + fall);
}

// Amplitude window ramping 0 -> 1 over the first quarter of the horizon and
// back down over the last quarter.
double amplitude_window(double t, double total) {
  const double ramp = 0.25 * total;
  if (t < ramp) {
    return smooth_step(t / ramp);
  }
  if (t > total - ramp) {
    return smooth_step((total - t) / ramp);
  }
  return 1.0;
}

// Minimum-jerk interpolation coefficient: 0 -> 1 with zero first and second
// derivatives at both ends.
double min_jerk(double tau) {
  if (tau <= 0.0) {
    return 0.0;
  }
  if (tau >= 1.0) {
    return 1.0;
  }
  const double t3 = tau * tau * tau;
  return t3 * (10.0 + tau * (-15.0 + 6.0 * tau));
}

}  // namespace

ScenarioId parse_scenario_id(const std::string& text) {
  if (text == "s1" || text == "s1_point_to_point") {
    return ScenarioId::s1_point_to_point;
  }
  if (text == "s2" || text == "s2_sinusoid") {
    return ScenarioId::s2_sinusoid;
  }
  if (text == "s3" || text == "s3_multiharmonic") {
    return ScenarioId::s3_multiharmonic;
  }
  throw ConfigError("unknown scenario '" + text +
                    "' (expected s1, s2, or s3)");
}

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::s1_point_to_point:
      return "s1_point_to_point";
    case ScenarioId::s2_sinusoid:
      return "s2_sinusoid";
    case ScenarioId::s3_multiharmonic:
      return "s3_multiharmonic";
  }
  throw ConfigError("invalid scenario id");
}

std::string short_name(ScenarioId id) {
  switch (id) {
    case ScenarioId::s1_point_to_point:
      return "s1";
    case ScenarioId::s2_sinusoid:
      return "s2";
    case ScenarioId::s3_multiharmonic:
      return "s3";
  }
  throw ConfigError("invalid scenario id");
}

Eigen::Vector2d default_initial_pose() { return {0.0, kPi / 6.0}; }

ScenarioSpec build_reference(ScenarioId id, int num_samples, double dt,
                             const Eigen::Vector2d& initial_pose) {
  if (num_samples < 16) {
    throw StructuralError("build_reference: need at least 16 samples, got " +
                          std::to_string(num_samples));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw StructuralError("build_reference: sample period must be positive");
  }
  const double total = num_samples * dt;

  std::vector<Eigen::VectorXd> joints(2,
                                      Eigen::VectorXd::Zero(num_samples));
  for (int n = 0; n < num_samples; ++n) {
    const double t = n * dt;
    double alpha = initial_pose[0];
    double beta = initial_pose[1];
    switch (id) {
      case ScenarioId::s1_point_to_point: {
        const double tau = (t - 0.25 * total) / (0.5 * total);
        const double s = min_jerk(tau);
        alpha += 0.5 * kPi * s;
        beta += -kPi / 3.0 * s;
        break;
      }
      case ScenarioId::s2_sinusoid: {
        const double w = amplitude_window(t, total);
        alpha += 0.8 * w * std::sin(kTwoPi * 0.5 * t);
        beta += 0.6 * w * std::sin(kTwoPi * 0.75 * t);
        break;
      }
      case ScenarioId::s3_multiharmonic: {
        const double w = amplitude_window(t, total);
        const double harmonics = 0.6 * std::sin(kTwoPi * 0.4 * t) +
                                 0.25 * std::sin(kTwoPi * 1.2 * t);
        alpha += w * harmonics;
        beta += w * harmonics;
        break;
      }
    }
    joints[0][n] = alpha;
    joints[1][n] = beta;
  }

  // s1 dwells at both ends by construction (the interpolation coefficient
  // clamps to exactly 0 and 1 outside the middle half). For the windowed
  // scenarios, pin the two samples at each end to the rest pose: the window
  // is at rounding level there for the default horizon, and the pinning
  // makes the boundary first differences exactly zero for every horizon.
  if (id != ScenarioId::s1_point_to_point) {
    for (int j = 0; j < 2; ++j) {
      joints[j][0] = joints[j][1] = initial_pose[j];
      joints[j][num_samples - 1] = joints[j][num_samples - 2] =
          initial_pose[j];
    }
  }

  return ScenarioSpec{id, num_samples, dt, initial_pose,
                      from_channels(joints, dt)};
}

}  // namespace gpilc
