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

#ifndef GPILC_CONFIG_HPP_
#define GPILC_CONFIG_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "gpilc/ilc.hpp"
#include "gpilc/scara.hpp"

namespace gpilc {

// Full run configuration; every field has a documented default so an empty
// config file is valid.
struct AppConfig {
  PlantParameters plant;
  // Standard deviation of measurement noise added to the simulated outputs.
  double plant_noise_std = 0.0;
  LearningConfig learn;
  // "s1", "s2", "s3", or "all".
  std::string scenario = "s1";
  int num_samples = 200;
  double dt = 0.02;
  Eigen::Vector2d initial_pose = Eigen::Vector2d(0.0, 0.52359877559829887);

  void validate() const;
};

// Line-based `key = value` text with `#` comments. Keys are namespaced
// `plant.*`, `learn.*`, `scenario.*`; the bare key `seed` is an alias for
// `learn.seed`. `learn.input_variance` accepts a number or `auto`. Missing
// keys keep their defaults; unknown keys are an error naming the key;
// malformed lines are an error naming the line number.
AppConfig parse_config(std::istream& stream);
AppConfig load_config(const std::filesystem::path& path);

}  // namespace gpilc

#endif  // GPILC_CONFIG_HPP_
