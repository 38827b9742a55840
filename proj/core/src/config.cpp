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

#include "gpilc/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "gpilc/errors.hpp"
#include "gpilc/scenarios.hpp"

namespace gpilc {
namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(parsed)) {
      throw std::invalid_argument(value);
    }
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) +
                      ": expected a number, got '" + value + "'");
  }
}

long long parse_integer(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) +
                      ": expected an integer, got '" + value + "'");
  }
}

void apply_key(AppConfig* config, const std::string& key,
               const std::string& value, int line) {
  if (key == "seed" || key == "learn.seed") {
    config->learn.seed =
        static_cast<std::uint64_t>(parse_integer(value, line));
  } else if (key == "learn.window_size") {
    config->learn.window_size = static_cast<int>(parse_integer(value, line));
  } else if (key == "learn.max_trials") {
    config->learn.max_trials = static_cast<int>(parse_integer(value, line));
  } else if (key == "learn.input_variance") {
    if (value == "auto") {
      config->learn.input_variance.reset();
    } else {
      config->learn.input_variance = parse_double(value, line);
    }
  } else if (key == "learn.spectral_threshold") {
    config->learn.spectral_threshold = parse_double(value, line);
  } else if (key == "learn.epsilon_stop") {
    config->learn.epsilon_stop = parse_double(value, line);
  } else if (key == "learn.noise_level") {
    config->learn.noise_level = parse_double(value, line);
  } else if (key == "learn.effort_scale") {
    config->learn.effort_scale = parse_double(value, line);
  } else if (key == "learn.effort_scale_initial") {
    config->learn.effort_scale_initial = parse_double(value, line);
  } else if (key == "learn.effort_decay") {
    config->learn.effort_decay = parse_double(value, line);
  } else if (key == "learn.gp_restarts") {
    config->learn.train.num_restarts =
        static_cast<int>(parse_integer(value, line));
  } else if (key == "plant.l1") {
    config->plant.l1 = parse_double(value, line);
  } else if (key == "plant.l2") {
    config->plant.l2 = parse_double(value, line);
  } else if (key == "plant.m1") {
    config->plant.m1 = parse_double(value, line);
  } else if (key == "plant.m2") {
    config->plant.m2 = parse_double(value, line);
  } else if (key == "plant.I1") {
    config->plant.I1 = parse_double(value, line);
  } else if (key == "plant.I2") {
    config->plant.I2 = parse_double(value, line);
  } else if (key == "plant.r1") {
    config->plant.r1 = parse_double(value, line);
  } else if (key == "plant.r2") {
    config->plant.r2 = parse_double(value, line);
  } else if (key == "plant.d1") {
    config->plant.d1 = parse_double(value, line);
  } else if (key == "plant.d2") {
    config->plant.d2 = parse_double(value, line);
  } else if (key == "plant.torque_limit") {
    config->plant.torque_limit = parse_double(value, line);
  } else if (key == "plant.noise_std") {
    config->plant_noise_std = parse_double(value, line);
  } else if (key == "scenario.id") {
    if (value != "all") {
      parse_scenario_id(value);  // validates
    }
    config->scenario = value;
  } else if (key == "scenario.num_samples") {
    config->num_samples = static_cast<int>(parse_integer(value, line));
  } else if (key == "scenario.dt") {
    config->dt = parse_double(value, line);
  } else if (key == "scenario.alpha0") {
    config->initial_pose[0] = parse_double(value, line);
  } else if (key == "scenario.beta0") {
    config->initial_pose[1] = parse_double(value, line);
  } else {
    throw ConfigError("config line " + std::to_string(line) +
                      ": unknown key '" + key + "'");
  }
}

}  // namespace

void AppConfig::validate() const {
  plant.validate();
  learn.validate();
  if (plant_noise_std < 0.0 || !std::isfinite(plant_noise_std)) {
    throw ConfigError("AppConfig: plant.noise_std must be finite and >= 0");
  }
  if (scenario != "all") {
    parse_scenario_id(scenario);
  }
  if (num_samples < 16) {
    throw ConfigError("AppConfig: scenario.num_samples must be >= 16");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("AppConfig: scenario.dt must be positive");
  }
  if (!initial_pose.allFinite()) {
    throw ConfigError("AppConfig: initial pose must be finite");
  }
}

AppConfig parse_config(std::istream& stream) {
  AppConfig config;
  std::string raw_line;
  int line = 0;
  while (std::getline(stream, raw_line)) {
    ++line;
    const auto comment = raw_line.find('#');
    if (comment != std::string::npos) {
      raw_line.erase(comment);
    }
    const std::string text = trim(raw_line);
    if (text.empty()) {
      continue;
    }
    const auto equals = text.find('=');
    if (equals == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) +
                        ": expected 'key = value', got '" + text + "'");
    }
    const std::string key = trim(text.substr(0, equals));
    const std::string value = trim(text.substr(equals + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line) +
                        ": empty key or value");
    }
    apply_key(&config, key, value, line);
  }
  config.validate();
  return config;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  return parse_config(stream);
}

}  // namespace gpilc
