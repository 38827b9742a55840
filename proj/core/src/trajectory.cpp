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

#include "gpilc/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace gpilc {

namespace {

std::string shape_string(const LiftedTrajectory& t) {
  std::ostringstream os;
  os << "D=" << t.dim_per_sample() << " N=" << t.num_samples()
     << " dt=" << t.sample_period();
  return os.str();
}

void require_same_shape(const LiftedTrajectory& a, const LiftedTrajectory& b,
                        const char* op) {
  if (!a.same_shape(b)) {
    throw StructuralError(std::string(op) + ": shape mismatch (" +
                          shape_string(a) + " vs " + shape_string(b) + ")");
  }
}

}  // namespace

LiftedTrajectory::LiftedTrajectory(Eigen::VectorXd data, int dim_per_sample,
                                   double sample_period)
    : data_(std::move(data)),
      dim_per_sample_(dim_per_sample),
      sample_period_(sample_period) {
  if (dim_per_sample_ < 1) {
    throw StructuralError("LiftedTrajectory: dim_per_sample must be >= 1");
  }
  if (data_.size() == 0 || data_.size() % dim_per_sample_ != 0) {
    throw StructuralError(
        "LiftedTrajectory: data length " + std::to_string(data_.size()) +
        " is not a positive multiple of D=" + std::to_string(dim_per_sample_));
  }
  if (!(sample_period_ > 0.0) || !std::isfinite(sample_period_)) {
    throw StructuralError("LiftedTrajectory: sample_period must be positive");
  }
  num_samples_ = static_cast<int>(data_.size()) / dim_per_sample_;
}

Eigen::Map<const Eigen::VectorXd> LiftedTrajectory::sample(int n) const {
  if (n < 0 || n >= num_samples_) {
    throw StructuralError("LiftedTrajectory::sample: index " +
                          std::to_string(n) + " out of range [0, " +
                          std::to_string(num_samples_) + ")");
  }
  return {data_.data() + static_cast<std::ptrdiff_t>(n) * dim_per_sample_,
          dim_per_sample_};
}

double LiftedTrajectory::at(int n, int d) const {
  if (d < 0 || d >= dim_per_sample_) {
    throw StructuralError("LiftedTrajectory::at: variable index " +
                          std::to_string(d) + " out of range [0, " +
                          std::to_string(dim_per_sample_) + ")");
  }
  return sample(n)[d];
}

LiftedTrajectory interleave(const std::vector<Eigen::VectorXd>& samples,
                            double sample_period) {
  if (samples.empty()) {
    throw StructuralError("interleave: need at least one sample");
  }
  const auto dim = samples.front().size();
  if (dim < 1) {
    throw StructuralError("interleave: samples must be non-empty vectors");
  }
  Eigen::VectorXd data(static_cast<Eigen::Index>(samples.size()) * dim);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    if (samples[n].size() != dim) {
      throw StructuralError(
          "interleave: sample " + std::to_string(n) + " has dimension " +
          std::to_string(samples[n].size()) + ", expected " +
          std::to_string(dim));
    }
    data.segment(static_cast<Eigen::Index>(n) * dim, dim) = samples[n];
  }
  return {std::move(data), static_cast<int>(dim), sample_period};
}

std::vector<Eigen::VectorXd> deinterleave(const LiftedTrajectory& traj) {
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(traj.num_samples());
  for (int n = 0; n < traj.num_samples(); ++n) {
    samples.emplace_back(traj.sample(n));
  }
  return samples;
}

LiftedTrajectory from_channels(const std::vector<Eigen::VectorXd>& channels,
                               double sample_period) {
  if (channels.empty()) {
    throw StructuralError("from_channels: need at least one channel");
  }
  const auto num_samples = channels.front().size();
  if (num_samples < 1) {
    throw StructuralError("from_channels: channels must be non-empty vectors");
  }
  const auto dim = static_cast<Eigen::Index>(channels.size());
  Eigen::VectorXd data(num_samples * dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    const Eigen::VectorXd& channel = channels[static_cast<std::size_t>(d)];
    if (channel.size() != num_samples) {
      throw StructuralError(
          "from_channels: channel " + std::to_string(d) + " has length " +
          std::to_string(channel.size()) + ", expected " +
          std::to_string(num_samples));
    }
    for (Eigen::Index n = 0; n < num_samples; ++n) {
      data[n * dim + d] = channel[n];
    }
  }
  return {std::move(data), static_cast<int>(dim), sample_period};
}

Eigen::VectorXd variable_block(const LiftedTrajectory& traj, int var_index) {
  if (var_index < 0 || var_index >= traj.dim_per_sample()) {
    throw StructuralError("variable_block: variable index " +
                          std::to_string(var_index) + " out of range [0, " +
                          std::to_string(traj.dim_per_sample()) + ")");
  }
  Eigen::VectorXd block(traj.num_samples());
  for (int n = 0; n < traj.num_samples(); ++n) {
    block[n] = traj.data()[static_cast<Eigen::Index>(n) *
                               traj.dim_per_sample() +
                           var_index];
  }
  return block;
}

LiftedTrajectory tracking_error(const LiftedTrajectory& reference,
                                const LiftedTrajectory& output) {
  require_same_shape(reference, output, "tracking_error");
  return {reference.data() - output.data(), reference.dim_per_sample(),
          reference.sample_period()};
}

double normalized_error_norm(const LiftedTrajectory& reference,
                             const LiftedTrajectory& output_j,
                             const LiftedTrajectory& output_1) {
  require_same_shape(reference, output_j, "normalized_error_norm");
  require_same_shape(reference, output_1, "normalized_error_norm");
  const double denom = (reference.data() - output_1.data()).norm();
  if (denom == 0.0) {
    throw DegenerateNormalizationError(
        "normalized_error_norm: first trial error is zero");
  }
  return (reference.data() - output_j.data()).norm() / denom;
}

TrialRecord make_trial_record(int trial_index, LiftedTrajectory input,
                              LiftedTrajectory states, LiftedTrajectory output,
                              const LiftedTrajectory& reference) {
  if (input.num_samples() != states.num_samples() ||
      input.num_samples() != output.num_samples() ||
      input.sample_period() != states.sample_period() ||
      input.sample_period() != output.sample_period()) {
    throw StructuralError(
        "make_trial_record: input, states, and output must share N and dt");
  }
  LiftedTrajectory error = tracking_error(reference, output);
  return {trial_index, std::move(input), std::move(states), std::move(output),
          std::move(error)};
}

void write_csv(const LiftedTrajectory& traj, std::ostream& out) {
  out << "sample";
  for (int d = 1; d <= traj.dim_per_sample(); ++d) {
    out << ",var_" << d;
  }
  out << "\n";
  char buf[40];
  for (int n = 0; n < traj.num_samples(); ++n) {
    out << (n + 1);
    for (int d = 0; d < traj.dim_per_sample(); ++d) {
      std::snprintf(buf, sizeof(buf), "%.15g", traj.at(n, d));
      out << ',' << buf;
    }
    out << "\n";
  }
}

void write_csv_file(const LiftedTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("write_csv_file: cannot open '" + path + "' for writing");
  }
  write_csv(traj, out);
  out.flush();
  if (!out) {
    throw Error("write_csv_file: write to '" + path + "' failed");
  }
}

LiftedTrajectory read_csv(std::istream& in, double sample_period) {
  std::string line;
  if (!std::getline(in, line)) {
    throw StructuralError("read_csv: empty stream");
  }
  int dim = 0;
  {
    std::stringstream header(line);
    std::string field;
    if (!std::getline(header, field, ',') || field != "sample") {
      throw StructuralError("read_csv: header must start with 'sample'");
    }
    while (std::getline(header, field, ',')) ++dim;
    if (dim < 1) {
      throw StructuralError("read_csv: header names no variables");
    }
  }
  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    int col = -1;  // first column is the sample index
    while (std::getline(row, field, ',')) {
      if (col >= 0) {
        values.push_back(std::stod(field));
      }
      ++col;
    }
    if (col != dim) {
      throw StructuralError("read_csv: row " + std::to_string(rows + 1) +
                            " has " + std::to_string(col) +
                            " values, expected " + std::to_string(dim));
    }
    ++rows;
  }
  if (rows == 0) {
    throw StructuralError("read_csv: no data rows");
  }
  Eigen::VectorXd data =
      Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  return {std::move(data), dim, sample_period};
}

LiftedTrajectory read_csv_file(const std::string& path, double sample_period) {
  std::ifstream in(path);
  if (!in) {
    throw Error("read_csv_file: cannot open '" + path + "'");
  }
  return read_csv(in, sample_period);
}

}  // namespace gpilc
