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

#ifndef GPILC_TRAJECTORY_HPP_
#define GPILC_TRAJECTORY_HPP_

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpilc/errors.hpp"

namespace gpilc {

// A finite-horizon trajectory of D-dimensional samples stacked into one
// flat vector. The layout is sample-major: element n*D + d holds variable
// d at sample n (both zero-based). This stacked form is the common
// currency of the learning loop; a whole trial's input-output behaviour
// becomes a single matrix acting on vectors of this shape.
//
// Values are immutable after construction and safe to share across
// threads.
class LiftedTrajectory {
 public:
  LiftedTrajectory(Eigen::VectorXd data, int dim_per_sample,
                   double sample_period);

  int dim_per_sample() const { return dim_per_sample_; }
  int num_samples() const { return num_samples_; }
  double sample_period() const { return sample_period_; }
  double duration() const { return num_samples_ * sample_period_; }

  const Eigen::VectorXd& data() const { return data_; }

  /// View of sample n (zero-based), a vector of dim_per_sample entries.
  Eigen::Map<const Eigen::VectorXd> sample(int n) const;

  /// Element access: variable d at sample n, both zero-based.
  double at(int n, int d) const;

  bool same_shape(const LiftedTrajectory& other) const {
    return dim_per_sample_ == other.dim_per_sample_ &&
           num_samples_ == other.num_samples_ &&
           sample_period_ == other.sample_period_;
  }

 private:
  Eigen::VectorXd data_;
  int dim_per_sample_;
  int num_samples_;
  double sample_period_;
};

/// Stacks N equally sized sample vectors into a LiftedTrajectory.
LiftedTrajectory interleave(const std::vector<Eigen::VectorXd>& samples,
                            double sample_period);

/// Inverse of interleave: recovers the per-sample vectors.
std::vector<Eigen::VectorXd> deinterleave(const LiftedTrajectory& traj);

/// Builds a trajectory from D equally long channels, where channel d is
/// the time series of variable d. Inverse of variable_block.
LiftedTrajectory from_channels(const std::vector<Eigen::VectorXd>& channels,
                               double sample_period);

/// The trajectory of one variable (zero-based index) across all samples.
Eigen::VectorXd variable_block(const LiftedTrajectory& traj, int var_index);

/// Elementwise reference minus output. Shapes and sample periods must
/// match exactly.
LiftedTrajectory tracking_error(const LiftedTrajectory& reference,
                                const LiftedTrajectory& output);

/// Euclidean error norm of trial j divided by that of the first trial:
/// ||r - y_j|| / ||r - y_1||. Throws DegenerateNormalizationError when
/// the first trial already matches the reference.
double normalized_error_norm(const LiftedTrajectory& reference,
                             const LiftedTrajectory& output_j,
                             const LiftedTrajectory& output_1);

// One executed trial: the commanded input, the resulting state and output
// trajectories, and the tracking error against the run's reference.
struct TrialRecord {
  int trial_index = 0;
  LiftedTrajectory input;
  LiftedTrajectory states;
  LiftedTrajectory output;
  LiftedTrajectory error;
};

/// Builds a TrialRecord, validating that input, states, and output agree
/// on sample count and period, and derives the error from the reference.
TrialRecord make_trial_record(int trial_index, LiftedTrajectory input,
                              LiftedTrajectory states, LiftedTrajectory output,
                              const LiftedTrajectory& reference);

/// Writes the CSV form: header `sample,var_1,...,var_D`, one row per
/// sample with a 1-based sample column, 15 significant digits.
void write_csv(const LiftedTrajectory& traj, std::ostream& out);
void write_csv_file(const LiftedTrajectory& traj, const std::string& path);

/// Parses the CSV form back. The sample period is not stored in the file
/// and must be supplied.
LiftedTrajectory read_csv(std::istream& in, double sample_period);
LiftedTrajectory read_csv_file(const std::string& path, double sample_period);

}  // namespace gpilc

#endif  // GPILC_TRAJECTORY_HPP_
