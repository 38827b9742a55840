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

#ifndef GPILC_ERRORS_HPP_
#define GPILC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gpilc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape, dimension, or index violations (mismatched trajectories, bad
/// sample counts, out-of-range variable indices).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or other numerical failures.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A simulation or model roll-out left the finite range; carries the
/// sample index at which the blow-up was detected.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, int sample_index)
      : NumericError(what), sample_index_(sample_index) {}
  int sample_index() const { return sample_index_; }

 private:
  int sample_index_;
};

/// A matrix factorization failed even after jitter escalation.
class ConditioningError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The first trial already tracks the reference perfectly, so the
/// normalized error norm is undefined.
class DegenerateNormalizationError : public Error {
 public:
  using Error::Error;
};

/// An input or output variable is disconnected in the linearized model,
/// producing a zero block norm.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

/// Input-variance calibration could not excite the plant.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Config file syntax errors, unknown keys, or invalid values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpilc

#endif  // GPILC_ERRORS_HPP_
