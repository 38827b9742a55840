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

#include "gpilc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

#include "gpilc/errors.hpp"

namespace gpilc {

namespace {

// FFTW plan creation/destruction is not thread safe; executions are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

std::vector<std::complex<double>> forward_r2c(const Eigen::VectorXd& signal) {
  const int n = static_cast<int>(signal.size());
  std::vector<double> in(signal.data(), signal.data() + n);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (plan == nullptr) {
    throw NumericError("forward_r2c: fftw plan creation failed");
  }
  fftw_execute(plan);
  PlanDeleter{}(plan);
  return out;
}

Eigen::VectorXd inverse_c2r(std::vector<std::complex<double>>& coeffs, int n) {
  Eigen::VectorXd out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(n,
                                reinterpret_cast<fftw_complex*>(coeffs.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    throw NumericError("inverse_c2r: fftw plan creation failed");
  }
  fftw_execute(plan);
  PlanDeleter{}(plan);
  out /= static_cast<double>(n);  // fftw transforms are unnormalized
  return out;
}

void check_signal(const Eigen::VectorXd& signal, double dt, const char* op) {
  if (signal.size() < 1) {
    throw StructuralError(std::string(op) + ": empty signal");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw StructuralError(std::string(op) + ": sample period must be positive");
  }
  if (!signal.allFinite()) {
    throw NumericError(std::string(op) + ": signal contains non-finite values");
  }
}

}  // namespace

AmplitudeSpectrum amplitude_spectrum(const Eigen::VectorXd& signal, double dt) {
  check_signal(signal, dt, "amplitude_spectrum");
  const int n = static_cast<int>(signal.size());
  auto coeffs = forward_r2c(signal);
  const int bins = static_cast<int>(coeffs.size());
  AmplitudeSpectrum spectrum;
  spectrum.frequency.resize(bins);
  spectrum.amplitude.resize(bins);
  for (int k = 0; k < bins; ++k) {
    spectrum.frequency[k] = static_cast<double>(k) / (n * dt);
    const bool shared = k == 0 || (n % 2 == 0 && k == n / 2);
    const double scale = shared ? 1.0 : 2.0;
    spectrum.amplitude[k] = scale * std::abs(coeffs[k]) / n;
  }
  return spectrum;
}

int passband_edge_bin(int num_samples, double cutoff_hz, double dt) {
  if (num_samples < 1 || !(dt > 0.0)) {
    throw StructuralError("passband_edge_bin: invalid shape");
  }
  if (cutoff_hz < 0.0) return -1;  // nothing passes
  const int bins = num_samples / 2;
  // Keep bin k while k/(N dt) <= cutoff, with a relative guard so a
  // cutoff sitting exactly on a bin keeps that bin.
  const double edge = cutoff_hz * num_samples * dt * (1.0 + 1e-12);
  const int k = static_cast<int>(std::floor(edge));
  return k > bins ? bins : k;
}

Eigen::VectorXd brick_wall_lowpass(const Eigen::VectorXd& signal,
                                   double cutoff_hz, double dt) {
  check_signal(signal, dt, "brick_wall_lowpass");
  const int n = static_cast<int>(signal.size());
  auto coeffs = forward_r2c(signal);
  const int keep = passband_edge_bin(n, cutoff_hz, dt);
  for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) {
    if (k > keep) coeffs[k] = 0.0;
  }
  return inverse_c2r(coeffs, n);
}

}  // namespace gpilc
