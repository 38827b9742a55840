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

// Shared test fixtures and independent reference implementations. The
// oracles here are deliberately written with different algorithms than the
// library (quadratic-time DFT instead of FFT, eigendecomposition instead
// of Cholesky, explicit matrix powers instead of recursive sensitivities)
// so that agreement between the two is meaningful.

#ifndef GPILC_TESTS_SUPPORT_HPP_
#define GPILC_TESTS_SUPPORT_HPP_

#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gpilc/gp.hpp"
#include "gpilc/plant.hpp"
#include "gpilc/trajectory.hpp"

namespace gpilc::testing {

// Quadratic-time one-sided amplitude spectrum: DC and (for even N) the
// Nyquist bin carry 1/N, interior bins 2/N, so a pure cosine of amplitude
// a shows up as a in its interior bin.
inline std::vector<double> dft_amplitudes(const Eigen::VectorXd& signal) {
  const int n = static_cast<int>(signal.size());
  const int bins = n / 2 + 1;
  std::vector<double> amplitude(bins);
  for (int k = 0; k < bins; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int t = 0; t < n; ++t) {
      const double angle = -2.0 * M_PI * k * t / n;
      acc += signal[t] * std::complex<double>(std::cos(angle),
                                              std::sin(angle));
    }
    const bool shared = k == 0 || (n % 2 == 0 && k == n / 2);
    amplitude[k] = (shared ? 1.0 : 2.0) * std::abs(acc) / n;
  }
  return amplitude;
}

// Discrete-time linear plant x+ = A x + B u, y = C x following the trial
// convention of the simulator: states[0] is the initial state, input
// sample k drives the step from k to k+1, and the final input sample is
// never applied. Deterministic and noise free; run_trial counts calls so
// tests can assert how often the loop touched the plant.
class LinearPlant : public TrialPlant {
 public:
  LinearPlant(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
              Eigen::VectorXd x0, int horizon, double sample_period)
      : a_(std::move(a)),
        b_(std::move(b)),
        c_(std::move(c)),
        x0_(std::move(x0)),
        horizon_(horizon),
        sample_period_(sample_period) {}

  int input_dim() const override { return static_cast<int>(b_.cols()); }
  int state_dim() const override { return static_cast<int>(a_.rows()); }
  int output_dim() const override { return static_cast<int>(c_.rows()); }
  int horizon() const override { return horizon_; }
  double sample_period() const override { return sample_period_; }
  Eigen::MatrixXd output_matrix() const override { return c_; }
  Eigen::VectorXd initial_state() const override { return x0_; }

  TrialResult run_trial(const LiftedTrajectory& input,
                        int /*trial_index*/) override {
    ++trials_run_;
    const int n = input.num_samples();
    Eigen::VectorXd states(state_dim() * n);
    Eigen::VectorXd output(output_dim() * n);
    Eigen::VectorXd x = x0_;
    for (int k = 0; k < n; ++k) {
      states.segment(static_cast<Eigen::Index>(k) * state_dim(),
                     state_dim()) = x;
      output.segment(static_cast<Eigen::Index>(k) * output_dim(),
                     output_dim()) = c_ * x;
      if (k + 1 < n) {
        x = a_ * x + b_ * input.sample(k);
      }
    }
    return {LiftedTrajectory(std::move(states), state_dim(),
                             input.sample_period()),
            LiftedTrajectory(std::move(output), output_dim(),
                             input.sample_period())};
  }

  int trials_run() const { return trials_run_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  Eigen::MatrixXd c_;
  Eigen::VectorXd x0_;
  int horizon_;
  double sample_period_;
  int trials_run_ = 0;
};

// Exact lifted input-to-output sensitivity of LinearPlant, built from
// explicit matrix powers: block (n, k) equals C A^(n-1-k) B for k < n and
// zero otherwise. The first block row is entirely zero because y(0) is
// fixed by the initial state.
inline Eigen::MatrixXd lifted_linear_map(const Eigen::MatrixXd& a,
                                         const Eigen::MatrixXd& b,
                                         const Eigen::MatrixXd& c,
                                         int num_samples) {
  const int o = static_cast<int>(c.rows());
  const int r = static_cast<int>(b.cols());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(o) * num_samples,
      static_cast<Eigen::Index>(r) * num_samples);
  // power = A^(n-1-k); walk diagonals so each power is formed once.
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  for (int gap = 1; gap < num_samples; ++gap) {
    const Eigen::MatrixXd block = c * power * b;
    for (int n = gap; n < num_samples; ++n) {
      p.block(static_cast<Eigen::Index>(o) * n,
              static_cast<Eigen::Index>(r) * (n - gap), o, r) = block;
    }
    power = a * power;
  }
  return p;
}

// Random A with spectral radius scaled to the requested value, so the
// plant is stable (or marginally so) by construction.
inline Eigen::MatrixXd random_stable_matrix(int dim, double spectral_radius,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      a(i, j) = gauss(rng);
    }
  }
  const double radius =
      a.eigenvalues().cwiseAbs().maxCoeff();
  if (radius > 0.0) {
    a *= spectral_radius / radius;
  }
  return a;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols,
                                     std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = gauss(rng);
    }
  }
  return m;
}

inline Eigen::VectorXd random_vector(int size, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) {
    v[i] = gauss(rng);
  }
  return v;
}

// Log marginal likelihood of the exact (unstandardized) observations under
// the squared-exponential prior, via eigendecomposition of the kernel
// matrix: both the quadratic form and the log determinant are assembled
// from the spectrum of K + sigma^2 I.
inline double evidence_by_eigendecomposition(
    const TrainingSet& data, const KernelHyperparameters& hyper) {
  const Eigen::MatrixXd k =
      se_kernel_matrix(data.regressors, data.regressors, hyper.length_scales);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  const Eigen::VectorXd lambda =
      eig.eigenvalues().array() + hyper.noise_variance;
  const Eigen::VectorXd projected =
      eig.eigenvectors().transpose() * data.observations;
  double quadratic = 0.0;
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    quadratic += projected[i] * projected[i] / lambda[i];
    log_det += std::log(lambda[i]);
  }
  const double t = static_cast<double>(data.count());
  return -0.5 * quadratic - 0.5 * log_det - 0.5 * t * std::log(2.0 * M_PI);
}

}  // namespace gpilc::testing

#endif  // GPILC_TESTS_SUPPORT_HPP_
