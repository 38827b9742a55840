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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "gpilc/errors.hpp"
#include "gpilc/spectral.hpp"

#include "support.hpp"

namespace {

using gpilc::NumericError;
using gpilc::StructuralError;

Eigen::VectorXd cosine(int n, int bin, double amplitude, double phase = 0.0) {
  Eigen::VectorXd x(n);
  for (int t = 0; t < n; ++t) {
    x[t] = amplitude * std::cos(2.0 * M_PI * bin * t / n + phase);
  }
  return x;
}

TEST_CASE("amplitude spectrum matches a quadratic-time transform") {
  std::mt19937_64 rng(2024);
  for (const int n : {8, 33, 64, 101}) {
    CAPTURE(n);
    const Eigen::VectorXd signal = gpilc::testing::random_vector(n, rng);
    const gpilc::AmplitudeSpectrum spectrum =
        gpilc::amplitude_spectrum(signal, 0.02);
    const std::vector<double> expected =
        gpilc::testing::dft_amplitudes(signal);
    REQUIRE(spectrum.amplitude.size() == expected.size());
    REQUIRE(spectrum.frequency.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(std::abs(spectrum.amplitude[k] - expected[k]) < 1e-12);
      CHECK(spectrum.frequency[k] ==
            doctest::Approx(k / (n * 0.02)).epsilon(1e-15));
    }
  }
}

TEST_CASE("a pure cosine concentrates its amplitude in one bin") {
  const int n = 64;
  const double dt = 0.02;
  const gpilc::AmplitudeSpectrum spectrum =
      gpilc::amplitude_spectrum(cosine(n, 5, 0.7, 0.3), dt);
  for (std::size_t k = 0; k < spectrum.amplitude.size(); ++k) {
    if (k == 5) {
      CHECK(spectrum.amplitude[k] == doctest::Approx(0.7).epsilon(1e-12));
    } else {
      CHECK(spectrum.amplitude[k] < 1e-12);
    }
  }
  CHECK(spectrum.frequency[5] == doctest::Approx(5.0 / (n * dt)));
}

TEST_CASE("constant signals appear only in the zero-frequency bin") {
  const Eigen::VectorXd signal = Eigen::VectorXd::Constant(32, -2.5);
  const gpilc::AmplitudeSpectrum spectrum =
      gpilc::amplitude_spectrum(signal, 0.1);
  CHECK(spectrum.amplitude[0] == doctest::Approx(2.5).epsilon(1e-13));
  for (std::size_t k = 1; k < spectrum.amplitude.size(); ++k) {
    CHECK(spectrum.amplitude[k] < 1e-12);
  }
}

TEST_CASE("the alternating signal lands on the shared half-rate bin") {
  const int n = 16;
  Eigen::VectorXd signal(n);
  for (int t = 0; t < n; ++t) {
    signal[t] = (t % 2 == 0) ? 0.4 : -0.4;
  }
  const gpilc::AmplitudeSpectrum spectrum =
      gpilc::amplitude_spectrum(signal, 0.05);
  // The half-rate bin is not doubled: its cosine is its own mirror image.
  CHECK(spectrum.amplitude[n / 2] == doctest::Approx(0.4).epsilon(1e-13));
  for (int k = 0; k < n / 2; ++k) {
    CHECK(spectrum.amplitude[k] < 1e-12);
  }
}

TEST_CASE("spectrum computation rejects malformed signals") {
  CHECK_THROWS_AS(gpilc::amplitude_spectrum(Eigen::VectorXd(), 0.1),
                  StructuralError);
  CHECK_THROWS_AS(gpilc::amplitude_spectrum(Eigen::VectorXd::Zero(8), 0.0),
                  StructuralError);
  CHECK_THROWS_AS(gpilc::amplitude_spectrum(Eigen::VectorXd::Zero(8), -0.1),
                  StructuralError);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(8);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(gpilc::amplitude_spectrum(bad, 0.1), NumericError);
}

TEST_CASE("passband edge bin rounds down and keeps an exact-hit bin") {
  // Bin spacing 1/(N dt) = 0.78125 Hz for N=64, dt=0.02.
  const int n = 64;
  const double dt = 0.02;
  const double bin_hz = 1.0 / (n * dt);
  CHECK(gpilc::passband_edge_bin(n, 3.0 * bin_hz, dt) == 3);
  CHECK(gpilc::passband_edge_bin(n, 3.0 * bin_hz - 1e-9, dt) == 2);
  CHECK(gpilc::passband_edge_bin(n, 3.5 * bin_hz, dt) == 3);
  CHECK(gpilc::passband_edge_bin(n, 0.0, dt) == 0);
  CHECK(gpilc::passband_edge_bin(n, -1.0, dt) == -1);
  // Beyond the representable band the edge clamps to the last bin.
  CHECK(gpilc::passband_edge_bin(n, 1e9, dt) == n / 2);
  CHECK_THROWS_AS(gpilc::passband_edge_bin(0, 1.0, dt), StructuralError);
  CHECK_THROWS_AS(gpilc::passband_edge_bin(n, 1.0, 0.0), StructuralError);
}

TEST_CASE("the low-pass removes the stop band to machine zero") {
  std::mt19937_64 rng(99);
  const int n = 128;
  const double dt = 0.02;
  const double cutoff_hz = 4.0;
  const Eigen::VectorXd noisy = gpilc::testing::random_vector(n, rng);
  const Eigen::VectorXd filtered =
      gpilc::brick_wall_lowpass(noisy, cutoff_hz, dt);
  const gpilc::AmplitudeSpectrum spectrum =
      gpilc::amplitude_spectrum(filtered, dt);
  const int keep = gpilc::passband_edge_bin(n, cutoff_hz, dt);
  double peak = 0.0;
  for (double a : spectrum.amplitude) peak = std::max(peak, a);
  REQUIRE(peak > 0.0);
  for (std::size_t k = 0; k < spectrum.amplitude.size(); ++k) {
    if (static_cast<int>(k) > keep) {
      CHECK(spectrum.amplitude[k] <= 1e-13 * peak);
    }
  }
}

TEST_CASE("the low-pass leaves passband content untouched") {
  std::mt19937_64 rng(100);
  const int n = 128;
  const double dt = 0.02;
  const Eigen::VectorXd raw = gpilc::testing::random_vector(n, rng);
  const Eigen::VectorXd filtered = gpilc::brick_wall_lowpass(raw, 6.0, dt);
  const gpilc::AmplitudeSpectrum before = gpilc::amplitude_spectrum(raw, dt);
  const gpilc::AmplitudeSpectrum after =
      gpilc::amplitude_spectrum(filtered, dt);
  const int keep = gpilc::passband_edge_bin(n, 6.0, dt);
  for (int k = 0; k <= keep; ++k) {
    CHECK(after.amplitude[k] ==
          doctest::Approx(before.amplitude[k]).epsilon(1e-12));
  }
}

TEST_CASE("an in-band cosine passes through the filter unchanged") {
  const int n = 96;
  const double dt = 0.01;
  const Eigen::VectorXd wave = cosine(n, 4, 1.3, 0.7);
  const double cutoff_hz = 4.0 / (n * dt);
  const Eigen::VectorXd filtered =
      gpilc::brick_wall_lowpass(wave, cutoff_hz, dt);
  CHECK((filtered - wave).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("filtering twice equals filtering once") {
  std::mt19937_64 rng(101);
  const Eigen::VectorXd raw = gpilc::testing::random_vector(200, rng);
  const Eigen::VectorXd once = gpilc::brick_wall_lowpass(raw, 2.0, 0.02);
  const Eigen::VectorXd twice = gpilc::brick_wall_lowpass(once, 2.0, 0.02);
  CHECK((twice - once).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("filtering preserves the mean when the zero bin is kept") {
  std::mt19937_64 rng(102);
  const Eigen::VectorXd raw =
      gpilc::testing::random_vector(64, rng).array() + 3.0;
  const Eigen::VectorXd filtered = gpilc::brick_wall_lowpass(raw, 1.0, 0.02);
  CHECK(filtered.mean() == doctest::Approx(raw.mean()).epsilon(1e-13));
}

}  // namespace
