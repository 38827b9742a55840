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

#ifndef GPILC_SPECTRAL_HPP_
#define GPILC_SPECTRAL_HPP_

#include <Eigen/Core>

namespace gpilc {

// One-sided discrete amplitude spectrum of a real sequence: bins
// k = 0..N/2 at frequencies k/(N*dt). Amplitudes are scaled so a pure
// tone a*sin(2*pi*f*t) landing exactly on an interior bin reports a.
struct AmplitudeSpectrum {
  Eigen::VectorXd frequency;
  Eigen::VectorXd amplitude;
};

AmplitudeSpectrum amplitude_spectrum(const Eigen::VectorXd& signal, double dt);

/// Zero-phase low-pass by spectral truncation: transform, zero every bin
/// strictly above the cutoff, transform back. The retained coefficients
/// are untouched, so the filter applies no phase shift at any frequency
/// and the stop band is empty by construction.
Eigen::VectorXd brick_wall_lowpass(const Eigen::VectorXd& signal,
                                   double cutoff_hz, double dt);

/// First bin index strictly above which brick_wall_lowpass zeroes
/// coefficients, i.e. bins k <= passband_edge_bin(...) are kept.
int passband_edge_bin(int num_samples, double cutoff_hz, double dt);

}  // namespace gpilc

#endif  // GPILC_SPECTRAL_HPP_
