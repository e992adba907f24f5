// Copyright 2026 The lowlight-rppg Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rppg {

/// Pulse band used throughout: [0.7, 4.0] Hz (42..240 bpm).
inline constexpr double kPulseBandLowHz = 0.7;
inline constexpr double kPulseBandHighHz = 4.0;

/// One-sided power spectrum |X(k)|^2 for k = 0..nfft/2 of a real series
/// zero-padded (or truncated, never) to nfft points.
struct PowerSpectrum {
  std::vector<double> power;
  double fs = 0.0;
  std::size_t nfft = 0;

  double bin_hz() const { return fs / static_cast<double>(nfft); }
  double frequency(std::size_t k) const { return bin_hz() * static_cast<double>(k); }
};

std::size_t next_pow2(std::size_t n);

/// nfft must be >= series.size().
PowerSpectrum power_spectrum(std::span<const double> series, double fs,
                             std::size_t nfft);

/// Index of the largest bin with frequency in [low, high]; ties go to the
/// lowest frequency. Returns nfft (an invalid bin) when the band is empty.
std::size_t band_argmax(const PowerSpectrum& spectrum, double low_hz,
                        double high_hz);

/// Sum of power over bins with frequency in [low, high].
double band_power(const PowerSpectrum& spectrum, double low_hz, double high_hz);

std::vector<double> remove_mean(std::span<const double> series);

/// Zero-mean, unit-variance copy. A constant series maps to all zeros.
std::vector<double> zscore(std::span<const double> series);

}  // namespace rppg
