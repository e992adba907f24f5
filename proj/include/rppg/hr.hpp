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
#include <utility>
#include <vector>

#include "rppg/reconstruct.hpp"

namespace rppg {

inline constexpr std::size_t kHrMinFft = std::size_t{1} << 14;

struct HrEstimate {
  double bpm = 0.0;
  double peak_freq = 0.0;
  /// (frequency Hz, power) over the pulse band.
  std::vector<std::pair<double, double>> spectrum;
};

struct HrOptions {
  double band_low_hz = 0.7;
  double band_high_hz = 4.0;
  std::size_t min_fft = kHrMinFft;
  /// Minimum length in seconds.
  double min_duration_s = 10.0;
};

/// 60 x the in-band argmax of the power spectrum of the z-scored signal,
/// zero-padded to >= min_fft points. Ties go to the lower frequency.
HrEstimate estimate_hr(std::span<const double> pulse, double fs,
                       const HrOptions& options = {});
HrEstimate estimate_hr(const PulseWave& pulse, const HrOptions& options = {});

}  // namespace rppg
