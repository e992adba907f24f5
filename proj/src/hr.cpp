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

#include "rppg/hr.hpp"

#include <algorithm>
#include <cmath>

#include "rppg/error.hpp"
#include "rppg/spectrum.hpp"

namespace rppg {

HrEstimate estimate_hr(std::span<const double> pulse, double fs,
                       const HrOptions& options) {
  if (!(fs > 0.0)) throw Error(ErrorCode::kConfigError, "fs must be positive");
  if (static_cast<double>(pulse.size()) < options.min_duration_s * fs - 1e-9)
    throw Error(ErrorCode::kSeriesTooShort, "HR estimation needs at least " +
                                                std::to_string(options.min_duration_s) +
                                                " s of signal");
  if (std::any_of(pulse.begin(), pulse.end(), [](double v) { return !std::isfinite(v); }))
    throw Error(ErrorCode::kNonFiniteInput, "pulse contains non-finite values");

  const std::vector<double> z = zscore(pulse);
  if (std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; }))
    throw Error(ErrorCode::kZeroSignal, "pulse has no variation");

  const std::size_t nfft = std::max(next_pow2(z.size()), options.min_fft);
  const PowerSpectrum spectrum = power_spectrum(z, fs, nfft);
  const std::size_t k = band_argmax(spectrum, options.band_low_hz, options.band_high_hz);
  if (k >= spectrum.nfft) throw Error(ErrorCode::kInvalidBand, "empty HR band");

  HrEstimate est;
  est.peak_freq = spectrum.frequency(k);
  est.bpm = 60.0 * est.peak_freq;
  for (std::size_t i = 0; i < spectrum.power.size(); ++i) {
    const double f = spectrum.frequency(i);
    if (f >= options.band_low_hz && f <= options.band_high_hz)
      est.spectrum.emplace_back(f, spectrum.power[i]);
  }
  return est;
}

HrEstimate estimate_hr(const PulseWave& pulse, const HrOptions& options) {
  return estimate_hr(pulse.samples, pulse.fs, options);
}

}  // namespace rppg
