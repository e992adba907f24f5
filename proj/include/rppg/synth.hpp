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

// Synthetic RGB traces: a pulse fundamental plus first harmonic on a
// baseline, a slow drift, white Gaussian sensor noise and uniform
// quantization. Illumination is modelled as a scale on the pulse only.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rppg/ingest.hpp"

namespace rppg {

struct SynthConfig {
  double hr_bpm = 72.0;
  double fs = 30.0;
  double duration_s = 60.0;
  Rgb pulse_amp = {0.3, 1.0, 0.2};
  double harmonic_ratio = 0.5;
  Rgb noise_rms = {0.0, 0.0, 0.0};
  double quantization_step = 0.0;
  double drift_amp = 0.0;
  /// Slow-trend frequency, Hz.
  double drift_hz = 0.05;
  Rgb baseline = {120.0, 110.0, 90.0};
  std::uint64_t seed = 0;
};

/// Throws kConfigError unless hr in [42, 240] bpm, fs > 8, duration >= 10 s,
/// harmonic_ratio in [0, 1] and every amplitude/step is finite and >= 0.
void validate(const SynthConfig& config);

/// Deterministic for a given config (including seed).
RawTrace generate(const SynthConfig& config);

/// One trace per attenuation factor in (0, 1]: pulse amplitudes scaled,
/// noise and quantization unchanged, same seed.
std::vector<RawTrace> illumination_sweep(const SynthConfig& base,
                                         std::span<const double> levels);

/// JSON object with any subset of the SynthConfig fields; absent fields
/// keep their defaults. Triples are 3-element arrays.
SynthConfig synth_config_from_json(const std::string& text);
std::string synth_config_to_json(const SynthConfig& config);

}  // namespace rppg
