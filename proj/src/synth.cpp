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

#include "rppg/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "rppg/error.hpp"

namespace rppg {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void validate(const SynthConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); };
  const double f = config.hr_bpm / 60.0;
  if (!(f >= 0.7 && f <= 4.0)) fail("hr_bpm must lie in [42, 240]");
  if (!(config.fs > 8.0) || !std::isfinite(config.fs)) fail("fs must exceed 8 Hz");
  if (!(config.duration_s >= 10.0) || !std::isfinite(config.duration_s))
    fail("duration_s must be at least 10");
  if (!(config.harmonic_ratio >= 0.0 && config.harmonic_ratio <= 1.0))
    fail("harmonic_ratio must lie in [0, 1]");
  for (int c = 0; c < 3; ++c) {
    if (!finite_nonneg(config.pulse_amp[c])) fail("pulse_amp must be finite and >= 0");
    if (!finite_nonneg(config.noise_rms[c])) fail("noise_rms must be finite and >= 0");
    if (!std::isfinite(config.baseline[c])) fail("baseline must be finite");
  }
  if (!finite_nonneg(config.quantization_step)) fail("quantization_step must be >= 0");
  if (!finite_nonneg(config.drift_amp)) fail("drift_amp must be >= 0");
  if (!finite_nonneg(config.drift_hz)) fail("drift_hz must be >= 0");
}

RawTrace generate(const SynthConfig& config) {
  validate(config);
  const auto n = static_cast<Eigen::Index>(std::llround(config.duration_s * config.fs));
  const double f = config.hr_bpm / 60.0;
  const double two_pi = 2.0 * std::numbers::pi;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  RawTrace trace;
  trace.fs = config.fs;
  trace.samples.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / config.fs;
    const double pulse = std::sin(two_pi * f * t) + config.harmonic_ratio * std::sin(2.0 * two_pi * f * t);
    const double drift = config.drift_amp * std::sin(two_pi * config.drift_hz * t);
    for (int c = 0; c < 3; ++c) {
      // Always draw, so the noise stream does not depend on amplitudes.
      const double noise = config.noise_rms[c] * normal(rng);
      double v = config.baseline[c] + drift + config.pulse_amp[c] * pulse + noise;
      if (config.quantization_step > 0.0)
        v = config.quantization_step * std::round(v / config.quantization_step);
      trace.samples(i, c) = v;
    }
  }
  return trace;
}

std::vector<RawTrace> illumination_sweep(const SynthConfig& base,
                                         std::span<const double> levels) {
  std::vector<RawTrace> out;
  out.reserve(levels.size());
  for (double factor : levels) {
    if (!(factor > 0.0 && factor <= 1.0))
      throw Error(ErrorCode::kConfigError, "attenuation factors must lie in (0, 1]");
    SynthConfig cfg = base;
    for (double& a : cfg.pulse_amp) a *= factor;
    out.push_back(generate(cfg));
  }
  return out;
}

namespace {

Rgb read_triple(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::kConfigError, std::string(key) + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

SynthConfig synth_config_from_json(const std::string& text) {
  SynthConfig cfg;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::kConfigError, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "hr_bpm") cfg.hr_bpm = value.get<double>();
      else if (key == "fs") cfg.fs = value.get<double>();
      else if (key == "duration_s") cfg.duration_s = value.get<double>();
      else if (key == "pulse_amp") cfg.pulse_amp = read_triple(value, "pulse_amp");
      else if (key == "harmonic_ratio") cfg.harmonic_ratio = value.get<double>();
      else if (key == "noise_rms") cfg.noise_rms = read_triple(value, "noise_rms");
      else if (key == "quantization_step") cfg.quantization_step = value.get<double>();
      else if (key == "drift_amp") cfg.drift_amp = value.get<double>();
      else if (key == "drift_hz") cfg.drift_hz = value.get<double>();
      else if (key == "baseline") cfg.baseline = read_triple(value, "baseline");
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else throw Error(ErrorCode::kConfigError, "unknown synth config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  validate(cfg);
  return cfg;
}

std::string synth_config_to_json(const SynthConfig& config) {
  nlohmann::ordered_json j;
  j["hr_bpm"] = config.hr_bpm;
  j["fs"] = config.fs;
  j["duration_s"] = config.duration_s;
  j["pulse_amp"] = config.pulse_amp;
  j["harmonic_ratio"] = config.harmonic_ratio;
  j["noise_rms"] = config.noise_rms;
  j["quantization_step"] = config.quantization_step;
  j["drift_amp"] = config.drift_amp;
  j["drift_hz"] = config.drift_hz;
  j["baseline"] = config.baseline;
  j["seed"] = config.seed;
  return j.dump(2);
}

}  // namespace rppg
