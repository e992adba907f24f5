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

// Gaussian-weighted fusion of accepted components and Hann overlap-add
// assembly of the full pulse wave.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rppg/ingest.hpp"
#include "rppg/selection.hpp"

namespace rppg {

struct GaussianWeightParams {
  double mu = 0.0;
  double sigma = kInitialSigmaHz;
};

/// Normal density N(mu, sigma) evaluated at f.
double gaussian_weight(double f, const GaussianWeightParams& params);

/// sum_p w(f_p) x_p / sum_p w(f_p). The normalisation is carried out on
/// log-weights so that components far from mu cannot underflow every
/// weight to zero; the result is identical in exact arithmetic.
std::vector<double> fuse_window(std::span<const CandidateComponent> accepted,
                                const GaussianWeightParams& params);

/// Periodic Hann window w[n] = 0.5 - 0.5 cos(2 pi n / N); at 50% hop the
/// shifted copies sum to exactly 1.
std::vector<double> hann_periodic(std::size_t length);

struct PlacedWindow {
  std::size_t start = 0;
  std::vector<double> samples;
};

/// Hann-weights each window and sums it into place. Windows must all have
/// window_len samples and consecutive starts exactly `hop` apart
/// (kWindowSpacingError otherwise). hop == 0 means window_len / 2.
std::vector<double> overlap_add(std::span<const PlacedWindow> windows,
                                std::size_t window_len, std::size_t hop = 0);

struct PipelineConfig {
  double window_s = 10.0;
  double step_s = 1.0;
  /// 0 selects ssa::default_window_length.
  std::size_t ssa_window = 0;
  std::size_t sec_chn = kDefaultSecChn;
  double lambda = 100.0;
  double band_low_hz = 0.7;
  double band_high_hz = 4.0;
  int filter_order = 3;
  double sigma_init = kInitialSigmaHz;
  double sigma_floor = kSigmaFloorHz;
};

/// Throws kConfigError when the configuration is inconsistent for fs.
void validate(const PipelineConfig& config, double fs);

struct WindowInfo {
  std::size_t start = 0;
  double t_center = 0.0;
  double f_r = 0.0;
  double sigma_fr = 0.0;
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  bool used_fallback = false;
  bool emitted = false;
  bool filter_warning = false;
};

struct PulseWave {
  /// Not normalised; HR and SNR routines z-score internally.
  std::vector<double> samples;
  double fs = 0.0;
  /// Time of samples[0] on the source trace clock.
  double t0 = 0.0;
  std::vector<WindowInfo> windows;

  std::size_t fallback_count() const;
};

/// Slides a window_s window at step_s over the green channel; every window
/// is detrended, bandpassed, decomposed, and masked against the running
/// reference HR. Windows whose start is a multiple of window_len/2 are
/// fused and overlap-added. The first and last half-window (covered by a
/// single Hann slope) are trimmed from the output.
PulseWave run_pipeline(const RawTrace& trace, const PipelineConfig& config = {});

/// "# fs=<float>", "# t0=<float>", then "sample_index,value".
void write_pulse_csv(std::ostream& out, const PulseWave& pulse);
void save_pulse_csv(const std::filesystem::path& path, const PulseWave& pulse);
PulseWave read_pulse_csv(std::istream& in);
PulseWave load_pulse_csv(const std::filesystem::path& path);

/// JSON array of per-window metadata.
std::string window_metadata_json(const PulseWave& pulse);

}  // namespace rppg
