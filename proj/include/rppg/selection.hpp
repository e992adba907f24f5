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

// Reference heart-rate tracking and spectral masking of SSA components.
//
// A candidate with dominant frequency f is kept when it lies in the pulse
// band and either f or f/2 falls within f_r +/- 3 sigma(f_r), where f_r is
// the instantaneous reference HR of the current window. All frequencies
// here are in Hz.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rppg/ssa.hpp"

namespace rppg {

inline constexpr double kInitialSigmaHz = 0.05;
inline constexpr double kSigmaFloorHz = 0.01;
inline constexpr std::size_t kDefaultSecChn = 10;
inline constexpr std::size_t kDominantFrequencyMinFft = 8192;

struct ReferenceHrState {
  double f_r = 0.0;
  double sigma_fr = kInitialSigmaHz;
  std::vector<double> history;

  bool has_reference() const { return !history.empty(); }
};

struct CandidateComponent {
  std::vector<double> series;
  double dominant_freq = 0.0;
  double singular_value = 0.0;
};

enum class MaskReason {
  kFundamentalMatch,
  kHarmonicMatch,
  kBandReject,
  kWindowReject,
};

std::string_view to_string(MaskReason reason);

struct MaskDecision {
  bool accepted = false;
  MaskReason reason = MaskReason::kWindowReject;
};

struct MaskOptions {
  double band_low_hz = 0.7;
  double band_high_hz = 4.0;
  double window_sigmas = 3.0;
};

/// Argmax of the FFT magnitude of the mean-removed series within
/// [low, high], zero-padded to at least 8192 points. Needs >= 2 s of data;
/// throws kZeroSignal when the series is identically zero or constant.
double dominant_frequency(std::span<const double> series, double fs,
                          double low_hz = 0.7, double high_hz = 4.0);

struct ReferenceOptions {
  double band_low_hz = 0.7;
  double band_high_hz = 4.0;
  double sigma_init = kInitialSigmaHz;
  double sigma_floor = kSigmaFloorHz;
};

/// Sets f_r to the dominant frequency of the (detrended, bandpassed) green
/// window and appends it to the history. sigma_fr becomes the sample
/// standard deviation of the history, floored, once two values exist.
ReferenceHrState update_reference(ReferenceHrState state,
                                  std::span<const double> green_window,
                                  double fs,
                                  const ReferenceOptions& options = {});

/// Sample (n - 1) standard deviation.
double sample_stddev(std::span<const double> values);

MaskDecision mask_decision(double f_i, double f_r, double sigma_fr,
                           const MaskOptions& options = {});

std::vector<MaskDecision> spectral_mask(
    std::span<const CandidateComponent> candidates,
    const ReferenceHrState& state, const MaskOptions& options = {});

struct Selection {
  std::vector<CandidateComponent> accepted;
  /// Every inspected candidate with its decision, in singular-value order.
  std::vector<CandidateComponent> inspected;
  std::vector<MaskDecision> decisions;
  /// True when the mask rejected everything and the candidate nearest to
  /// f_r was kept instead.
  bool used_fallback = false;
};

/// Masks the leading min(sec_chn, available) components. Throws
/// kNoComponents for an empty decomposition.
Selection select_candidates(const ssa::Decomposition& decomposition, double fs,
                            const ReferenceHrState& state,
                            std::size_t sec_chn = kDefaultSecChn,
                            const MaskOptions& options = {});

}  // namespace rppg
