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

#include "rppg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rppg/error.hpp"
#include "rppg/spectrum.hpp"

namespace rppg {

std::string_view to_string(MaskReason reason) {
  switch (reason) {
    case MaskReason::kFundamentalMatch: return "fundamental-match";
    case MaskReason::kHarmonicMatch: return "harmonic-match";
    case MaskReason::kBandReject: return "band-reject";
    case MaskReason::kWindowReject: return "window-reject";
  }
  return "unknown";
}

double dominant_frequency(std::span<const double> series, double fs,
                          double low_hz, double high_hz) {
  if (!(fs > 0.0)) throw Error(ErrorCode::kConfigError, "fs must be positive");
  if (static_cast<double>(series.size()) < 2.0 * fs)
    throw Error(ErrorCode::kSeriesTooShort, "dominant frequency needs >= 2 s of data");
  if (std::all_of(series.begin(), series.end(), [](double v) { return v == 0.0; }))
    throw Error(ErrorCode::kZeroSignal, "series is identically zero");

  // DC sidelobes of the padded transform would otherwise reach into the band.
  const std::vector<double> centred = remove_mean(series);
  if (std::all_of(centred.begin(), centred.end(), [](double v) { return v == 0.0; }))
    throw Error(ErrorCode::kZeroSignal, "series is constant");

  const std::size_t nfft = std::max(next_pow2(series.size()), kDominantFrequencyMinFft);
  const PowerSpectrum spectrum = power_spectrum(centred, fs, nfft);
  const std::size_t k = band_argmax(spectrum, low_hz, high_hz);
  if (k >= spectrum.nfft)
    throw Error(ErrorCode::kInvalidBand, "no FFT bin inside the search band");
  return spectrum.frequency(k);
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

ReferenceHrState update_reference(ReferenceHrState state,
                                  std::span<const double> green_window,
                                  double fs, const ReferenceOptions& options) {
  state.f_r = dominant_frequency(green_window, fs, options.band_low_hz,
                                 options.band_high_hz);
  state.history.push_back(state.f_r);
  if (state.history.size() >= 2)
    state.sigma_fr = std::max(sample_stddev(state.history), options.sigma_floor);
  else
    state.sigma_fr = options.sigma_init;
  return state;
}

MaskDecision mask_decision(double f_i, double f_r, double sigma_fr,
                           const MaskOptions& options) {
  if (!(f_i >= options.band_low_hz && f_i <= options.band_high_hz))
    return {false, MaskReason::kBandReject};
  const double lo = f_r - options.window_sigmas * sigma_fr;
  const double hi = f_r + options.window_sigmas * sigma_fr;
  if (lo <= f_i && f_i <= hi) return {true, MaskReason::kFundamentalMatch};
  const double half = f_i / 2.0;
  if (lo <= half && half <= hi) return {true, MaskReason::kHarmonicMatch};
  return {false, MaskReason::kWindowReject};
}

std::vector<MaskDecision> spectral_mask(
    std::span<const CandidateComponent> candidates,
    const ReferenceHrState& state, const MaskOptions& options) {
  std::vector<MaskDecision> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates)
    out.push_back(mask_decision(c.dominant_freq, state.f_r, state.sigma_fr, options));
  return out;
}

Selection select_candidates(const ssa::Decomposition& decomposition, double fs,
                            const ReferenceHrState& state, std::size_t sec_chn,
                            const MaskOptions& options) {
  if (decomposition.components.empty())
    throw Error(ErrorCode::kNoComponents, "decomposition has no components");

  Selection sel;
  const std::size_t n = std::min(sec_chn, decomposition.components.size());
  for (std::size_t p = 0; p < n; ++p) {
    CandidateComponent c;
    c.series = decomposition.components[p];
    c.singular_value = decomposition.singular_values[p];
    try {
      c.dominant_freq = dominant_frequency(c.series, fs, 0.0, fs / 2.0);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroSignal) throw;
      c.dominant_freq = 0.0;
    }
    sel.inspected.push_back(std::move(c));
  }
  sel.decisions = spectral_mask(sel.inspected, state, options);
  for (std::size_t p = 0; p < n; ++p)
    if (sel.decisions[p].accepted) sel.accepted.push_back(sel.inspected[p]);

  if (sel.accepted.empty()) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < n; ++p)
      if (std::abs(sel.inspected[p].dominant_freq - state.f_r) <
          std::abs(sel.inspected[best].dominant_freq - state.f_r))
        best = p;
    sel.accepted.push_back(sel.inspected[best]);
    sel.used_fallback = true;
  }
  return sel;
}

}  // namespace rppg
