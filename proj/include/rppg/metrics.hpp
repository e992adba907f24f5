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

// Evaluation quantities: band-relative SNR, MAE/RMSE of HR estimates, and
// the spectrum/spectrogram views used for noise analysis.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rppg/ingest.hpp"
#include "rppg/reconstruct.hpp"

namespace rppg {

inline constexpr double kSnrCapDb = 60.0;

struct SnrOptions {
  double band_low_hz = 0.7;
  double band_high_hz = 4.0;
  double fundamental_halfwidth_hz = 0.1;
  double harmonic_halfwidth_hz = 0.2;
};

/// 10 log10(P_in / P_out) on the mean-removed signal's periodogram, where
/// P_in is the power within the fundamental and first-harmonic bands of
/// hr_ref and P_out is the rest of the pulse band. Returns +inf when P_out
/// is zero.
double snr_db(std::span<const double> signal, double fs, double hr_ref_bpm,
              const SnrOptions& options = {});

/// Clamps to kSnrCapDb (and maps +inf to it).
double cap_snr(double snr);

/// Throws kPairingError for empty or mismatched inputs.
double mae(std::span<const double> est, std::span<const double> ref);
double rmse(std::span<const double> est, std::span<const double> ref);

struct Spectrogram {
  std::vector<double> times;        ///< slice centres, seconds
  std::vector<double> frequencies;  ///< bin centres, Hz, within [0, max_hz]
  /// power[slice][bin]
  std::vector<std::vector<double>> power;
};

/// Hann-windowed short-time power spectrum of mean-removed slices.
Spectrogram spectrogram(std::span<const double> series, double fs,
                        double win_s = 10.0, double hop_s = 1.0,
                        double max_hz = 5.0);

void write_spectrogram_csv(std::ostream& out, const Spectrogram& sg);

struct ReferenceSample {
  double t = 0.0;
  double bpm = 0.0;
};

/// Reference HR CSV: optional header "t_seconds,bpm", then rows "t,bpm".
std::vector<ReferenceSample> read_reference_csv(std::istream& in);
std::vector<ReferenceSample> load_reference_csv(const std::filesystem::path& path);
void write_reference_csv(std::ostream& out, std::span<const ReferenceSample> ref);

struct WindowEstimate {
  double t = 0.0;
  double hr_est = 0.0;
  double hr_ref = 0.0;
  double snr_db = 0.0;
};

struct EvalReport {
  double snr_db = 0.0;
  double mae_bpm = 0.0;
  double rmse_bpm = 0.0;
  std::vector<WindowEstimate> per_window;
};

struct EvalOptions {
  double window_s = 10.0;
  double step_s = 1.0;
  /// Maximum |t_window - t_ref| for pairing.
  double pairing_tolerance_s = 0.5;
  SnrOptions snr;
};

/// Slides window_s windows over `signal` (first sample at time t0), pairs
/// each window centre with the nearest reference sample and records the
/// HR estimate and capped SNR. snr_db is the mean per-window SNR. Throws
/// kPairingError if any window has no reference within tolerance.
EvalReport evaluate(std::span<const double> signal, double fs, double t0,
                    std::span<const ReferenceSample> reference,
                    const EvalOptions& options = {});

/// Reference sequence with a constant HR at every window centre.
std::vector<ReferenceSample> constant_reference(double bpm, double duration_s,
                                                double t0 = 0.0,
                                                double step_s = 1.0);

/// Green-channel baseline: detrended and bandpassed green trace over the
/// whole recording.
std::vector<double> green_baseline(const RawTrace& trace,
                                   const PipelineConfig& config = {});

/// Report JSON with fixed 6-significant-digit number formatting.
std::string report_json(const EvalReport& report);
void write_report_csv(std::ostream& out, const EvalReport& report);

/// Formats a double with 6 significant digits ("%.6g").
std::string format_number(double value);

}  // namespace rppg
