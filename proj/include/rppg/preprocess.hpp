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

#include "rppg/ingest.hpp"

namespace rppg {

inline constexpr double kDefaultDetrendLambda = 100.0;

/// Smoothness-priors detrending:
///   out = (I - (I + lambda^2 D2' D2)^-1) series
/// with D2 the (T-2) x T second-difference operator. The pentadiagonal
/// system is factored with a banded LDL' in O(T).
std::vector<double> detrend(std::span<const double> series,
                            double lambda = kDefaultDetrendLambda);

/// Detrends every channel of a raw trace.
struct DetrendedTrace {
  Eigen::MatrixXd samples;
  double fs = 0.0;
};
DetrendedTrace detrend(const RawTrace& trace,
                       double lambda = kDefaultDetrendLambda);

/// Digital IIR filter in transfer-function form, a[0] == 1.
struct IirCoefficients {
  std::vector<double> b;
  std::vector<double> a;
};

/// Butterworth bandpass of the given prototype order (the digital filter has
/// order 2 * order), bilinear transform with pre-warped band edges.
IirCoefficients butterworth_bandpass(int order, double low_hz, double high_hz,
                                     double fs);

/// |H(e^{jw})| at frequency f.
double magnitude_response(const IirCoefficients& filter, double f, double fs);

/// Number of samples until the impulse response envelope stays below
/// 1e-3 of its peak.
std::size_t settling_length(const IirCoefficients& filter);

/// Direct form II transposed, zero initial state.
std::vector<double> lfilter(const IirCoefficients& filter,
                            std::span<const double> x);
std::vector<double> lfilter_with_state(const IirCoefficients& filter,
                                       std::span<const double> x,
                                       std::span<const double> initial_state);

/// Initial state of lfilter for a unit step input already in steady state.
std::vector<double> lfilter_steady_state(const IirCoefficients& filter);

/// Forward-backward filtering with odd reflection padding of
/// 3 * max(len(a), len(b)) samples and steady-state initial conditions.
struct FiltFiltResult {
  std::vector<double> samples;
  /// Set when the series is shorter than 3x the settling length.
  bool short_series_warning = false;
};
FiltFiltResult filtfilt(const IirCoefficients& filter,
                        std::span<const double> x);

struct BandpassOptions {
  double low_hz = 0.7;
  double high_hz = 4.0;
  int order = 3;
};

/// Zero-phase Butterworth bandpass. Throws kNyquistViolation when
/// high >= fs/2 and kInvalidBand unless 0 < low < high.
FiltFiltResult bandpass(std::span<const double> series, double fs,
                        const BandpassOptions& options = {});

}  // namespace rppg
