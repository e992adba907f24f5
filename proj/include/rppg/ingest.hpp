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

// Ingestion of per-frame ROI pixels and pre-extracted RGB traces.
//
// Traces are stored time-major (T rows of R, G, B) so frames can be
// appended as they arrive.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rppg {

using Rgb = std::array<double, 3>;

enum Channel : int { kRed = 0, kGreen = 1, kBlue = 2 };

struct RoiFrame {
  long frame_index = 0;
  std::vector<Rgb> pixels;
};

struct RawTrace {
  /// T x 3, columns R, G, B.
  Eigen::MatrixXd samples;
  double fs = 0.0;
  double t0 = 0.0;

  std::size_t length() const { return static_cast<std::size_t>(samples.rows()); }
  std::vector<double> channel(Channel c) const;
  double duration_s() const { return static_cast<double>(length()) / fs; }
};

/// Throws ErrorCode::kNonFiniteInput / kInvalidHeader / kSeriesTooShort if
/// the trace violates its invariants (T >= 2, finite rows, fs > 0).
void validate(const RawTrace& trace);

/// Per-channel arithmetic mean over the ROI. Throws kEmptyRoi when the
/// pixel list is empty and kInvalidPixel for values outside [0, 255].
Rgb spatial_average(const RoiFrame& frame);

/// Stacks spatial averages of consecutive frames. Frame indices must be
/// strictly increasing (kNonMonotonicFrames) and contiguous (kMissingFrames,
/// message lists the absent indices).
RawTrace assemble_trace(std::span<const RoiFrame> frames, double fs);

/// Trace CSV: "# fs=<float>", optional "# t0=<float>", then rows
/// "frame_index,r,g,b".
RawTrace read_trace_csv(std::istream& in);
RawTrace load_trace_csv(const std::filesystem::path& path);

/// Writes with 17 significant digits so that reading back is bit-exact.
void write_trace_csv(std::ostream& out, const RawTrace& trace);
void save_trace_csv(const std::filesystem::path& path, const RawTrace& trace);

/// ROI frame file: one "r,g,b" line per pixel. The frame index comes from
/// the trailing "_NNNNN" of the file stem.
RoiFrame load_roi_frame(const std::filesystem::path& path);

/// Loads every regular file in `dir` whose stem ends in "_<digits>", sorts
/// them by frame index and assembles a trace.
RawTrace load_roi_directory(const std::filesystem::path& dir, double fs);

}  // namespace rppg
