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

#include "rppg/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rppg/error.hpp"
#include "text_io.hpp"

namespace rppg {

std::vector<double> RawTrace::channel(Channel c) const {
  std::vector<double> out(length());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples(static_cast<Eigen::Index>(i), c);
  return out;
}

void validate(const RawTrace& trace) {
  if (!(trace.fs > 0.0) || !std::isfinite(trace.fs))
    throw Error(ErrorCode::kInvalidHeader, "sampling rate must be positive");
  if (trace.samples.cols() != 3)
    throw Error(ErrorCode::kInvalidHeader, "trace must have 3 channels");
  if (trace.samples.rows() < 2)
    throw Error(ErrorCode::kSeriesTooShort, "trace needs at least 2 samples");
  if (!trace.samples.allFinite())
    throw Error(ErrorCode::kNonFiniteInput, "trace contains non-finite samples");
}

Rgb spatial_average(const RoiFrame& frame) {
  if (frame.pixels.empty())
    throw Error(ErrorCode::kEmptyRoi,
                "frame " + std::to_string(frame.frame_index) + " has no pixels");
  Rgb sum{0.0, 0.0, 0.0};
  for (const Rgb& px : frame.pixels) {
    for (int c = 0; c < 3; ++c) {
      if (!(px[c] >= 0.0 && px[c] <= 255.0))
        throw Error(ErrorCode::kInvalidPixel,
                    "frame " + std::to_string(frame.frame_index) +
                        " has a channel value outside [0, 255]");
      sum[c] += px[c];
    }
  }
  const double n = static_cast<double>(frame.pixels.size());
  return {sum[0] / n, sum[1] / n, sum[2] / n};
}

namespace {

void check_frame_order(const std::vector<long>& indices) {
  std::vector<long> gaps;
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] <= indices[i - 1])
      throw Error(ErrorCode::kNonMonotonicFrames,
                  "frame index " + std::to_string(indices[i]) + " follows " +
                      std::to_string(indices[i - 1]));
    for (long k = indices[i - 1] + 1; k < indices[i]; ++k) gaps.push_back(k);
  }
  if (!gaps.empty()) {
    std::string msg = "gap at";
    for (std::size_t i = 0; i < gaps.size() && i < 32; ++i) msg += " " + std::to_string(gaps[i]);
    if (gaps.size() > 32) msg += " ... (" + std::to_string(gaps.size()) + " total)";
    throw Error(ErrorCode::kMissingFrames, msg);
  }
}

}  // namespace

RawTrace assemble_trace(std::span<const RoiFrame> frames, double fs) {
  std::vector<long> indices;
  indices.reserve(frames.size());
  for (const auto& f : frames) indices.push_back(f.frame_index);
  check_frame_order(indices);

  RawTrace trace;
  trace.fs = fs;
  trace.samples.resize(static_cast<Eigen::Index>(frames.size()), 3);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Rgb m = spatial_average(frames[i]);
    for (int c = 0; c < 3; ++c) trace.samples(static_cast<Eigen::Index>(i), c) = m[c];
  }
  if (!(fs > 0.0)) throw Error(ErrorCode::kInvalidHeader, "fs must be positive");
  return trace;
}

RawTrace read_trace_csv(std::istream& in) {
  std::optional<double> fs;
  double t0 = 0.0;
  std::vector<long> indices;
  std::vector<Rgb> rows;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (auto h = detail::parse_header(view)) {
        const auto v = detail::parse_double(h->value);
        if (h->key == "fs") {
          if (!v || !(*v > 0.0) || !std::isfinite(*v))
            throw Error(ErrorCode::kInvalidHeader,
                        "line " + std::to_string(line_no) + ": fs must be a positive number");
          fs = *v;
        } else if (h->key == "t0") {
          if (!v || !std::isfinite(*v))
            throw Error(ErrorCode::kInvalidHeader,
                        "line " + std::to_string(line_no) + ": t0 must be a number");
          t0 = *v;
        }
      }
      continue;
    }
    const auto fields = detail::split(view);
    if (fields.size() != 4) detail::parse_fail(line_no, "expected frame_index,r,g,b");
    const auto idx = detail::parse_long(fields[0]);
    if (!idx || *idx < 0) detail::parse_fail(line_no, "bad frame index");
    Rgb px{};
    for (int c = 0; c < 3; ++c) {
      const auto v = detail::parse_double(fields[c + 1]);
      if (!v || !std::isfinite(*v)) detail::parse_fail(line_no, "bad channel value");
      px[c] = *v;
    }
    indices.push_back(*idx);
    rows.push_back(px);
  }
  if (!fs) throw Error(ErrorCode::kInvalidHeader, "missing '# fs=<float>' header");
  check_frame_order(indices);

  RawTrace trace;
  trace.fs = *fs;
  trace.t0 = t0;
  trace.samples.resize(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < 3; ++c) trace.samples(static_cast<Eigen::Index>(i), c) = rows[i][c];
  return trace;
}

RawTrace load_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_trace_csv(in);
}

void write_trace_csv(std::ostream& out, const RawTrace& trace) {
  out << "# fs=" << detail::exact(trace.fs) << "\n";
  out << "# t0=" << detail::exact(trace.t0) << "\n";
  for (Eigen::Index i = 0; i < trace.samples.rows(); ++i) {
    out << i << ',' << detail::exact(trace.samples(i, 0)) << ','
        << detail::exact(trace.samples(i, 1)) << ','
        << detail::exact(trace.samples(i, 2)) << '\n';
  }
}

void save_trace_csv(const std::filesystem::path& path, const RawTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_trace_csv(out, trace);
}

namespace {

std::optional<long> frame_index_from_stem(const std::string& stem) {
  const auto us = stem.rfind('_');
  if (us == std::string::npos || us + 1 >= stem.size()) return std::nullopt;
  const std::string digits = stem.substr(us + 1);
  if (!std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    return std::nullopt;
  return detail::parse_long(digits);
}

}  // namespace

RoiFrame load_roi_frame(const std::filesystem::path& path) {
  const auto index = frame_index_from_stem(path.stem().string());
  if (!index)
    throw Error(ErrorCode::kParseError,
                path.string() + ": file name lacks a _NNNNN frame suffix");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());

  RoiFrame frame;
  frame.frame_index = *index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = detail::split(view);
    if (fields.size() != 3) detail::parse_fail(line_no, "expected r,g,b in " + path.string());
    Rgb px{};
    for (int c = 0; c < 3; ++c) {
      const auto v = detail::parse_double(fields[c]);
      if (!v) detail::parse_fail(line_no, "bad pixel value in " + path.string());
      px[c] = *v;
    }
    frame.pixels.push_back(px);
  }
  return frame;
}

RawTrace load_roi_directory(const std::filesystem::path& dir, double fs) {
  std::vector<RoiFrame> frames;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    if (!frame_index_from_stem(entry.path().stem().string())) continue;
    frames.push_back(load_roi_frame(entry.path()));
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + dir.string());
  std::sort(frames.begin(), frames.end(),
            [](const RoiFrame& a, const RoiFrame& b) { return a.frame_index < b.frame_index; });
  return assemble_trace(frames, fs);
}

}  // namespace rppg
