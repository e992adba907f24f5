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
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "rppg/error.hpp"

namespace rppg {
namespace {

RoiFrame frame(long index, std::vector<Rgb> pixels) { return {index, std::move(pixels)}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rppg::Error";
  return ErrorCode::kConfigError;
}

TEST(SpatialAverage, SinglePixel) {
  const Rgb m = spatial_average(frame(0, {{10, 20, 30}}));
  EXPECT_EQ(m, (Rgb{10, 20, 30}));
}

TEST(SpatialAverage, TwoPixels) {
  const Rgb m = spatial_average(frame(0, {{0, 0, 0}, {2, 4, 6}}));
  EXPECT_EQ(m, (Rgb{1, 2, 3}));
}

TEST(SpatialAverage, ModSevenPixelsMatchSumOverCount) {
  RoiFrame f{0, {}};
  for (int k = 0; k < 100; ++k)
    f.pixels.push_back({double(k % 7), double((k + 1) % 7), double((k + 2) % 7)});
  Rgb sum{0, 0, 0};
  for (int k = 0; k < 100; ++k) {
    sum[0] += k % 7;
    sum[1] += (k + 1) % 7;
    sum[2] += (k + 2) % 7;
  }
  const Rgb m = spatial_average(f);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(m[c], sum[c] / 100.0, 1e-12);
}

TEST(SpatialAverage, EmptyRoiIsAnError) {
  EXPECT_EQ(code_of([] { spatial_average(frame(3, {})); }), ErrorCode::kEmptyRoi);
}

TEST(SpatialAverage, RejectsOutOfRangeChannel) {
  EXPECT_EQ(code_of([] { spatial_average(frame(0, {{10, 256, 0}})); }),
            ErrorCode::kInvalidPixel);
  EXPECT_EQ(code_of([] { spatial_average(frame(0, {{-1, 0, 0}})); }),
            ErrorCode::kInvalidPixel);
}

TEST(SpatialAverage, PermutationInvariantAndBounded) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (int trial = 0; trial < 50; ++trial) {
    RoiFrame f{0, std::vector<Rgb>(1 + trial * 3)};
    for (auto& px : f.pixels) px = {u(rng), u(rng), u(rng)};
    const Rgb m = spatial_average(f);
    RoiFrame g = f;
    std::shuffle(g.pixels.begin(), g.pixels.end(), rng);
    const Rgb m2 = spatial_average(g);
    for (int c = 0; c < 3; ++c) {
      EXPECT_NEAR(m[c], m2[c], 1e-10);
      const auto [lo, hi] = std::minmax_element(
          f.pixels.begin(), f.pixels.end(),
          [c](const Rgb& a, const Rgb& b) { return a[c] < b[c]; });
      EXPECT_LE((*lo)[c], m[c] + 1e-12);
      EXPECT_GE((*hi)[c], m[c] - 1e-12);
    }
  }
}

TEST(AssembleTrace, StacksFrameMeans) {
  std::vector<RoiFrame> frames{frame(0, {{1, 1, 1}}), frame(1, {{2, 2, 2}}),
                               frame(2, {{3, 3, 3}})};
  const RawTrace t = assemble_trace(frames, 30.0);
  ASSERT_EQ(t.length(), 3u);
  EXPECT_EQ(t.fs, 30.0);
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c) EXPECT_EQ(t.samples(i, c), i + 1.0);
}

TEST(AssembleTrace, GapIsReported) {
  std::vector<RoiFrame> frames{frame(0, {{1, 1, 1}}), frame(2, {{2, 2, 2}})};
  try {
    assemble_trace(frames, 30.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFrames);
    EXPECT_NE(std::string(e.what()).find("gap at 1"), std::string::npos) << e.what();
  }
}

TEST(AssembleTrace, UnsortedOrDuplicateIndices) {
  std::vector<RoiFrame> unsorted{frame(1, {{1, 1, 1}}), frame(0, {{2, 2, 2}})};
  EXPECT_EQ(code_of([&] { assemble_trace(unsorted, 30.0); }), ErrorCode::kNonMonotonicFrames);
  std::vector<RoiFrame> dup{frame(0, {{1, 1, 1}}), frame(0, {{2, 2, 2}})};
  EXPECT_EQ(code_of([&] { assemble_trace(dup, 30.0); }), ErrorCode::kNonMonotonicFrames);
}

TEST(AssembleTrace, RandomFramesMatchPerFrameMeans) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  std::uniform_int_distribution<int> npx(1, 40);
  std::vector<RoiFrame> frames;
  for (long i = 0; i < 300; ++i) {
    RoiFrame f{i + 17, std::vector<Rgb>(static_cast<std::size_t>(npx(rng)))};
    for (auto& px : f.pixels) px = {u(rng), u(rng), u(rng)};
    frames.push_back(std::move(f));
  }
  const RawTrace t = assemble_trace(frames, 25.0);
  ASSERT_EQ(t.length(), 300u);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (const auto& px : frames[i].pixels) s += px[c];
      EXPECT_NEAR(t.samples(static_cast<Eigen::Index>(i), c),
                  s / static_cast<double>(frames[i].pixels.size()), 1e-10);
    }
  }
}

TEST(TraceCsv, RoundTripIsBitIdentical) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  RawTrace t;
  t.fs = 29.97;
  t.t0 = 12.5;
  t.samples.resize(200, 3);
  for (Eigen::Index i = 0; i < 200; ++i)
    for (int c = 0; c < 3; ++c) t.samples(i, c) = u(rng);
  std::stringstream ss;
  write_trace_csv(ss, t);
  const RawTrace back = read_trace_csv(ss);
  EXPECT_EQ(back.fs, t.fs);
  EXPECT_EQ(back.t0, t.t0);
  EXPECT_TRUE(back.samples == t.samples);
}

TEST(TraceCsv, ParsesHeaderAndRows) {
  std::istringstream in("# fs=30\n# t0=2.5\n0,1,2,3\n1, 4.5 ,5,6\n\n");
  const RawTrace t = read_trace_csv(in);
  EXPECT_EQ(t.fs, 30.0);
  EXPECT_EQ(t.t0, 2.5);
  ASSERT_EQ(t.length(), 2u);
  EXPECT_EQ(t.samples(1, 0), 4.5);
}

TEST(TraceCsv, MalformedRowReportsLine) {
  std::istringstream in("# fs=30\n0,1,2,3\n1,4,five,6\n");
  try {
    read_trace_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::istringstream short_row("# fs=30\n0,1,2\n");
  EXPECT_EQ(code_of([&] { read_trace_csv(short_row); }), ErrorCode::kParseError);
}

TEST(TraceCsv, HeaderErrors) {
  std::istringstream zero("# fs=0\n0,1,2,3\n");
  EXPECT_EQ(code_of([&] { read_trace_csv(zero); }), ErrorCode::kInvalidHeader);
  std::istringstream negative("# fs=-30\n0,1,2,3\n");
  EXPECT_EQ(code_of([&] { read_trace_csv(negative); }), ErrorCode::kInvalidHeader);
  std::istringstream missing("0,1,2,3\n");
  EXPECT_EQ(code_of([&] { read_trace_csv(missing); }), ErrorCode::kInvalidHeader);
}

TEST(TraceCsv, MissingFrameInFile) {
  std::istringstream in("# fs=30\n0,1,2,3\n2,1,2,3\n");
  EXPECT_EQ(code_of([&] { read_trace_csv(in); }), ErrorCode::kMissingFrames);
}

TEST(TraceCsv, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { load_trace_csv("/nonexistent/trace.csv"); }), ErrorCode::kIoError);
}

TEST(RoiFiles, DirectoryOfFramesAssembles) {
  const auto dir = std::filesystem::temp_directory_path() / "rppg_roi_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (int i = 0; i < 3; ++i) {
    std::ofstream out(dir / ("face_" + std::string(4, '0') + std::to_string(i) + ".txt"));
    out << i << "," << 2 * i << "," << 3 * i << "\n" << i + 2 << "," << 2 * i << "," << 3 * i << "\n";
  }
  std::ofstream(dir / "notes.txt") << "ignored\n";
  const RawTrace t = load_roi_directory(dir, 30.0);
  ASSERT_EQ(t.length(), 3u);
  EXPECT_DOUBLE_EQ(t.samples(2, 0), 3.0);
  EXPECT_DOUBLE_EQ(t.samples(2, 1), 4.0);

  std::filesystem::remove(dir / "face_00001.txt");
  EXPECT_EQ(code_of([&] { load_roi_directory(dir, 30.0); }), ErrorCode::kMissingFrames);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace rppg
