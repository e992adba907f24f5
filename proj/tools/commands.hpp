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

// Command implementations behind the rppg tool. Each returns a process
// exit code: 0 success, 2 input/config error, 3 processing error.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rppg/reconstruct.hpp"
#include "rppg/synth.hpp"

namespace rppg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitProcessingError = 3;

enum class Format { kCsv, kJson };

struct ExtractOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  PipelineConfig pipeline;
};

struct EvaluateOptions {
  std::filesystem::path input;
  std::filesystem::path reference;
  std::filesystem::path output;
  PipelineConfig pipeline;
  Format format = Format::kJson;
};

struct SynthOptions {
  std::filesystem::path config;
  std::filesystem::path output;
  std::optional<std::filesystem::path> reference;
  std::optional<std::uint64_t> seed;
};

struct SweepOptions {
  std::filesystem::path config;
  std::vector<double> levels;
  std::filesystem::path output;
  std::size_t seeds = 1;
  std::optional<std::uint64_t> seed;
  PipelineConfig pipeline;
  Format format = Format::kCsv;
  /// 0 uses the hardware concurrency.
  std::size_t workers = 0;
};

struct AnalyzeOptions {
  std::filesystem::path input;
  std::filesystem::path outdir;
};

int cmd_extract(const ExtractOptions& opts, std::ostream& log);
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log);
int cmd_synth(const SynthOptions& opts, std::ostream& log);
int cmd_sweep(const SweepOptions& opts, std::ostream& log);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& log);

/// Sidecar paths written next to the pulse CSV by extract.
std::filesystem::path windows_sidecar(const std::filesystem::path& pulse_csv);
std::filesystem::path hr_sidecar(const std::filesystem::path& pulse_csv);

struct SweepRow {
  double factor = 0.0;
  std::string method;  ///< "proposed" or "green"
  std::size_t n_seeds = 0;
  double snr_db = 0.0;  ///< medians over seeds
  double mae_bpm = 0.0;
  double rmse_bpm = 0.0;
  double hr_bpm = 0.0;  ///< median whole-trace HR estimate
};

/// One proposed and one green-baseline row per level, each aggregating
/// `seeds` traces with seeds base.seed, base.seed + 1, ...
std::vector<SweepRow> run_sweep(const SynthConfig& base,
                                const std::vector<double>& levels,
                                std::size_t seeds,
                                const PipelineConfig& pipeline,
                                std::size_t workers = 0);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

}  // namespace rppg::cli
