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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_pipeline_flags(CLI::App& cmd, rppg::PipelineConfig& cfg) {
  cmd.add_option("--window-s", cfg.window_s, "Analysis window length in seconds")
      ->capture_default_str();
  cmd.add_option("--step-s", cfg.step_s, "Analysis step in seconds")->capture_default_str();
  cmd.add_option("--ssa-window", cfg.ssa_window, "SSA embedding length L (0 = auto)")
      ->capture_default_str();
  cmd.add_option("--sec-chn", cfg.sec_chn, "Leading SSA components inspected per window")
      ->capture_default_str();
  cmd.add_option("--lambda", cfg.lambda, "Detrending smoothness parameter")
      ->capture_default_str();
  cmd.add_option("--band-low", cfg.band_low_hz, "Pulse band low edge, Hz")
      ->capture_default_str();
  cmd.add_option("--band-high", cfg.band_high_hz, "Pulse band high edge, Hz")
      ->capture_default_str();
  cmd.add_option("--sigma-init", cfg.sigma_init, "Initial reference-HR dispersion, Hz")
      ->capture_default_str();
}

void add_format_flag(CLI::App& cmd, rppg::cli::Format& format) {
  cmd.add_option("--format", format, "Report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, rppg::cli::Format>{{"csv", rppg::cli::Format::kCsv},
                                                   {"json", rppg::cli::Format::kJson}}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-light rPPG heart-rate extraction"};
  app.require_subcommand(1);
  int code = rppg::cli::kExitOk;

  rppg::cli::ExtractOptions extract;
  auto* ex = app.add_subcommand("extract", "Trace CSV -> pulse wave CSV + metadata + HR");
  ex->add_option("input,--input", extract.input, "Trace CSV")->required();
  ex->add_option("output,--output", extract.output, "Pulse wave CSV")->required();
  add_pipeline_flags(*ex, extract.pipeline);
  ex->callback([&] { code = rppg::cli::cmd_extract(extract, std::cerr); });

  rppg::cli::EvaluateOptions evaluate;
  auto* ev = app.add_subcommand("evaluate", "Score a pulse or trace CSV against reference HR");
  ev->add_option("input,--input", evaluate.input, "Pulse or trace CSV")->required();
  ev->add_option("reference,--reference", evaluate.reference, "Reference CSV t_seconds,bpm")
      ->required();
  ev->add_option("output,--output", evaluate.output, "Report path")->required();
  add_pipeline_flags(*ev, evaluate.pipeline);
  add_format_flag(*ev, evaluate.format);
  ev->callback([&] { code = rppg::cli::cmd_evaluate(evaluate, std::cerr); });

  rppg::cli::SynthOptions synth;
  std::uint64_t synth_seed = 0;
  auto* sy = app.add_subcommand("synth", "Generate a synthetic trace from a JSON config");
  sy->add_option("config,--config", synth.config, "Synth config JSON")->required();
  sy->add_option("output,--output", synth.output, "Trace CSV")->required();
  auto* sy_ref = sy->add_option("--reference", "Also write a reference HR CSV");
  auto* sy_seed = sy->add_option("--seed", synth_seed, "Override the config seed");
  sy->callback([&] {
    if (sy_ref->count() > 0) synth.reference = sy_ref->as<std::string>();
    if (sy_seed->count() > 0) synth.seed = synth_seed;
    code = rppg::cli::cmd_synth(synth, std::cerr);
  });

  rppg::cli::SweepOptions sweep;
  std::uint64_t sweep_seed = 0;
  auto* sw = app.add_subcommand("sweep", "Illumination sweep: proposed vs green baseline");
  sw->add_option("config,--config", sweep.config, "Synth config JSON")->required();
  sw->add_option("--levels", sweep.levels, "Attenuation factors in (0, 1]")
      ->delimiter(',')
      ->required();
  sw->add_option("output,--output", sweep.output, "Report path")->required();
  sw->add_option("--seeds", sweep.seeds, "Traces per level")->capture_default_str();
  sw->add_option("--workers", sweep.workers, "Worker threads (0 = all cores)");
  auto* sw_seed = sw->add_option("--seed", sweep_seed, "Override the config seed");
  add_pipeline_flags(*sw, sweep.pipeline);
  add_format_flag(*sw, sweep.format);
  sw->callback([&] {
    if (sw_seed->count() > 0) sweep.seed = sweep_seed;
    code = rppg::cli::cmd_sweep(sweep, std::cerr);
  });

  rppg::cli::AnalyzeOptions analyze;
  auto* an = app.add_subcommand("analyze", "Spectrum, spectrogram and peak annotations");
  an->add_option("input,--input", analyze.input, "Trace CSV")->required();
  an->add_option("outdir,--outdir", analyze.outdir, "Output directory")->required();
  an->callback([&] { code = rppg::cli::cmd_analyze(analyze, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rppg::cli::kExitInputError;
  }
  return code;
}
