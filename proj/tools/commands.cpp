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

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rppg/error.hpp"
#include "rppg/hr.hpp"
#include "rppg/ingest.hpp"
#include "rppg/metrics.hpp"
#include "rppg/spectrum.hpp"

namespace rppg::cli {

namespace {

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kExitInputError : kExitProcessingError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitProcessingError;
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

std::string hr_json(const HrEstimate& est) {
  nlohmann::ordered_json j;
  j["bpm"] = rounded(est.bpm);
  j["peak_freq"] = rounded(est.peak_freq);
  return j.dump(2);
}

// A pulse CSV has two columns per data row, a trace CSV four.
bool looks_like_pulse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    return std::count(line.begin(), line.end(), ',') == 1;
  }
  return false;
}

}  // namespace

std::filesystem::path windows_sidecar(const std::filesystem::path& pulse_csv) {
  auto p = pulse_csv;
  return p.replace_extension(".windows.json");
}

std::filesystem::path hr_sidecar(const std::filesystem::path& pulse_csv) {
  auto p = pulse_csv;
  return p.replace_extension(".hr.json");
}

int cmd_extract(const ExtractOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const RawTrace trace = load_trace_csv(opts.input);
    validate(trace);
    const PulseWave pulse = run_pipeline(trace, opts.pipeline);
    const HrEstimate est = estimate_hr(pulse);

    save_pulse_csv(opts.output, pulse);
    open_out(windows_sidecar(opts.output)) << window_metadata_json(pulse) << '\n';
    open_out(hr_sidecar(opts.output)) << hr_json(est) << '\n';
    log << "HR " << format_number(est.bpm) << " bpm (" << pulse.fallback_count()
        << " fallback windows of " << pulse.windows.size() << ")\n";
  });
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    PulseWave pulse;
    if (looks_like_pulse_csv(opts.input)) {
      pulse = load_pulse_csv(opts.input);
    } else {
      const RawTrace trace = load_trace_csv(opts.input);
      pulse = run_pipeline(trace, opts.pipeline);
    }
    const auto reference = load_reference_csv(opts.reference);
    EvalOptions eval;
    eval.window_s = opts.pipeline.window_s;
    eval.step_s = opts.pipeline.step_s;
    eval.snr.band_low_hz = opts.pipeline.band_low_hz;
    eval.snr.band_high_hz = opts.pipeline.band_high_hz;
    const EvalReport report = evaluate(pulse.samples, pulse.fs, pulse.t0, reference, eval);

    auto out = open_out(opts.output);
    if (opts.format == Format::kJson)
      out << report_json(report) << '\n';
    else
      write_report_csv(out, report);
    log << "SNR " << format_number(report.snr_db) << " dB, MAE "
        << format_number(report.mae_bpm) << " bpm, RMSE " << format_number(report.rmse_bpm)
        << " bpm over " << report.per_window.size() << " windows\n";
  });
}

int cmd_synth(const SynthOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    SynthConfig cfg = synth_config_from_json(read_file(opts.config));
    if (opts.seed) cfg.seed = *opts.seed;
    const RawTrace trace = generate(cfg);
    save_trace_csv(opts.output, trace);
    if (opts.reference) {
      auto out = open_out(*opts.reference);
      write_reference_csv(out, constant_reference(cfg.hr_bpm, cfg.duration_s));
    }
    log << "wrote " << trace.length() << " frames at " << format_number(cfg.fs) << " Hz\n";
  });
}

std::vector<SweepRow> run_sweep(const SynthConfig& base,
                                const std::vector<double>& levels,
                                std::size_t seeds, const PipelineConfig& pipeline,
                                std::size_t workers) {
  validate(base);
  if (levels.empty()) throw Error(ErrorCode::kConfigError, "no attenuation levels");
  if (seeds == 0) throw Error(ErrorCode::kConfigError, "seeds must be >= 1");
  for (double f : levels)
    if (!(f > 0.0 && f <= 1.0))
      throw Error(ErrorCode::kConfigError, "attenuation factors must lie in (0, 1]");
  validate(pipeline, base.fs);

  struct Outcome {
    EvalReport proposed, green;
    double proposed_hr = 0.0, green_hr = 0.0;
  };
  const std::size_t tasks = levels.size() * seeds;
  std::vector<Outcome> outcomes(tasks);
  std::vector<std::exception_ptr> errors(tasks);

  EvalOptions eval;
  eval.window_s = pipeline.window_s;
  eval.step_s = pipeline.step_s;
  eval.snr.band_low_hz = pipeline.band_low_hz;
  eval.snr.band_high_hz = pipeline.band_high_hz;
  const auto reference = constant_reference(base.hr_bpm, base.duration_s, 0.0, pipeline.step_s);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        const double factor = levels[i / seeds];
        std::vector<double> one{factor};
        SynthConfig cfg = base;
        cfg.seed = base.seed + i % seeds;
        const RawTrace trace = illumination_sweep(cfg, one).front();

        const PulseWave pulse = run_pipeline(trace, pipeline);
        outcomes[i].proposed = evaluate(pulse.samples, pulse.fs, pulse.t0, reference, eval);
        outcomes[i].proposed_hr = estimate_hr(pulse).bpm;

        const std::vector<double> green = green_baseline(trace, pipeline);
        outcomes[i].green = evaluate(green, trace.fs, trace.t0, reference, eval);
        outcomes[i].green_hr = estimate_hr(green, trace.fs).bpm;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n_workers = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, tasks);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<SweepRow> rows;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (const bool proposed : {true, false}) {
      std::vector<double> snr, mae_v, rmse_v, hr;
      for (std::size_t s = 0; s < seeds; ++s) {
        const Outcome& o = outcomes[l * seeds + s];
        const EvalReport& r = proposed ? o.proposed : o.green;
        snr.push_back(r.snr_db);
        mae_v.push_back(r.mae_bpm);
        rmse_v.push_back(r.rmse_bpm);
        hr.push_back(proposed ? o.proposed_hr : o.green_hr);
      }
      rows.push_back({levels[l], proposed ? "proposed" : "green", seeds, median(snr),
                      median(mae_v), median(rmse_v), median(hr)});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "factor,method,n_seeds,snr_db,mae_bpm,rmse_bpm,hr_bpm\n";
  for (const auto& r : rows)
    out << format_number(r.factor) << ',' << r.method << ',' << r.n_seeds << ','
        << format_number(r.snr_db) << ',' << format_number(r.mae_bpm) << ','
        << format_number(r.rmse_bpm) << ',' << format_number(r.hr_bpm) << '\n';
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"factor", rounded(r.factor)},
                   {"method", r.method},
                   {"n_seeds", r.n_seeds},
                   {"snr_db", rounded(r.snr_db)},
                   {"mae_bpm", rounded(r.mae_bpm)},
                   {"rmse_bpm", rounded(r.rmse_bpm)},
                   {"hr_bpm", rounded(r.hr_bpm)}});
  return arr.dump(2);
}

int cmd_sweep(const SweepOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    SynthConfig base = synth_config_from_json(read_file(opts.config));
    if (opts.seed) base.seed = *opts.seed;
    const auto rows = run_sweep(base, opts.levels, opts.seeds, opts.pipeline, opts.workers);
    auto out = open_out(opts.output);
    if (opts.format == Format::kJson)
      out << sweep_json(rows) << '\n';
    else
      write_sweep_csv(out, rows);
    log << "wrote " << rows.size() << " sweep rows\n";
  });
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const RawTrace trace = load_trace_csv(opts.input);
    validate(trace);
    std::error_code ec;
    std::filesystem::create_directories(opts.outdir, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create " + opts.outdir.string());

    const std::size_t nfft = next_pow2(trace.length());
    std::vector<PowerSpectrum> spectra;
    for (int c = 0; c < 3; ++c)
      spectra.push_back(power_spectrum(remove_mean(trace.channel(static_cast<Channel>(c))),
                                       trace.fs, nfft));
    {
      auto out = open_out(opts.outdir / "spectrum.csv");
      out << "freq_hz,r,g,b\n";
      for (std::size_t k = 0; k < spectra[0].power.size(); ++k)
        out << format_number(spectra[0].frequency(k)) << ',' << format_number(spectra[0].power[k])
            << ',' << format_number(spectra[1].power[k]) << ','
            << format_number(spectra[2].power[k]) << '\n';
    }
    {
      auto out = open_out(opts.outdir / "spectrogram.csv");
      write_spectrogram_csv(out, spectrogram(trace.channel(kGreen), trace.fs));
    }

    nlohmann::ordered_json peaks;
    const char* names[3] = {"r", "g", "b"};
    for (int c = 0; c < 3; ++c) {
      const PowerSpectrum& ps = spectra[c];
      const std::size_t k = band_argmax(ps, kPulseBandLowHz, kPulseBandHighHz);
      const double f = ps.frequency(k);
      const double total = band_power(ps, kPulseBandLowHz, kPulseBandHighHz);
      const double all = band_power(ps, 0.0, trace.fs / 2.0);
      nlohmann::ordered_json entry;
      entry["peak_hz"] = rounded(f);
      entry["peak_bpm"] = rounded(60.0 * f);
      entry["peak_power_fraction"] = rounded(total > 0.0 ? ps.power[k] / total : 0.0);
      entry["harmonic_hz"] = rounded(2.0 * f);
      entry["harmonic_power_fraction"] =
          rounded(total > 0.0 ? band_power(ps, 2.0 * f - 0.1, 2.0 * f + 0.1) / total : 0.0);
      entry["out_of_band_fraction"] = rounded(all > 0.0 ? 1.0 - total / all : 0.0);
      peaks[names[c]] = entry;
    }
    open_out(opts.outdir / "peaks.json") << peaks.dump(2) << '\n';
    log << "wrote spectrum.csv, spectrogram.csv, peaks.json to " << opts.outdir.string() << '\n';
  });
}

}  // namespace rppg::cli
