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

#include "rppg/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <json.hpp>

#include "rppg/error.hpp"
#include "rppg/preprocess.hpp"
#include "rppg/ssa.hpp"
#include "text_io.hpp"

namespace rppg {

double gaussian_weight(double f, const GaussianWeightParams& params) {
  const double z = (f - params.mu) / params.sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * params.sigma);
}

std::vector<double> fuse_window(std::span<const CandidateComponent> accepted,
                                const GaussianWeightParams& params) {
  if (accepted.empty())
    throw Error(ErrorCode::kNoAcceptedComponents, "nothing to fuse");
  if (!(params.sigma > 0.0))
    throw Error(ErrorCode::kConfigError, "Gaussian sigma must be positive");
  const std::size_t n = accepted.front().series.size();
  for (const auto& c : accepted)
    if (c.series.size() != n)
      throw Error(ErrorCode::kConfigError, "components differ in length");

  // Relative log-weights; the density's constant factor cancels.
  std::vector<double> log_w;
  log_w.reserve(accepted.size());
  for (const auto& c : accepted) {
    const double z = (c.dominant_freq - params.mu) / params.sigma;
    log_w.push_back(-0.5 * z * z);
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());

  std::vector<double> out(n, 0.0);
  double total = 0.0;
  for (std::size_t p = 0; p < accepted.size(); ++p) {
    const double w = std::exp(log_w[p] - top);
    total += w;
    const auto& s = accepted[p].series;
    for (std::size_t i = 0; i < n; ++i) out[i] += w * s[i];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> hann_periodic(std::size_t length) {
  std::vector<double> w(length);
  const double n = static_cast<double>(length);
  for (std::size_t i = 0; i < length; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  return w;
}

std::vector<double> overlap_add(std::span<const PlacedWindow> windows,
                                std::size_t window_len, std::size_t hop) {
  if (hop == 0) hop = window_len / 2;
  if (windows.empty()) return {};
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].samples.size() != window_len)
      throw Error(ErrorCode::kWindowSpacingError,
                  "window " + std::to_string(i) + " has " +
                      std::to_string(windows[i].samples.size()) + " samples, expected " +
                      std::to_string(window_len));
    if (i > 0 && windows[i].start != windows[i - 1].start + hop)
      throw Error(ErrorCode::kWindowSpacingError,
                  "window " + std::to_string(i) + " starts at " +
                      std::to_string(windows[i].start) + ", expected " +
                      std::to_string(windows[i - 1].start + hop));
  }
  const std::vector<double> hann = hann_periodic(window_len);
  std::vector<double> out(windows.back().start + window_len, 0.0);
  for (const auto& w : windows)
    for (std::size_t i = 0; i < window_len; ++i) out[w.start + i] += hann[i] * w.samples[i];
  return out;
}

namespace {

struct WindowGeometry {
  std::size_t length = 0;
  std::size_t step = 0;
  std::size_t hop = 0;
};

WindowGeometry geometry(const PipelineConfig& config, double fs) {
  WindowGeometry g;
  g.length = static_cast<std::size_t>(std::llround(config.window_s * fs));
  g.step = static_cast<std::size_t>(std::llround(config.step_s * fs));
  g.hop = g.length / 2;
  return g;
}

}  // namespace

void validate(const PipelineConfig& config, double fs) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); };
  if (!(fs > 0.0)) fail("fs must be positive");
  if (!(config.window_s > 0.0) || !(config.step_s > 0.0))
    fail("window and step must be positive");
  const WindowGeometry g = geometry(config, fs);
  if (g.length < 4 || g.length % 2 != 0)
    fail("window must span an even number (>= 4) of samples");
  if (g.step == 0 || g.hop % g.step != 0)
    fail("half the window (" + std::to_string(g.hop) +
         " samples) must be a multiple of the step (" + std::to_string(g.step) + ")");
  if (config.window_s < 2.0) fail("window must be at least 2 s for frequency estimation");
  if (config.sec_chn < 1) fail("sec_chn must be >= 1");
  if (!(config.lambda > 0.0)) fail("lambda must be positive");
  if (!(config.band_low_hz > 0.0) || !(config.band_low_hz < config.band_high_hz))
    fail("band must satisfy 0 < low < high");
  if (config.band_high_hz >= fs / 2.0)
    throw Error(ErrorCode::kNyquistViolation, "band high edge must lie below fs/2");
  if (!(config.sigma_init > 0.0) || !(config.sigma_floor > 0.0))
    fail("sigma_init and sigma_floor must be positive");
  if (config.filter_order < 1) fail("filter order must be >= 1");
  if (config.ssa_window != 0 &&
      (config.ssa_window < 2 || config.ssa_window > g.length / 2))
    throw Error(ErrorCode::kInvalidWindowLength,
                "SSA window must lie in [2, " + std::to_string(g.length / 2) + "]");
}

std::size_t PulseWave::fallback_count() const {
  return static_cast<std::size_t>(std::count_if(
      windows.begin(), windows.end(), [](const WindowInfo& w) { return w.used_fallback; }));
}

PulseWave run_pipeline(const RawTrace& trace, const PipelineConfig& config) {
  validate(trace);
  validate(config, trace.fs);
  const double fs = trace.fs;
  const WindowGeometry g = geometry(config, fs);
  const std::size_t total = trace.length();
  if (total < g.length)
    throw Error(ErrorCode::kTraceTooShort,
                "trace has " + std::to_string(total) + " samples, one window needs " +
                    std::to_string(g.length));

  const std::vector<double> green = trace.channel(kGreen);
  const std::size_t ssa_window =
      config.ssa_window != 0 ? config.ssa_window : ssa::default_window_length(g.length, fs);
  const BandpassOptions band{config.band_low_hz, config.band_high_hz, config.filter_order};
  const ReferenceOptions ref_opts{config.band_low_hz, config.band_high_hz,
                                  config.sigma_init, config.sigma_floor};
  const MaskOptions mask_opts{config.band_low_hz, config.band_high_hz, 3.0};

  PulseWave pulse;
  pulse.fs = fs;
  ReferenceHrState state;
  state.sigma_fr = config.sigma_init;
  std::vector<PlacedWindow> emitted;

  for (std::size_t start = 0; start + g.length <= total; start += g.step) {
    const std::span<const double> slice(green.data() + start, g.length);
    const std::vector<double> detrended = detrend(slice, config.lambda);
    FiltFiltResult filtered = bandpass(detrended, fs, band);

    state = update_reference(std::move(state), filtered.samples, fs, ref_opts);
    const ssa::Decomposition dec =
        ssa::decompose(filtered.samples, ssa_window, config.sec_chn);
    const Selection sel = select_candidates(dec, fs, state, config.sec_chn, mask_opts);

    WindowInfo info;
    info.start = start;
    info.t_center = trace.t0 + (static_cast<double>(start) + 0.5 * static_cast<double>(g.length)) / fs;
    info.f_r = state.f_r;
    info.sigma_fr = state.sigma_fr;
    info.candidates = sel.inspected.size();
    info.accepted = sel.accepted.size();
    info.used_fallback = sel.used_fallback;
    info.filter_warning = filtered.short_series_warning;
    info.emitted = start % g.hop == 0;
    if (info.emitted) {
      const GaussianWeightParams params{state.f_r, state.sigma_fr};
      emitted.push_back({start, fuse_window(sel.accepted, params)});
    }
    pulse.windows.push_back(info);
  }

  std::vector<double> assembled = overlap_add(emitted, g.length, g.hop);
  if (emitted.size() >= 2) {
    // Drop the leading and trailing half-window covered by one Hann slope.
    pulse.samples.assign(assembled.begin() + static_cast<std::ptrdiff_t>(g.hop),
                         assembled.end() - static_cast<std::ptrdiff_t>(g.hop));
    pulse.t0 = trace.t0 + static_cast<double>(g.hop) / fs;
  } else {
    pulse.samples = std::move(assembled);
    pulse.t0 = trace.t0;
  }
  return pulse;
}

void write_pulse_csv(std::ostream& out, const PulseWave& pulse) {
  out << "# fs=" << detail::exact(pulse.fs) << "\n";
  out << "# t0=" << detail::exact(pulse.t0) << "\n";
  for (std::size_t i = 0; i < pulse.samples.size(); ++i)
    out << i << ',' << detail::exact(pulse.samples[i]) << '\n';
}

void save_pulse_csv(const std::filesystem::path& path, const PulseWave& pulse) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_pulse_csv(out, pulse);
}

PulseWave read_pulse_csv(std::istream& in) {
  PulseWave pulse;
  bool have_fs = false;
  std::string line;
  std::size_t line_no = 0;
  long expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (auto h = detail::parse_header(view)) {
        const auto v = detail::parse_double(h->value);
        if (h->key == "fs") {
          if (!v || !(*v > 0.0))
            throw Error(ErrorCode::kInvalidHeader, "fs must be a positive number");
          pulse.fs = *v;
          have_fs = true;
        } else if (h->key == "t0") {
          if (!v) throw Error(ErrorCode::kInvalidHeader, "t0 must be a number");
          pulse.t0 = *v;
        }
      }
      continue;
    }
    const auto fields = detail::split(view);
    if (fields.size() != 2) detail::parse_fail(line_no, "expected sample_index,value");
    const auto idx = detail::parse_long(fields[0]);
    const auto value = detail::parse_double(fields[1]);
    if (!idx || !value || !std::isfinite(*value)) detail::parse_fail(line_no, "bad pulse row");
    if (*idx != expected) detail::parse_fail(line_no, "sample indices must be 0, 1, 2, ...");
    ++expected;
    pulse.samples.push_back(*value);
  }
  if (!have_fs) throw Error(ErrorCode::kInvalidHeader, "missing '# fs=<float>' header");
  return pulse;
}

PulseWave load_pulse_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_pulse_csv(in);
}

std::string window_metadata_json(const PulseWave& pulse) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& w : pulse.windows) {
    arr.push_back({{"start", w.start},
                   {"t_center", w.t_center},
                   {"f_r", w.f_r},
                   {"sigma_fr", w.sigma_fr},
                   {"candidates", w.candidates},
                   {"accepted", w.accepted},
                   {"fallback", w.used_fallback},
                   {"emitted", w.emitted},
                   {"filter_warning", w.filter_warning}});
  }
  return arr.dump(2);
}

}  // namespace rppg
