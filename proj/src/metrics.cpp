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

#include "rppg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "rppg/error.hpp"
#include "rppg/hr.hpp"
#include "rppg/preprocess.hpp"
#include "rppg/spectrum.hpp"
#include "text_io.hpp"

namespace rppg {

namespace {

// Bin-centre comparisons against band edges tolerate rounding in k * fs / n.
constexpr double kEdgeSlackHz = 1e-9;

}  // namespace

double snr_db(std::span<const double> signal, double fs, double hr_ref_bpm,
              const SnrOptions& options) {
  const double f_ref = hr_ref_bpm / 60.0;
  if (!(f_ref >= options.band_low_hz && f_ref <= options.band_high_hz))
    throw Error(ErrorCode::kConfigError, "reference HR outside the pulse band");
  if (signal.size() < 2) throw Error(ErrorCode::kSeriesTooShort, "SNR needs >= 2 samples");

  const std::vector<double> centred = remove_mean(signal);
  const PowerSpectrum spectrum = power_spectrum(centred, fs, centred.size());
  double p_in = 0.0, p_out = 0.0;
  for (std::size_t k = 0; k < spectrum.power.size(); ++k) {
    const double f = spectrum.frequency(k);
    if (f < options.band_low_hz - kEdgeSlackHz || f > options.band_high_hz + kEdgeSlackHz)
      continue;
    const bool near_fundamental =
        std::abs(f - f_ref) <= options.fundamental_halfwidth_hz + kEdgeSlackHz;
    const bool near_harmonic =
        std::abs(f - 2.0 * f_ref) <= options.harmonic_halfwidth_hz + kEdgeSlackHz;
    (near_fundamental || near_harmonic ? p_in : p_out) += spectrum.power[k];
  }
  if (p_out == 0.0) return std::numeric_limits<double>::infinity();
  if (p_in == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(p_in / p_out);
}

double cap_snr(double snr) { return std::clamp(snr, -kSnrCapDb, kSnrCapDb); }

namespace {

void check_pairs(std::span<const double> est, std::span<const double> ref) {
  if (est.empty() || est.size() != ref.size())
    throw Error(ErrorCode::kPairingError,
                "need equal non-zero lengths (got " + std::to_string(est.size()) + " and " +
                    std::to_string(ref.size()) + ")");
}

}  // namespace

double mae(std::span<const double> est, std::span<const double> ref) {
  check_pairs(est, ref);
  double sum = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) sum += std::abs(est[i] - ref[i]);
  return sum / static_cast<double>(est.size());
}

double rmse(std::span<const double> est, std::span<const double> ref) {
  check_pairs(est, ref);
  double sum = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) sum += (est[i] - ref[i]) * (est[i] - ref[i]);
  return std::sqrt(sum / static_cast<double>(est.size()));
}

Spectrogram spectrogram(std::span<const double> series, double fs, double win_s,
                        double hop_s, double max_hz) {
  const auto win = static_cast<std::size_t>(std::llround(win_s * fs));
  const auto hop = static_cast<std::size_t>(std::llround(hop_s * fs));
  if (win < 2 || hop < 1) throw Error(ErrorCode::kConfigError, "bad spectrogram window/hop");
  if (series.size() < win)
    throw Error(ErrorCode::kSeriesTooShort, "series shorter than one spectrogram window");

  const std::size_t nfft = 2 * next_pow2(win);
  const std::vector<double> taper = hann_periodic(win);
  Spectrogram sg;
  const double bin = fs / static_cast<double>(nfft);
  for (std::size_t k = 0; k <= nfft / 2 && static_cast<double>(k) * bin <= max_hz; ++k)
    sg.frequencies.push_back(static_cast<double>(k) * bin);

  for (std::size_t start = 0; start + win <= series.size(); start += hop) {
    std::vector<double> slice = remove_mean(series.subspan(start, win));
    for (std::size_t i = 0; i < win; ++i) slice[i] *= taper[i];
    const PowerSpectrum ps = power_spectrum(slice, fs, nfft);
    sg.power.emplace_back(ps.power.begin(),
                          ps.power.begin() + static_cast<std::ptrdiff_t>(sg.frequencies.size()));
    sg.times.push_back((static_cast<double>(start) + 0.5 * static_cast<double>(win)) / fs);
  }
  return sg;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_spectrogram_csv(std::ostream& out, const Spectrogram& sg) {
  out << "t_seconds";
  for (double f : sg.frequencies) out << ',' << format_number(f);
  out << '\n';
  for (std::size_t s = 0; s < sg.power.size(); ++s) {
    out << format_number(sg.times[s]);
    for (double p : sg.power[s]) out << ',' << format_number(p);
    out << '\n';
  }
}

std::vector<ReferenceSample> read_reference_csv(std::istream& in) {
  std::vector<ReferenceSample> ref;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = detail::split(view);
    if (fields.size() != 2) detail::parse_fail(line_no, "expected t_seconds,bpm");
    const auto t = detail::parse_double(fields[0]);
    const auto bpm = detail::parse_double(fields[1]);
    if (!t || !bpm) {
      if (ref.empty() && fields[0] == "t_seconds") continue;  // header row
      detail::parse_fail(line_no, "bad reference row");
    }
    if (!std::isfinite(*t) || !std::isfinite(*bpm)) detail::parse_fail(line_no, "non-finite value");
    ref.push_back({*t, *bpm});
  }
  return ref;
}

std::vector<ReferenceSample> load_reference_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_reference_csv(in);
}

void write_reference_csv(std::ostream& out, std::span<const ReferenceSample> ref) {
  out << "t_seconds,bpm\n";
  for (const auto& r : ref) out << format_number(r.t) << ',' << format_number(r.bpm) << '\n';
}

EvalReport evaluate(std::span<const double> signal, double fs, double t0,
                    std::span<const ReferenceSample> reference,
                    const EvalOptions& options) {
  if (reference.empty()) throw Error(ErrorCode::kPairingError, "reference is empty");
  const auto win = static_cast<std::size_t>(std::llround(options.window_s * fs));
  const auto step = static_cast<std::size_t>(std::llround(options.step_s * fs));
  if (win < 2 || step < 1) throw Error(ErrorCode::kConfigError, "bad evaluation window/step");
  if (signal.size() < win)
    throw Error(ErrorCode::kSeriesTooShort, "signal shorter than one evaluation window");

  std::vector<ReferenceSample> ref(reference.begin(), reference.end());
  std::sort(ref.begin(), ref.end(),
            [](const ReferenceSample& a, const ReferenceSample& b) { return a.t < b.t; });

  HrOptions hr_opts;
  hr_opts.band_low_hz = options.snr.band_low_hz;
  hr_opts.band_high_hz = options.snr.band_high_hz;
  hr_opts.min_duration_s = options.window_s;

  EvalReport report;
  std::vector<double> est, truth;
  double snr_sum = 0.0;
  for (std::size_t start = 0; start + win <= signal.size(); start += step) {
    const double t = t0 + (static_cast<double>(start) + 0.5 * static_cast<double>(win)) / fs;
    auto it = std::lower_bound(ref.begin(), ref.end(), t,
                               [](const ReferenceSample& r, double v) { return r.t < v; });
    const ReferenceSample* nearest = nullptr;
    if (it != ref.end()) nearest = &*it;
    if (it != ref.begin() && (nearest == nullptr || t - std::prev(it)->t <= nearest->t - t))
      nearest = &*std::prev(it);
    if (nearest == nullptr || std::abs(nearest->t - t) > options.pairing_tolerance_s + 1e-9)
      throw Error(ErrorCode::kPairingError,
                  "no reference HR within " + format_number(options.pairing_tolerance_s) +
                      " s of window centre t=" + format_number(t));

    const auto slice = signal.subspan(start, win);
    WindowEstimate w;
    w.t = t;
    w.hr_est = estimate_hr(slice, fs, hr_opts).bpm;
    w.hr_ref = nearest->bpm;
    w.snr_db = cap_snr(snr_db(slice, fs, w.hr_ref, options.snr));
    snr_sum += w.snr_db;
    est.push_back(w.hr_est);
    truth.push_back(w.hr_ref);
    report.per_window.push_back(w);
  }
  report.snr_db = snr_sum / static_cast<double>(report.per_window.size());
  report.mae_bpm = mae(est, truth);
  report.rmse_bpm = rmse(est, truth);
  return report;
}

std::vector<ReferenceSample> constant_reference(double bpm, double duration_s,
                                                double t0, double step_s) {
  std::vector<ReferenceSample> ref;
  const auto n = static_cast<std::size_t>(std::floor(duration_s / step_s + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) ref.push_back({t0 + static_cast<double>(k) * step_s, bpm});
  return ref;
}

std::vector<double> green_baseline(const RawTrace& trace, const PipelineConfig& config) {
  validate(trace);
  const std::vector<double> detrended = detrend(trace.channel(kGreen), config.lambda);
  const BandpassOptions band{config.band_low_hz, config.band_high_hz, config.filter_order};
  return bandpass(detrended, trace.fs, band).samples;
}

namespace {

double rounded(double v) {
  // Round-trip through the fixed report precision so output is stable.
  return std::strtod(format_number(v).c_str(), nullptr);
}

}  // namespace

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["snr_db"] = rounded(report.snr_db);
  j["mae_bpm"] = rounded(report.mae_bpm);
  j["rmse_bpm"] = rounded(report.rmse_bpm);
  j["per_window"] = nlohmann::ordered_json::array();
  for (const auto& w : report.per_window)
    j["per_window"].push_back({{"t", rounded(w.t)},
                               {"hr_est", rounded(w.hr_est)},
                               {"hr_ref", rounded(w.hr_ref)},
                               {"snr_db", rounded(w.snr_db)}});
  return j.dump(2);
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "# snr_db=" << format_number(report.snr_db) << '\n';
  out << "# mae_bpm=" << format_number(report.mae_bpm) << '\n';
  out << "# rmse_bpm=" << format_number(report.rmse_bpm) << '\n';
  out << "t,hr_est,hr_ref,snr_db\n";
  for (const auto& w : report.per_window)
    out << format_number(w.t) << ',' << format_number(w.hr_est) << ','
        << format_number(w.hr_ref) << ',' << format_number(w.snr_db) << '\n';
}

}  // namespace rppg
