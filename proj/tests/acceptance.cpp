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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "rppg/hr.hpp"
#include "rppg/metrics.hpp"
#include "rppg/preprocess.hpp"
#include "rppg/reconstruct.hpp"
#include "rppg/selection.hpp"
#include "rppg/ssa.hpp"
#include "rppg/synth.hpp"

namespace {

using namespace rppg;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RawTrace scaled(RawTrace t, double alpha) {
  t.samples *= alpha;
  return t;
}

Outcome ssa_reconstruction() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = testing::white_noise(300, 1000 + seed);
    const ssa::Decomposition d = ssa::decompose(x, 100, 100);
    std::vector<double> sum(x.size(), 0.0);
    for (const auto& c : d.components) sum = testing::add(sum, c);
    worst = std::max(worst, testing::relative_l2(sum, x));
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-8 && elapsed < 10.0,
          fmt("max relative L2 %.3g (< 1e-8), %.2f s (< 10 s)", worst, elapsed)};
}

Outcome diagonal_average_oracle() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 30);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd m(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = nd(rng);
    const auto got = ssa::diagonal_average(m);
    const auto want = testing::brute_diagonal_average(m);
    for (std::size_t k = 0; k < got.size(); ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
  }
  return {worst <= 1e-12, fmt("max abs difference %.3g (<= 1e-12) over 20 matrices", worst)};
}

Outcome detrend_oracle() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto x = testing::white_noise(300, 500 + seed, 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 1e-3 * std::pow(static_cast<double>(i), 1.5);
    const auto got = detrend(x, 100.0);
    const auto want = testing::dense_detrend(x, 100.0);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  double constant = 0.0;
  for (double v : detrend(std::vector<double>(300, 42.0), 100.0))
    constant = std::max(constant, std::abs(v));
  return {worst <= 1e-8 && constant <= 1e-9,
          fmt("max deviation from dense solve %.3g (<= 1e-8), constant residual %.3g (<= 1e-9)",
              worst, constant)};
}

Outcome hann_cola() {
  const std::size_t len = 300, hop = 150;
  std::vector<PlacedWindow> windows;
  for (std::size_t k = 0; k < 12; ++k) windows.push_back({k * hop, std::vector<double>(len, 3.5)});
  const auto out = overlap_add(windows, len, hop);
  double worst = 0.0;
  for (std::size_t n = hop; n + hop < out.size(); ++n)
    worst = std::max(worst, std::abs(out[n] - 3.5) / 3.5);
  return {worst <= 1e-9, fmt("max interior relative error %.3g (<= 1e-9)", worst)};
}

Outcome mask_truth_table() {
  const bool examples = mask_decision(1.25, 1.2, 0.05).reason == MaskReason::kFundamentalMatch &&
                        mask_decision(2.4, 1.2, 0.05).reason == MaskReason::kHarmonicMatch &&
                        mask_decision(3.0, 1.2, 0.05).reason == MaskReason::kWindowReject &&
                        mask_decision(7.0, 3.5, 0.05).reason == MaskReason::kBandReject &&
                        mask_decision(1.25, 1.2, 0.05).accepted &&
                        mask_decision(2.4, 1.2, 0.05).accepted &&
                        !mask_decision(3.0, 1.2, 0.05).accepted &&
                        !mask_decision(7.0, 3.5, 0.05).accepted;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> fi(0.0, 8.0), fr(0.7, 4.0), sg(0.005, 0.5);
  int mismatches = 0;
  for (int n = 0; n < 1000; ++n) {
    const double f_i = fi(rng), f_r = fr(rng), sigma = sg(rng);
    if (mask_decision(f_i, f_r, sigma).accepted != testing::mask_predicate(f_i, f_r, sigma))
      ++mismatches;
  }
  return {examples && mismatches == 0,
          fmt("4 examples %s, %d/1000 mismatches against independent predicate",
              examples ? "exact" : "WRONG", mismatches)};
}

Outcome clean_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  for (double hr : {48.0, 72.0, 100.0, 150.0}) {
    SynthConfig cfg;
    cfg.hr_bpm = hr;
    const double est = estimate_hr(run_pipeline(generate(cfg))).bpm;
    ok = ok && std::abs(est - hr) <= 1.0;
    detail += fmt("%g->%.2f ", hr, est);
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 30.0;
  return {ok, detail + fmt("bpm (+/-1), %.2f s (< 30 s)", elapsed)};
}

Outcome noisy_recovery() {
  std::vector<double> errors;
  int improved = 0;
  double gain_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthConfig cfg;
    cfg.noise_rms = {1.0, 1.0, 1.0};  // equals the green pulse amplitude
    cfg.seed = seed;
    const RawTrace trace = generate(cfg);
    const PulseWave pulse = run_pipeline(trace);
    errors.push_back(std::abs(estimate_hr(pulse).bpm - 72.0));
    const double raw = snr_db(trace.channel(kGreen), trace.fs, 72.0);
    const double out = snr_db(pulse.samples, pulse.fs, 72.0);
    gain_sum += out - raw;
    if (out >= raw + 3.0) ++improved;
  }
  const double med = median(errors);
  return {med <= 3.0 && improved >= 15,
          fmt("median |error| %.3f bpm (<= 3), SNR gain >= 3 dB in %d/20 seeds (>= 15), mean gain "
              "%.2f dB",
              med, improved, gain_sum / 20.0)};
}

SynthConfig sweep_base() {
  SynthConfig cfg;
  cfg.noise_rms = {1.0, 1.0, 1.0};
  cfg.quantization_step = 0.5;
  cfg.drift_amp = 2.0;
  cfg.seed = 1;
  return cfg;
}

Outcome sweep_monotonicity() {
  const std::vector<double> levels{1.0, 0.5, 0.25, 0.1, 0.05};
  const auto rows = cli::run_sweep(sweep_base(), levels, 20, {}, 0);
  std::vector<double> snr;
  bool mae_ok = true;
  std::string detail = "SNR";
  std::string mae_detail = "; MAE proposed/green";
  for (double f : levels) {
    const cli::SweepRow* p = nullptr;
    const cli::SweepRow* g = nullptr;
    for (const auto& r : rows)
      if (r.factor == f) (r.method == "proposed" ? p : g) = &r;
    snr.push_back(p->snr_db);
    detail += fmt(" %.2f", p->snr_db);
    if (f <= 0.25) {
      mae_ok = mae_ok && p->mae_bpm <= g->mae_bpm;
      mae_detail += fmt(" %.1f/%.1f", p->mae_bpm, g->mae_bpm);
    }
  }
  bool monotone = true;
  for (std::size_t i = 1; i < snr.size(); ++i) monotone = monotone && snr[i] <= snr[i - 1];
  return {monotone && mae_ok, detail + (monotone ? " (non-increasing)" : " (NOT monotone)") +
                                  mae_detail + " at factors <= 0.25"};
}

Outcome amplitude_equivariance() {
  SynthConfig cfg = sweep_base();
  const RawTrace trace = generate(cfg);
  const PulseWave base = run_pipeline(trace);
  const double hr = estimate_hr(base).bpm;
  bool ok = true;
  std::string detail;
  for (double alpha : {0.1, 10.0}) {
    const PulseWave p = run_pipeline(scaled(trace, alpha));
    std::vector<double> want(base.samples);
    for (double& v : want) v *= alpha;
    const double err = testing::relative_l2(p.samples, want);
    const double hr_alpha = estimate_hr(p).bpm;
    ok = ok && err <= 1e-6 && hr_alpha == hr;
    detail += fmt("alpha=%g: rel %.3g, HR %.4f vs %.4f; ", alpha, err, hr_alpha, hr);
  }
  return {ok, detail + "(<= 1e-6, identical HR)"};
}

Outcome sweep_determinism() {
  const fs::path dir = fs::temp_directory_path() / "rppg_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / "base.json";
  std::ofstream(cfg) << synth_config_to_json(sweep_base());
  cli::SweepOptions opts;
  opts.config = cfg;
  opts.levels = {1.0, 0.25, 0.05};
  opts.seeds = 3;
  std::ostringstream log;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  opts.output = dir / "first.csv";
  const int a = cli::cmd_sweep(opts, log);
  opts.output = dir / "second.csv";
  const int b = cli::cmd_sweep(opts, log);
  const std::string first = slurp(dir / "first.csv"), second = slurp(dir / "second.csv");
  fs::remove_all(dir);
  const bool ok = a == 0 && b == 0 && !first.empty() && first == second;
  return {ok, fmt("exit codes %d/%d, %zu-byte reports %s", a, b, first.size(),
                  first == second ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"SSA reconstruction identity", ssa_reconstruction},
      {"Diagonal-averaging oracle", diagonal_average_oracle},
      {"Detrending oracle", detrend_oracle},
      {"Hann COLA", hann_cola},
      {"Spectral mask truth table", mask_truth_table},
      {"End-to-end clean recovery", clean_recovery},
      {"End-to-end noisy recovery", noisy_recovery},
      {"Sweep monotonicity", sweep_monotonicity},
      {"Amplitude equivariance", amplitude_equivariance},
      {"Sweep determinism", sweep_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size());
  return failed == 0 ? 0 : 1;
}
