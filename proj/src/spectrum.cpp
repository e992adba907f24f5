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

#include "rppg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <unsupported/Eigen/FFT>

namespace rppg {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

PowerSpectrum power_spectrum(std::span<const double> series, double fs,
                             std::size_t nfft) {
  std::vector<double> padded(nfft, 0.0);
  std::copy_n(series.begin(), std::min(series.size(), nfft), padded.begin());

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> bins;
  fft.fwd(bins, padded);

  PowerSpectrum out;
  out.fs = fs;
  out.nfft = nfft;
  out.power.resize(nfft / 2 + 1);
  for (std::size_t k = 0; k < out.power.size(); ++k) out.power[k] = std::norm(bins[k]);
  return out;
}

std::size_t band_argmax(const PowerSpectrum& spectrum, double low_hz,
                        double high_hz) {
  std::size_t best = spectrum.nfft;
  double best_power = -1.0;
  for (std::size_t k = 0; k < spectrum.power.size(); ++k) {
    const double f = spectrum.frequency(k);
    if (f < low_hz || f > high_hz) continue;
    // strict comparison keeps the lowest frequency on ties
    if (spectrum.power[k] > best_power) {
      best_power = spectrum.power[k];
      best = k;
    }
  }
  return best;
}

double band_power(const PowerSpectrum& spectrum, double low_hz, double high_hz) {
  double total = 0.0;
  for (std::size_t k = 0; k < spectrum.power.size(); ++k) {
    const double f = spectrum.frequency(k);
    if (f >= low_hz && f <= high_hz) total += spectrum.power[k];
  }
  return total;
}

std::vector<double> remove_mean(std::span<const double> series) {
  std::vector<double> out(series.begin(), series.end());
  if (out.empty()) return out;
  const double mean =
      std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  for (double& v : out) v -= mean;
  return out;
}

std::vector<double> zscore(std::span<const double> series) {
  std::vector<double> out = remove_mean(series);
  double ss = 0.0;
  for (double v : out) ss += v * v;
  if (out.size() < 2 || ss == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  const double sd = std::sqrt(ss / static_cast<double>(out.size() - 1));
  for (double& v : out) v /= sd;
  return out;
}

}  // namespace rppg
