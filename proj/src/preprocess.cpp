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

#include "rppg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "rppg/error.hpp"

namespace rppg {

namespace {

void require_finite(std::span<const double> x) {
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); }))
    throw Error(ErrorCode::kNonFiniteInput, "series contains non-finite values");
}

}  // namespace

std::vector<double> detrend(std::span<const double> series, double lambda) {
  const std::size_t n = series.size();
  if (n < 3) throw Error(ErrorCode::kSeriesTooShort, "detrend needs at least 3 samples");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::kConfigError, "lambda must be positive");
  require_finite(series);

  // Bands of A = I + lambda^2 D2'D2: diag, first and second super-diagonal.
  const double l2 = lambda * lambda;
  std::vector<double> d0(n, 1.0), d1(n, 0.0), d2(n, 0.0);
  constexpr double kStencil[3] = {1.0, -2.0, 1.0};
  for (std::size_t k = 0; k + 2 < n; ++k) {
    for (int a = 0; a < 3; ++a) {
      d0[k + a] += l2 * kStencil[a] * kStencil[a];
      if (a < 2) d1[k + a] += l2 * kStencil[a] * kStencil[a + 1];
    }
    d2[k] += l2 * kStencil[0] * kStencil[2];
  }

  // Banded LDL': L has unit diagonal and two sub-diagonals (s1, s2).
  std::vector<double> diag(n), s1(n, 0.0), s2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double dii = d0[i];
    if (i >= 2) {
      s2[i] = d2[i - 2] / diag[i - 2];
      dii -= s2[i] * s2[i] * diag[i - 2];
    }
    if (i >= 1) {
      double off = d1[i - 1];
      if (i >= 2) off -= s2[i] * s1[i - 1] * diag[i - 2];
      s1[i] = off / diag[i - 1];
      dii -= s1[i] * s1[i] * diag[i - 1];
    }
    diag[i] = dii;
  }

  std::vector<double> y(series.begin(), series.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) y[i] -= s1[i] * y[i - 1];
    if (i >= 2) y[i] -= s2[i] * y[i - 2];
  }
  for (std::size_t i = 0; i < n; ++i) y[i] /= diag[i];
  for (std::size_t i = n; i-- > 0;) {
    if (i + 1 < n) y[i] -= s1[i + 1] * y[i + 1];
    if (i + 2 < n) y[i] -= s2[i + 2] * y[i + 2];
  }

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = series[i] - y[i];
  return out;
}

DetrendedTrace detrend(const RawTrace& trace, double lambda) {
  validate(trace);
  DetrendedTrace out;
  out.fs = trace.fs;
  out.samples.resize(trace.samples.rows(), 3);
  for (int c = 0; c < 3; ++c) {
    const auto col = detrend(trace.channel(static_cast<Channel>(c)), lambda);
    for (std::size_t i = 0; i < col.size(); ++i) out.samples(static_cast<Eigen::Index>(i), c) = col[i];
  }
  return out;
}

namespace {

using Complex = std::complex<double>;

std::vector<double> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

}  // namespace

IirCoefficients butterworth_bandpass(int order, double low_hz, double high_hz,
                                     double fs) {
  if (order < 1) throw Error(ErrorCode::kConfigError, "filter order must be >= 1");
  if (!(fs > 0.0)) throw Error(ErrorCode::kConfigError, "fs must be positive");
  if (!(low_hz > 0.0) || !(low_hz < high_hz))
    throw Error(ErrorCode::kInvalidBand, "band edges must satisfy 0 < low < high");
  if (high_hz >= fs / 2.0)
    throw Error(ErrorCode::kNyquistViolation, "high edge must lie below fs/2");

  // Analog prototype poles on the unit circle's left half.
  std::vector<Complex> proto;
  for (int m = -order + 1; m < order; m += 2)
    proto.push_back(-std::exp(Complex(0.0, std::numbers::pi * m / (2.0 * order))));

  // Pre-warp the band edges for the bilinear transform with k = 2 fs.
  const double k = 2.0 * fs;
  const double wl = k * std::tan(std::numbers::pi * low_hz / fs);
  const double wh = k * std::tan(std::numbers::pi * high_hz / fs);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);

  // Lowpass -> bandpass: every prototype pole splits into two and
  // `order` zeros land at s = 0.
  std::vector<Complex> poles;
  for (const Complex& p : proto) {
    const Complex pl = p * (bw / 2.0);
    const Complex root = std::sqrt(pl * pl - w0 * w0);
    poles.push_back(pl + root);
    poles.push_back(pl - root);
  }
  std::vector<Complex> zeros(static_cast<std::size_t>(order), 0.0);
  double gain = std::pow(bw, order);

  // Bilinear transform.
  Complex num = 1.0, den = 1.0;
  for (const Complex& z : zeros) num *= (k - z);
  for (const Complex& p : poles) den *= (k - p);
  gain *= (num / den).real();
  std::vector<Complex> zd, pd;
  for (const Complex& z : zeros) zd.push_back((k + z) / (k - z));
  for (const Complex& p : poles) pd.push_back((k + p) / (k - p));
  for (int i = 0; i < order; ++i) zd.push_back(-1.0);

  IirCoefficients filter;
  filter.b = poly_from_roots(zd);
  for (double& v : filter.b) v *= gain;
  filter.a = poly_from_roots(pd);
  return filter;
}

double magnitude_response(const IirCoefficients& filter, double f, double fs) {
  const Complex zinv = std::exp(Complex(0.0, -2.0 * std::numbers::pi * f / fs));
  Complex num = 0.0, den = 0.0, zk = 1.0;
  const std::size_t n = std::max(filter.a.size(), filter.b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i < filter.b.size()) num += filter.b[i] * zk;
    if (i < filter.a.size()) den += filter.a[i] * zk;
    zk *= zinv;
  }
  return std::abs(num / den);
}

std::vector<double> lfilter(const IirCoefficients& filter, std::span<const double> x) {
  return lfilter_with_state(filter, x, {});
}

std::vector<double> lfilter_with_state(const IirCoefficients& filter,
                                       std::span<const double> x,
                                       std::span<const double> initial_state) {
  const std::size_t m = std::max(filter.a.size(), filter.b.size());
  std::vector<double> b(filter.b), a(filter.a);
  b.resize(m, 0.0);
  a.resize(m, 0.0);
  const double a0 = a[0];
  for (double& v : b) v /= a0;
  for (double& v : a) v /= a0;

  std::vector<double> z(m - 1, 0.0);
  std::copy_n(initial_state.begin(), std::min(initial_state.size(), z.size()), z.begin());
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double xn = x[n];
    const double yn = b[0] * xn + (z.empty() ? 0.0 : z[0]);
    for (std::size_t i = 0; i + 1 < z.size(); ++i) z[i] = b[i + 1] * xn + z[i + 1] - a[i + 1] * yn;
    if (!z.empty()) z.back() = b[m - 1] * xn - a[m - 1] * yn;
    y[n] = yn;
  }
  return y;
}

std::vector<double> lfilter_steady_state(const IirCoefficients& filter) {
  const std::size_t m = std::max(filter.a.size(), filter.b.size());
  if (m < 2) return {};
  std::vector<double> b(filter.b), a(filter.a);
  b.resize(m, 0.0);
  a.resize(m, 0.0);
  const double a0 = a[0];
  for (double& v : b) v /= a0;
  for (double& v : a) v /= a0;

  const auto n = static_cast<Eigen::Index>(m - 1);
  // (I - C') zi = b[1:] - a[1:] b[0], C the companion matrix of a.
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j) system(j, 0) += a[static_cast<std::size_t>(j) + 1];
  for (Eigen::Index i = 1; i < n; ++i) system(i - 1, i) -= 1.0;
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i)
    rhs(i) = b[static_cast<std::size_t>(i) + 1] - a[static_cast<std::size_t>(i) + 1] * b[0];
  const Eigen::VectorXd zi = system.partialPivLu().solve(rhs);
  return {zi.data(), zi.data() + zi.size()};
}

std::size_t settling_length(const IirCoefficients& filter) {
  // Grow the impulse response until it has been quiet for a long stretch
  // relative to its active length.
  for (std::size_t length = 4096;; length *= 2) {
    std::vector<double> impulse(length, 0.0);
    impulse[0] = 1.0;
    const std::vector<double> h = lfilter(filter, impulse);
    double peak = 0.0;
    for (double v : h) peak = std::max(peak, std::abs(v));
    std::size_t last_above = 0;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (std::abs(h[i]) >= 1e-3 * peak) last_above = i;
    if (length - last_above > std::max<std::size_t>(1000, 4 * last_above) ||
        length >= (std::size_t{1} << 20))
      return last_above + 1;
  }
}

FiltFiltResult filtfilt(const IirCoefficients& filter, std::span<const double> x) {
  FiltFiltResult result;
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::kSeriesTooShort, "filtfilt needs at least 2 samples");
  const std::size_t padlen = 3 * std::max(filter.a.size(), filter.b.size());
  const std::size_t edge = std::min(padlen, n - 1);
  result.short_series_warning = edge < padlen || n < 3 * settling_length(filter);

  // Odd reflection about each end point.
  std::vector<double> ext;
  ext.reserve(n + 2 * edge);
  for (std::size_t i = edge; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= edge; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const std::vector<double> zi = lfilter_steady_state(filter);
  std::vector<double> state(zi.size());
  for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * ext.front();
  std::vector<double> y = lfilter_with_state(filter, ext, state);

  std::reverse(y.begin(), y.end());
  for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * y.front();
  y = lfilter_with_state(filter, y, state);
  std::reverse(y.begin(), y.end());

  result.samples.assign(y.begin() + static_cast<std::ptrdiff_t>(edge),
                        y.begin() + static_cast<std::ptrdiff_t>(edge + n));
  return result;
}

FiltFiltResult bandpass(std::span<const double> series, double fs,
                        const BandpassOptions& options) {
  require_finite(series);
  const IirCoefficients filter =
      butterworth_bandpass(options.order, options.low_hz, options.high_hz, fs);
  return filtfilt(filter, series);
}

}  // namespace rppg
