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

#include "rppg/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "rppg/error.hpp"

namespace rppg::ssa {

std::size_t default_window_length(std::size_t series_length, double fs) {
  const std::size_t upper = series_length / 2;
  const auto lower = static_cast<std::size_t>(std::ceil(2.0 * fs));
  std::size_t l = series_length / 3;
  l = std::max(l, lower);
  l = std::min(l, upper);
  return std::max<std::size_t>(l, 2);
}

Eigen::MatrixXd hankel_embed(std::span<const double> series,
                             std::size_t window_length) {
  const std::size_t t = series.size();
  if (window_length < 2 || window_length > t / 2)
    throw Error(ErrorCode::kInvalidWindowLength,
                "window length " + std::to_string(window_length) +
                    " outside [2, " + std::to_string(t / 2) + "] for T = " +
                    std::to_string(t));
  const auto l = static_cast<Eigen::Index>(window_length);
  const auto k = static_cast<Eigen::Index>(t - window_length + 1);
  Eigen::MatrixXd x(l, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < l; ++i) x(i, j) = series[static_cast<std::size_t>(i + j)];
  return x;
}

std::vector<SingularTriple> svd_components(const Eigen::MatrixXd& x) {
  if (!x.allFinite())
    throw Error(ErrorCode::kNonFiniteInput, "trajectory matrix has non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw Error(ErrorCode::kDecompositionFailure, "SVD did not converge");

  const Eigen::VectorXd& sigma = svd.singularValues();
  std::vector<SingularTriple> out;
  if (sigma.size() == 0) return out;
  const double cutoff = kRelativeRankCutoff * sigma(0);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > cutoff)) break;
    out.push_back({sigma(i), svd.matrixU().col(i), svd.matrixV().col(i)});
  }
  return out;
}

std::vector<double> diagonal_average(const Eigen::MatrixXd& x) {
  if (!x.allFinite())
    throw Error(ErrorCode::kNonFiniteInput, "matrix has non-finite entries");
  const Eigen::Index l = x.rows();
  const Eigen::Index k = x.cols();
  if (l == 0 || k == 0) return {};
  const auto n = static_cast<std::size_t>(l + k - 1);
  std::vector<double> sum(n, 0.0);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < l; ++i) sum[static_cast<std::size_t>(i + j)] += x(i, j);
  const Eigen::Index short_side = std::min(l, k);
  for (std::size_t d = 0; d < n; ++d) {
    const auto di = static_cast<Eigen::Index>(d);
    const Eigen::Index count = std::min({di + 1, short_side, l + k - 1 - di});
    sum[d] /= static_cast<double>(count);
  }
  return sum;
}

namespace {

// diagonal_average(sigma u v') without forming the rank-one matrix.
std::vector<double> reconstruct_elementary(const SingularTriple& triple) {
  const Eigen::Index l = triple.u.size();
  const Eigen::Index k = triple.v.size();
  const auto n = static_cast<std::size_t>(l + k - 1);
  std::vector<double> out(n, 0.0);
  for (Eigen::Index i = 0; i < l; ++i) {
    const double ui = triple.sigma * triple.u(i);
    double* row = out.data() + i;
    for (Eigen::Index j = 0; j < k; ++j) row[j] += ui * triple.v(j);
  }
  const Eigen::Index short_side = std::min(l, k);
  for (std::size_t d = 0; d < n; ++d) {
    const auto di = static_cast<Eigen::Index>(d);
    out[d] /= static_cast<double>(std::min({di + 1, short_side, l + k - 1 - di}));
  }
  return out;
}

}  // namespace

Decomposition decompose(std::span<const double> series,
                        std::size_t window_length,
                        std::size_t max_components) {
  if (max_components < 1)
    throw Error(ErrorCode::kConfigError, "max_components must be >= 1");
  const Eigen::MatrixXd x = hankel_embed(series, window_length);
  const std::vector<SingularTriple> triples = svd_components(x);

  Decomposition out;
  out.window_length = window_length;
  out.source_length = series.size();
  const std::size_t keep = std::min(max_components, triples.size());
  out.components.reserve(keep);
  out.singular_values.reserve(keep);
  for (std::size_t p = 0; p < keep; ++p) {
    out.components.push_back(reconstruct_elementary(triples[p]));
    out.singular_values.push_back(triples[p].sigma);
  }
  return out;
}

}  // namespace rppg::ssa
