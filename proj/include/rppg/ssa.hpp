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

// Singular spectrum analysis: embed a series into its L-trajectory
// (Hankel) matrix, split it into rank-one terms by SVD, and map each term
// back to a series by anti-diagonal averaging.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rppg::ssa {

/// Singular triples with sigma below this fraction of the largest are
/// treated as numerically zero.
inline constexpr double kRelativeRankCutoff = 1e-12;

struct SingularTriple {
  double sigma = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

struct Decomposition {
  /// components[p] has length source_length; ordered by singular value.
  std::vector<std::vector<double>> components;
  std::vector<double> singular_values;
  std::size_t window_length = 0;
  std::size_t source_length = 0;
};

/// Window length used when none is configured: floor(T/3) clamped to
/// [2 fs, floor(T/2)] (and to at least 2).
std::size_t default_window_length(std::size_t series_length, double fs);

/// L x K trajectory matrix with X(i, j) = series[i + j], K = T - L + 1.
/// Requires 2 <= L <= T/2.
Eigen::MatrixXd hankel_embed(std::span<const double> series,
                             std::size_t window_length);

/// Thin SVD of X, descending sigma, dropping numerically-zero directions.
std::vector<SingularTriple> svd_components(const Eigen::MatrixXd& x);

/// Mean over each anti-diagonal i + j = k, k = 0 .. L + K - 2.
std::vector<double> diagonal_average(const Eigen::MatrixXd& x);

/// Elementary reconstructed components of the `max_components` leading
/// singular triples.
Decomposition decompose(std::span<const double> series,
                        std::size_t window_length,
                        std::size_t max_components);

}  // namespace rppg::ssa
