// Copyright 2026 The spanclust Authors.
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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spanclust/types.hpp"

namespace spanclust {

/// Feature rows with optional per-row class labels.
struct Dataset {
  Matrix features;
  std::vector<std::optional<std::int64_t>> labels;
  std::string name;
  std::uint64_t seed = 0;

  Index size() const { return features.rows(); }
  Index dims() const { return features.cols(); }
  /// Throws std::invalid_argument if label count differs from row count.
  void validate() const;
  bool fully_labeled() const;
  /// Rows `rows` of this dataset, in the given order.
  Dataset subset(const std::vector<Index>& rows) const;
};

/// Means of the four isotropic Gaussians of the linear denoising benchmark.
inline constexpr std::array<std::array<double, 2>, 4> kFourGaussianMeans = {{
    {0.97627008, 4.30378733},
    {2.05526752, 0.89766366},
    {-1.52690401, 2.91788226},
    {-1.24825577, 7.83546002},
}};
inline constexpr double kFourGaussianStd = 0.2;
inline constexpr Index kFourGaussianPerClass = 15;

/// 60 points in R^2, 15 per Gaussian, labels 0..3 in mean order.
Dataset gen_four_gaussians(std::uint64_t seed, double std_dev = kFourGaussianStd);

/// Appends `num_dims` columns of iid uniform [0, 1) noise.
Dataset append_noise_dims(const Dataset& data, Index num_dims, std::uint64_t seed);

/// Two interleaved half circles, n/2 points each at evenly spaced angles,
/// plus isotropic Gaussian jitter.
Dataset gen_two_moons(Index n, double noise_std, std::uint64_t seed);

/// Two concentric circles of radii 1 and 1 + gap, n/2 points each at evenly
/// spaced angles, plus isotropic Gaussian jitter.
Dataset gen_circles(Index n, double gap, std::uint64_t seed, double noise_std = 0.0);

/// Best-of-restarts Lloyd's algorithm with k-means++ seeding.
MembershipMatrix kmeans_baseline(const Matrix& x, Index k, Index restarts, std::uint64_t seed,
                                 Index max_iterations = 300);

/// CSV with header `x0,...,x{d-1},label`; an empty label field marks an
/// unlabeled row.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in, const std::string& name = "csv");

}  // namespace spanclust
