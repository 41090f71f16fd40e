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

#include "spanclust/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "spanclust/csv.hpp"

namespace spanclust {

void Dataset::validate() const {
  if (static_cast<Index>(labels.size()) != features.rows()) {
    throw std::invalid_argument("dataset has " + std::to_string(labels.size()) + " labels for " +
                                std::to_string(features.rows()) + " rows");
  }
}

bool Dataset::fully_labeled() const {
  for (const auto& l : labels) {
    if (!l) return false;
  }
  return true;
}

Dataset Dataset::subset(const std::vector<Index>& rows) const {
  Dataset out;
  out.name = name;
  out.seed = seed;
  out.features.resize(static_cast<Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Index>(r)) = features.row(rows[r]);
    out.labels.push_back(labels[rows[r]]);
  }
  return out;
}

Dataset gen_four_gaussians(std::uint64_t seed, double std_dev) {
  if (!(std_dev >= 0.0)) throw std::invalid_argument("std_dev must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index n = 4 * kFourGaussianPerClass;
  Dataset d;
  d.name = "four_gaussians";
  d.seed = seed;
  d.features.resize(n, 2);
  for (Index c = 0; c < 4; ++c) {
    for (Index p = 0; p < kFourGaussianPerClass; ++p) {
      const Index row = c * kFourGaussianPerClass + p;
      for (Index dim = 0; dim < 2; ++dim) {
        d.features(row, dim) = kFourGaussianMeans[c][dim] + std_dev * normal(rng);
      }
      d.labels.emplace_back(c);
    }
  }
  return d;
}

Dataset append_noise_dims(const Dataset& data, Index num_dims, std::uint64_t seed) {
  if (num_dims < 1) throw std::invalid_argument("append_noise_dims needs num_dims >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Dataset out = data;
  out.features.conservativeResize(data.size(), data.dims() + num_dims);
  for (Index i = 0; i < data.size(); ++i) {
    for (Index d = 0; d < num_dims; ++d) out.features(i, data.dims() + d) = uniform(rng);
  }
  out.name = data.name + "+noise";
  return out;
}

namespace {

void check_even(Index n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("generator needs an even n >= 4");
}

void jitter(Dataset& d, double noise_std, std::uint64_t seed) {
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
  if (noise_std == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, noise_std);
  for (Index i = 0; i < d.features.rows(); ++i) {
    for (Index j = 0; j < d.features.cols(); ++j) d.features(i, j) += normal(rng);
  }
}

}  // namespace

Dataset gen_two_moons(Index n, double noise_std, std::uint64_t seed) {
  check_even(n);
  const Index half = n / 2;
  Dataset d;
  d.name = "two_moons";
  d.seed = seed;
  d.features.resize(n, 2);
  for (Index p = 0; p < half; ++p) {
    const double t = std::numbers::pi * static_cast<double>(p) / static_cast<double>(half - 1);
    d.features(p, 0) = std::cos(t);
    d.features(p, 1) = std::sin(t);
    d.features(half + p, 0) = 1.0 - std::cos(t);
    d.features(half + p, 1) = 0.5 - std::sin(t);
  }
  for (Index p = 0; p < n; ++p) d.labels.emplace_back(p < half ? 0 : 1);
  jitter(d, noise_std, seed);
  return d;
}

Dataset gen_circles(Index n, double gap, std::uint64_t seed, double noise_std) {
  check_even(n);
  if (!(gap > 0.0)) throw std::invalid_argument("circle gap must be > 0");
  const Index half = n / 2;
  Dataset d;
  d.name = "circles";
  d.seed = seed;
  d.features.resize(n, 2);
  for (Index p = 0; p < half; ++p) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(half);
    d.features(p, 0) = std::cos(t);
    d.features(p, 1) = std::sin(t);
    d.features(half + p, 0) = (1.0 + gap) * std::cos(t);
    d.features(half + p, 1) = (1.0 + gap) * std::sin(t);
  }
  for (Index p = 0; p < n; ++p) d.labels.emplace_back(p < half ? 0 : 1);
  jitter(d, noise_std, seed);
  return d;
}

MembershipMatrix kmeans_baseline(const Matrix& x, Index k, Index restarts, std::uint64_t seed,
                                 Index max_iterations) {
  const Index n = x.rows();
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: k out of range");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Index> best_assign(static_cast<std::size_t>(n), 0);
  double best_inertia = std::numeric_limits<double>::infinity();

  for (Index r = 0; r < restarts; ++r) {
    // k-means++ seeding.
    Matrix centers(k, x.cols());
    std::uniform_int_distribution<Index> pick(0, n - 1);
    centers.row(0) = x.row(pick(rng));
    Vector d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Index c = 1; c < k; ++c) {
      const double total = d2.sum();
      Index chosen = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng);
        for (chosen = 0; chosen + 1 < n; ++chosen) {
          target -= d2[chosen];
          if (target < 0.0) break;
        }
      } else {
        chosen = pick(rng);
      }
      centers.row(c) = x.row(chosen);
      d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<Index> assign(static_cast<std::size_t>(n), -1);
    double inertia = 0.0;
    for (Index it = 0; it < max_iterations; ++it) {
      bool changed = false;
      inertia = 0.0;
      for (Index i = 0; i < n; ++i) {
        Index arg = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < k; ++c) {
          const double d = (x.row(i) - centers.row(c)).squaredNorm();
          if (d < best) {
            best = d;
            arg = c;
          }
        }
        inertia += best;
        if (assign[i] != arg) {
          assign[i] = arg;
          changed = true;
        }
      }
      if (!changed) break;
      Matrix sums = Matrix::Zero(k, x.cols());
      std::vector<Index> counts(static_cast<std::size_t>(k), 0);
      for (Index i = 0; i < n; ++i) {
        sums.row(assign[i]) += x.row(i);
        ++counts[assign[i]];
      }
      for (Index c = 0; c < k; ++c) {
        if (counts[c] > 0) centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
      }
    }
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best_assign = assign;
    }
  }
  return MembershipMatrix(best_assign);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  data.validate();
  for (Index d = 0; d < data.dims(); ++d) out << 'x' << d << ',';
  out << "label\n";
  for (Index i = 0; i < data.size(); ++i) {
    for (Index d = 0; d < data.dims(); ++d) out << format_double(data.features(i, d)) << ',';
    if (data.labels[i]) out << *data.labels[i];
    out << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset CSV is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "label") {
    throw std::invalid_argument("dataset CSV header must be x0,...,x{d-1},label");
  }
  const Index dims = static_cast<Index>(header.size()) - 1;
  for (Index d = 0; d < dims; ++d) {
    if (header[d] != "x" + std::to_string(d)) {
      throw std::invalid_argument("dataset CSV header column " + std::to_string(d) +
                                  " must be x" + std::to_string(d));
    }
  }
  std::vector<std::vector<double>> rows;
  Dataset data;
  data.name = name;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Index>(fields.size()) != dims + 1) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(dims + 1));
    }
    std::vector<double> row;
    for (Index d = 0; d < dims; ++d) row.push_back(parse_double(fields[d], line_no));
    rows.push_back(std::move(row));
    if (fields.back().empty()) {
      data.labels.emplace_back(std::nullopt);
    } else {
      data.labels.emplace_back(parse_int(fields.back(), line_no));
    }
  }
  data.features.resize(static_cast<Index>(rows.size()), dims);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Index d = 0; d < dims; ++d) data.features(static_cast<Index>(r), d) = rows[r][d];
  }
  return data;
}

}  // namespace spanclust
