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

// Small, deliberately naive reference implementations used only by tests.
// They share no code with the library.

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spanclust::testing {

struct OracleForest {
  std::vector<std::pair<int, int>> edges;  // i < j, lexicographic
  double value = -std::numeric_limits<double>::infinity();
  std::vector<int> component;              // root id per node
};

inline int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x];
  return x;
}

/// Exhaustive search over all edge subsets of size n - k. `allowed(component)`
/// filters candidate partitions; ties keep the lexicographically smallest edge
/// list among maximisers. Returns nullopt when nothing is feasible.
template <class Allowed>
std::optional<OracleForest> exhaustive_forest(const Eigen::MatrixXd& sigma, int k,
                                              Allowed&& allowed) {
  const int n = static_cast<int>(sigma.rows());
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  const int m = static_cast<int>(all.size());
  const int need = n - k;
  std::optional<OracleForest> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (__builtin_popcountll(mask) != need) continue;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    bool acyclic = true;
    OracleForest f;
    f.value = 0.0;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!(mask >> e & 1)) continue;
      const int a = find_root(parent, all[e].first);
      const int b = find_root(parent, all[e].second);
      if (a == b) acyclic = false;
      parent[a] = b;
      f.edges.push_back(all[e]);
    }
    if (!acyclic) continue;
    f.component.resize(n);
    for (int v = 0; v < n; ++v) f.component[v] = find_root(parent, v);
    if (!allowed(f.component)) continue;
    // Sum in lexicographic edge order, as the library documents.
    for (const auto& [i, j] : f.edges) f.value += sigma(i, j);
    if (!best || f.value > best->value || (f.value == best->value && f.edges < best->edges)) {
      best = std::move(f);
    }
  }
  return best;
}

inline std::optional<OracleForest> exhaustive_forest(const Eigen::MatrixXd& sigma, int k) {
  return exhaustive_forest(sigma, k, [](const std::vector<int>&) { return true; });
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s(i, j) = s(j, i) = normal(rng);
  }
  return s;
}

/// Fraction of n^2 entries on which two labelings disagree about co-membership.
template <class A, class B>
double naive_clustering_error(const A& pred, const B& truth) {
  const std::size_t n = pred.size();
  double bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) bad += (pred[i] == pred[j]) != (truth[i] == truth[j]);
  }
  return bad / static_cast<double>(n * n);
}

}  // namespace spanclust::testing
