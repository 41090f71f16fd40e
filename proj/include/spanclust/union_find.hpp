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

#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace spanclust {

/// Disjoint sets with path halving and union by rank.
class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(Eigen::Index n) { reset(n); }

  void reset(Eigen::Index n) {
    parent_.resize(static_cast<std::size_t>(n));
    std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
    rank_.assign(static_cast<std::size_t>(n), 0);
    sets_ = n;
  }

  Eigen::Index find(Eigen::Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns the surviving root, or -1 if a and b were already joined.
  Eigen::Index unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return -1;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --sets_;
    return a;
  }

  Eigen::Index sets() const { return sets_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(parent_.size()); }

 private:
  std::vector<Eigen::Index> parent_;
  std::vector<int> rank_;
  Eigen::Index sets_ = 0;
};

}  // namespace spanclust
