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

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spanclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when partial membership information cannot be satisfied by any
/// k-spanning forest, or when the greedy solver cannot reach k components
/// without violating it.
class InfeasibleConstraints : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected edge, always stored with i < j.
struct Edge {
  Index i = 0;
  Index j = 0;

  Edge() = default;
  Edge(Index a, Index b) : i(a < b ? a : b), j(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Symmetric n x n similarity matrix. Exact bitwise symmetry and finiteness
/// are checked on construction; the diagonal is carried but never read.
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(Matrix values);

  /// Builds from the strict upper triangle of `upper`, mirroring it below.
  static SimilarityMatrix from_upper(const Matrix& upper);

  Index size() const { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }

  double max_abs_off_diagonal() const;

 private:
  Matrix values_;
};

/// Edge set of a k-spanning forest on n nodes. Edges are kept sorted
/// lexicographically, so two forests compare equal iff their edge sets do.
class ForestAdjacency {
 public:
  /// Throws std::invalid_argument on out-of-range endpoints, self loops,
  /// duplicate edges or cycles.
  ForestAdjacency(Index n, std::vector<Edge> edges);

  Index size() const { return n_; }
  Index components() const { return n_ - static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool contains(Edge e) const;

  /// Symmetric 0/1 indicator matrix.
  Matrix indicator() const;

  friend bool operator==(const ForestAdjacency&, const ForestAdjacency&) = default;

 private:
  Index n_;
  std::vector<Edge> edges_;
};

/// Partition of n nodes into k blocks. Block ids are canonicalised in order
/// of first appearance, so equality is partition equality.
class MembershipMatrix {
 public:
  explicit MembershipMatrix(const std::vector<Index>& assignment);

  Index size() const { return static_cast<Index>(assignment_.size()); }
  Index clusters() const { return k_; }
  const std::vector<Index>& assignment() const { return assignment_; }
  bool same(Index i, Index j) const { return assignment_[i] == assignment_[j]; }

  /// Dense 0/1 view, M_ij = 1 iff i and j share a block.
  Matrix dense() const;

  friend bool operator==(const MembershipMatrix&, const MembershipMatrix&) = default;

 private:
  std::vector<Index> assignment_;
  Index k_ = 0;
};

enum class Relation : std::int8_t { Different = 0, Same = 1, Unobserved = 2 };

/// Ternary pairwise membership information M_Omega.
class PartialMembership {
 public:
  /// All pairs unobserved.
  explicit PartialMembership(Index n);

  Index size() const { return n_; }
  Relation operator()(Index i, Index j) const { return entries_[i * n_ + j]; }

  /// Sets (i,j) and (j,i). Different on the diagonal is rejected.
  void set(Index i, Index j, Relation r);

  bool fully_unobserved() const;
  Index observed_pairs() const;

  friend bool operator==(const PartialMembership&, const PartialMembership&) = default;

 private:
  Index n_;
  std::vector<Relation> entries_;
};

/// Convex-hull element of C_k: empirical edge frequencies.
struct SoftForest {
  Matrix values;
  Index edges_per_sample = 0;
};

/// Convex-hull element of B_k: empirical co-membership frequencies.
struct SoftMembership {
  Matrix values;
};

MembershipMatrix membership_from_labels(const std::vector<std::int64_t>& labels);

PartialMembership partial_from_labeled_subset(
    const std::vector<std::optional<std::int64_t>>& labels);

/// Groups of the transitive closure of the Same relation, as a canonical
/// assignment. Throws InfeasibleConstraints if a group contains a Different
/// pair.
MembershipMatrix same_closure(const PartialMembership& partial);

/// Throws InfeasibleConstraints if `partial` is internally contradictory.
void validate_partial(const PartialMembership& partial);

/// Fraction of the n^2 membership entries on which the two partitions
/// disagree.
double clustering_error(const MembershipMatrix& predicted,
                        const MembershipMatrix& truth);

/// Sum over forest edges of sigma(i, j), each undirected edge counted once,
/// accumulated in lexicographic edge order.
double forest_value(const Matrix& sigma, const ForestAdjacency& forest);

/// Checks SoftForest / SoftMembership structural invariants.
bool is_valid_soft(const Matrix& values, double tol = 1e-12);

}  // namespace spanclust
