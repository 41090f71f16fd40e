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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spanclust/types.hpp"
#include "spanclust/union_find.hpp"

namespace spanclust {

/// Optimal (or greedy-constrained) k-spanning forest together with its
/// clustering and objective value. `value` counts each undirected edge
/// once; the symmetric inner product <A, Sigma> equals 2 * value.
struct ForestSolution {
  ForestAdjacency forest;
  MembershipMatrix membership;
  double value = 0.0;
};

/// Maximum-weight k-spanning forest by Kruskal's algorithm stopped after
/// n - k additions. Ties are broken by (i, j) ascending.
ForestSolution max_spanning_forest(const SimilarityMatrix& sigma, Index k);

/// Greedy maximum k-spanning forest whose components agree with every
/// observed entry of `partial`.
///
/// Edges are scanned by decreasing (optionally biased) weight. An edge is
/// accepted when it joins two components, when no node that is or must end
/// up with one endpoint is Different from any node that is or must end up
/// with the other, and when enough additions remain to connect every
/// still-separated Same group. With `use_bias`, Same pairs are raised and
/// Different pairs lowered by 3 * (max |off-diagonal| + 1) before sorting.
/// `value` is always measured against the original sigma.
ForestSolution constrained_max_spanning_forest(const SimilarityMatrix& sigma, Index k,
                                               const PartialMembership& partial,
                                               bool use_bias = true);

MembershipMatrix components_of(const ForestAdjacency& forest);

/// Full Kruskal order of a maximum spanning tree. The first n - k entries
/// are the edges of max_spanning_forest(sigma, k) for every k.
std::vector<Edge> spanning_tree_order(const SimilarityMatrix& sigma);

/// Exhaustive maximum over C_k (or C_k(M_Omega)). Limited to n <= 9.
ForestSolution brute_force_forest(const SimilarityMatrix& sigma, Index k,
                                  const PartialMembership* partial = nullptr);

/// Calls `visit` once for every acyclic (n - k)-edge subset of the complete
/// graph, optionally restricted to forests agreeing with `partial`.
void enumerate_forests(Index n, Index k, const PartialMembership* partial,
                       const std::function<void(const std::vector<Edge>&)>& visit);

inline constexpr Index kBruteForceMaxNodes = 9;

namespace detail {

/// Constraint data precomputed once per PartialMembership and shared by all
/// Monte-Carlo samples.
struct ConstraintIndex {
  Index n = 0;
  Index words = 0;
  std::vector<std::uint64_t> different;  // n rows of `words` bit words
  std::vector<Index> closure;            // Same-closure group per node
  Index closure_groups = 0;
  std::vector<Relation> relation;        // row-major copy for biasing
  bool empty = true;

  explicit ConstraintIndex(const PartialMembership& partial);
};

/// Reusable buffers for repeated solves on same-size inputs.
class KruskalWorkspace {
 public:
  /// Returns the accepted edges in acceptance order. `weights` is read on
  /// the strict upper triangle only.
  const std::vector<Edge>& solve(const Matrix& weights, Index k);

  /// Throws InfeasibleConstraints if fewer than n - k edges can be added.
  const std::vector<Edge>& solve_constrained(const Matrix& weights, Index k,
                                             const ConstraintIndex& constraints, bool use_bias);

  /// Component id per node after the last solve.
  std::vector<Index> assignment();

 private:
  void sort_edges(const Matrix& weights, const ConstraintIndex* constraints, bool use_bias);

  struct WeightedEdge {
    double w;
    Index i;
    Index j;
  };
  std::vector<WeightedEdge> order_;
  std::vector<Edge> accepted_;
  UnionFind forest_;
  UnionFind join_;
  std::vector<std::uint64_t> forbid_;
  std::vector<std::uint64_t> members_;
};

/// Sum of weights(i, j) over edges, in lexicographic edge order.
double edge_sum(const Matrix& weights, std::vector<Edge> edges);

/// Bias magnitude used by the constrained solver.
double bias_constant(const Matrix& weights);

}  // namespace detail

}  // namespace spanclust
