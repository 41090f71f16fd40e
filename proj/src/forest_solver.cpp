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

#include "spanclust/forest_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spanclust {

namespace {

void check_k(Index n, Index k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("cluster count k=" + std::to_string(k) +
                                " out of range [1, " + std::to_string(n) + "]");
  }
}

ForestSolution make_solution(const Matrix& sigma, Index n, std::vector<Edge> edges) {
  ForestAdjacency forest(n, std::move(edges));
  MembershipMatrix membership = components_of(forest);
  const double value = forest_value(sigma, forest);
  return ForestSolution{std::move(forest), std::move(membership), value};
}

bool agrees(const PartialMembership& partial, const std::vector<Index>& comp) {
  const Index n = partial.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Relation r = partial(i, j);
      if (r == Relation::Unobserved) continue;
      if ((r == Relation::Same) != (comp[i] == comp[j])) return false;
    }
  }
  return true;
}

}  // namespace

namespace detail {

ConstraintIndex::ConstraintIndex(const PartialMembership& partial)
    : n(partial.size()), words((partial.size() + 63) / 64) {
  const MembershipMatrix groups = same_closure(partial);
  closure = groups.assignment();
  closure_groups = groups.clusters();
  different.assign(static_cast<std::size_t>(n * words), 0);
  relation.resize(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Relation r = partial(i, j);
      relation[i * n + j] = r;
      if (i != j && r != Relation::Unobserved) empty = false;
      if (r == Relation::Different) different[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
}

double bias_constant(const Matrix& weights) {
  double m = 0.0;
  for (Index i = 0; i < weights.rows(); ++i) {
    for (Index j = i + 1; j < weights.cols(); ++j) m = std::max(m, std::abs(weights(i, j)));
  }
  return 3.0 * (m + 1.0);
}

double edge_sum(const Matrix& weights, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  double v = 0.0;
  for (const Edge& e : edges) v += weights(e.i, e.j);
  return v;
}

void KruskalWorkspace::sort_edges(const Matrix& weights, const ConstraintIndex* constraints,
                                  bool use_bias) {
  const Index n = weights.rows();
  order_.clear();
  order_.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  const bool biased = use_bias && constraints != nullptr && !constraints->empty;
  const double beta = biased ? bias_constant(weights) : 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double w = weights(i, j);
      if (biased) {
        const Relation r = constraints->relation[i * n + j];
        if (r == Relation::Same) w += beta;
        if (r == Relation::Different) w -= beta;
      }
      order_.push_back({w, i, j});
    }
  }
  std::sort(order_.begin(), order_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
}

const std::vector<Edge>& KruskalWorkspace::solve(const Matrix& weights, Index k) {
  const Index n = weights.rows();
  check_k(n, k);
  sort_edges(weights, nullptr, false);
  forest_.reset(n);
  accepted_.clear();
  const auto target = static_cast<std::size_t>(n - k);
  for (const WeightedEdge& e : order_) {
    if (accepted_.size() == target) break;
    if (forest_.unite(e.i, e.j) >= 0) accepted_.emplace_back(e.i, e.j);
  }
  return accepted_;
}

const std::vector<Edge>& KruskalWorkspace::solve_constrained(const Matrix& weights, Index k,
                                                             const ConstraintIndex& constraints,
                                                             bool use_bias) {
  const Index n = weights.rows();
  check_k(n, k);
  if (constraints.n != n) throw std::invalid_argument("constraint size mismatch");
  if (constraints.closure_groups < k) {
    throw InfeasibleConstraints("Same constraints leave " +
                                std::to_string(constraints.closure_groups) +
                                " groups, fewer than k=" + std::to_string(k));
  }

  sort_edges(weights, &constraints, use_bias);
  forest_.reset(n);
  join_.reset(n);
  const Index words = constraints.words;
  forbid_.assign(static_cast<std::size_t>(n * words), 0);
  members_.assign(static_cast<std::size_t>(n * words), 0);
  {
    std::vector<Index> first(static_cast<std::size_t>(constraints.closure_groups), -1);
    for (Index i = 0; i < n; ++i) {
      Index& f = first[constraints.closure[i]];
      if (f < 0) {
        f = i;
      } else {
        join_.unite(f, i);
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    const Index r = join_.find(i);
    members_[r * words + i / 64] |= std::uint64_t{1} << (i % 64);
    for (Index w = 0; w < words; ++w) forbid_[r * words + w] |= constraints.different[i * words + w];
  }

  // Merges still needed to connect every Same group: components minus
  // classes of (forest components joined with Same closure).
  Index deficit = n - constraints.closure_groups;
  Index budget = n - k;
  accepted_.clear();
  for (const WeightedEdge& e : order_) {
    if (budget == 0) break;
    const Index fi = forest_.find(e.i);
    const Index fj = forest_.find(e.j);
    if (fi == fj) continue;
    const Index ji = join_.find(e.i);
    const Index jj = join_.find(e.j);
    const bool bridges = ji != jj;
    if (bridges) {
      bool conflict = false;
      for (Index w = 0; w < words && !conflict; ++w) {
        conflict = (forbid_[ji * words + w] & members_[jj * words + w]) != 0;
      }
      if (conflict) continue;
    }
    const Index deficit_after = bridges ? deficit : deficit - 1;
    if (deficit_after > budget - 1) continue;

    forest_.unite(fi, fj);
    if (bridges) {
      const Index r = join_.unite(ji, jj);
      const Index other = r == ji ? jj : ji;
      for (Index w = 0; w < words; ++w) {
        forbid_[r * words + w] |= forbid_[other * words + w];
        members_[r * words + w] |= members_[other * words + w];
      }
    }
    deficit = deficit_after;
    --budget;
    accepted_.emplace_back(e.i, e.j);
  }
  if (budget > 0) {
    throw InfeasibleConstraints("constraints prevent reaching k=" + std::to_string(k) +
                                " components (" + std::to_string(budget) +
                                " merges missing)");
  }
  return accepted_;
}

std::vector<Index> KruskalWorkspace::assignment() {
  std::vector<Index> out(static_cast<std::size_t>(forest_.size()));
  for (Index i = 0; i < forest_.size(); ++i) out[i] = forest_.find(i);
  return out;
}

}  // namespace detail

ForestSolution max_spanning_forest(const SimilarityMatrix& sigma, Index k) {
  detail::KruskalWorkspace ws;
  std::vector<Edge> edges = ws.solve(sigma.values(), k);
  return make_solution(sigma.values(), sigma.size(), std::move(edges));
}

ForestSolution constrained_max_spanning_forest(const SimilarityMatrix& sigma, Index k,
                                               const PartialMembership& partial, bool use_bias) {
  if (partial.size() != sigma.size()) {
    throw std::invalid_argument("partial membership size does not match similarity matrix");
  }
  check_k(sigma.size(), k);
  const detail::ConstraintIndex constraints(partial);
  detail::KruskalWorkspace ws;
  std::vector<Edge> edges = ws.solve_constrained(sigma.values(), k, constraints, use_bias);
  return make_solution(sigma.values(), sigma.size(), std::move(edges));
}

MembershipMatrix components_of(const ForestAdjacency& forest) {
  UnionFind uf(forest.size());
  for (const Edge& e : forest.edges()) uf.unite(e.i, e.j);
  std::vector<Index> roots(static_cast<std::size_t>(forest.size()));
  for (Index i = 0; i < forest.size(); ++i) roots[i] = uf.find(i);
  return MembershipMatrix(roots);
}

std::vector<Edge> spanning_tree_order(const SimilarityMatrix& sigma) {
  detail::KruskalWorkspace ws;
  return ws.solve(sigma.values(), 1);
}

void enumerate_forests(Index n, Index k, const PartialMembership* partial,
                       const std::function<void(const std::vector<Edge>&)>& visit) {
  check_k(n, k);
  if (n > kBruteForceMaxNodes) {
    throw std::invalid_argument("enumeration limited to n <= " +
                                std::to_string(kBruteForceMaxNodes));
  }
  if (partial != nullptr && partial->size() != n) {
    throw std::invalid_argument("partial membership size mismatch");
  }
  std::vector<Edge> all;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  const auto target = static_cast<std::size_t>(n - k);

  // Union-find without compression so that unions can be undone.
  std::vector<Index> parent(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) parent[i] = i;
  auto root = [&](Index x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };

  std::vector<Edge> chosen;
  std::vector<Index> comp(static_cast<std::size_t>(n));
  std::function<void(std::size_t)> recurse = [&](std::size_t start) {
    if (chosen.size() == target) {
      if (partial != nullptr) {
        for (Index i = 0; i < n; ++i) comp[i] = root(i);
        if (!agrees(*partial, comp)) return;
      }
      visit(chosen);
      return;
    }
    const std::size_t needed = target - chosen.size();
    for (std::size_t e = start; e + needed <= all.size(); ++e) {
      const Index a = root(all[e].i);
      const Index b = root(all[e].j);
      if (a == b) continue;
      parent[b] = a;
      chosen.push_back(all[e]);
      recurse(e + 1);
      chosen.pop_back();
      parent[b] = b;
    }
  };
  recurse(0);
}

ForestSolution brute_force_forest(const SimilarityMatrix& sigma, Index k,
                                  const PartialMembership* partial) {
  const Index n = sigma.size();
  if (partial != nullptr) validate_partial(*partial);
  std::optional<std::vector<Edge>> best;
  double best_value = -std::numeric_limits<double>::infinity();
  enumerate_forests(n, k, partial, [&](const std::vector<Edge>& edges) {
    const double v = detail::edge_sum(sigma.values(), edges);
    if (!best || v > best_value) {
      best = edges;
      best_value = v;
    }
  });
  if (!best) throw InfeasibleConstraints("no k-spanning forest satisfies the constraints");
  return make_solution(sigma.values(), n, std::move(*best));
}

}  // namespace spanclust
