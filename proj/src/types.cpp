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

#include "spanclust/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "spanclust/union_find.hpp"

namespace spanclust {

SimilarityMatrix::SimilarityMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.rows() != values_.cols()) {
    throw std::invalid_argument("similarity matrix must be square with n >= 1");
  }
  const Index n = values_.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!std::isfinite(values_(i, j))) {
        throw std::invalid_argument("similarity matrix has non-finite entries");
      }
      if (values_(i, j) != values_(j, i)) {
        throw std::invalid_argument("similarity matrix is not symmetric");
      }
    }
  }
}

SimilarityMatrix SimilarityMatrix::from_upper(const Matrix& upper) {
  Matrix full = upper;
  for (Index i = 0; i < full.rows(); ++i) {
    for (Index j = 0; j < i; ++j) full(i, j) = full(j, i);
  }
  return SimilarityMatrix(std::move(full));
}

double SimilarityMatrix::max_abs_off_diagonal() const {
  double m = 0.0;
  for (Index i = 0; i < size(); ++i) {
    for (Index j = i + 1; j < size(); ++j) m = std::max(m, std::abs(values_(i, j)));
  }
  return m;
}

ForestAdjacency::ForestAdjacency(Index n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw std::invalid_argument("forest needs n >= 1");
  std::sort(edges_.begin(), edges_.end());
  UnionFind uf(n_);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.i < 0 || ed.j >= n_) throw std::invalid_argument("edge endpoint out of range");
    if (ed.i == ed.j) throw std::invalid_argument("self loop in forest");
    if (e > 0 && edges_[e - 1] == ed) throw std::invalid_argument("duplicate forest edge");
    if (uf.unite(ed.i, ed.j) < 0) throw std::invalid_argument("edge set contains a cycle");
  }
}

bool ForestAdjacency::contains(Edge e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

Matrix ForestAdjacency::indicator() const {
  Matrix a = Matrix::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.i, e.j) = 1.0;
    a(e.j, e.i) = 1.0;
  }
  return a;
}

MembershipMatrix::MembershipMatrix(const std::vector<Index>& assignment) {
  if (assignment.empty()) throw std::invalid_argument("membership needs n >= 1");
  std::map<Index, Index> relabel;
  assignment_.reserve(assignment.size());
  for (Index a : assignment) {
    auto [it, inserted] = relabel.try_emplace(a, static_cast<Index>(relabel.size()));
    assignment_.push_back(it->second);
  }
  k_ = static_cast<Index>(relabel.size());
}

Matrix MembershipMatrix::dense() const {
  const Index n = size();
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = same(i, j) ? 1.0 : 0.0;
  }
  return m;
}

PartialMembership::PartialMembership(Index n)
    : n_(n), entries_(static_cast<std::size_t>(n * n), Relation::Unobserved) {
  if (n < 0) throw std::invalid_argument("negative size");
}

void PartialMembership::set(Index i, Index j, Relation r) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("partial membership index");
  if (i == j && r == Relation::Different) {
    throw std::invalid_argument("a node cannot be Different from itself");
  }
  entries_[i * n_ + j] = r;
  entries_[j * n_ + i] = r;
}

bool PartialMembership::fully_unobserved() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](Relation r) { return r == Relation::Unobserved; });
}

Index PartialMembership::observed_pairs() const {
  Index count = 0;
  for (Index i = 0; i < n_; ++i) {
    for (Index j = i + 1; j < n_; ++j) count += (*this)(i, j) != Relation::Unobserved;
  }
  return count;
}

MembershipMatrix membership_from_labels(const std::vector<std::int64_t>& labels) {
  if (labels.empty()) throw std::invalid_argument("labels must be non-empty");
  return MembershipMatrix(std::vector<Index>(labels.begin(), labels.end()));
}

PartialMembership partial_from_labeled_subset(
    const std::vector<std::optional<std::int64_t>>& labels) {
  const Index n = static_cast<Index>(labels.size());
  PartialMembership p(n);
  for (Index i = 0; i < n; ++i) {
    if (!labels[i]) continue;
    p.set(i, i, Relation::Same);
    for (Index j = i + 1; j < n; ++j) {
      if (!labels[j]) continue;
      p.set(i, j, *labels[i] == *labels[j] ? Relation::Same : Relation::Different);
    }
  }
  return p;
}

MembershipMatrix same_closure(const PartialMembership& partial) {
  const Index n = partial.size();
  if (n == 0) throw std::invalid_argument("empty partial membership");
  UnionFind uf(n);
  for (Index i = 0; i < n; ++i) {
    if (partial(i, i) == Relation::Different) {
      throw InfeasibleConstraints("node " + std::to_string(i) + " is Different from itself");
    }
    for (Index j = i + 1; j < n; ++j) {
      if (partial(i, j) == Relation::Same) uf.unite(i, j);
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (partial(i, j) == Relation::Different && uf.find(i) == uf.find(j)) {
        throw InfeasibleConstraints("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                                    " are Different but linked by Same constraints");
      }
    }
  }
  std::vector<Index> roots(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) roots[i] = uf.find(i);
  return MembershipMatrix(roots);
}

void validate_partial(const PartialMembership& partial) {
  if (partial.size() > 0) (void)same_closure(partial);
}

double clustering_error(const MembershipMatrix& predicted, const MembershipMatrix& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("clustering_error: dimension mismatch");
  }
  const Index n = predicted.size();
  Index disagree = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) disagree += predicted.same(i, j) != truth.same(i, j);
  }
  return static_cast<double>(2 * disagree) / static_cast<double>(n * n);
}

double forest_value(const Matrix& sigma, const ForestAdjacency& forest) {
  double v = 0.0;
  for (const Edge& e : forest.edges()) v += sigma(e.i, e.j);
  return v;
}

bool is_valid_soft(const Matrix& values, double tol) {
  if (values.rows() != values.cols()) return false;
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      const double x = values(i, j);
      if (!(x >= -tol && x <= 1.0 + tol)) return false;
      if (x != values(j, i)) return false;
    }
  }
  return true;
}

}  // namespace spanclust
