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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spanclust/types.hpp"

namespace spanclust {
namespace {

TEST(SimilarityMatrix, RejectsAsymmetryAndNonFinite) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = 1.0;
  EXPECT_THROW(SimilarityMatrix{m}, std::invalid_argument);
  m(1, 0) = 1.0;
  EXPECT_NO_THROW(SimilarityMatrix{m});
  m(0, 2) = m(2, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SimilarityMatrix{m}, std::invalid_argument);
  EXPECT_THROW(SimilarityMatrix{Matrix(2, 3)}, std::invalid_argument);
  EXPECT_THROW(SimilarityMatrix{Matrix(0, 0)}, std::invalid_argument);
}

TEST(SimilarityMatrix, FromUpperMirrors) {
  Matrix u(3, 3);
  u << 9, 1, 2, -7, 9, 3, -7, -7, 9;
  const SimilarityMatrix s = SimilarityMatrix::from_upper(u);
  EXPECT_EQ(s(1, 0), 1.0);
  EXPECT_EQ(s(2, 1), 3.0);
  EXPECT_EQ(s.max_abs_off_diagonal(), 3.0);
}

TEST(ForestAdjacency, ValidatesStructure) {
  EXPECT_THROW(ForestAdjacency(3, {{0, 1}, {1, 2}, {0, 2}}), std::invalid_argument);
  EXPECT_THROW(ForestAdjacency(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(ForestAdjacency(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(ForestAdjacency(3, {{0, 3}}), std::invalid_argument);
  const ForestAdjacency f(4, {{2, 1}, {0, 1}});
  EXPECT_EQ(f.components(), 2);
  EXPECT_TRUE(f.contains({1, 2}));
  EXPECT_FALSE(f.contains({0, 2}));
  EXPECT_EQ(f.edges().front(), Edge(0, 1));
  const Matrix a = f.indicator();
  EXPECT_EQ(a.sum(), 4.0);
  EXPECT_EQ(a(2, 1), 1.0);
}

TEST(MembershipMatrix, FromLabels) {
  const MembershipMatrix a = membership_from_labels({0, 0, 1});
  EXPECT_EQ(a.clusters(), 2);
  EXPECT_TRUE(a.same(0, 1));
  EXPECT_FALSE(a.same(1, 2));
  EXPECT_EQ(membership_from_labels({5}).clusters(), 1);
  const MembershipMatrix b = membership_from_labels({2, 7, 2, 7});
  EXPECT_EQ(b, membership_from_labels({0, 1, 0, 1}));
  EXPECT_TRUE(b.same(0, 2));
  EXPECT_TRUE(b.same(1, 3));
  EXPECT_FALSE(b.same(0, 1));
  const Matrix d = b.dense();
  EXPECT_EQ(d, d.transpose());
  EXPECT_EQ(d.diagonal().sum(), 4.0);
}

TEST(MembershipMatrix, TransitiveByConstruction) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> lab(0, 3);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::int64_t> labels(8);
    for (auto& l : labels) l = lab(rng);
    const Matrix d = membership_from_labels(labels).dense();
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        for (int l = 0; l < 8; ++l) {
          if (d(i, j) == 1 && d(j, l) == 1) EXPECT_EQ(d(i, l), 1);
        }
      }
    }
  }
}

TEST(PartialMembership, LabeledSubset) {
  const PartialMembership p = partial_from_labeled_subset({0, std::nullopt, 0});
  EXPECT_EQ(p(0, 2), Relation::Same);
  EXPECT_EQ(p(2, 0), Relation::Same);
  EXPECT_EQ(p(0, 1), Relation::Unobserved);
  EXPECT_EQ(p(1, 2), Relation::Unobserved);

  const PartialMembership none = partial_from_labeled_subset({std::nullopt, std::nullopt});
  EXPECT_TRUE(none.fully_unobserved());
  EXPECT_EQ(none.observed_pairs(), 0);

  const PartialMembership two = partial_from_labeled_subset({0, 1});
  EXPECT_EQ(two(0, 1), Relation::Different);
}

TEST(PartialMembership, RejectsDifferentOnDiagonal) {
  PartialMembership p(3);
  EXPECT_THROW(p.set(1, 1, Relation::Different), std::invalid_argument);
}

TEST(PartialMembership, ClosureAndContradictions) {
  PartialMembership p(4);
  p.set(0, 1, Relation::Same);
  p.set(1, 2, Relation::Same);
  const MembershipMatrix c = same_closure(p);
  EXPECT_TRUE(c.same(0, 2));
  EXPECT_FALSE(c.same(0, 3));
  EXPECT_NO_THROW(validate_partial(p));
  p.set(0, 2, Relation::Different);
  EXPECT_THROW(validate_partial(p), InfeasibleConstraints);
  EXPECT_THROW(same_closure(p), InfeasibleConstraints);
}

TEST(ClusteringError, HandCounts) {
  EXPECT_EQ(clustering_error(membership_from_labels({0, 1, 1}), membership_from_labels({4, 2, 2})),
            0.0);
  EXPECT_EQ(clustering_error(membership_from_labels({0, 0}), membership_from_labels({0, 1})), 0.5);
  EXPECT_DOUBLE_EQ(
      clustering_error(membership_from_labels({0, 0, 1}), membership_from_labels({0, 1, 2})),
      2.0 / 9.0);
}

TEST(ClusteringError, MatchesNaiveCount) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> lab(0, 2);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::int64_t> a(7);
    std::vector<std::int64_t> b(7);
    for (auto& x : a) x = lab(rng);
    for (auto& x : b) x = lab(rng);
    const double e = clustering_error(membership_from_labels(a), membership_from_labels(b));
    EXPECT_DOUBLE_EQ(e, testing::naive_clustering_error(a, b));
    EXPECT_EQ(e, clustering_error(membership_from_labels(b), membership_from_labels(a)));
  }
}

TEST(SoftValidity, ChecksRangeAndSymmetry) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = m(1, 0) = 0.5;
  EXPECT_TRUE(is_valid_soft(m));
  m(0, 1) = 1.5;
  EXPECT_FALSE(is_valid_soft(m));
}

}  // namespace
}  // namespace spanclust
