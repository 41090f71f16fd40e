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

#include <random>

#include <gtest/gtest.h>

#include "spanclust/forest_solver.hpp"
#include "spanclust/losses.hpp"
#include "spanclust/verification.hpp"

namespace spanclust {
namespace {

SimilarityMatrix three_point() {
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = s(1, 0) = 5;
  s(0, 2) = s(2, 0) = 1;
  s(1, 2) = s(2, 1) = 2;
  return SimilarityMatrix(s);
}

PerturbationConfig config(double eps, Index samples, std::uint64_t seed = 1) {
  PerturbationConfig c;
  c.epsilon = eps;
  c.samples = samples;
  c.seed = seed;
  c.threads = 1;
  return c;
}

TEST(FyLoss, ZeroAtArgmax) {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 20; ++t) {
    const SimilarityMatrix s = random_similarity(6, rng);
    const LossValue l = fy_loss(s, 3, max_spanning_forest(s, 3).forest);
    EXPECT_EQ(l.value, 0.0);
    EXPECT_TRUE(l.grad_sigma.isZero(0.0));
  }
}

TEST(FyLoss, ThreePointTarget) {
  const LossValue l = fy_loss(three_point(), 2, ForestAdjacency(3, {{0, 2}}));
  EXPECT_EQ(l.value, 4.0);
  Matrix g = Matrix::Zero(3, 3);
  g(0, 1) = g(1, 0) = 1;
  g(0, 2) = g(2, 0) = -1;
  EXPECT_EQ(l.grad_sigma, g);
  EXPECT_THROW(fy_loss(three_point(), 1, ForestAdjacency(3, {{0, 2}})), std::invalid_argument);
}

TEST(FyLoss, NonNegative) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const SimilarityMatrix s = random_similarity(5, rng);
    std::vector<Edge> edges;
    enumerate_forests(5, 2, nullptr, [&](const std::vector<Edge>& e) {
      if (edges.empty() || rng() % 7 == 0) edges = e;
    });
    EXPECT_GE(fy_loss(s, 2, ForestAdjacency(5, edges)).value, 0.0);
  }
}

TEST(PartialFyLoss, EmptyPartialIsZero) {
  std::mt19937_64 rng(32);
  const SimilarityMatrix s = random_similarity(6, rng);
  const LossValue l = partial_fy_loss(s, 2, PartialMembership(6));
  EXPECT_EQ(l.value, 0.0);
  EXPECT_TRUE(l.grad_sigma.isZero(0.0));
}

TEST(PartialFyLoss, ConsistentPartialIsZero) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 20; ++t) {
    const SimilarityMatrix s = random_similarity(7, rng);
    const MembershipMatrix m = max_spanning_forest(s, 3).membership;
    std::vector<std::optional<std::int64_t>> labels(7);
    for (Index i = 0; i < 7; ++i) {
      if (rng() % 2) labels[i] = m.assignment()[i];
    }
    const PartialMembership p = partial_from_labeled_subset(labels);
    EXPECT_EQ(partial_fy_loss(s, 3, p, false).value, 0.0);
    EXPECT_GE(partial_fy_loss(s, 3, p, true).value, 0.0);
  }
}

TEST(PartialFyLoss, BiasCanMissAFeasibleArgmax) {
  // Nodes 0 and 2 share a label and 1 is unlabeled. The free argmax 0-1-2
  // satisfies the labels, but the bias promotes the poor direct edge (0,2).
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = s(1, 0) = 5;
  s(1, 2) = s(2, 1) = 5;
  s(0, 2) = s(2, 0) = -10;
  const PartialMembership p = partial_from_labeled_subset({0, std::nullopt, 0});
  EXPECT_EQ(partial_fy_loss(SimilarityMatrix(s), 1, p, false).value, 0.0);
  EXPECT_EQ(partial_fy_loss(SimilarityMatrix(s), 1, p, true).value, 10.0 - (-10.0 + 5.0));
}

TEST(PartialFyLoss, ThreePointDifferent) {
  PartialMembership p(3);
  p.set(0, 1, Relation::Different);
  const LossValue l = partial_fy_loss(three_point(), 2, p);
  EXPECT_EQ(l.value, 3.0);
  Matrix g = Matrix::Zero(3, 3);
  g(0, 1) = g(1, 0) = 1;
  g(1, 2) = g(2, 1) = -1;
  EXPECT_EQ(l.grad_sigma, g);
}

TEST(PerturbedPartialFyLoss, EmptyPartialCancelsExactly) {
  std::mt19937_64 rng(34);
  const SimilarityMatrix s = random_similarity(6, rng);
  const LossValue l = perturbed_partial_fy_loss(s, 2, PartialMembership(6), config(0.5, 100));
  EXPECT_EQ(l.value, 0.0);
  EXPECT_TRUE(l.grad_sigma.isZero(0.0));
}

TEST(PerturbedPartialFyLoss, TinyEpsilonMatchesHardLoss) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 20; ++t) {
    const SimilarityMatrix s = random_similarity(6, rng);
    const PartialMembership p = random_labeled_subset(6, 2, 0.5, rng);
    LossValue hard;
    try {
      hard = partial_fy_loss(s, 2, p);
    } catch (const InfeasibleConstraints&) {
      continue;
    }
    const LossValue soft = perturbed_partial_fy_loss(s, 2, p, config(1e-8, 50));
    EXPECT_NEAR(soft.value, hard.value, 1e-6);
    EXPECT_EQ(soft.grad_sigma, hard.grad_sigma);
  }
}

TEST(PerturbedPartialFyLoss, NonNegativeWhenCoupled) {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 30; ++t) {
    const SimilarityMatrix s = random_similarity(7, rng);
    const PartialMembership p = random_labeled_subset(7, 3, 0.5, rng);
    try {
      EXPECT_GE(perturbed_partial_fy_loss(s, 3, p, config(0.5, 50)).value, 0.0);
    } catch (const InfeasibleConstraints&) {
    }
  }
}

TEST(PerturbedPartialFyLoss, GradientMatchesFiniteDifferences) {
  GradcheckOptions o;
  o.instances = 5;
  o.samples = 100;
  const GradcheckReport r = run_sigma_gradcheck(o);
  EXPECT_TRUE(r.passed) << r.max_deviation;
  EXPECT_GT(r.coordinates_checked, 0);

  o.corrupt_gradient = true;
  EXPECT_FALSE(run_sigma_gradcheck(o).passed);
}

TEST(JensenGap, EmptyPartialGivesZeroLhs) {
  std::mt19937_64 rng(37);
  const SimilarityMatrix s = random_similarity(5, rng);
  const JensenGap g = jensen_gap_check(s, 2, PartialMembership(5), config(0.1, 200));
  EXPECT_EQ(g.lhs, 0.0);
  EXPECT_LE(g.lhs, g.rhs + 3 * g.diff_std_error);
  // Two-tree forests of K_5: half of sum_a C(5,a) a^(a-2) (5-a)^(3-a) = 220 / 2.
  EXPECT_EQ(g.feasible_forests, 110);
}

TEST(JensenGap, ExactLhsNeverExceedsRhs) {
  // With the exhaustive constrained maximum, every per-sample term is
  // bounded by the loss of the fixed minimiser, so the bound is exact.
  std::mt19937_64 rng(38);
  for (int t = 0; t < 10; ++t) {
    const SimilarityMatrix s = random_similarity(5, rng);
    const PartialMembership p = random_labeled_subset(5, 2, 0.5, rng);
    try {
      const JensenGap g = jensen_gap_check(s, 2, p, config(0.1, 300, t));
      EXPECT_LE(g.lhs_exact, g.rhs + 1e-12);
      EXPECT_GE(g.lhs, g.lhs_exact - 1e-12);
    } catch (const InfeasibleConstraints&) {
    }
  }
}

TEST(JensenGap, TinyEpsilonConvergesToHardLoss) {
  std::mt19937_64 rng(39);
  const SimilarityMatrix s = random_similarity(5, rng);
  PartialMembership p(5);
  p.set(0, 1, Relation::Different);
  const JensenGap g = jensen_gap_check(s, 2, p, config(1e-9, 20));
  const double hard = max_spanning_forest(s, 2).value - brute_force_forest(s, 2, &p).value;
  EXPECT_NEAR(g.rhs, hard, 1e-6);
  EXPECT_NEAR(g.lhs_exact, hard, 1e-6);
}

}  // namespace
}  // namespace spanclust
