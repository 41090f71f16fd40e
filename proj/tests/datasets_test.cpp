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

#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spanclust/csv.hpp"
#include "spanclust/datasets.hpp"
#include "spanclust/forest_solver.hpp"
#include "spanclust/model.hpp"

namespace spanclust {
namespace {

MembershipMatrix truth_of(const Dataset& d) {
  std::vector<std::int64_t> labels;
  for (const auto& l : d.labels) labels.push_back(*l);
  return membership_from_labels(labels);
}

double forest_error(const Dataset& d, Index k) {
  return clustering_error(max_spanning_forest(pairwise_similarity(d.features), k).membership,
                          truth_of(d));
}

TEST(FourGaussians, ShapeAndLabels) {
  const Dataset d = gen_four_gaussians(0);
  EXPECT_EQ(d.size(), 60);
  EXPECT_EQ(d.dims(), 2);
  for (std::int64_t c = 0; c < 4; ++c) {
    EXPECT_EQ(std::count(d.labels.begin(), d.labels.end(), std::optional<std::int64_t>(c)), 15);
  }
  EXPECT_EQ(kFourGaussianMeans[3][1], 7.83546002);
  EXPECT_EQ(kFourGaussianStd, 0.2);
}

TEST(FourGaussians, CleanSignalIsRecoveredBySingleLinkage) {
  int perfect = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) perfect += forest_error(gen_four_gaussians(seed), 4) == 0.0;
  EXPECT_GE(perfect, 48);
}

TEST(FourGaussians, ZeroStdIsPointMasses) {
  const Dataset d = gen_four_gaussians(1, 0.0);
  EXPECT_EQ(d.features(0, 0), kFourGaussianMeans[0][0]);
  EXPECT_EQ(forest_error(d, 4), 0.0);
}

TEST(NoiseDims, AppendsUniformColumns) {
  const Dataset base = gen_four_gaussians(2);
  const Dataset noisy = append_noise_dims(base, 2, 3);
  EXPECT_EQ(noisy.dims(), 4);
  EXPECT_EQ(noisy.features.leftCols(2), base.features);
  EXPECT_GE(noisy.features.rightCols(2).minCoeff(), 0.0);
  EXPECT_LT(noisy.features.rightCols(2).maxCoeff(), 1.0);
  EXPECT_THROW(append_noise_dims(base, 0, 3), std::invalid_argument);
}

TEST(NoiseDims, UnitNoiseLeavesSeparatedClustersIntact) {
  // Mean separation (>= 2.8) dwarfs the at most sqrt(2) added by two unit
  // uniform columns, so single linkage still recovers the signal.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(forest_error(append_noise_dims(gen_four_gaussians(seed), 2, seed + 100), 4), 0.0);
  }
}

TEST(TwoMoons, SingleLinkageBeatsKMeans) {
  const Dataset d = gen_two_moons(200, 0.0, 0);
  EXPECT_EQ(std::count(d.labels.begin(), d.labels.end(), std::optional<std::int64_t>(0)), 100);
  EXPECT_EQ(forest_error(d, 2), 0.0);
  EXPECT_GT(clustering_error(kmeans_baseline(d.features, 2, 10, 0), truth_of(d)), 0.05);
}

TEST(Circles, SingleLinkageSeparatesRings) {
  const Dataset d = gen_circles(200, 1.0, 0);
  EXPECT_EQ(forest_error(d, 2), 0.0);
  EXPECT_GT(clustering_error(kmeans_baseline(d.features, 2, 10, 0), truth_of(d)), 0.05);
  EXPECT_THROW(gen_circles(7, 1.0, 0), std::invalid_argument);
}

TEST(KMeans, SeparatedBlobsAndSingletons) {
  const Dataset d = gen_four_gaussians(4);
  EXPECT_EQ(clustering_error(kmeans_baseline(d.features, 4, 10, 1), truth_of(d)), 0.0);
  std::mt19937_64 rng(5);
  const Matrix x = Matrix::Random(6, 2);
  EXPECT_EQ(kmeans_baseline(x, 6, 1, 0).clusters(), 6);
  EXPECT_THROW(kmeans_baseline(x, 7, 1, 0), std::invalid_argument);
}

TEST(DatasetCsv, RoundTrip) {
  Dataset d = gen_two_moons(10, 0.1, 3);
  d.labels[4].reset();
  std::stringstream buf;
  write_dataset_csv(buf, d);
  const Dataset back = read_dataset_csv(buf);
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
}

TEST(DatasetCsv, RejectsMalformedInput) {
  std::stringstream bad_header("a,b,label\n1,2,0\n");
  EXPECT_THROW(read_dataset_csv(bad_header), std::invalid_argument);
  std::stringstream ragged("x0,x1,label\n1,2,0\n1,0\n");
  EXPECT_THROW(read_dataset_csv(ragged), std::invalid_argument);
  std::stringstream junk("x0,label\nabc,1\n");
  EXPECT_THROW(read_dataset_csv(junk), std::invalid_argument);
}

TEST(MatrixCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(6);
  const Matrix m = testing::random_symmetric(5, rng) * 1e-3;
  std::stringstream buf;
  write_matrix_csv(buf, m);
  EXPECT_EQ(read_matrix_csv(buf), m);
}

TEST(MembershipCsv, RoundTripAndValidation) {
  const MembershipMatrix m = membership_from_labels({0, 1, 0, 2});
  std::stringstream buf;
  write_membership_csv(buf, m);
  EXPECT_EQ(buf.str(), "1,0,1,0\n0,1,0,0\n1,0,1,0\n0,0,0,1\n");
  EXPECT_EQ(read_membership_csv(buf), m);
  std::stringstream not_transitive("1,1,0\n1,1,1\n0,1,1\n");
  EXPECT_THROW(read_membership_csv(not_transitive), std::invalid_argument);
}

TEST(PartialCsv, RoundTrip) {
  PartialMembership p(3);
  p.set(0, 1, Relation::Same);
  p.set(1, 2, Relation::Different);
  std::stringstream buf;
  write_partial_csv(buf, p);
  EXPECT_EQ(read_partial_csv(buf), p);
  std::stringstream asym("1,1,*\n0,1,*\n*,*,1\n");
  EXPECT_THROW(read_partial_csv(asym), std::invalid_argument);
}

}  // namespace
}  // namespace spanclust
