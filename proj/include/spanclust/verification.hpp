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
#include <random>
#include <string>
#include <vector>

#include "spanclust/types.hpp"

namespace spanclust {

/// Random symmetric matrix with iid standard normal upper triangle.
SimilarityMatrix random_similarity(Index n, std::mt19937_64& rng);

/// Labels drawn uniformly from [0, k), each revealed with probability
/// `reveal`; the result observes exactly S x S for the revealed set S.
PartialMembership random_labeled_subset(Index n, Index k, double reveal, std::mt19937_64& rng);

/// Pairs of a uniformly random k-labelling, each observed independently with
/// probability `observe` (a general, not necessarily S x S, pattern).
PartialMembership random_pair_observations(Index n, Index k, double observe,
                                           std::mt19937_64& rng);

struct GradcheckOptions {
  Index n = 6;
  Index k = 2;
  Index instances = 20;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  Index samples = 200;
  double step = 1e-6;
  double tolerance = 1e-4;
  int threads = 0;
  bool use_bias = true;
  /// Negative control: perturbs the analytic gradient before comparing.
  bool corrupt_gradient = false;
};

struct GradcheckReport {
  Index instances = 0;
  Index coordinates_checked = 0;
  /// Coordinates where +-step changes some sample's argmax (tie points).
  Index coordinates_skipped = 0;
  double max_deviation = 0.0;
  bool passed = false;
};

/// Central finite differences of the coupled fixed-noise perturbed partial
/// loss with respect to every upper-triangular Sigma_ij, against grad_sigma.
GradcheckReport run_sigma_gradcheck(const GradcheckOptions& options);

struct WeightGradcheckOptions {
  Index n = 8;
  Index input_dim = 3;
  Index output_dim = 4;
  Index k = 2;
  Index coordinates = 10;
  Index instances = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  Index samples = 200;
  double step = 1e-6;
  double tolerance = 1e-4;
  int threads = 0;
};

/// Same check composed through a Linear embedding model; deviations are
/// relative, |fd - g| / max(|fd|, |g|).
GradcheckReport run_weight_gradcheck(const WeightGradcheckOptions& options);

struct OracleCheckOptions {
  Index trials = 1000;
  Index max_n = 7;
  Index constrained_trials = 500;
  Index random_omega_trials = 200;
  std::uint64_t seed = 0;
  bool use_bias = true;
};

struct OracleCheckReport {
  Index unconstrained_trials = 0;
  Index unconstrained_matches = 0;
  Index constrained_trials = 0;
  Index constrained_matches = 0;        // includes agreeing infeasible cases
  Index constrained_infeasible = 0;     // oracle says infeasible
  Index random_omega_trials = 0;
  Index random_omega_equal = 0;
  Index random_omega_below = 0;         // feasible, greedy value < oracle value
  Index random_omega_infeasible = 0;    // both infeasible
  Index random_omega_greedy_failed = 0; // oracle feasible, greedy raised
  double random_omega_max_gap = 0.0;
  std::vector<std::string> mismatches;  // first few exact-match failures
  bool passed() const {
    return unconstrained_matches == unconstrained_trials &&
           constrained_matches == constrained_trials;
  }
};

OracleCheckReport run_oracle_check(const OracleCheckOptions& options);

}  // namespace spanclust
