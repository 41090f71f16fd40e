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
#include <string>
#include <vector>

#include "spanclust/forest_solver.hpp"
#include "spanclust/types.hpp"

namespace spanclust {

enum class NoiseLaw { Gaussian, Logistic };

NoiseLaw parse_noise_law(const std::string& name);
std::string to_string(NoiseLaw law);

/// Monte-Carlo smoothing parameters: Sigma + epsilon * Z with Z ~ noise.
struct PerturbationConfig {
  double epsilon = 0.1;
  Index samples = 1000;
  std::uint64_t seed = 0;
  NoiseLaw noise = NoiseLaw::Gaussian;
  /// Paired constrained/unconstrained estimates share noise samples.
  bool coupled = true;
  /// Worker threads for sampling; 0 resolves via resolve_threads().
  int threads = 0;

  /// Throws std::invalid_argument unless epsilon > 0 and samples >= 1.
  void validate() const;
};

/// Symmetric noise matrix with zero diagonal. Upper-triangular entries are
/// drawn row-major from the stream (config.seed, sample_index).
Matrix sample_noise(Index n, const PerturbationConfig& config, std::uint64_t sample_index);

struct PerturbedForest {
  SoftForest forest;
  /// Monte-Carlo estimate of F_{k,eps}(Sigma) (single-count convention).
  double value = 0.0;
  double value_std_error = 0.0;
};

PerturbedForest perturbed_forest(const SimilarityMatrix& sigma, Index k,
                                 const PerturbationConfig& config);

PerturbedForest perturbed_constrained_forest(const SimilarityMatrix& sigma, Index k,
                                             const PartialMembership& partial,
                                             const PerturbationConfig& config,
                                             bool use_bias = true);

SoftMembership perturbed_membership(const SimilarityMatrix& sigma, Index k,
                                    const PerturbationConfig& config,
                                    const PartialMembership* partial = nullptr,
                                    bool use_bias = true);

/// Unconstrained and constrained estimates from one sampling pass. With
/// config.coupled both solves of sample b see the same noise matrix;
/// otherwise the constrained solves draw from a separate stream.
struct PairedSamples {
  SoftForest unconstrained;
  SoftForest constrained;
  std::vector<double> value_unconstrained;  // per sample
  std::vector<double> value_constrained;    // per sample
};

PairedSamples perturbed_forest_pair(const SimilarityMatrix& sigma, Index k,
                                    const PartialMembership& partial,
                                    const PerturbationConfig& config, bool use_bias = true);

/// Mean and standard error of `xs`, summed in index order.
std::pair<double, double> mean_and_std_error(const std::vector<double>& xs);

}  // namespace spanclust
