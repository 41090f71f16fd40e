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

#include "spanclust/perturbed_ops.hpp"
#include "spanclust/types.hpp"

namespace spanclust {

/// Loss value with its gradient with respect to the similarity matrix.
///
/// Objectives count each forest edge once, so grad_sigma(i, j) is the
/// derivative with respect to the shared value of the symmetric pair
/// (Sigma_ij, Sigma_ji) moved together. The diagonal is zero.
struct LossValue {
  double value = 0.0;
  Matrix grad_sigma;
  double f_unconstrained = 0.0;  // F(Sigma) or its perturbed estimate
  double f_constrained = 0.0;    // <Sigma, target> or F(Sigma; M_Omega)
  double std_error = 0.0;        // Monte-Carlo standard error of `value`
};

/// Fenchel-Young loss for the k-forest LP against a target forest:
/// F_k(Sigma) - <Sigma, target>.
LossValue fy_loss(const SimilarityMatrix& sigma, Index k, const ForestAdjacency& target);

/// Partial Fenchel-Young loss F_k(Sigma) - F_k(Sigma; M_Omega).
LossValue partial_fy_loss(const SimilarityMatrix& sigma, Index k,
                          const PartialMembership& partial, bool use_bias = true);

/// Monte-Carlo perturbed partial Fenchel-Young loss. The value averages
/// per-sample differences F(Sigma + eps Z_b) - F(Sigma + eps Z_b; M_Omega);
/// the gradient is the difference of the two soft forests.
LossValue perturbed_partial_fy_loss(const SimilarityMatrix& sigma, Index k,
                                    const PartialMembership& partial,
                                    const PerturbationConfig& config, bool use_bias = true);

/// Both sides of the inequality between the smoothed partial loss and the
/// smallest smoothed Fenchel-Young loss over forests consistent with
/// M_Omega, estimated on the same noise samples.
struct JensenGap {
  double lhs = 0.0;            // perturbed_partial_fy_loss value
  double rhs = 0.0;            // min over C_k(M_Omega) of E[L_FY(Sigma + eps Z; y)]
  double lhs_exact = 0.0;      // lhs with the exhaustive constrained maximum
  double diff_std_error = 0.0; // standard error of the per-sample lhs - rhs
  Index feasible_forests = 0;
};

/// Oracle-scale check (n <= 9).
JensenGap jensen_gap_check(const SimilarityMatrix& sigma, Index k,
                           const PartialMembership& partial, const PerturbationConfig& config,
                           bool use_bias = true);

}  // namespace spanclust
