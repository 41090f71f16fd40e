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

#include "spanclust/losses.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "spanclust/forest_solver.hpp"

namespace spanclust {

LossValue fy_loss(const SimilarityMatrix& sigma, Index k, const ForestAdjacency& target) {
  if (target.size() != sigma.size()) throw std::invalid_argument("target forest size mismatch");
  if (target.components() != k) {
    throw std::invalid_argument("target forest has " + std::to_string(target.components()) +
                                " components, expected " + std::to_string(k));
  }
  const ForestSolution best = max_spanning_forest(sigma, k);
  LossValue out;
  out.f_unconstrained = best.value;
  out.f_constrained = forest_value(sigma.values(), target);
  out.value = out.f_unconstrained - out.f_constrained;
  out.grad_sigma = best.forest.indicator() - target.indicator();
  return out;
}

LossValue partial_fy_loss(const SimilarityMatrix& sigma, Index k,
                          const PartialMembership& partial, bool use_bias) {
  const ForestSolution free = max_spanning_forest(sigma, k);
  const ForestSolution constrained = constrained_max_spanning_forest(sigma, k, partial, use_bias);
  LossValue out;
  out.f_unconstrained = free.value;
  out.f_constrained = constrained.value;
  out.value = free.value - constrained.value;
  out.grad_sigma = free.forest.indicator() - constrained.forest.indicator();
  return out;
}

LossValue perturbed_partial_fy_loss(const SimilarityMatrix& sigma, Index k,
                                    const PartialMembership& partial,
                                    const PerturbationConfig& config, bool use_bias) {
  const PairedSamples pair = perturbed_forest_pair(sigma, k, partial, config, use_bias);
  std::vector<double> diffs(pair.value_unconstrained.size());
  for (std::size_t b = 0; b < diffs.size(); ++b) {
    diffs[b] = pair.value_unconstrained[b] - pair.value_constrained[b];
  }
  LossValue out;
  const auto [mean, se] = mean_and_std_error(diffs);
  out.value = mean;
  out.std_error = se;
  out.f_unconstrained = mean_and_std_error(pair.value_unconstrained).first;
  out.f_constrained = mean_and_std_error(pair.value_constrained).first;
  out.grad_sigma = pair.unconstrained.values - pair.constrained.values;
  return out;
}

JensenGap jensen_gap_check(const SimilarityMatrix& sigma, Index k,
                           const PartialMembership& partial, const PerturbationConfig& config,
                           bool use_bias) {
  const Index n = sigma.size();
  PerturbationConfig cfg = config;
  cfg.coupled = true;
  cfg.validate();

  std::vector<std::vector<Edge>> feasible;
  enumerate_forests(n, k, &partial, [&](const std::vector<Edge>& e) { feasible.push_back(e); });
  if (feasible.empty()) throw InfeasibleConstraints("no k-spanning forest satisfies the constraints");

  const PairedSamples pair = perturbed_forest_pair(sigma, k, partial, cfg, use_bias);
  const auto samples = static_cast<std::size_t>(cfg.samples);

  std::vector<Matrix> perturbed(samples);
  Matrix mean_perturbed = Matrix::Zero(n, n);
  for (std::size_t b = 0; b < samples; ++b) {
    perturbed[b] = sigma.values() + cfg.epsilon * sample_noise(n, cfg, b);
    mean_perturbed += perturbed[b];
  }
  mean_perturbed /= static_cast<double>(samples);

  const double mean_free = mean_and_std_error(pair.value_unconstrained).first;
  double rhs = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t y = 0; y < feasible.size(); ++y) {
    const double loss = mean_free - detail::edge_sum(mean_perturbed, feasible[y]);
    if (loss < rhs) {
      rhs = loss;
      best = y;
    }
  }

  std::vector<double> lhs_terms(samples);
  std::vector<double> exact_terms(samples);
  std::vector<double> diffs(samples);
  for (std::size_t b = 0; b < samples; ++b) {
    const double free = pair.value_unconstrained[b];
    lhs_terms[b] = free - pair.value_constrained[b];
    double exact = -std::numeric_limits<double>::infinity();
    for (const auto& y : feasible) exact = std::max(exact, detail::edge_sum(perturbed[b], y));
    exact_terms[b] = free - exact;
    diffs[b] = lhs_terms[b] - (free - detail::edge_sum(perturbed[b], feasible[best]));
  }

  JensenGap out;
  out.lhs = mean_and_std_error(lhs_terms).first;
  out.lhs_exact = mean_and_std_error(exact_terms).first;
  out.rhs = rhs;
  out.diff_std_error = mean_and_std_error(diffs).second;
  out.feasible_forests = static_cast<Index>(feasible.size());
  return out;
}

}  // namespace spanclust
