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

#include "spanclust/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spanclust/forest_solver.hpp"
#include "spanclust/losses.hpp"
#include "spanclust/model.hpp"
#include "spanclust/training.hpp"

namespace spanclust {

SimilarityMatrix random_similarity(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      s(i, j) = normal(rng);
      s(j, i) = s(i, j);
    }
  }
  return SimilarityMatrix(std::move(s));
}

PartialMembership random_labeled_subset(Index n, Index k, double reveal, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> label(0, k - 1);
  std::bernoulli_distribution shown(reveal);
  std::vector<std::optional<std::int64_t>> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) {
    const std::int64_t value = label(rng);
    if (shown(rng)) l = value;
  }
  return partial_from_labeled_subset(labels);
}

PartialMembership random_pair_observations(Index n, Index k, double observe,
                                           std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> label(0, k - 1);
  std::bernoulli_distribution seen(observe);
  std::vector<Index> truth(static_cast<std::size_t>(n));
  for (auto& t : truth) t = label(rng);
  PartialMembership p(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (seen(rng)) p.set(i, j, truth[i] == truth[j] ? Relation::Same : Relation::Different);
    }
  }
  return p;
}

namespace {

// A random instance whose constraints admit a greedy solution.
std::pair<SimilarityMatrix, PartialMembership> feasible_instance(Index n, Index k,
                                                                 std::mt19937_64& rng,
                                                                 bool use_bias) {
  for (;;) {
    SimilarityMatrix sigma = random_similarity(n, rng);
    PartialMembership partial = random_labeled_subset(n, k, 0.5, rng);
    try {
      (void)constrained_max_spanning_forest(sigma, k, partial, use_bias);
      return {std::move(sigma), std::move(partial)};
    } catch (const InfeasibleConstraints&) {
    }
  }
}

SimilarityMatrix shifted(const SimilarityMatrix& sigma, Index i, Index j, double delta) {
  Matrix m = sigma.values();
  m(i, j) += delta;
  m(j, i) = m(i, j);
  return SimilarityMatrix(std::move(m));
}

std::string describe(const char* kind, Index trial, Index n, Index k, const ForestSolution* greedy,
                     const ForestSolution* oracle) {
  std::ostringstream out;
  out << kind << " trial " << trial << " (n=" << n << ", k=" << k << "): ";
  if (greedy == nullptr) {
    out << "greedy infeasible";
  } else {
    out << "greedy " << greedy->value;
  }
  out << " vs ";
  if (oracle == nullptr) {
    out << "oracle infeasible";
  } else {
    out << "oracle " << oracle->value;
  }
  return out.str();
}

}  // namespace

GradcheckReport run_sigma_gradcheck(const GradcheckOptions& options) {
  PerturbationConfig config;
  config.epsilon = options.epsilon;
  config.samples = options.samples;
  config.threads = options.threads;
  config.coupled = true;
  config.validate();
  if (!(options.step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");

  std::mt19937_64 rng(options.seed);
  GradcheckReport report;
  for (Index t = 0; t < options.instances; ++t) {
    auto [sigma, partial] = feasible_instance(options.n, options.k, rng, options.use_bias);
    config.seed = rng();
    const LossValue center =
        perturbed_partial_fy_loss(sigma, options.k, partial, config, options.use_bias);
    Matrix grad = center.grad_sigma;
    if (options.corrupt_gradient) grad.array() += 1e-3;
    for (Index i = 0; i < options.n; ++i) {
      for (Index j = i + 1; j < options.n; ++j) {
        const LossValue plus = perturbed_partial_fy_loss(shifted(sigma, i, j, options.step),
                                                         options.k, partial, config,
                                                         options.use_bias);
        const LossValue minus = perturbed_partial_fy_loss(shifted(sigma, i, j, -options.step),
                                                          options.k, partial, config,
                                                          options.use_bias);
        if (plus.grad_sigma != minus.grad_sigma) {
          ++report.coordinates_skipped;
          continue;
        }
        const double fd = (plus.value - minus.value) / (2.0 * options.step);
        report.max_deviation = std::max(report.max_deviation, std::abs(fd - grad(i, j)));
        ++report.coordinates_checked;
      }
    }
    ++report.instances;
  }
  report.passed = report.coordinates_checked > 0 && report.max_deviation < options.tolerance;
  return report;
}

GradcheckReport run_weight_gradcheck(const WeightGradcheckOptions& options) {
  PerturbationConfig config;
  config.epsilon = options.epsilon;
  config.samples = options.samples;
  config.threads = options.threads;
  config.coupled = true;
  config.validate();
  if (!(options.step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  GradcheckReport report;
  for (Index t = 0; t < options.instances; ++t) {
    EmbeddingModel model(LinearArchitecture{options.input_dim, options.output_dim});
    model.initialize(rng());
    Matrix x(options.n, options.input_dim);
    for (Index r = 0; r < x.rows(); ++r) {
      for (Index c = 0; c < x.cols(); ++c) x(r, c) = normal(rng);
    }
    PartialMembership partial(options.n);
    for (;;) {
      partial = random_labeled_subset(options.n, options.k, 0.5, rng);
      try {
        (void)constrained_max_spanning_forest(pairwise_similarity(model.embed(x)), options.k,
                                              partial);
        break;
      } catch (const InfeasibleConstraints&) {
      }
    }
    config.seed = rng();
    const WeightGradient center = loss_and_weight_grad(model, x, partial, options.k, config);

    const Index params = model.weights().size();
    std::vector<Index> coords(static_cast<std::size_t>(params));
    for (Index p = 0; p < params; ++p) coords[p] = p;
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(static_cast<std::size_t>(std::min(options.coordinates, params)));

    for (Index p : coords) {
      EmbeddingModel up = model;
      EmbeddingModel down = model;
      up.weights()[p] += options.step;
      down.weights()[p] -= options.step;
      const WeightGradient plus = loss_and_weight_grad(up, x, partial, options.k, config);
      const WeightGradient minus = loss_and_weight_grad(down, x, partial, options.k, config);
      if (plus.loss.grad_sigma != minus.loss.grad_sigma ||
          plus.loss.grad_sigma != center.loss.grad_sigma) {
        ++report.coordinates_skipped;
        continue;
      }
      const double fd = (plus.loss.value - minus.loss.value) / (2.0 * options.step);
      const double g = center.grad_w[p];
      const double scale = std::max(std::abs(fd), std::abs(g));
      const double dev = scale < 1e-12 ? 0.0 : std::abs(fd - g) / scale;
      report.max_deviation = std::max(report.max_deviation, dev);
      ++report.coordinates_checked;
    }
    ++report.instances;
  }
  report.passed = report.coordinates_checked > 0 && report.max_deviation < options.tolerance;
  return report;
}

OracleCheckReport run_oracle_check(const OracleCheckOptions& options) {
  if (options.max_n < 2 || options.max_n > kBruteForceMaxNodes) {
    throw std::invalid_argument("max_n must lie in [2, " + std::to_string(kBruteForceMaxNodes) + "]");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<Index> pick_n(2, options.max_n);
  OracleCheckReport report;
  auto note = [&](std::string s) {
    if (report.mismatches.size() < 10) report.mismatches.push_back(std::move(s));
  };

  for (Index t = 0; t < options.trials; ++t) {
    const Index n = pick_n(rng);
    const SimilarityMatrix sigma = random_similarity(n, rng);
    bool all = true;
    for (Index k = 1; k <= n; ++k) {
      const ForestSolution greedy = max_spanning_forest(sigma, k);
      const ForestSolution oracle = brute_force_forest(sigma, k);
      if (greedy.value != oracle.value || greedy.forest != oracle.forest) {
        all = false;
        note(describe("unconstrained", t, n, k, &greedy, &oracle));
      }
    }
    ++report.unconstrained_trials;
    report.unconstrained_matches += all;
  }

  auto solve_both = [&](const SimilarityMatrix& sigma, Index k, const PartialMembership& p) {
    std::optional<ForestSolution> greedy;
    std::optional<ForestSolution> oracle;
    try {
      greedy = constrained_max_spanning_forest(sigma, k, p, options.use_bias);
    } catch (const InfeasibleConstraints&) {
    }
    try {
      oracle = brute_force_forest(sigma, k, &p);
    } catch (const InfeasibleConstraints&) {
    }
    return std::pair{std::move(greedy), std::move(oracle)};
  };

  for (Index t = 0; t < options.constrained_trials; ++t) {
    const Index n = pick_n(rng);
    const Index k = std::uniform_int_distribution<Index>(1, n)(rng);
    const SimilarityMatrix sigma = random_similarity(n, rng);
    const PartialMembership partial = random_labeled_subset(n, k, 0.5, rng);
    const auto [greedy, oracle] = solve_both(sigma, k, partial);
    ++report.constrained_trials;
    if (!oracle) ++report.constrained_infeasible;
    const bool match = (!greedy && !oracle) ||
                       (greedy && oracle && greedy->value == oracle->value &&
                        greedy->forest == oracle->forest);
    if (match) {
      ++report.constrained_matches;
    } else {
      note(describe("constrained S x S", t, n, k, greedy ? &*greedy : nullptr,
                    oracle ? &*oracle : nullptr));
    }
  }

  for (Index t = 0; t < options.random_omega_trials; ++t) {
    const Index n = pick_n(rng);
    const Index k = std::uniform_int_distribution<Index>(1, n)(rng);
    const SimilarityMatrix sigma = random_similarity(n, rng);
    const PartialMembership partial = random_pair_observations(n, k, 0.3, rng);
    const auto [greedy, oracle] = solve_both(sigma, k, partial);
    ++report.random_omega_trials;
    if (!oracle) {
      report.random_omega_infeasible += !greedy;
      continue;
    }
    if (!greedy) {
      ++report.random_omega_greedy_failed;
      continue;
    }
    if (greedy->value == oracle->value) {
      ++report.random_omega_equal;
    } else {
      ++report.random_omega_below;
      report.random_omega_max_gap =
          std::max(report.random_omega_max_gap, oracle->value - greedy->value);
    }
  }
  return report;
}

}  // namespace spanclust
