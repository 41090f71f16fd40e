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

#include "spanclust/perturbed_ops.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "spanclust/parallel.hpp"
#include "spanclust/rng.hpp"

namespace spanclust {

namespace {

// Stream salt for the constrained half of an uncoupled pair.
constexpr std::uint64_t kUncoupledSalt = 0x5bd1e9955bd1e995ULL;

void fill_noise(Matrix& out, Index n, const PerturbationConfig& config, std::uint64_t seed,
                std::uint64_t index) {
  out.setZero(n, n);
  CounterRng rng(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double z = 0.0;
      switch (config.noise) {
        case NoiseLaw::Gaussian:
          z = normal(rng);
          break;
        case NoiseLaw::Logistic: {
          const double u = rng.open_unit();
          z = std::log(u / (1.0 - u));
          break;
        }
      }
      out(i, j) = z;
      out(j, i) = z;
    }
  }
}

struct Outcome {
  std::vector<Edge> edges;
  std::vector<Index> assignment;
  double value = 0.0;
};

struct Request {
  bool unconstrained = false;
  const detail::ConstraintIndex* constraints = nullptr;
  bool use_bias = true;
  bool membership = false;
  std::uint64_t constrained_seed = 0;
};

struct SampleResult {
  std::optional<Outcome> unconstrained;
  std::optional<Outcome> constrained;
};

std::vector<SampleResult> run_samples(const Matrix& sigma, Index k,
                                      const PerturbationConfig& config, const Request& req) {
  config.validate();
  const Index n = sigma.rows();
  const Index samples = config.samples;
  const int threads = resolve_threads(config.threads);
  const auto workers = static_cast<std::size_t>(std::max<Index>(1, std::min<Index>(threads, samples)));
  std::vector<SampleResult> results(static_cast<std::size_t>(samples));
  std::vector<detail::KruskalWorkspace> spaces(workers);
  std::vector<Matrix> noise(workers);
  std::vector<Matrix> perturbed(workers);

  auto solve_one = [&](int w, std::uint64_t seed, std::uint64_t b, bool constrained,
                       bool fresh_noise) {
    if (fresh_noise) {
      fill_noise(noise[w], n, config, seed, b);
      perturbed[w] = sigma + config.epsilon * noise[w];
    }
    const std::vector<Edge>& edges =
        constrained ? spaces[w].solve_constrained(perturbed[w], k, *req.constraints, req.use_bias)
                    : spaces[w].solve(perturbed[w], k);
    Outcome out;
    out.edges = edges;
    out.value = detail::edge_sum(perturbed[w], edges);
    if (req.membership) out.assignment = spaces[w].assignment();
    return out;
  };

  parallel_for(samples, static_cast<int>(workers), [&](Index b, int w) {
    const auto idx = static_cast<std::uint64_t>(b);
    SampleResult& r = results[b];
    if (req.unconstrained) r.unconstrained = solve_one(w, config.seed, idx, false, true);
    if (req.constraints != nullptr) {
      const bool shared = req.unconstrained && req.constrained_seed == config.seed;
      r.constrained = solve_one(w, req.constrained_seed, idx, true, !shared);
    }
  });
  return results;
}

SoftForest edge_frequencies(Index n, Index k, const std::vector<SampleResult>& results,
                            bool constrained) {
  Matrix counts = Matrix::Zero(n, n);
  for (const SampleResult& r : results) {
    const Outcome& o = constrained ? *r.constrained : *r.unconstrained;
    for (const Edge& e : o.edges) counts(e.i, e.j) += 1.0;
  }
  const double inv = 1.0 / static_cast<double>(results.size());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      counts(i, j) *= inv;
      counts(j, i) = counts(i, j);
    }
  }
  return SoftForest{std::move(counts), n - k};
}

std::vector<double> values_of(const std::vector<SampleResult>& results, bool constrained) {
  std::vector<double> v;
  v.reserve(results.size());
  for (const SampleResult& r : results) {
    v.push_back(constrained ? r.constrained->value : r.unconstrained->value);
  }
  return v;
}

}  // namespace

NoiseLaw parse_noise_law(const std::string& name) {
  if (name == "gaussian") return NoiseLaw::Gaussian;
  if (name == "logistic") return NoiseLaw::Logistic;
  throw std::invalid_argument("unknown noise law '" + name + "'");
}

std::string to_string(NoiseLaw law) {
  return law == NoiseLaw::Gaussian ? "gaussian" : "logistic";
}

void PerturbationConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("perturbation epsilon must be > 0");
  }
  if (samples < 1) throw std::invalid_argument("perturbation samples must be >= 1");
}

Matrix sample_noise(Index n, const PerturbationConfig& config, std::uint64_t sample_index) {
  if (n < 1) throw std::invalid_argument("sample_noise needs n >= 1");
  Matrix z;
  fill_noise(z, n, config, config.seed, sample_index);
  return z;
}

std::pair<double, double> mean_and_std_error(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

PerturbedForest perturbed_forest(const SimilarityMatrix& sigma, Index k,
                                 const PerturbationConfig& config) {
  Request req;
  req.unconstrained = true;
  const auto results = run_samples(sigma.values(), k, config, req);
  const auto [mean, se] = mean_and_std_error(values_of(results, false));
  return PerturbedForest{edge_frequencies(sigma.size(), k, results, false), mean, se};
}

PerturbedForest perturbed_constrained_forest(const SimilarityMatrix& sigma, Index k,
                                             const PartialMembership& partial,
                                             const PerturbationConfig& config, bool use_bias) {
  if (partial.size() != sigma.size()) throw std::invalid_argument("partial membership size mismatch");
  const detail::ConstraintIndex constraints(partial);
  Request req;
  req.constraints = &constraints;
  req.use_bias = use_bias;
  req.constrained_seed = config.seed;
  const auto results = run_samples(sigma.values(), k, config, req);
  const auto [mean, se] = mean_and_std_error(values_of(results, true));
  return PerturbedForest{edge_frequencies(sigma.size(), k, results, true), mean, se};
}

SoftMembership perturbed_membership(const SimilarityMatrix& sigma, Index k,
                                    const PerturbationConfig& config,
                                    const PartialMembership* partial, bool use_bias) {
  const Index n = sigma.size();
  std::optional<detail::ConstraintIndex> constraints;
  Request req;
  req.membership = true;
  if (partial != nullptr) {
    if (partial->size() != n) throw std::invalid_argument("partial membership size mismatch");
    constraints.emplace(*partial);
    req.constraints = &*constraints;
    req.use_bias = use_bias;
    req.constrained_seed = config.seed;
  } else {
    req.unconstrained = true;
  }
  const auto results = run_samples(sigma.values(), k, config, req);
  Matrix counts = Matrix::Zero(n, n);
  for (const SampleResult& r : results) {
    const Outcome& o = partial != nullptr ? *r.constrained : *r.unconstrained;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) counts(i, j) += o.assignment[i] == o.assignment[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(results.size());
  for (Index i = 0; i < n; ++i) {
    counts(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      counts(i, j) *= inv;
      counts(j, i) = counts(i, j);
    }
  }
  return SoftMembership{std::move(counts)};
}

PairedSamples perturbed_forest_pair(const SimilarityMatrix& sigma, Index k,
                                    const PartialMembership& partial,
                                    const PerturbationConfig& config, bool use_bias) {
  if (partial.size() != sigma.size()) throw std::invalid_argument("partial membership size mismatch");
  const detail::ConstraintIndex constraints(partial);
  Request req;
  req.unconstrained = true;
  req.constraints = &constraints;
  req.use_bias = use_bias;
  req.constrained_seed = config.coupled ? config.seed : derive_seed(config.seed, kUncoupledSalt);
  const auto results = run_samples(sigma.values(), k, config, req);
  PairedSamples out;
  out.unconstrained = edge_frequencies(sigma.size(), k, results, false);
  out.constrained = edge_frequencies(sigma.size(), k, results, true);
  out.value_unconstrained = values_of(results, false);
  out.value_constrained = values_of(results, true);
  return out;
}

}  // namespace spanclust
