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
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spanclust/datasets.hpp"
#include "spanclust/losses.hpp"
#include "spanclust/model.hpp"
#include "spanclust/optimizer.hpp"
#include "spanclust/perturbed_ops.hpp"

namespace spanclust {

struct TrainConfig {
  Index k = 4;
  Index batch_size = 32;
  Index max_steps = 500;
  /// Evaluate hard clustering error every `eval_every` steps (0: never).
  Index eval_every = 1;
  /// Chunk size for evaluation; 0 uses batch_size.
  Index eval_batch_size = 0;
  /// Fraction of each batch whose labels are revealed to the loss.
  double labeled_fraction = 1.0;
  bool use_bias = true;
  bool stop_at_zero_validation_error = false;
  OptimizerConfig optimizer;
  /// Per-step noise streams are derived from perturbation.seed and the step.
  PerturbationConfig perturbation;
  std::uint64_t seed = 0;

  void validate() const;
};

struct WeightGradient {
  LossValue loss;
  Vector grad_w;
};

/// Perturbed partial Fenchel-Young loss of the batch embedding and its
/// gradient with respect to the model weights, chained through
/// Sigma_ij = -||v_i - v_j||^2.
WeightGradient loss_and_weight_grad(const EmbeddingModel& model, const Matrix& x_batch,
                                    const PartialMembership& partial, Index k,
                                    const PerturbationConfig& config, bool use_bias = true);

/// Everything that evolves during training. Serialisable as a checkpoint.
struct TrainState {
  EmbeddingModel model;
  Optimizer optimizer;
  std::mt19937_64 shuffle;
  std::vector<Index> permutation;
  Index cursor = 0;
  Index step = 0;

  /// State before the first step; `model` is used as given.
  static TrainState fresh(EmbeddingModel model, const TrainConfig& config, Index dataset_size);
};

struct StepRecord {
  Index step = 0;
  std::optional<double> loss;  // empty when the batch was skipped
  std::optional<double> train_error;
  std::optional<double> validation_error;
};

struct TrainReport {
  std::vector<StepRecord> steps;
  double initial_train_error = 0.0;
  std::optional<double> initial_validation_error;
  std::vector<Index> skipped_steps;
  std::optional<Index> first_zero_validation_step;
  Vector final_weights;
  double wall_seconds = 0.0;
};

/// Pooled hard clustering error of max_spanning_forest on consecutive
/// chunks of `batch` labeled rows.
double evaluate_clustering_error(const EmbeddingModel& model, const Dataset& data, Index k,
                                 Index batch);

using WarningSink = std::function<void(const std::string&)>;

/// Mini-batch training loop. Batches are drawn without replacement from a
/// per-epoch shuffle; infeasible batches are skipped and reported.
TrainReport train(TrainState& state, const Dataset& train_data, const Dataset* validation,
                  const TrainConfig& config, const WarningSink& warn = {});

/// `step,loss,train_error,val_error` rows; empty fields where not measured.
std::string trace_csv(const TrainReport& report);

/// JSON checkpoint (format "spanclust-checkpoint", version 1).
std::string save_checkpoint(const TrainState& state);
TrainState load_checkpoint(const std::string& json_text);

}  // namespace spanclust
