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

#include <string>

#include "spanclust/types.hpp"

namespace spanclust {

enum class OptimizerKind { Sgd, Adam };

OptimizerKind parse_optimizer(const std::string& name);
std::string to_string(OptimizerKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Sgd;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// L2 penalty added to the gradient: g + weight_decay * w.
  double weight_decay = 0.0;

  void validate() const;
};

/// First-order optimizer with explicit state so it can be checkpointed.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, Index parameters);

  void step(Vector& weights, const Vector& grad);

  const OptimizerConfig& config() const { return config_; }
  Index steps() const { return steps_; }
  const Vector& first_moment() const { return m_; }
  const Vector& second_moment() const { return v_; }

  /// Restores state saved from steps()/first_moment()/second_moment().
  void restore(Index steps, Vector m, Vector v);

 private:
  OptimizerConfig config_;
  Index steps_ = 0;
  Vector m_;
  Vector v_;
};

}  // namespace spanclust
