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

#include "spanclust/optimizer.hpp"

#include <cmath>

namespace spanclust {

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::Sgd ? "sgd" : "adam"; }

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw std::invalid_argument("adam_epsilon must be > 0");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight_decay must be >= 0");
}

Optimizer::Optimizer(OptimizerConfig config, Index parameters)
    : config_(config), m_(Vector::Zero(parameters)), v_(Vector::Zero(parameters)) {
  config_.validate();
}

void Optimizer::step(Vector& weights, const Vector& grad) {
  if (grad.size() != weights.size() || weights.size() != m_.size()) {
    throw std::invalid_argument("optimizer: parameter size mismatch");
  }
  ++steps_;
  Vector g = grad;
  if (config_.weight_decay > 0.0) g += config_.weight_decay * weights;
  if (config_.kind == OptimizerKind::Sgd) {
    weights -= config_.learning_rate * g;
    return;
  }
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * g;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * g.cwiseAbs2();
  const double t = static_cast<double>(steps_);
  const double m_scale = 1.0 / (1.0 - std::pow(config_.beta1, t));
  const double v_scale = 1.0 / (1.0 - std::pow(config_.beta2, t));
  weights.array() -= config_.learning_rate * (m_.array() * m_scale) /
                     ((v_.array() * v_scale).sqrt() + config_.adam_epsilon);
}

void Optimizer::restore(Index steps, Vector m, Vector v) {
  if (m.size() != m_.size() || v.size() != v_.size() || steps < 0) {
    throw std::invalid_argument("optimizer restore: state size mismatch");
  }
  steps_ = steps;
  m_ = std::move(m);
  v_ = std::move(v);
}

}  // namespace spanclust
