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
#include <variant>
#include <vector>

#include "spanclust/types.hpp"

namespace spanclust {

enum class Activation { ReLU, Tanh };

Activation parse_activation(const std::string& name);
std::string to_string(Activation a);

/// v = theta^T x with theta of shape (input, output), no bias. Weights are
/// theta in column-major order.
struct LinearArchitecture {
  Index input = 0;
  Index output = 0;
  friend bool operator==(const LinearArchitecture&, const LinearArchitecture&) = default;
};

/// Fully connected network with `layers` = {input, hidden..., output}.
/// Hidden layers apply `activation`; the output layer is linear. Weights
/// are, per layer, W (in x out, column-major) followed by the bias b.
struct MlpArchitecture {
  std::vector<Index> layers;
  Activation activation = Activation::ReLU;
  friend bool operator==(const MlpArchitecture&, const MlpArchitecture&) = default;
};

using Architecture = std::variant<LinearArchitecture, MlpArchitecture>;

Index parameter_count(const Architecture& arch);

class EmbeddingModel {
 public:
  /// Zero-initialised model.
  explicit EmbeddingModel(Architecture arch);
  EmbeddingModel(Architecture arch, Vector weights);

  /// Linear: iid standard normal. MLP: W uniform in +-1/sqrt(fan_in), b = 0.
  void initialize(std::uint64_t seed);

  const Architecture& architecture() const { return arch_; }
  const Vector& weights() const { return weights_; }
  Vector& weights() { return weights_; }
  Index input_dim() const;
  Index output_dim() const;

  /// Row-wise embedding of the rows of `x`.
  Matrix embed(const Matrix& x) const;

  /// Gradient with respect to the weights of sum_ij grad_embeddings_ij *
  /// embed(x)_ij.
  Vector backward(const Matrix& x, const Matrix& grad_embeddings) const;

 private:
  Architecture arch_;
  Vector weights_;
};

/// Sigma_ij = -||v_i - v_j||^2 over the rows of `embeddings`; zero diagonal.
template <class Derived>
SimilarityMatrix pairwise_similarity(const Eigen::MatrixBase<Derived>& embeddings) {
  const Index n = embeddings.rows();
  if (n < 1) throw std::invalid_argument("pairwise_similarity needs at least one embedding");
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = (embeddings.row(i) - embeddings.row(j)).squaredNorm();
      s(i, j) = -d;
      s(j, i) = -d;
    }
  }
  return SimilarityMatrix(std::move(s));
}

/// Gradient with respect to the embeddings of sum_{i<j} grad_sigma_ij *
/// Sigma_ij, i.e. dL/dv_i = -2 sum_j grad_sigma_ij (v_i - v_j).
Matrix similarity_backward(const Matrix& embeddings, const Matrix& grad_sigma);

}  // namespace spanclust
