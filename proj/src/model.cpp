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

#include "spanclust/model.hpp"

#include <cmath>
#include <random>

namespace spanclust {

namespace {

struct LayerView {
  Index in;
  Index out;
  Index offset;  // start of W; b follows at offset + in * out
};

std::vector<LayerView> layer_views(const MlpArchitecture& a) {
  std::vector<LayerView> views;
  Index offset = 0;
  for (std::size_t l = 0; l + 1 < a.layers.size(); ++l) {
    views.push_back({a.layers[l], a.layers[l + 1], offset});
    offset += a.layers[l] * a.layers[l + 1] + a.layers[l + 1];
  }
  return views;
}

void check_architecture(const Architecture& arch) {
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch)) {
    if (lin->input < 1 || lin->output < 1) throw std::invalid_argument("linear model needs positive sizes");
    return;
  }
  const auto& mlp = std::get<MlpArchitecture>(arch);
  if (mlp.layers.size() < 2) throw std::invalid_argument("MLP needs at least input and output sizes");
  for (Index s : mlp.layers) {
    if (s < 1) throw std::invalid_argument("MLP layer sizes must be positive");
  }
}

Matrix activate(const Matrix& z, Activation a) {
  switch (a) {
    case Activation::ReLU:
      return z.cwiseMax(0.0);
    case Activation::Tanh:
      return z.array().tanh().matrix();
  }
  return z;
}

// Derivative of the activation, expressed through pre-activation z.
Matrix activation_grad(const Matrix& z, Activation a) {
  switch (a) {
    case Activation::ReLU:
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::Tanh:
      return (1.0 - z.array().tanh().square()).matrix();
  }
  return Matrix::Ones(z.rows(), z.cols());
}

}  // namespace

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::ReLU;
  if (name == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

std::string to_string(Activation a) { return a == Activation::ReLU ? "relu" : "tanh"; }

Index parameter_count(const Architecture& arch) {
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch)) return lin->input * lin->output;
  Index count = 0;
  for (const LayerView& v : layer_views(std::get<MlpArchitecture>(arch))) count += v.in * v.out + v.out;
  return count;
}

EmbeddingModel::EmbeddingModel(Architecture arch) : arch_(std::move(arch)) {
  check_architecture(arch_);
  weights_ = Vector::Zero(parameter_count(arch_));
}

EmbeddingModel::EmbeddingModel(Architecture arch, Vector weights)
    : arch_(std::move(arch)), weights_(std::move(weights)) {
  check_architecture(arch_);
  if (weights_.size() != parameter_count(arch_)) {
    throw std::invalid_argument("weight vector has " + std::to_string(weights_.size()) +
                                " entries, architecture needs " +
                                std::to_string(parameter_count(arch_)));
  }
}

void EmbeddingModel::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (std::holds_alternative<LinearArchitecture>(arch_)) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index p = 0; p < weights_.size(); ++p) weights_[p] = normal(rng);
    return;
  }
  weights_.setZero();
  for (const LayerView& v : layer_views(std::get<MlpArchitecture>(arch_))) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(v.in));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (Index p = 0; p < v.in * v.out; ++p) weights_[v.offset + p] = uniform(rng);
  }
}

Index EmbeddingModel::input_dim() const {
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch_)) return lin->input;
  return std::get<MlpArchitecture>(arch_).layers.front();
}

Index EmbeddingModel::output_dim() const {
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch_)) return lin->output;
  return std::get<MlpArchitecture>(arch_).layers.back();
}

Matrix EmbeddingModel::embed(const Matrix& x) const {
  if (x.cols() != input_dim()) {
    throw std::invalid_argument("feature dimension " + std::to_string(x.cols()) +
                                " does not match model input " + std::to_string(input_dim()));
  }
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch_)) {
    return x * Eigen::Map<const Matrix>(weights_.data(), lin->input, lin->output);
  }
  const auto& mlp = std::get<MlpArchitecture>(arch_);
  const auto views = layer_views(mlp);
  Matrix h = x;
  for (std::size_t l = 0; l < views.size(); ++l) {
    const LayerView& v = views[l];
    Eigen::Map<const Matrix> w(weights_.data() + v.offset, v.in, v.out);
    Eigen::Map<const Vector> b(weights_.data() + v.offset + v.in * v.out, v.out);
    Matrix z = h * w;
    z.rowwise() += b.transpose();
    h = l + 1 < views.size() ? activate(z, mlp.activation) : z;
  }
  return h;
}

Vector EmbeddingModel::backward(const Matrix& x, const Matrix& grad_embeddings) const {
  if (x.cols() != input_dim() || grad_embeddings.rows() != x.rows() ||
      grad_embeddings.cols() != output_dim()) {
    throw std::invalid_argument("backward: dimension mismatch");
  }
  Vector grad = Vector::Zero(weights_.size());
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch_)) {
    Eigen::Map<Matrix>(grad.data(), lin->input, lin->output) = x.transpose() * grad_embeddings;
    return grad;
  }
  const auto& mlp = std::get<MlpArchitecture>(arch_);
  const auto views = layer_views(mlp);
  std::vector<Matrix> inputs;       // input to each layer
  std::vector<Matrix> pre;          // pre-activation of each layer
  Matrix h = x;
  for (std::size_t l = 0; l < views.size(); ++l) {
    const LayerView& v = views[l];
    Eigen::Map<const Matrix> w(weights_.data() + v.offset, v.in, v.out);
    Eigen::Map<const Vector> b(weights_.data() + v.offset + v.in * v.out, v.out);
    inputs.push_back(h);
    Matrix z = h * w;
    z.rowwise() += b.transpose();
    pre.push_back(z);
    h = l + 1 < views.size() ? activate(z, mlp.activation) : z;
  }
  Matrix delta = grad_embeddings;
  for (std::size_t l = views.size(); l-- > 0;) {
    const LayerView& v = views[l];
    if (l + 1 < views.size()) delta = delta.cwiseProduct(activation_grad(pre[l], mlp.activation));
    Eigen::Map<Matrix>(grad.data() + v.offset, v.in, v.out) = inputs[l].transpose() * delta;
    Eigen::Map<Vector>(grad.data() + v.offset + v.in * v.out, v.out) =
        delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::Map<const Matrix> w(weights_.data() + v.offset, v.in, v.out);
      delta = delta * w.transpose();
    }
  }
  return grad;
}

Matrix similarity_backward(const Matrix& embeddings, const Matrix& grad_sigma) {
  const Index n = embeddings.rows();
  if (grad_sigma.rows() != n || grad_sigma.cols() != n) {
    throw std::invalid_argument("similarity_backward: dimension mismatch");
  }
  Matrix g = grad_sigma;
  g.diagonal().setZero();
  const Vector row_sums = g.rowwise().sum();
  return -2.0 * (row_sums.asDiagonal() * embeddings - g * embeddings);
}

}  // namespace spanclust
