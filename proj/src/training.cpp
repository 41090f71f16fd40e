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

#include "spanclust/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "spanclust/csv.hpp"
#include "spanclust/forest_solver.hpp"
#include "spanclust/rng.hpp"

namespace spanclust {

using nlohmann::json;

void TrainConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (k > batch_size) throw std::invalid_argument("k must not exceed batch_size");
  if (max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
  if (eval_every < 0) throw std::invalid_argument("eval_every must be >= 0");
  if (eval_batch_size < 0) throw std::invalid_argument("eval_batch_size must be >= 0");
  if (!(labeled_fraction >= 0.0 && labeled_fraction <= 1.0)) {
    throw std::invalid_argument("labeled_fraction must lie in [0, 1]");
  }
  optimizer.validate();
  perturbation.validate();
}

WeightGradient loss_and_weight_grad(const EmbeddingModel& model, const Matrix& x_batch,
                                    const PartialMembership& partial, Index k,
                                    const PerturbationConfig& config, bool use_bias) {
  const Matrix v = model.embed(x_batch);
  const SimilarityMatrix sigma = pairwise_similarity(v);
  WeightGradient out;
  out.loss = perturbed_partial_fy_loss(sigma, k, partial, config, use_bias);
  out.grad_w = model.backward(x_batch, similarity_backward(v, out.loss.grad_sigma));
  return out;
}

TrainState TrainState::fresh(EmbeddingModel model, const TrainConfig& config, Index dataset_size) {
  Optimizer opt(config.optimizer, model.weights().size());
  TrainState s{std::move(model), std::move(opt), std::mt19937_64(derive_seed(config.seed, 1)),
               {}, 0, 0};
  s.permutation.resize(static_cast<std::size_t>(dataset_size));
  std::iota(s.permutation.begin(), s.permutation.end(), Index{0});
  std::shuffle(s.permutation.begin(), s.permutation.end(), s.shuffle);
  return s;
}

double evaluate_clustering_error(const EmbeddingModel& model, const Dataset& data, Index k,
                                 Index batch) {
  std::vector<Index> rows;
  for (Index i = 0; i < data.size(); ++i) {
    if (data.labels[i]) rows.push_back(i);
  }
  if (rows.empty()) throw std::invalid_argument("evaluation needs labeled rows");
  if (batch < 1) batch = static_cast<Index>(rows.size());
  double wrong = 0.0;
  double total = 0.0;
  for (std::size_t start = 0; start < rows.size(); start += static_cast<std::size_t>(batch)) {
    const std::size_t end = std::min(rows.size(), start + static_cast<std::size_t>(batch));
    const std::vector<Index> chunk(rows.begin() + static_cast<std::ptrdiff_t>(start),
                                   rows.begin() + static_cast<std::ptrdiff_t>(end));
    const Dataset part = data.subset(chunk);
    std::vector<std::int64_t> labels;
    for (const auto& l : part.labels) labels.push_back(*l);
    const Index m = part.size();
    const ForestSolution sol =
        max_spanning_forest(pairwise_similarity(model.embed(part.features)), std::min(k, m));
    const double entries = static_cast<double>(m * m);
    wrong += clustering_error(sol.membership, membership_from_labels(labels)) * entries;
    total += entries;
  }
  return wrong / total;
}

TrainReport train(TrainState& state, const Dataset& train_data, const Dataset* validation,
                  const TrainConfig& config, const WarningSink& warn) {
  config.validate();
  train_data.validate();
  if (train_data.size() < 1) throw std::invalid_argument("training set is empty");
  if (static_cast<Index>(state.permutation.size()) != train_data.size()) {
    throw std::invalid_argument("training state does not match the dataset size");
  }
  if (validation != nullptr) validation->validate();

  const auto started = std::chrono::steady_clock::now();
  const Index n = train_data.size();
  const Index batch = std::min(config.batch_size, n);
  const Index k = std::min(config.k, batch);
  const Index eval_batch = config.eval_batch_size > 0 ? config.eval_batch_size : config.batch_size;
  const auto labeled = static_cast<Index>(std::llround(config.labeled_fraction * static_cast<double>(batch)));

  TrainReport report;
  report.initial_train_error = evaluate_clustering_error(state.model, train_data, config.k, eval_batch);
  if (validation != nullptr) {
    report.initial_validation_error =
        evaluate_clustering_error(state.model, *validation, config.k, eval_batch);
    if (*report.initial_validation_error == 0.0) report.first_zero_validation_step = state.step;
  }

  std::vector<Index> rows(static_cast<std::size_t>(batch));
  for (Index s = 0; s < config.max_steps; ++s) {
    if (config.stop_at_zero_validation_error && report.first_zero_validation_step) break;
    if (state.cursor + batch > n) {
      std::shuffle(state.permutation.begin(), state.permutation.end(), state.shuffle);
      state.cursor = 0;
    }
    std::copy_n(state.permutation.begin() + state.cursor, batch, rows.begin());
    state.cursor += batch;
    ++state.step;

    const Dataset part = train_data.subset(rows);
    std::vector<std::optional<std::int64_t>> visible = part.labels;
    for (Index p = labeled; p < batch; ++p) visible[p].reset();

    PerturbationConfig pcfg = config.perturbation;
    pcfg.seed = derive_seed(config.perturbation.seed, static_cast<std::uint64_t>(state.step));

    StepRecord rec;
    rec.step = state.step;
    try {
      const WeightGradient wg = loss_and_weight_grad(state.model, part.features,
                                                     partial_from_labeled_subset(visible), k, pcfg,
                                                     config.use_bias);
      rec.loss = wg.loss.value;
      state.optimizer.step(state.model.weights(), wg.grad_w);
    } catch (const InfeasibleConstraints& e) {
      report.skipped_steps.push_back(state.step);
      if (warn) warn("step " + std::to_string(state.step) + ": skipped infeasible batch (" + e.what() + ")");
    }

    if (config.eval_every > 0 && state.step % config.eval_every == 0) {
      rec.train_error = evaluate_clustering_error(state.model, train_data, config.k, eval_batch);
      if (validation != nullptr) {
        rec.validation_error =
            evaluate_clustering_error(state.model, *validation, config.k, eval_batch);
        if (*rec.validation_error == 0.0 && !report.first_zero_validation_step) {
          report.first_zero_validation_step = state.step;
        }
      }
    }
    report.steps.push_back(rec);
  }
  report.final_weights = state.model.weights();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::string trace_csv(const TrainReport& report) {
  std::ostringstream out;
  out << "step,loss,train_error,val_error\n";
  auto field = [&](const std::optional<double>& v) {
    if (v) out << format_double(*v);
  };
  for (const StepRecord& r : report.steps) {
    out << r.step << ',';
    field(r.loss);
    out << ',';
    field(r.train_error);
    out << ',';
    field(r.validation_error);
    out << '\n';
  }
  return out.str();
}

namespace {

json architecture_json(const Architecture& arch) {
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch)) {
    return {{"type", "linear"}, {"input", lin->input}, {"output", lin->output}};
  }
  const auto& mlp = std::get<MlpArchitecture>(arch);
  return {{"type", "mlp"}, {"layers", mlp.layers}, {"activation", to_string(mlp.activation)}};
}

Architecture architecture_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "linear") return LinearArchitecture{j.at("input").get<Index>(), j.at("output").get<Index>()};
  if (type == "mlp") {
    return MlpArchitecture{j.at("layers").get<std::vector<Index>>(),
                           parse_activation(j.at("activation").get<std::string>())};
  }
  throw std::invalid_argument("unknown architecture type '" + type + "'");
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

std::string save_checkpoint(const TrainState& state) {
  const OptimizerConfig& oc = state.optimizer.config();
  std::ostringstream engine;
  engine << state.shuffle;
  json j;
  j["format"] = "spanclust-checkpoint";
  j["version"] = 1;
  j["architecture"] = architecture_json(state.model.architecture());
  j["weights"] = to_std(state.model.weights());
  j["optimizer"] = {{"type", to_string(oc.kind)},
                    {"learning_rate", oc.learning_rate},
                    {"beta1", oc.beta1},
                    {"beta2", oc.beta2},
                    {"epsilon", oc.adam_epsilon},
                    {"weight_decay", oc.weight_decay},
                    {"steps", state.optimizer.steps()},
                    {"m", to_std(state.optimizer.first_moment())},
                    {"v", to_std(state.optimizer.second_moment())}};
  j["sampler"] = {{"step", state.step},
                  {"cursor", state.cursor},
                  {"permutation", state.permutation},
                  {"engine", engine.str()}};
  return j.dump(2) + "\n";
}

TrainState load_checkpoint(const std::string& json_text) {
  const json j = json::parse(json_text);
  if (j.at("format") != "spanclust-checkpoint" || j.at("version") != 1) {
    throw std::invalid_argument("unsupported checkpoint format");
  }
  EmbeddingModel model(architecture_from(j.at("architecture")),
                       to_eigen(j.at("weights").get<std::vector<double>>()));
  const json& o = j.at("optimizer");
  OptimizerConfig oc;
  oc.kind = parse_optimizer(o.at("type").get<std::string>());
  oc.learning_rate = o.at("learning_rate").get<double>();
  oc.beta1 = o.at("beta1").get<double>();
  oc.beta2 = o.at("beta2").get<double>();
  oc.adam_epsilon = o.at("epsilon").get<double>();
  oc.weight_decay = o.at("weight_decay").get<double>();
  Optimizer opt(oc, model.weights().size());
  opt.restore(o.at("steps").get<Index>(), to_eigen(o.at("m").get<std::vector<double>>()),
              to_eigen(o.at("v").get<std::vector<double>>()));
  const json& s = j.at("sampler");
  std::mt19937_64 engine;
  std::istringstream engine_text(s.at("engine").get<std::string>());
  engine_text >> engine;
  if (!engine_text) throw std::invalid_argument("corrupt sampler engine state");
  TrainState state{std::move(model), std::move(opt), engine,
                   s.at("permutation").get<std::vector<Index>>(), s.at("cursor").get<Index>(),
                   s.at("step").get<Index>()};
  return state;
}

}  // namespace spanclust
