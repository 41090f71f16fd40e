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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spanclust/csv.hpp"
#include "spanclust/forest_solver.hpp"
#include "spanclust/parallel.hpp"
#include "spanclust/perturbed_ops.hpp"
#include "spanclust/rng.hpp"
#include "spanclust/verification.hpp"

namespace spanclust::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InfeasibleConstraints& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

// Accessor over one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw std::invalid_argument(where_ + " must be a JSON object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw std::invalid_argument(where_ + "." + key + " is required");
    return convert<T>(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw std::invalid_argument(where_ + "." + key + " is required");
    return Section(j_.at(key), where_ + "." + key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw std::invalid_argument("unknown key " + where_ + "." + item.key());
      }
    }
  }

 private:
  template <class T>
  T convert(const std::string& key) const {
    const json& v = j_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw std::invalid_argument(where_ + "." + key + " must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        throw std::invalid_argument(where_ + "." + key + " must be an integer");
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned()) {
          throw std::invalid_argument(where_ + "." + key + " must be non-negative");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw std::invalid_argument(where_ + "." + key + " must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw std::invalid_argument(where_ + "." + key + " must be a string");
    }
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(where_ + "." + key + " has the wrong type");
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json architecture_to_json(const Architecture& arch) {
  if (const auto* lin = std::get_if<LinearArchitecture>(&arch)) {
    return {{"type", "linear"}, {"input", lin->input}, {"output", lin->output}};
  }
  const auto& mlp = std::get<MlpArchitecture>(arch);
  return {{"type", "mlp"}, {"layers", mlp.layers}, {"activation", to_string(mlp.activation)}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void reseed(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.train.seed = derive_seed(seed, 300);
  config.train.perturbation.seed = derive_seed(seed, 400);
}

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig rc;
  Section top(root, "config");
  rc.seed = top.get<std::uint64_t>("seed", 0);
  rc.resume_from = top.get<std::string>("resume_from", "");

  {
    Section d = top.child("dataset");
    DatasetSpec& ds = rc.dataset;
    ds.kind = d.get<std::string>("kind");
    if (ds.kind == "four_gaussians_denoise") {
      ds.std_dev = d.get<double>("std", kFourGaussianStd);
      ds.noise_dims = d.get<Index>("noise_dims", 2);
      if (ds.noise_dims < 1) throw std::invalid_argument("dataset.noise_dims must be >= 1");
      if (!(ds.std_dev >= 0.0)) throw std::invalid_argument("dataset.std must be >= 0");
    } else if (ds.kind == "csv") {
      ds.path = d.get<std::string>("path");
      ds.validation_path = d.get<std::string>("validation_path", "");
    } else if (ds.kind == "two_moons" || ds.kind == "circles") {
      ds.n = d.get<Index>("n", 200);
      ds.noise_std = d.get<double>("noise_std", 0.0);
      if (ds.kind == "circles") ds.gap = d.get<double>("gap", 1.0);
      if (ds.n < 4 || ds.n % 2 != 0) throw std::invalid_argument("dataset.n must be even and >= 4");
    } else {
      throw std::invalid_argument("dataset.kind '" + ds.kind + "' is not one of "
                                  "four_gaussians_denoise, csv, two_moons, circles");
    }
    d.finish();
  }

  {
    Section m = top.child("model");
    const std::string type = m.get<std::string>("type");
    if (type == "linear") {
      rc.architecture = LinearArchitecture{m.get<Index>("input"), m.get<Index>("output")};
    } else if (type == "mlp") {
      MlpArchitecture mlp;
      mlp.layers = m.get<std::vector<Index>>("layers");
      mlp.activation = parse_activation(m.get<std::string>("activation", "relu"));
      rc.architecture = mlp;
    } else {
      throw std::invalid_argument("model.type '" + type + "' is not linear or mlp");
    }
    (void)parameter_count(rc.architecture);  // validates dimensions
    m.finish();
  }

  TrainConfig& tc = rc.train;
  {
    Section t = top.child("training");
    tc.k = t.get<Index>("k", tc.k);
    tc.batch_size = t.get<Index>("batch_size", tc.batch_size);
    tc.max_steps = t.get<Index>("max_steps", tc.max_steps);
    tc.eval_every = t.get<Index>("eval_every", tc.eval_every);
    tc.eval_batch_size = t.get<Index>("eval_batch_size", tc.eval_batch_size);
    tc.labeled_fraction = t.get<double>("labeled_fraction", tc.labeled_fraction);
    tc.use_bias = t.get<bool>("use_bias", tc.use_bias);
    tc.stop_at_zero_validation_error =
        t.get<bool>("stop_at_zero_validation_error", tc.stop_at_zero_validation_error);
    t.finish();
  }
  if (top.has("optimizer")) {
    Section o = top.child("optimizer");
    OptimizerConfig& oc = tc.optimizer;
    oc.kind = parse_optimizer(o.get<std::string>("type", to_string(oc.kind)));
    oc.learning_rate = o.get<double>("learning_rate", oc.learning_rate);
    oc.beta1 = o.get<double>("beta1", oc.beta1);
    oc.beta2 = o.get<double>("beta2", oc.beta2);
    oc.adam_epsilon = o.get<double>("epsilon", oc.adam_epsilon);
    oc.weight_decay = o.get<double>("weight_decay", oc.weight_decay);
    o.finish();
  }
  if (top.has("perturbation")) {
    Section p = top.child("perturbation");
    PerturbationConfig& pc = tc.perturbation;
    pc.epsilon = p.get<double>("epsilon", pc.epsilon);
    pc.samples = p.get<Index>("samples", pc.samples);
    pc.noise = parse_noise_law(p.get<std::string>("noise", to_string(pc.noise)));
    pc.coupled = p.get<bool>("coupled", pc.coupled);
    p.finish();
  }
  if (top.has("output")) {
    Section o = top.child("output");
    rc.report_path = o.get<std::string>("report", rc.report_path);
    rc.checkpoint_path = o.get<std::string>("checkpoint", rc.checkpoint_path);
    rc.trace_path = o.get<std::string>("trace", rc.trace_path);
    o.finish();
  }
  top.finish();

  reseed(rc, rc.seed);
  tc.validate();
  return rc;
}

TrainData build_datasets(const RunConfig& config) {
  const DatasetSpec& ds = config.dataset;
  const std::uint64_t s = derive_seed(config.seed, 100);
  TrainData out;
  if (ds.kind == "four_gaussians_denoise") {
    // Targets are the 4-forest clustering of the clean signal; the validation
    // set is generated independently in exactly the same way.
    auto make = [&](std::uint64_t a, std::uint64_t b) {
      Dataset signal = gen_four_gaussians(derive_seed(s, a), ds.std_dev);
      const auto clusters =
          max_spanning_forest(pairwise_similarity(signal.features), 4).membership.assignment();
      for (Index i = 0; i < signal.size(); ++i) signal.labels[i] = clusters[i];
      return append_noise_dims(signal, ds.noise_dims, derive_seed(s, b));
    };
    out.train = make(0, 1);
    out.validation = make(2, 3);
  } else if (ds.kind == "csv") {
    std::ifstream in(ds.path);
    if (!in) throw std::runtime_error("cannot open dataset '" + ds.path + "'");
    out.train = read_dataset_csv(in, ds.path);
    if (!ds.validation_path.empty()) {
      std::ifstream vin(ds.validation_path);
      if (!vin) throw std::runtime_error("cannot open dataset '" + ds.validation_path + "'");
      out.validation = read_dataset_csv(vin, ds.validation_path);
    }
  } else if (ds.kind == "two_moons") {
    out.train = gen_two_moons(ds.n, ds.noise_std, derive_seed(s, 0));
    out.validation = gen_two_moons(ds.n, ds.noise_std, derive_seed(s, 2));
  } else {
    out.train = gen_circles(ds.n, ds.gap, derive_seed(s, 0), ds.noise_std);
    out.validation = gen_circles(ds.n, ds.gap, derive_seed(s, 2), ds.noise_std);
  }
  return out;
}

TrainArtifacts run_training(const RunConfig& config, int threads, const WarningSink& warn) {
  TrainData data = build_datasets(config);
  TrainConfig tc = config.train;
  tc.perturbation.threads = threads;

  std::optional<TrainState> state;
  if (!config.resume_from.empty()) {
    state = load_checkpoint(read_file(config.resume_from));
    if (!(state->model.architecture() == config.architecture)) {
      throw std::invalid_argument("checkpoint architecture differs from the config");
    }
  } else {
    EmbeddingModel model(config.architecture);
    model.initialize(derive_seed(config.seed, 200));
    state = TrainState::fresh(std::move(model), tc, data.train.size());
  }
  if (state->model.input_dim() != data.train.dims()) {
    throw std::invalid_argument("model input dimension " + std::to_string(state->model.input_dim()) +
                                " does not match dataset dimension " +
                                std::to_string(data.train.dims()));
  }

  const TrainReport report =
      train(*state, data.train, data.validation ? &*data.validation : nullptr, tc, warn);

  json j;
  j["architecture"] = architecture_to_json(config.architecture);
  j["steps_run"] = report.steps.size();
  j["final_step"] = state->step;
  j["initial_train_error"] = report.initial_train_error;
  j["initial_validation_error"] = optional_json(report.initial_validation_error);
  std::optional<double> last_train;
  std::optional<double> last_val;
  json losses = json::array();
  for (const StepRecord& r : report.steps) {
    losses.push_back(optional_json(r.loss));
    if (r.train_error) last_train = r.train_error;
    if (r.validation_error) last_val = r.validation_error;
  }
  j["final_train_error"] = optional_json(last_train ? last_train : report.initial_train_error);
  j["final_validation_error"] =
      optional_json(last_val ? last_val : report.initial_validation_error);
  j["first_zero_validation_step"] =
      report.first_zero_validation_step ? json(*report.first_zero_validation_step) : json(nullptr);
  j["skipped_steps"] = report.skipped_steps;
  j["losses"] = losses;
  j["final_weights"] =
      std::vector<double>(report.final_weights.data(),
                          report.final_weights.data() + report.final_weights.size());
  j["wall_seconds"] = report.wall_seconds;

  return {j.dump(2) + "\n", save_checkpoint(*state), trace_csv(report)};
}

int cmd_cluster(const ClusterOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open '" + o.input + "'");
    const SimilarityMatrix sigma = o.features ? pairwise_similarity(read_dataset_csv(in).features)
                                              : SimilarityMatrix(read_matrix_csv(in));
    const Index n = sigma.size();
    if (o.k < 1 || o.k > n) {
      throw std::invalid_argument("k must lie in [1, " + std::to_string(n) + "]");
    }
    std::optional<PartialMembership> partial;
    if (!o.constraints.empty()) {
      std::ifstream cin(o.constraints);
      if (!cin) throw std::runtime_error("cannot open '" + o.constraints + "'");
      partial = read_partial_csv(cin);
      if (partial->size() != n) throw std::invalid_argument("constraints size differs from input");
    }

    const ForestSolution sol = partial
                                   ? constrained_max_spanning_forest(sigma, o.k, *partial, o.use_bias)
                                   : max_spanning_forest(sigma, o.k);
    const fs::path dir(o.output_dir);
    std::ostringstream membership;
    write_membership_csv(membership, sol.membership);
    write_file(dir / "membership.csv", membership.str());
    std::ostringstream edges;
    write_edges_csv(edges, sol.forest, sigma.values());
    write_file(dir / "edges.csv", edges.str());

    json summary = {{"n", n}, {"k", o.k}, {"value", sol.value}, {"constrained", partial.has_value()}};
    if (o.perturbed) {
      PerturbationConfig pc;
      pc.epsilon = o.epsilon;
      pc.samples = o.samples;
      pc.seed = o.seed;
      pc.noise = parse_noise_law(o.noise);
      pc.threads = o.threads;
      pc.validate();
      const PerturbedForest pf = partial
                                     ? perturbed_constrained_forest(sigma, o.k, *partial, pc, o.use_bias)
                                     : perturbed_forest(sigma, o.k, pc);
      const SoftMembership sm =
          perturbed_membership(sigma, o.k, pc, partial ? &*partial : nullptr, o.use_bias);
      std::ostringstream sf;
      write_matrix_csv(sf, pf.forest.values);
      write_file(dir / "soft_forest.csv", sf.str());
      std::ostringstream smem;
      write_matrix_csv(smem, sm.values);
      write_file(dir / "soft_membership.csv", smem.str());
      summary["perturbed_value"] = pf.value;
      summary["perturbed_value_std_error"] = pf.value_std_error;
      summary["epsilon"] = o.epsilon;
      summary["samples"] = o.samples;
    }
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    out << "value " << format_double(sol.value) << '\n';
    return int{kOk};
  });
}

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc = parse_run_config(read_file(o.config));
    if (o.seed) reseed(rc, *o.seed);
    const TrainArtifacts a =
        run_training(rc, o.threads, [&](const std::string& msg) { err << "warning: " << msg << '\n'; });
    const fs::path dir(o.output_dir);
    write_file(dir / rc.report_path, a.report_json);
    write_file(dir / rc.checkpoint_path, a.checkpoint_json);
    write_file(dir / rc.trace_path, a.trace_csv);
    const json report = json::parse(a.report_json);
    out << "steps " << report.at("steps_run") << ", final validation error "
        << report.at("final_validation_error") << '\n';
    return int{kOk};
  });
}

int cmd_gradcheck(const GradcheckCliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    GradcheckOptions g;
    g.n = o.n;
    g.k = o.k;
    g.instances = o.instances;
    g.seed = o.seed;
    g.epsilon = o.epsilon;
    g.samples = o.samples;
    g.tolerance = o.tolerance;
    g.threads = o.threads;
    g.corrupt_gradient = o.corrupt_gradient;
    if (g.k < 1 || g.k > g.n) throw std::invalid_argument("k must lie in [1, n]");
    const GradcheckReport sigma = run_sigma_gradcheck(g);
    json j = {{"sigma",
               {{"instances", sigma.instances},
                {"coordinates_checked", sigma.coordinates_checked},
                {"coordinates_skipped", sigma.coordinates_skipped},
                {"max_deviation", sigma.max_deviation},
                {"passed", sigma.passed}}}};
    bool ok = sigma.passed;
    if (o.weights) {
      WeightGradcheckOptions w;
      w.k = o.k;
      w.seed = o.seed;
      w.epsilon = o.epsilon;
      w.samples = o.samples;
      w.tolerance = o.tolerance;
      w.threads = o.threads;
      const GradcheckReport wr = run_weight_gradcheck(w);
      j["linear_weights"] = {{"coordinates_checked", wr.coordinates_checked},
                             {"coordinates_skipped", wr.coordinates_skipped},
                             {"max_relative_deviation", wr.max_deviation},
                             {"passed", wr.passed}};
      ok = ok && wr.passed;
    }
    j["passed"] = ok;
    out << j.dump(2) << '\n';
    return int{ok ? kOk : kVerificationFailed};
  });
}

int cmd_oracle_check(const OracleCliOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.trials < 0) throw std::invalid_argument("trials must be >= 0");
    OracleCheckOptions opt;
    opt.trials = o.trials;
    opt.max_n = o.max_n;
    opt.constrained_trials = o.constrained_trials >= 0 ? o.constrained_trials : o.trials / 2;
    opt.random_omega_trials = o.random_omega_trials >= 0 ? o.random_omega_trials : o.trials / 5;
    opt.seed = o.seed;
    opt.use_bias = o.use_bias;
    const OracleCheckReport r = run_oracle_check(opt);
    json j = {
        {"unconstrained", {{"trials", r.unconstrained_trials}, {"exact", r.unconstrained_matches}}},
        {"constrained_labeled_subset",
         {{"trials", r.constrained_trials},
          {"exact", r.constrained_matches},
          {"infeasible", r.constrained_infeasible}}},
        {"random_omega",
         {{"trials", r.random_omega_trials},
          {"optimal", r.random_omega_equal},
          {"suboptimal", r.random_omega_below},
          {"both_infeasible", r.random_omega_infeasible},
          {"greedy_failed", r.random_omega_greedy_failed},
          {"max_gap", r.random_omega_max_gap}}},
        {"mismatches", r.mismatches},
        {"passed", r.passed()}};
    out << j.dump(2) << '\n';
    return int{r.passed() ? kOk : kVerificationFailed};
  });
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<int> threads = o.thread_list;
    if (threads.empty()) {
      threads = {1};
      const int def = resolve_threads(0);
      if (def != 1) threads.push_back(def);
    }
    using Clock = std::chrono::steady_clock;
    auto seconds = [](Clock::time_point a) {
      return std::chrono::duration<double>(Clock::now() - a).count();
    };
    std::mt19937_64 rng(o.seed);
    out << "n,threads,solve_seconds,perturbed_seconds\n";
    for (Index n : o.n_list) {
      if (n < 1) throw std::invalid_argument("n-list entries must be >= 1");
      const Index k = std::min(o.k, n);
      const SimilarityMatrix sigma = random_similarity(n, rng);
      for (int t : threads) {
        const Index reps = 20;
        auto start = Clock::now();
        for (Index r = 0; r < reps; ++r) (void)max_spanning_forest(sigma, k);
        const double solve = seconds(start) / static_cast<double>(reps);
        PerturbationConfig pc;
        pc.samples = o.samples;
        pc.seed = o.seed;
        pc.threads = t;
        start = Clock::now();
        (void)perturbed_forest(sigma, k, pc);
        const double perturbed = seconds(start);
        out << n << ',' << t << ',' << format_double(solve) << ',' << format_double(perturbed)
            << '\n';
      }
    }
    return int{kOk};
  });
}

}  // namespace spanclust::cli
