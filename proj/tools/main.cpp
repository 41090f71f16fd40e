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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = spanclust::cli;

int main(int argc, char** argv) {
  CLI::App app{"spanclust: clustering with maximum-weight spanning forests"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Monte-Carlo worker threads (default: SPANCLUST_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  cli::ClusterOptions cluster;
  auto* c = app.add_subcommand("cluster", "Cluster a similarity matrix or feature CSV");
  c->add_option("--input", cluster.input, "Similarity matrix CSV (or dataset CSV with --features)")
      ->required();
  c->add_flag("--features", cluster.features, "Input is x0,...,label rows; use -||x_i - x_j||^2");
  c->add_option("--k", cluster.k, "Number of clusters")->required();
  c->add_option("--constraints", cluster.constraints, "Partial membership CSV (0, 1 or *)");
  c->add_flag("--perturbed", cluster.perturbed, "Also write Monte-Carlo soft outputs");
  c->add_option("--epsilon", cluster.epsilon, "Noise scale");
  c->add_option("--samples", cluster.samples, "Monte-Carlo samples");
  c->add_option("--seed", cluster.seed, "Noise seed");
  c->add_option("--noise", cluster.noise, "gaussian or logistic");
  c->add_flag("!--no-bias", cluster.use_bias, "Do not bias constrained pairs");
  c->add_option("--output-dir", cluster.output_dir, "Where to write outputs");

  cli::TrainOptions train;
  std::uint64_t train_seed = 0;
  auto* t = app.add_subcommand("train", "Train an embedding model from a JSON run config");
  t->add_option("--config", train.config, "Run configuration JSON")->required();
  t->add_option("--output-dir", train.output_dir, "Base directory for relative output paths");
  auto* seed_opt = t->add_option("--seed", train_seed, "Override the config seed");

  cli::GradcheckCliOptions grad;
  auto* g = app.add_subcommand("gradcheck", "Finite-difference check of the loss gradient");
  g->add_option("--n", grad.n);
  g->add_option("--k", grad.k);
  g->add_option("--instances", grad.instances);
  g->add_option("--seed", grad.seed);
  g->add_option("--epsilon", grad.epsilon);
  g->add_option("--samples", grad.samples);
  g->add_option("--tolerance", grad.tolerance);
  g->add_flag("!--no-weights", grad.weights, "Skip the check through the linear model");
  g->add_flag("--corrupt-gradient", grad.corrupt_gradient)->group("");  // test hook

  cli::OracleCliOptions oracle;
  auto* o = app.add_subcommand("oracle-check", "Greedy solvers against brute-force enumeration");
  o->add_option("--trials", oracle.trials);
  o->add_option("--max-n", oracle.max_n);
  o->add_option("--constrained-trials", oracle.constrained_trials, "Default: trials / 2");
  o->add_option("--random-omega-trials", oracle.random_omega_trials, "Default: trials / 5");
  o->add_option("--seed", oracle.seed);
  o->add_flag("!--no-bias", oracle.use_bias);

  cli::BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Timing table for the solver and perturbed operator");
  b->add_option("--n-list", bench.n_list)->delimiter(',');
  b->add_option("--k", bench.k);
  b->add_option("--samples", bench.samples);
  b->add_option("--thread-list", bench.thread_list)->delimiter(',');
  b->add_option("--seed", bench.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  if (*c) {
    cluster.threads = threads;
    return cli::cmd_cluster(cluster, std::cout, std::cerr);
  }
  if (*t) {
    train.threads = threads;
    if (*seed_opt) train.seed = train_seed;
    return cli::cmd_train(train, std::cout, std::cerr);
  }
  if (*g) {
    grad.threads = threads;
    return cli::cmd_gradcheck(grad, std::cout, std::cerr);
  }
  if (*o) return cli::cmd_oracle_check(oracle, std::cout, std::cerr);
  return cli::cmd_bench(bench, std::cout, std::cerr);
}
