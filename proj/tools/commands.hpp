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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spanclust/datasets.hpp"
#include "spanclust/training.hpp"

namespace spanclust::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInfeasible = 2,
  kVerificationFailed = 3,
};

struct ClusterOptions {
  std::string input;
  /// Treat `input` as a dataset CSV (x0,...,label) instead of a similarity matrix.
  bool features = false;
  Index k = 2;
  std::string constraints;
  bool perturbed = false;
  double epsilon = 0.1;
  Index samples = 1000;
  std::uint64_t seed = 0;
  std::string noise = "gaussian";
  bool use_bias = true;
  std::string output_dir = ".";
  int threads = 0;
};

int cmd_cluster(const ClusterOptions& options, std::ostream& out, std::ostream& err);

struct DatasetSpec {
  std::string kind;  // four_gaussians_denoise | csv | two_moons | circles
  double std_dev = kFourGaussianStd;
  Index noise_dims = 2;
  Index n = 200;
  double noise_std = 0.0;
  double gap = 1.0;
  std::string path;
  std::string validation_path;
};

struct RunConfig {
  std::uint64_t seed = 0;
  DatasetSpec dataset;
  Architecture architecture = LinearArchitecture{};
  TrainConfig train;
  std::string report_path = "report.json";
  std::string checkpoint_path = "checkpoint.json";
  std::string trace_path = "trace.csv";
  std::string resume_from;
};

/// Sets the run seed and the training and noise seeds derived from it.
void reseed(RunConfig& config, std::uint64_t seed);

/// Parses and validates a run configuration; throws std::invalid_argument
/// naming the offending key. Unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);

struct TrainData {
  Dataset train;
  std::optional<Dataset> validation;
};

TrainData build_datasets(const RunConfig& config);

struct TrainArtifacts {
  std::string report_json;
  std::string checkpoint_json;
  std::string trace_csv;
};

/// Runs training in memory. `threads` only affects the Monte-Carlo
/// parallelism; outputs are identical for every value.
TrainArtifacts run_training(const RunConfig& config, int threads, const WarningSink& warn);

struct TrainOptions {
  std::string config;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);

struct GradcheckCliOptions {
  Index n = 6;
  Index k = 2;
  Index instances = 20;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  Index samples = 200;
  double tolerance = 1e-4;
  bool weights = true;
  bool corrupt_gradient = false;
  int threads = 0;
};

int cmd_gradcheck(const GradcheckCliOptions& options, std::ostream& out, std::ostream& err);

struct OracleCliOptions {
  Index trials = 1000;
  Index max_n = 7;
  /// Negative values default to trials / 2 and trials / 5.
  Index constrained_trials = -1;
  Index random_omega_trials = -1;
  std::uint64_t seed = 0;
  bool use_bias = true;
};

int cmd_oracle_check(const OracleCliOptions& options, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::vector<Index> n_list = {16, 32, 64, 128};
  Index k = 4;
  Index samples = 100;
  std::vector<int> thread_list;  // empty: 1 and the default thread count
  std::uint64_t seed = 0;
};

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

}  // namespace spanclust::cli
