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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "spanclust/datasets.hpp"
#include "spanclust/forest_solver.hpp"
#include "spanclust/losses.hpp"
#include "spanclust/perturbed_ops.hpp"
#include "spanclust/verification.hpp"

#ifndef SPANCLUST_CONFIG_DIR
#error "SPANCLUST_CONFIG_DIR must point at the bundled configs"
#endif

namespace {

using namespace spanclust;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome greedy_exactness() {
  const auto start = Clock::now();
  OracleCheckOptions o;
  o.trials = 1000;
  o.max_n = 7;
  o.constrained_trials = 0;
  o.random_omega_trials = 0;
  const OracleCheckReport r = run_oracle_check(o);
  const double secs = since(start);
  return {r.unconstrained_matches == r.unconstrained_trials && secs < 60.0,
          std::to_string(r.unconstrained_matches) + "/" + std::to_string(r.unconstrained_trials) +
              " matrices exact for every k, " + fmt("%.2f s", secs)};
}

Outcome constrained_exactness() {
  OracleCheckOptions o;
  o.trials = 0;
  o.constrained_trials = 500;
  o.random_omega_trials = 0;
  o.use_bias = true;
  const OracleCheckReport biased = run_oracle_check(o);
  o.use_bias = false;
  const OracleCheckReport plain = run_oracle_check(o);
  return {biased.constrained_matches == biased.constrained_trials,
          std::to_string(biased.constrained_matches) + "/500 exact with bias (" +
              std::to_string(biased.constrained_infeasible) + " infeasible), " +
              std::to_string(plain.constrained_matches) + "/500 without bias"};
}

Outcome gradient_fidelity() {
  GradcheckOptions g;  // n=6, k=2, 20 instances, eps 0.1, B 200
  const GradcheckReport s = run_sigma_gradcheck(g);
  WeightGradcheckOptions w;  // Linear model, n=8, 10 coordinates
  const GradcheckReport l = run_weight_gradcheck(w);
  return {s.passed && l.passed && s.instances == 20,
          "sigma max dev " + fmt("%.2e", s.max_deviation) + " over " +
              std::to_string(s.coordinates_checked) + " coords (" +
              std::to_string(s.coordinates_skipped) + " skipped at ties); linear weights max rel dev " +
              fmt("%.2e", l.max_deviation)};
}

Outcome jensen_inequality() {
  std::mt19937_64 rng(2024);
  PerturbationConfig c;
  c.epsilon = 0.1;
  c.samples = 2000;
  Index instances = 0;
  Index violations = 0;
  Index exact_violations = 0;
  Index unbiased_violations = 0;
  double worst = -1e300;
  while (instances < 100) {
    const SimilarityMatrix s = random_similarity(5, rng);
    const PartialMembership p = random_labeled_subset(5, 2, 0.5, rng);
    c.seed = rng();
    JensenGap g;
    try {
      g = jensen_gap_check(s, 2, p, c);
    } catch (const InfeasibleConstraints&) {
      continue;
    }
    ++instances;
    // Rounding floor for instances where every sample picks the same forest.
    const double slack = 3.0 * g.diff_std_error + 1e-9 * (1.0 + std::abs(g.rhs));
    violations += g.lhs > g.rhs + slack;
    exact_violations += g.lhs_exact > g.rhs + slack;
    worst = std::max(worst, g.lhs - g.rhs - slack);
    const JensenGap u = jensen_gap_check(s, 2, p, c, false);
    unbiased_violations += u.lhs > u.rhs + 3.0 * u.diff_std_error + 1e-9 * (1.0 + std::abs(u.rhs));
  }
  return {violations == 0, std::to_string(violations) + "/100 violations beyond 3 SE (" +
                               std::to_string(exact_violations) +
                               " with the exhaustive constrained max, " +
                               std::to_string(unbiased_violations) + " without bias), worst excess " +
                               fmt("%.3g", worst)};
}

Outcome denoising_experiment() {
  const std::string config = read_text(std::filesystem::path(SPANCLUST_CONFIG_DIR) / "linear_denoise.json");
  const auto start = Clock::now();
  int hits = 0;
  std::string steps;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cli::RunConfig rc = cli::parse_run_config(config);
    cli::reseed(rc, seed);
    const auto report = nlohmann::json::parse(cli::run_training(rc, 0, {}).report_json);
    const auto& zero = report.at("first_zero_validation_step");
    const bool ok = !zero.is_null() && zero.get<Index>() <= 500;
    hits += ok;
    steps += (steps.empty() ? "" : ",") + (zero.is_null() ? std::string("never") : zero.dump());
  }
  const double secs = since(start);
  return {hits >= 4 && secs < 600.0, std::to_string(hits) + "/5 seeds reach validation error 0 (at steps " +
                                         steps + "), " + fmt("%.1f s", secs)};
}

Outcome moons_demo() {
  const Dataset d = gen_two_moons(200, 0.0, 0);
  std::vector<std::int64_t> labels;
  for (const auto& l : d.labels) labels.push_back(*l);
  const MembershipMatrix truth = membership_from_labels(labels);
  const double forest =
      clustering_error(max_spanning_forest(pairwise_similarity(d.features), 2).membership, truth);
  const double kmeans = clustering_error(kmeans_baseline(d.features, 2, 10, 0), truth);
  return {forest == 0.0 && kmeans > 0.05,
          "forest error " + fmt("%.4f", forest) + ", k-means error " + fmt("%.4f", kmeans)};
}

Outcome perturbed_consistency() {
  std::mt19937_64 rng(7);
  PerturbationConfig c;
  c.epsilon = 1e-8;
  c.samples = 100;
  int equal = 0;
  for (int t = 0; t < 100; ++t) {
    const SimilarityMatrix s = random_similarity(5, rng);
    c.seed = rng();
    equal += perturbed_forest(s, 2, c).forest.values == max_spanning_forest(s, 2).forest.indicator();
  }
  c.epsilon = 1.0;
  c.samples = 100000;
  c.seed = 11;
  const Matrix f = perturbed_forest(SimilarityMatrix(Matrix::Ones(3, 3)), 2, c).forest.values;
  double dev = 0.0;
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) dev = std::max(dev, std::abs(f(i, j) - 1.0 / 3.0));
  return {equal == 100 && dev <= 0.01, std::to_string(equal) + "/100 hard matches at eps 1e-8; "
                                           "max |freq - 1/3| = " + fmt("%.4f", dev)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  auto j = nlohmann::json::parse(read_text(fs::path(SPANCLUST_CONFIG_DIR) / "linear_denoise.json"));
  j["training"]["max_steps"] = 40;
  j["training"]["stop_at_zero_validation_error"] = false;
  j["seed"] = 3;
  const fs::path dir = fs::temp_directory_path() / "spanclust_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << j.dump(2);

  std::vector<std::string> traces;
  for (int threads : {1, 2, 8}) {
    cli::TrainOptions o;
    o.config = cfg.string();
    o.output_dir = (dir / ("t" + std::to_string(threads))).string();
    o.threads = threads;
    std::ostringstream out;
    std::ostringstream err;
    if (cli::cmd_train(o, out, err) != cli::kOk) return {false, "cmd_train failed: " + err.str()};
    traces.push_back(read_text(fs::path(o.output_dir) / "trace.csv"));
  }
  const bool same = traces[0] == traces[1] && traces[0] == traces[2];
  const auto lines = std::count(traces[0].begin(), traces[0].end(), '\n');
  fs::remove_all(dir);
  return {same && lines == 41, std::string(same ? "identical" : "different") +
                                   " trace CSVs at 1, 2 and 8 threads (" + std::to_string(lines) +
                                   " lines)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"greedy exactness vs brute force", greedy_exactness},
      {"constrained exactness, labeled-subset constraints", constrained_exactness},
      {"gradient fidelity (finite differences)", gradient_fidelity},
      {"Jensen inequality for the smoothed partial loss", jensen_inequality},
      {"four-Gaussian denoising reaches zero validation error", denoising_experiment},
      {"two moons: forest clustering vs k-means", moons_demo},
      {"perturbed operator limits", perturbed_consistency},
      {"training trace determinism across threads", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
