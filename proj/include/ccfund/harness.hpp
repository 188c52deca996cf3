// Copyright 2026 The ccfund Authors
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

#ifndef CCFUND_HARNESS_HPP_
#define CCFUND_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ccfund/generators.hpp"
#include "ccfund/heuristics.hpp"

namespace ccfund {

constexpr int kFullScaleInstances = 100'000;

struct ExperimentConfig {
  SamplerConfig sampler;
  std::vector<double> alphas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  // Heuristic played by the deviators. OptWelfare is accepted as a control
  // row (every agent then plays OptWelfare).
  std::vector<Heuristic> heuristics = {
      Heuristic::kSymmetric, Heuristic::kWeighted, Heuristic::kGreedyTheta,
      Heuristic::kGreedyVartheta, Heuristic::kOptWelfare};
  int instances_per_cell = 1000;
  std::uint64_t seed = 1;
  PlayOrder::Mode play_order = PlayOrder::Mode::kAscending;
  // Grid unit for best-response probes; carried in the config, unused by the
  // heuristic play-out itself.
  double delta = 0.01;
  // AU_N baseline thresholds: PPR (default) or the experiment's own scheme.
  bool scheme_matched_baseline = false;
  // 0 = CCFUND_THREADS or hardware concurrency.
  int threads = 0;

  void validate() const;
};

struct CellResult {
  Heuristic heuristic = Heuristic::kOptWelfare;
  double alpha = 0.0;
  int instances = 0;  // included in the means
  double sw_n_mean = 0.0;
  double sw_n_se = 0.0;
  double au_n_mean = 0.0;
  double au_n_se = 0.0;
  std::optional<double> au_n_dev_mean;
  std::optional<double> au_n_nondev_mean;
  int excluded_cells = 0;   // instances with undefined SW_N
  long long excluded_agents = 0;  // agents with a zero AU_N baseline
};

struct ExperimentReport {
  std::vector<CellResult> cells;
  std::uint64_t seed = 0;
  std::string config_hash;

  const CellResult* find(Heuristic h, double alpha) const;
};

// outcome welfare / P* welfare; nullopt when P* welfare <= kTolerance.
std::optional<double> sw_n(const Outcome& outcome, double pstar_welfare);

// U_i / sum_j (theta_ij - x_bar_ij) per agent; nullopt for agents whose
// baseline is <= kTolerance.
std::vector<std::optional<double>> au_n(const Instance& instance,
                                        const Outcome& outcome,
                                        const Matrix& baseline_thresholds);

struct DeviationSplit {
  std::optional<double> deviators;
  std::optional<double> non_deviators;
};

// Means of the defined AU_N values over each class; an empty class is absent.
DeviationSplit deviation_split(const std::vector<std::optional<double>>& au,
                               const std::vector<bool>& deviator_mask);

// Indices of the floor(alpha * n) deviators for one instance. Sets are
// nested in alpha: the same random permutation is truncated.
std::vector<bool> select_deviators(int n, double alpha, std::uint64_t seed);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader =
    "heuristic,alpha,instances,sw_n_mean,sw_n_se,au_n_mean,au_n_se,"
    "au_n_dev_mean,au_n_nondev_mean,excluded_cells,seed";

void write_csv(const ExperimentReport& report, std::ostream& out);

// One JSON file per (heuristic, metric): {"x": alphas, "y": values}.
void emit_series(const ExperimentReport& report, const std::filesystem::path& dir);

// Worker count: explicit value, else CCFUND_THREADS, else hardware.
int resolve_threads(int requested);

}  // namespace ccfund

#endif  // CCFUND_HARNESS_HPP_
