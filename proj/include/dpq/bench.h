//
// Copyright 2026 The dpq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Monte-Carlo comparison of the quantile estimators against true quantiles.

#ifndef DPQ_BENCH_H_
#define DPQ_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpq/distributions.h"
#include "dpq/experiment_config.h"
#include "dpq/random_source.h"

namespace dpq {

// Runs one estimator on the given orders and returns its estimates.
absl::StatusOr<std::vector<double>> RunEstimator(EstimatorKind estimator,
                                                 const SortedSample& sample,
                                                 std::vector<double> orders,
                                                 double epsilon,
                                                 NeighboringRelation relation,
                                                 int bins, RandomSource& rng);

// Draws a fresh sample of size config.n from `oracle`, estimates the cell's
// orders for m and returns max_j |q_hat_j - F^{-1}(p_j)|.
absl::StatusOr<double> RunTrial(const DistributionOracle& oracle,
                                EstimatorKind estimator, int m,
                                const ExperimentConfig& config,
                                RandomSource& rng);

// Generator of one trial: the base seed's child chain over the distribution
// index, the estimator id, the cell's m and the trial index. Neither the
// scheduling nor the other cells of the grid affect it.
RandomSource TrialRandomSource(uint64_t base_seed, int distribution_index,
                               EstimatorKind estimator, int m, int trial);

struct CellResult {
  int distribution_index = 0;
  std::string distribution;
  EstimatorKind estimator = EstimatorKind::kRecExp;
  int m = 0;
  double mean_error = 0.0;
  // Sample standard deviation over sqrt(trials); 0 for a single trial.
  double std_error = 0.0;
  int trials = 0;
  // Sum of the trial run times. Reported in the JSON summary only.
  double wall_seconds = 0.0;
  // Per-trial errors in trial order.
  std::vector<double> errors;
};

struct ExperimentResult {
  ExperimentConfig config;
  // Ordered by distribution, then m, then estimator in config order.
  std::vector<CellResult> cells;
  double total_wall_seconds = 0.0;
};

// Runs every (distribution, estimator, m) cell. Trials run on
// config.threads workers (0: hardware concurrency); the aggregated values
// do not depend on the thread count. A failing trial aborts the run and the
// error names its cell and trial.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

// CSV for one distribution with header m,estimator,mean_error,std_error,trials.
std::string CellsCsv(const ExperimentResult& result, int distribution_index);

// JSON summary with the config, the seed rule and every cell.
std::string SummaryJson(const ExperimentResult& result);

// Writes <label>.csv per distribution and summary.json into `directory`,
// creating it if needed. Returns the written paths.
absl::StatusOr<std::vector<std::string>> WriteBenchOutputs(
    const ExperimentResult& result, const std::string& directory);

}  // namespace dpq

#endif  // DPQ_BENCH_H_
