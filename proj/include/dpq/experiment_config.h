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

// Benchmark configuration and its text format.
//
// A config file holds one `key = value` pair per line. Blank lines and lines
// starting with '#' are ignored. Keys:
//
//   version        must be 1; required
//   distributions  ';'-separated list, e.g. beta(2,5); uniform
//   n              sample size
//   epsilon        total privacy budget
//   relation       add-remove | replace
//   m_grid         ','-separated numbers of orders (grid = paper only)
//   trials         Monte-Carlo trials per cell
//   bins           histogram bin count
//   seed           base seed
//   grid           paper | explicit
//   orders         ','-separated orders (grid = explicit only)
//   estimators     ','-separated subset of indexp, recexp, histogram
//   threads        worker threads, 0 for one per hardware thread
//
// Unknown or repeated keys are errors, so a typo cannot silently fall back
// to a default.

#ifndef DPQ_EXPERIMENT_CONFIG_H_
#define DPQ_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpq/distributions.h"
#include "dpq/mechanisms.h"

namespace dpq {

enum class EstimatorKind { kIndExp, kRecExp, kHistogram };

// "indexp", "recexp" or "histogram".
absl::string_view EstimatorKindName(EstimatorKind kind);
absl::StatusOr<EstimatorKind> ParseEstimatorKind(absl::string_view name);

enum class GridRule {
  // p_j = 1/4 + j / (2 (m + 1)) for j = 1..m, for each m in m_grid.
  kPaper,
  // A single fixed list of orders.
  kExplicit,
};

inline constexpr int kConfigVersion = 1;

struct ExperimentConfig {
  int version = kConfigVersion;
  std::vector<DistributionOracle> distributions;
  int64_t n = 10000;
  double epsilon = 0.1;
  NeighboringRelation relation = NeighboringRelation::kReplace;
  std::vector<int> m_grid;
  int trials = 50;
  int bins = 200;
  uint64_t seed = 1;
  GridRule grid = GridRule::kPaper;
  std::vector<double> orders;
  std::vector<EstimatorKind> estimators = {
      EstimatorKind::kIndExp, EstimatorKind::kRecExp, EstimatorKind::kHistogram};
  // Scheduling only; results do not depend on it.
  int threads = 0;
};

// Paper grid with m orders, all inside [1/4, 3/4].
std::vector<double> PaperGrid(int m);

// The m values that index the cells of an experiment: m_grid for the paper
// rule, the single value orders.size() for the explicit rule.
std::vector<int> CellOrderCounts(const ExperimentConfig& config);

// Orders used by a cell with m orders.
std::vector<double> OrdersForCell(const ExperimentConfig& config, int m);

absl::Status ValidateExperimentConfig(const ExperimentConfig& config);

// Errors name the line and the key.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);

// Text form that parses back to an equal config.
std::string SerializeExperimentConfig(const ExperimentConfig& config);

}  // namespace dpq

#endif  // DPQ_EXPERIMENT_CONFIG_H_
