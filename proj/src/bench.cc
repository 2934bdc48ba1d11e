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

#include "dpq/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpq/histogram.h"
#include "dpq/quantiles.h"
#include "json.hpp"

namespace dpq {
namespace {

using Clock = std::chrono::steady_clock;

struct Cell {
  int distribution_index;
  EstimatorKind estimator;
  int m;
  std::vector<double> orders;
  std::vector<double> truth;
};

struct TrialOutcome {
  absl::Status status;
  double error = 0.0;
  double seconds = 0.0;
};

absl::StatusOr<std::vector<double>> TrueQuantiles(
    const DistributionOracle& oracle, const std::vector<double>& orders) {
  std::vector<double> truth;
  truth.reserve(orders.size());
  for (double p : orders) {
    absl::StatusOr<double> q = oracle.Quantile(p);
    if (!q.ok()) return q.status();
    truth.push_back(*q);
  }
  return truth;
}

absl::StatusOr<double> SupError(EstimatorKind estimator,
                                const DistributionOracle& oracle,
                                const std::vector<double>& orders,
                                const std::vector<double>& truth,
                                const ExperimentConfig& config,
                                RandomSource& rng) {
  const SortedSample sample = oracle.Sample(config.n, rng);
  absl::StatusOr<std::vector<double>> estimates =
      RunEstimator(estimator, sample, orders, config.epsilon, config.relation,
                   config.bins, rng);
  if (!estimates.ok()) return estimates.status();
  double error = 0.0;
  for (size_t j = 0; j < truth.size(); ++j) {
    error = std::max(error, std::fabs((*estimates)[j] - truth[j]));
  }
  return error;
}

std::string FormatReal(double x) { return absl::StrFormat("%.17g", x); }

}  // namespace

absl::StatusOr<std::vector<double>> RunEstimator(EstimatorKind estimator,
                                                 const SortedSample& sample,
                                                 std::vector<double> orders,
                                                 double epsilon,
                                                 NeighboringRelation relation,
                                                 int bins, RandomSource& rng) {
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(epsilon, relation);
  if (!budget.ok()) return budget.status();
  absl::StatusOr<QuantileQuery> query =
      QuantileQuery::Create(std::move(orders), *budget);
  if (!query.ok()) return query.status();
  switch (estimator) {
    case EstimatorKind::kIndExp:
      return IndExp(sample, *query, rng);
    case EstimatorKind::kRecExp:
      return RecExp(sample, *query, rng);
    case EstimatorKind::kHistogram:
      return QuantilesFromHistogram(sample, bins, *query, rng);
  }
  return absl::InternalError("Unhandled estimator");
}

absl::StatusOr<double> RunTrial(const DistributionOracle& oracle,
                                EstimatorKind estimator, int m,
                                const ExperimentConfig& config,
                                RandomSource& rng) {
  const std::vector<double> orders = OrdersForCell(config, m);
  absl::StatusOr<std::vector<double>> truth = TrueQuantiles(oracle, orders);
  if (!truth.ok()) return truth.status();
  return SupError(estimator, oracle, orders, *truth, config, rng);
}

RandomSource TrialRandomSource(uint64_t base_seed, int distribution_index,
                               EstimatorKind estimator, int m, int trial) {
  return RandomSource(base_seed)
      .Child(static_cast<uint64_t>(distribution_index))
      .Child(static_cast<uint64_t>(estimator))
      .Child(static_cast<uint64_t>(m))
      .Child(static_cast<uint64_t>(trial));
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) return s;
  const auto start = Clock::now();

  std::vector<Cell> cells;
  for (size_t d = 0; d < config.distributions.size(); ++d) {
    for (int m : CellOrderCounts(config)) {
      std::vector<double> orders = OrdersForCell(config, m);
      absl::StatusOr<std::vector<double>> truth =
          TrueQuantiles(config.distributions[d], orders);
      if (!truth.ok()) return truth.status();
      for (EstimatorKind estimator : config.estimators) {
        cells.push_back(Cell{static_cast<int>(d), estimator, m, orders, *truth});
      }
    }
  }

  const size_t trials = static_cast<size_t>(config.trials);
  const size_t total = cells.size() * trials;
  std::vector<TrialOutcome> outcomes(total);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const size_t task = next.fetch_add(1);
      if (task >= total) return;
      const Cell& cell = cells[task / trials];
      const int trial = static_cast<int>(task % trials);
      RandomSource rng = TrialRandomSource(
          config.seed, cell.distribution_index, cell.estimator, cell.m, trial);
      const auto trial_start = Clock::now();
      absl::StatusOr<double> error =
          SupError(cell.estimator, config.distributions[cell.distribution_index],
                   cell.orders, cell.truth, config, rng);
      TrialOutcome& outcome = outcomes[task];
      outcome.seconds =
          std::chrono::duration<double>(Clock::now() - trial_start).count();
      if (error.ok()) {
        outcome.error = *error;
      } else {
        outcome.status = error.status();
        failed.store(true);
      }
    }
  };
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const size_t thread_count = std::min<size_t>(
      config.threads > 0 ? static_cast<size_t>(config.threads) : hardware,
      std::max<size_t>(total, 1));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(thread_count);
    for (size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  }

  // Report the earliest failed trial among those that ran.
  for (size_t task = 0; task < total; ++task) {
    const absl::Status& status = outcomes[task].status;
    if (status.ok()) continue;
    const Cell& cell = cells[task / trials];
    return absl::Status(
        status.code(),
        absl::StrFormat("%s / %s / m=%d / trial %d: %s",
                        config.distributions[cell.distribution_index].Name(),
                        EstimatorKindName(cell.estimator), cell.m,
                        task % trials, status.message()));
  }

  ExperimentResult result;
  result.config = config;
  result.cells.reserve(cells.size());
  for (size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    CellResult cell_result{
        .distribution_index = cell.distribution_index,
        .distribution = config.distributions[cell.distribution_index].Name(),
        .estimator = cell.estimator,
        .m = cell.m,
        .trials = config.trials,
        .errors = {}};
    double sum = 0.0;
    for (size_t t = 0; t < trials; ++t) {
      const TrialOutcome& outcome = outcomes[c * trials + t];
      cell_result.errors.push_back(outcome.error);
      cell_result.wall_seconds += outcome.seconds;
      sum += outcome.error;
    }
    const double mean = sum / config.trials;
    double squares = 0.0;
    for (double e : cell_result.errors) squares += (e - mean) * (e - mean);
    cell_result.mean_error = mean;
    cell_result.std_error =
        config.trials > 1
            ? std::sqrt(squares / (config.trials - 1) / config.trials)
            : 0.0;
    result.cells.push_back(std::move(cell_result));
  }
  result.total_wall_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

std::string CellsCsv(const ExperimentResult& result, int distribution_index) {
  std::string csv = "m,estimator,mean_error,std_error,trials\n";
  for (const CellResult& cell : result.cells) {
    if (cell.distribution_index != distribution_index) continue;
    absl::StrAppend(&csv, cell.m, ",", EstimatorKindName(cell.estimator), ",",
                    FormatReal(cell.mean_error), ",",
                    FormatReal(cell.std_error), ",", cell.trials, "\n");
  }
  return csv;
}

std::string SummaryJson(const ExperimentResult& result) {
  using nlohmann::ordered_json;
  const ExperimentConfig& config = result.config;
  ordered_json json;
  ordered_json config_json;
  config_json["version"] = config.version;
  config_json["distributions"] = ordered_json::array();
  for (const DistributionOracle& d : config.distributions) {
    config_json["distributions"].push_back(d.Name());
  }
  config_json["n"] = config.n;
  config_json["epsilon"] = config.epsilon;
  config_json["relation"] = std::string(RelationName(config.relation));
  config_json["grid"] = config.grid == GridRule::kPaper ? "paper" : "explicit";
  config_json["m_grid"] = config.m_grid;
  config_json["orders"] = config.orders;
  config_json["trials"] = config.trials;
  config_json["bins"] = config.bins;
  config_json["seed"] = config.seed;
  config_json["estimators"] = ordered_json::array();
  for (EstimatorKind kind : config.estimators) {
    config_json["estimators"].push_back(std::string(EstimatorKindName(kind)));
  }
  config_json["threads"] = config.threads;
  json["config"] = config_json;
  json["config_text"] = SerializeExperimentConfig(config);
  json["seed_rule"] =
      "trial generator = RandomSource(seed).Child(distribution_index)"
      ".Child(estimator_id).Child(m).Child(trial); estimator_id: indexp=0, "
      "recexp=1, histogram=2";
  ordered_json cells = ordered_json::array();
  for (const CellResult& cell : result.cells) {
    ordered_json entry;
    entry["distribution"] = cell.distribution;
    entry["distribution_index"] = cell.distribution_index;
    entry["estimator"] = std::string(EstimatorKindName(cell.estimator));
    entry["estimator_id"] = static_cast<int>(cell.estimator);
    entry["m"] = cell.m;
    entry["mean_error"] = cell.mean_error;
    entry["std_error"] = cell.std_error;
    entry["trials"] = cell.trials;
    entry["wall_seconds"] = cell.wall_seconds;
    entry["errors"] = cell.errors;
    cells.push_back(std::move(entry));
  }
  json["cells"] = std::move(cells);
  json["total_wall_seconds"] = result.total_wall_seconds;
  return json.dump(2) + "\n";
}

absl::StatusOr<std::vector<std::string>> WriteBenchOutputs(
    const ExperimentResult& result, const std::string& directory) {
  std::error_code error;
  std::filesystem::create_directories(directory, error);
  if (error) {
    return absl::InternalError(absl::StrCat("Cannot create directory ",
                                            directory, ": ", error.message()));
  }
  std::vector<std::string> written;
  auto write = [&written](const std::filesystem::path& path,
                          const std::string& contents) -> absl::Status {
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) {
      return absl::InternalError(absl::StrCat("Cannot write ", path.string()));
    }
    written.push_back(path.string());
    return absl::OkStatus();
  };
  const std::filesystem::path root(directory);
  for (size_t d = 0; d < result.config.distributions.size(); ++d) {
    const std::string name =
        absl::StrCat(result.config.distributions[d].Label(), ".csv");
    if (absl::Status s = write(root / name, CellsCsv(result, static_cast<int>(d)));
        !s.ok()) {
      return s;
    }
  }
  if (absl::Status s = write(root / "summary.json", SummaryJson(result));
      !s.ok()) {
    return s;
  }
  return written;
}

}  // namespace dpq
