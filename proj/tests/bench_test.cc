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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "absl/strings/str_split.h"
#include "dpq/experiment_config.h"
#include "test_util.h"

namespace dpq {
namespace {

using ::dpq::testing::StatusIs;
using ::testing::AllOf;
using ::testing::Each;
using ::testing::ElementsAre;
using ::testing::Ge;
using ::testing::Le;
using ::testing::SizeIs;

ExperimentConfig SmallConfig() {
  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(
      "version = 1\n"
      "distributions = beta(2,5); uniform\n"
      "n = 300\n"
      "epsilon = 1\n"
      "m_grid = 1,3,6\n"
      "trials = 4\n"
      "bins = 50\n"
      "seed = 17\n");
  EXPECT_TRUE(config.ok()) << config.status();
  return *config;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(RunEstimatorTest, ReturnsOneEstimatePerOrderInUnitInterval) {
  RandomSource data_rng(3);
  const SortedSample sample = DistributionOracle::Uniform().Sample(200, data_rng);
  for (EstimatorKind kind : {EstimatorKind::kIndExp, EstimatorKind::kRecExp,
                             EstimatorKind::kHistogram}) {
    RandomSource rng(4);
    ASSERT_OK_AND_ASSIGN(
        std::vector<double> estimates,
        RunEstimator(kind, sample, {0.2, 0.4, 0.6, 0.8}, 1.0,
                     NeighboringRelation::kReplace, 40, rng));
    EXPECT_THAT(estimates, SizeIs(4));
    EXPECT_THAT(estimates, Each(AllOf(Ge(0.0), Le(1.0))));
  }
}

TEST(RunEstimatorTest, RejectsInvalidInputs) {
  RandomSource rng(1);
  ASSERT_OK_AND_ASSIGN(SortedSample sample, SortedSample::Create({0.5}));
  EXPECT_THAT(RunEstimator(EstimatorKind::kRecExp, sample, {0.5}, 0.0,
                           NeighboringRelation::kReplace, 10, rng),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(RunEstimator(EstimatorKind::kRecExp, sample, {0.6, 0.5}, 1.0,
                           NeighboringRelation::kReplace, 10, rng),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(RunEstimatorTest, HugeEpsilonRecoversEmpiricalQuantiles) {
  // Points (i + 1/2) / n put the empirical p-quantile within 1/n of p.
  constexpr int kN = 1000;
  std::vector<double> values;
  for (int i = 0; i < kN; ++i) values.push_back((i + 0.5) / kN);
  ASSERT_OK_AND_ASSIGN(SortedSample sample, SortedSample::Create(values));
  const std::vector<double> orders = {0.3, 0.5, 0.7};
  for (EstimatorKind kind : {EstimatorKind::kIndExp, EstimatorKind::kRecExp}) {
    RandomSource rng(11);
    ASSERT_OK_AND_ASSIGN(
        std::vector<double> estimates,
        RunEstimator(kind, sample, orders, 1e6, NeighboringRelation::kReplace,
                     10, rng));
    for (size_t j = 0; j < orders.size(); ++j) {
      EXPECT_NEAR(estimates[j], orders[j], 3.0 / kN)
          << EstimatorKindName(kind) << " order " << orders[j];
    }
  }
}

TEST(RunTrialTest, HugeEpsilonErrorIsSamplingError) {
  ExperimentConfig config = SmallConfig();
  config.distributions = {DistributionOracle::Uniform()};
  config.n = 10000;
  config.epsilon = 1e6;
  for (int seed = 0; seed < 5; ++seed) {
    RandomSource rng(seed);
    ASSERT_OK_AND_ASSIGN(
        double error, RunTrial(config.distributions[0], EstimatorKind::kRecExp,
                               3, config, rng));
    // Four standard deviations of a uniform order statistic at n = 1e4.
    EXPECT_LE(error, 0.02);
    EXPECT_GE(error, 0.0);
  }
}

TEST(RunExperimentTest, SingleTrialMatchesRunTrialWithDocumentedSeed) {
  ExperimentConfig config = SmallConfig();
  config.trials = 1;
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunExperiment(config));
  ASSERT_THAT(result.cells, SizeIs(2 * 3 * 3));
  for (const CellResult& cell : result.cells) {
    RandomSource rng = TrialRandomSource(config.seed, cell.distribution_index,
                                         cell.estimator, cell.m, 0);
    ASSERT_OK_AND_ASSIGN(
        double error,
        RunTrial(config.distributions[cell.distribution_index], cell.estimator,
                 cell.m, config, rng));
    EXPECT_EQ(cell.mean_error, error);
    EXPECT_EQ(cell.std_error, 0.0);
    EXPECT_THAT(cell.errors, ElementsAre(error));
  }
}

TEST(RunExperimentTest, CellOrderAndStatistics) {
  const ExperimentConfig config = SmallConfig();
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunExperiment(config));
  ASSERT_THAT(result.cells, SizeIs(18));
  size_t c = 0;
  for (int d = 0; d < 2; ++d) {
    for (int m : {1, 3, 6}) {
      for (EstimatorKind kind : config.estimators) {
        const CellResult& cell = result.cells[c++];
        EXPECT_EQ(cell.distribution_index, d);
        EXPECT_EQ(cell.m, m);
        EXPECT_EQ(cell.estimator, kind);
        ASSERT_THAT(cell.errors, SizeIs(4));
        double sum = 0.0;
        for (double e : cell.errors) sum += e;
        const double mean = sum / 4;
        double ss = 0.0;
        for (double e : cell.errors) ss += (e - mean) * (e - mean);
        EXPECT_NEAR(cell.mean_error, mean, 1e-15);
        EXPECT_NEAR(cell.std_error, std::sqrt(ss / 3 / 4), 1e-15);
        EXPECT_THAT(cell.errors, Each(AllOf(Ge(0.0), Le(1.0))));
      }
    }
  }
}

TEST(RunExperimentTest, ThreadCountDoesNotChangeResults) {
  ExperimentConfig config = SmallConfig();
  config.threads = 1;
  ASSERT_OK_AND_ASSIGN(ExperimentResult serial, RunExperiment(config));
  config.threads = 3;
  ASSERT_OK_AND_ASSIGN(ExperimentResult parallel, RunExperiment(config));
  for (int d = 0; d < 2; ++d) {
    EXPECT_EQ(CellsCsv(serial, d), CellsCsv(parallel, d));
  }
  ASSERT_EQ(serial.cells.size(), parallel.cells.size());
  for (size_t c = 0; c < serial.cells.size(); ++c) {
    EXPECT_EQ(serial.cells[c].errors, parallel.cells[c].errors);
  }
}

TEST(RunExperimentTest, RejectsInvalidConfig) {
  ExperimentConfig config = SmallConfig();
  config.epsilon = -1;
  EXPECT_THAT(RunExperiment(config),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(CellsCsvTest, HeaderAndRows) {
  ExperimentConfig config = SmallConfig();
  config.trials = 2;
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunExperiment(config));
  const std::string csv = CellsCsv(result, 1);
  std::vector<std::string> lines = absl::StrSplit(csv, '\n');
  ASSERT_THAT(lines, SizeIs(1 + 9 + 1));
  EXPECT_EQ(lines[0], "m,estimator,mean_error,std_error,trials");
  EXPECT_EQ(lines.back(), "");
  const CellResult& first = result.cells[9];
  std::vector<std::string> fields = absl::StrSplit(lines[1], ',');
  ASSERT_THAT(fields, SizeIs(5));
  EXPECT_EQ(fields[0], "1");
  EXPECT_EQ(fields[1], "indexp");
  EXPECT_EQ(std::stod(fields[2]), first.mean_error);
  EXPECT_EQ(std::stod(fields[3]), first.std_error);
  EXPECT_EQ(fields[4], "2");
}

TEST(WriteBenchOutputsTest, WritesOneCsvPerDistributionAndSummary) {
  ExperimentConfig config = SmallConfig();
  config.trials = 2;
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunExperiment(config));
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "bench_outputs";
  std::filesystem::remove_all(dir);
  ASSERT_OK_AND_ASSIGN(std::vector<std::string> written,
                       WriteBenchOutputs(result, dir.string()));
  EXPECT_THAT(written,
              ElementsAre((dir / "beta_2_5.csv").string(),
                          (dir / "uniform.csv").string(),
                          (dir / "summary.json").string()));
  EXPECT_EQ(ReadFile(dir / "beta_2_5.csv"), CellsCsv(result, 0));
  EXPECT_EQ(ReadFile(dir / "uniform.csv"), CellsCsv(result, 1));
  const std::string json = ReadFile(dir / "summary.json");
  EXPECT_NE(json.find("\"config_text\""), std::string::npos);
  EXPECT_NE(json.find("\"seed_rule\""), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dpq
