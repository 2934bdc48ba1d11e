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


#include "dpq/histogram.h"

#include <cmath>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "dpq/mechanisms.h"
#include "dpq/quantiles.h"
#include "dpq/random_source.h"
#include "test_util.h"

namespace dpq {
namespace {

using ::dpq::testing::StatusIs;
using ::testing::ElementsAre;

PrivacyBudget Budget(double epsilon, NeighboringRelation relation) {
  return *PrivacyBudget::Create(epsilon, relation);
}

// First grid point where the running integral of f reaches p, by brute
// force on a grid of `steps` cells; 1 if it never does.
double BruteForceQuantile(const std::vector<double>& values, double p,
                          int steps) {
  const int pieces = static_cast<int>(values.size());
  double cumulative = 0.0;
  if (p <= 0) return 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = (i + 0.5) / steps;
    const int piece = std::min(pieces - 1, static_cast<int>(x * pieces));
    cumulative += values[piece] / steps;
    if (cumulative >= p) return static_cast<double>(i + 1) / steps;
  }
  return 1.0;
}

TEST(PiecewiseConstantFunctionTest, ValidatesInput) {
  EXPECT_THAT(PiecewiseConstantFunction::Create({0, 1}, {}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(PiecewiseConstantFunction::Create({0.1, 1}, {1}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(PiecewiseConstantFunction::Create({0, 0.5, 0.5, 1}, {1, 1, 1}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(PiecewiseConstantFunction::Create({0, 1}, {INFINITY}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(PiecewiseConstantFunctionTest, IntegralSumsPieces) {
  ASSERT_OK_AND_ASSIGN(PiecewiseConstantFunction f,
                       PiecewiseConstantFunction::Create({0, 0.2, 1},
                                                         {2, -0.5}));
  EXPECT_NEAR(f.Integral(), 0.4 - 0.4, 1e-15);
}

TEST(GeneralizedQuantileTest, HandValuesWithNegativePiece) {
  // Running integral rises to 1.5 at 1/2, then falls to 1 at 1.
  ASSERT_OK_AND_ASSIGN(PiecewiseConstantFunction f,
                       PiecewiseConstantFunction::Uniform({3, -1}));
  EXPECT_NEAR(*GeneralizedQuantile(f, 1.0), 1.0 / 3, 1e-15);
  EXPECT_NEAR(*GeneralizedQuantile(f, 0.3), 0.1, 1e-15);
  EXPECT_EQ(*GeneralizedQuantile(f, 0.0), 0.0);
}

TEST(GeneralizedQuantileTest, NeverReachedLevelGivesOne) {
  ASSERT_OK_AND_ASSIGN(PiecewiseConstantFunction f,
                       PiecewiseConstantFunction::Uniform({0.5, 0.5}));
  EXPECT_EQ(*GeneralizedQuantile(f, 0.75), 1.0);
}

TEST(GeneralizedQuantileTest, NegativeStartIsNotClipped) {
  // Running integral dips to -1/2 at 1/2 and climbs back at rate 3.
  ASSERT_OK_AND_ASSIGN(PiecewiseConstantFunction f,
                       PiecewiseConstantFunction::Uniform({-1, 3}));
  EXPECT_NEAR(*GeneralizedQuantile(f, 0.25), 0.75, 1e-15);
  EXPECT_EQ(*GeneralizedQuantile(f, 0.0), 0.0);
}

TEST(GeneralizedQuantileTest, RejectsBadOrders) {
  ASSERT_OK_AND_ASSIGN(PiecewiseConstantFunction f,
                       PiecewiseConstantFunction::Uniform({1}));
  EXPECT_THAT(GeneralizedQuantile(f, 1.5),
              StatusIs(absl::StatusCode::kInvalidArgument));
  const std::vector<double> decreasing = {0.5, 0.4};
  EXPECT_THAT(GeneralizedQuantiles(f, decreasing),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(GeneralizedQuantileTest, MatchesBruteForceOnRandomSignedFunctions) {
  RandomSource rng(101);
  constexpr int kSteps = 1 << 16;
  for (int trial = 0; trial < 100; ++trial) {
    // Power-of-two piece counts keep the brute-force grid aligned.
    const int pieces = 1 << (rng.NextU64() % 4);
    std::vector<double> values(pieces);
    for (double& v : values) v = -1.0 + 4.0 * rng.UniformDouble();
    ASSERT_OK_AND_ASSIGN(PiecewiseConstantFunction f,
                         PiecewiseConstantFunction::Uniform(values));
    std::vector<double> orders;
    for (int j = 0; j <= 20; ++j) orders.push_back(j / 20.0);
    ASSERT_OK_AND_ASSIGN(std::vector<double> fast,
                         GeneralizedQuantiles(f, orders));
    for (size_t j = 0; j < orders.size(); ++j) {
      ASSERT_OK_AND_ASSIGN(double single, GeneralizedQuantile(f, orders[j]));
      EXPECT_EQ(fast[j], single);
      const double brute = BruteForceQuantile(values, orders[j], kSteps);
      // The brute-force crossing is at most one cell late; a level touched
      // only tangentially can make it earlier by rounding, never by more
      // than a cell.
      EXPECT_NEAR(fast[j], brute, 1.0 / kSteps + 1e-12)
          << "trial " << trial << " p " << orders[j];
    }
  }
}

TEST(BinIndexTest, HalfOpenBinsWithClosedLastBin) {
  EXPECT_EQ(BinIndex(0.0, 4), 0);
  EXPECT_EQ(BinIndex(0.2499, 4), 0);
  EXPECT_EQ(BinIndex(0.25, 4), 1);
  EXPECT_EQ(BinIndex(0.9999, 4), 3);
  EXPECT_EQ(BinIndex(1.0, 4), 3);
}

TEST(BinCountsTest, CountsPerBin) {
  const SortedSample sample = *SortedSample::Create({0.2, 0.5, 0.8});
  EXPECT_THAT(BinCounts(sample, 2), ElementsAre(1, 2));
  EXPECT_THAT(BinCounts(sample, 5), ElementsAre(0, 1, 1, 0, 1));
}

TEST(HistogramSensitivityTest, DependsOnRelation) {
  EXPECT_EQ(HistogramCountSensitivity(NeighboringRelation::kReplace), 2.0);
  EXPECT_EQ(HistogramCountSensitivity(NeighboringRelation::kAddRemove), 1.0);
}

// Exhaustive check of the count sensitivity on samples of size <= 4 over a
// grid that puts points on both sides of every bin edge.
TEST(HistogramSensitivityTest, CountVectorsOfNeighborsAreWithinSensitivity) {
  const std::vector<double> grid = {0.0, 0.24, 0.25, 0.5, 0.74, 0.9, 1.0};
  const int bins = 4;
  std::vector<std::vector<double>> samples = {{}};
  for (int size = 1; size <= 4; ++size) {
    std::vector<std::vector<double>> next;
    for (const auto& s : samples) {
      if (static_cast<int>(s.size()) != size - 1) continue;
      for (double g : grid) {
        if (!s.empty() && g < s.back()) continue;
        std::vector<double> t = s;
        t.push_back(g);
        next.push_back(t);
      }
    }
    samples.insert(samples.end(), next.begin(), next.end());
  }
  auto l1 = [&](const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<int64_t> ca =
        BinCounts(*SortedSample::FromUnsorted(a), bins);
    const std::vector<int64_t> cb =
        BinCounts(*SortedSample::FromUnsorted(b), bins);
    int64_t total = 0;
    for (int k = 0; k < bins; ++k) total += std::llabs(ca[k] - cb[k]);
    return total;
  };
  for (const auto& s : samples) {
    for (double g : grid) {
      std::vector<double> added = s;
      added.push_back(g);
      EXPECT_LE(l1(s, added), 1);
      for (size_t i = 0; i < s.size(); ++i) {
        std::vector<double> replaced = s;
        replaced[i] = g;
        EXPECT_LE(l1(s, replaced), 2);
      }
    }
  }
}

TEST(PrivateHistogramTest, RejectsEmptySampleAndBadBins) {
  RandomSource rng(1);
  const PrivacyBudget budget = Budget(1, NeighboringRelation::kReplace);
  EXPECT_THAT(PrivateHistogram(SortedSample(), 2, budget, rng),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(PrivateHistogram(*SortedSample::Create({0.5}), 0, budget, rng),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(PrivateHistogramTest, NoiselessValuesAreNormalizedCounts) {
  RandomSource rng(1);
  const SortedSample sample = *SortedSample::Create({0.2, 0.5, 0.8});
  ASSERT_OK_AND_ASSIGN(
      HistogramEstimate estimate,
      PrivateHistogram(sample, 2, Budget(1, NeighboringRelation::kReplace),
                       rng, NoiseMode::kNoneForTesting));
  // count / (n h) = 1 / 1.5 and 2 / 1.5.
  EXPECT_NEAR(estimate.values[0], 2.0 / 3, 1e-15);
  EXPECT_NEAR(estimate.values[1], 4.0 / 3, 1e-15);
  EXPECT_NEAR(estimate.AsFunction().Integral(), 1.0, 1e-15);
}

TEST(PrivateHistogramTest, NoiseHasLaplaceScaleSensitivityOverEpsilon) {
  // Two bins, epsilon 1, replacement: count noise is Laplace with scale 2,
  // so each value has variance 2 * 2^2 * (B / n)^2 around the noiseless one.
  const SortedSample sample = *SortedSample::Create({0.2, 0.5, 0.8});
  const int trials = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  int above_two = 0;
  RandomSource rng(55);
  for (int t = 0; t < trials; ++t) {
    ASSERT_OK_AND_ASSIGN(
        HistogramEstimate estimate,
        PrivateHistogram(sample, 2, Budget(1, NeighboringRelation::kReplace),
                         rng));
    // Back to raw count noise: value * n * h - count.
    const double noise = estimate.values[0] * 1.5 - 1.0;
    sum += noise;
    sum_sq += noise * noise;
    if (std::fabs(noise) > 2.0) ++above_two;
  }
  const double variance = sum_sq / trials;
  EXPECT_NEAR(sum / trials, 0.0, 5 * std::sqrt(8.0 / trials));
  EXPECT_NEAR(variance, 8.0, 5 * std::sqrt(20.0 * 16 / trials));
  const double tail = std::exp(-1.0);
  EXPECT_NEAR(static_cast<double>(above_two) / trials, tail,
              5 * std::sqrt(tail * (1 - tail) / trials));
}

TEST(QuantilesFromHistogramTest, ZeroNoiseHandValue) {
  // Values (2/3, 4/3): the integral reaches 1/3 at 1/2, then grows at 4/3.
  const SortedSample sample = *SortedSample::Create({0.2, 0.5, 0.8});
  ASSERT_OK_AND_ASSIGN(
      QuantileQuery query,
      QuantileQuery::Create({0.25, 0.5},
                            Budget(1, NeighboringRelation::kReplace)));
  RandomSource rng(1);
  ASSERT_OK_AND_ASSIGN(std::vector<double> q,
                       QuantilesFromHistogram(sample, 2, query, rng,
                                              NoiseMode::kNoneForTesting));
  EXPECT_NEAR(q[0], 0.375, 1e-15);
  EXPECT_NEAR(q[1], 0.625, 1e-15);
}

TEST(QuantilesFromHistogramTest, SpendsOneLaplaceCallWhateverM) {
  const SortedSample sample = *SortedSample::Create({0.1, 0.4, 0.6});
  for (int m : {1, 5, 50}) {
    std::vector<double> orders;
    for (int j = 1; j <= m; ++j) orders.push_back(j / (m + 1.0));
    ASSERT_OK_AND_ASSIGN(
        QuantileQuery query,
        QuantileQuery::Create(orders,
                              Budget(0.7, NeighboringRelation::kReplace)));
    RandomSource rng(2);
    BudgetLog log;
    ASSERT_OK_AND_ASSIGN(std::vector<double> q,
                         QuantilesFromHistogram(sample, 10, query, rng,
                                                NoiseMode::kLaplace, &log));
    ASSERT_EQ(log.calls().size(), 1u);
    EXPECT_EQ(log.calls()[0].kind, MechanismCall::Kind::kLaplaceVector);
    EXPECT_EQ(log.calls()[0].epsilon, 0.7);
    EXPECT_TRUE(std::is_sorted(q.begin(), q.end()));
  }
}

TEST(QuantilesFromHistogramTest, NoiselessWithinOneBinOfEmpiricalQuantile) {
  RandomSource rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.NextU64() % 50);
    const int bins = 1 + static_cast<int>(rng.NextU64() % 30);
    std::vector<double> values(n);
    for (double& v : values) v = rng.UniformDouble();
    const SortedSample sample = *SortedSample::FromUnsorted(values);
    const std::vector<double> orders = {0.1, 0.3, 0.5, 0.7, 0.9};
    ASSERT_OK_AND_ASSIGN(
        QuantileQuery query,
        QuantileQuery::Create(orders,
                              Budget(1, NeighboringRelation::kReplace)));
    ASSERT_OK_AND_ASSIGN(std::vector<double> q,
                         QuantilesFromHistogram(sample, bins, query, rng,
                                                NoiseMode::kNoneForTesting));
    for (size_t j = 0; j < orders.size(); ++j) {
      // inf{x : F_n(x) >= p} is the ceil(n p)-th order statistic.
      const int64_t index =
          static_cast<int64_t>(std::ceil(n * orders[j] - 1e-12)) - 1;
      const double empirical = sample.values()[std::max<int64_t>(index, 0)];
      EXPECT_LE(std::fabs(q[j] - empirical), 1.0 / bins + 1e-12);
    }
  }
}

}  // namespace
}  // namespace dpq
