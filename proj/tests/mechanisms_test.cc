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


#include "dpq/mechanisms.h"

#include <cmath>
#include <limits>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "dpq/random_source.h"
#include "test_util.h"

namespace dpq {
namespace {

using ::dpq::testing::IsOk;
using ::dpq::testing::StatusIs;
using ::testing::HasSubstr;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-width of a 5-sigma binomial band.
double FiveSigma(double p, int n) { return 5 * std::sqrt(p * (1 - p) / n); }

TEST(PrivacyBudgetTest, RejectsNonPositiveOrNonFiniteEpsilon) {
  for (double epsilon : {0.0, -1.0, kInf, std::nan("")}) {
    EXPECT_THAT(PrivacyBudget::Create(epsilon, NeighboringRelation::kReplace),
                StatusIs(absl::StatusCode::kInvalidArgument,
                         HasSubstr("Epsilon")));
  }
}

TEST(PrivacyBudgetTest, KeepsEpsilonAndRelation) {
  ASSERT_OK_AND_ASSIGN(
      PrivacyBudget budget,
      PrivacyBudget::Create(0.1, NeighboringRelation::kAddRemove));
  EXPECT_EQ(budget.epsilon(), 0.1);
  EXPECT_EQ(budget.relation(), NeighboringRelation::kAddRemove);
}

TEST(RelationTest, NamesRoundTrip) {
  for (NeighboringRelation relation :
       {NeighboringRelation::kAddRemove, NeighboringRelation::kReplace}) {
    ASSERT_OK_AND_ASSIGN(NeighboringRelation parsed,
                         ParseRelation(RelationName(relation)));
    EXPECT_EQ(parsed, relation);
  }
  EXPECT_THAT(ParseRelation("swap"),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(WeightedIntervalDensityTest, RejectsMalformedInput) {
  EXPECT_THAT(WeightedIntervalDensity::Create({0.5}, {}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(WeightedIntervalDensity::Create({0, 1}, {0, 0}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(WeightedIntervalDensity::Create({-0.1, 1}, {0}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(WeightedIntervalDensity::Create({0, 0.6, 0.4, 1}, {0, 0, 0}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(WeightedIntervalDensity::Create({0, 1}, {kInf}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(WeightedIntervalDensity::Create({0, 1}, {std::nan("")}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(WeightedIntervalDensityTest, DegenerateDensityIsFailedPrecondition) {
  EXPECT_THAT(WeightedIntervalDensity::Create({0.3, 0.3}, {0}),
              StatusIs(absl::StatusCode::kFailedPrecondition));
  EXPECT_THAT(WeightedIntervalDensity::Create({0, 0.5, 1}, {-kInf, -kInf}),
              StatusIs(absl::StatusCode::kFailedPrecondition));
}

TEST(WeightedIntervalDensityTest, NormalizerMatchesHandComputation) {
  // Masses 0.5 * 1 and 0.5 * 3 sum to 2.
  ASSERT_OK_AND_ASSIGN(
      WeightedIntervalDensity density,
      WeightedIntervalDensity::Create({0, 0.5, 1}, {0, std::log(3.0)}));
  EXPECT_NEAR(density.log_normalizer(), std::log(2.0), 1e-15);
  EXPECT_NEAR(density.IntervalProbability(0), 0.25, 1e-15);
  EXPECT_NEAR(density.IntervalProbability(1), 0.75, 1e-15);
}

TEST(WeightedIntervalDensityTest, HugeWeightsDoNotOverflow) {
  ASSERT_OK_AND_ASSIGN(WeightedIntervalDensity density,
                       WeightedIntervalDensity::Create(
                           {0, 0.5, 1}, {1e4, 1e4 + std::log(3.0)}));
  EXPECT_TRUE(std::isfinite(density.log_normalizer()));
  EXPECT_NEAR(density.IntervalProbability(1), 0.75, 1e-12);
}

TEST(WeightedIntervalDensityTest, ZeroLengthIntervalsCarryNoMass) {
  ASSERT_OK_AND_ASSIGN(
      WeightedIntervalDensity density,
      WeightedIntervalDensity::Create({0, 0.5, 0.5, 1}, {0, 50, 0}));
  EXPECT_EQ(density.IntervalProbability(1), 0.0);
  EXPECT_NEAR(density.IntervalProbability(0), 0.5, 1e-15);
}

TEST(ExponentialMechanismTest, LogWeightScalesWithEpsilonOverSensitivity) {
  EXPECT_DOUBLE_EQ(ExponentialMechanismLogWeight(-4, 1.0, 1.0), -2.0);
  EXPECT_DOUBLE_EQ(ExponentialMechanismLogWeight(-4, 1.0, 2.0), -1.0);
  EXPECT_DOUBLE_EQ(ExponentialMechanismLogWeight(-3, 0.5, 1.0), -0.75);
}

TEST(LaplaceDrawTest, RejectsBadScale) {
  RandomSource rng(1);
  for (double scale : {0.0, -2.0, kInf}) {
    EXPECT_THAT(LaplaceDraw(scale, rng),
                StatusIs(absl::StatusCode::kInvalidArgument));
  }
}

TEST(LaplaceDrawTest, ScaleActsMultiplicativelyUnderFixedSeed) {
  RandomSource a(3);
  RandomSource b(3);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_OK_AND_ASSIGN(double x, LaplaceDraw(1.0, a));
    ASSERT_OK_AND_ASSIGN(double y, LaplaceDraw(2.5, b));
    ASSERT_NEAR(y, 2.5 * x, 1e-12 * (1 + std::fabs(y)));
  }
}

TEST(LaplaceDrawTest, TailMatchesExponentialLaw) {
  // P(|X| > t) = exp(-t / b) and P(X > 0) = 1/2.
  const double scale = 2.0;
  const int n = 200000;
  RandomSource rng(17);
  int beyond_one = 0;
  int beyond_three = 0;
  int positive = 0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    ASSERT_OK_AND_ASSIGN(double x, LaplaceDraw(scale, rng));
    if (std::fabs(x) > scale) ++beyond_one;
    if (std::fabs(x) > 3 * scale) ++beyond_three;
    if (x > 0) ++positive;
    sum_sq += x * x;
  }
  const double p1 = std::exp(-1.0);
  const double p3 = std::exp(-3.0);
  EXPECT_NEAR(static_cast<double>(beyond_one) / n, p1, FiveSigma(p1, n));
  EXPECT_NEAR(static_cast<double>(beyond_three) / n, p3, FiveSigma(p3, n));
  EXPECT_NEAR(static_cast<double>(positive) / n, 0.5, FiveSigma(0.5, n));
  // Variance 2 b^2 = 8; the fourth moment is 24 b^4, so the standard error
  // of the mean square is sqrt((24 - 4) b^4 / n).
  EXPECT_NEAR(sum_sq / n, 8.0, 5 * std::sqrt(20.0 * 16 / n));
}

TEST(SamplePiecewiseTest, IntervalFrequenciesMatchProbabilities) {
  ASSERT_OK_AND_ASSIGN(
      WeightedIntervalDensity density,
      WeightedIntervalDensity::Create({0.1, 0.2, 0.2, 0.6, 0.9},
                                      {0.0, 5.0, -1.0, 1.0}));
  const int n = 100000;
  RandomSource rng(23);
  std::vector<int> hits(4, 0);
  for (int i = 0; i < n; ++i) {
    const double q = SamplePiecewise(density, rng);
    ASSERT_GE(q, 0.1);
    ASSERT_LE(q, 0.9);
    if (q < 0.2) {
      ++hits[0];
    } else if (q < 0.6) {
      ++hits[2];
    } else {
      ++hits[3];
    }
  }
  // Masses: 0.1 * 1, 0, 0.4 * e^-1, 0.3 * e.
  const double total = 0.1 + 0.4 * std::exp(-1.0) + 0.3 * std::exp(1.0);
  const std::vector<double> expected = {0.1 / total, 0.0,
                                        0.4 * std::exp(-1.0) / total,
                                        0.3 * std::exp(1.0) / total};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(density.IntervalProbability(k), expected[k], 1e-14);
    EXPECT_NEAR(static_cast<double>(hits[k]) / n, expected[k],
                FiveSigma(expected[k], n) + 1e-12);
  }
}

TEST(SamplePiecewiseTest, NeverLandsInExcludedInterval) {
  ASSERT_OK_AND_ASSIGN(
      WeightedIntervalDensity density,
      WeightedIntervalDensity::Create({0, 0.5, 1}, {-kInf, 0}));
  RandomSource rng(2);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_GE(SamplePiecewise(density, rng), 0.5);
  }
}

TEST(LogDensityAtTest, IsRightContinuousAndZeroOffSupport) {
  ASSERT_OK_AND_ASSIGN(
      WeightedIntervalDensity density,
      WeightedIntervalDensity::Create({0.2, 0.4, 0.8}, {0, std::log(2.0)}));
  // Masses 0.2 and 0.8, total 1.
  EXPECT_THAT(LogDensityAt(density, 0.3), IsOk());
  EXPECT_NEAR(*LogDensityAt(density, 0.3), 0.0, 1e-15);
  EXPECT_NEAR(*LogDensityAt(density, 0.4), std::log(2.0), 1e-15);
  EXPECT_NEAR(*LogDensityAt(density, 0.8), std::log(2.0), 1e-15);
  EXPECT_EQ(*LogDensityAt(density, 0.1), -kInf);
  EXPECT_EQ(*LogDensityAt(density, 0.9), -kInf);
  EXPECT_THAT(LogDensityAt(density, 1.5),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(ProbabilityMassTest, IntegratesPiecewiseDensity) {
  ASSERT_OK_AND_ASSIGN(
      WeightedIntervalDensity density,
      WeightedIntervalDensity::Create({0, 0.5, 1}, {0, std::log(3.0)}));
  // Density 0.5 on [0, 0.5) and 1.5 on [0.5, 1].
  EXPECT_NEAR(ProbabilityMass(density, 0, 1), 1.0, 1e-15);
  EXPECT_NEAR(ProbabilityMass(density, 0.25, 0.75), 0.125 + 0.375, 1e-15);
  EXPECT_NEAR(ProbabilityMass(density, 0.9, 2.0), 0.15, 1e-15);
  EXPECT_EQ(ProbabilityMass(density, 0.6, 0.6), 0.0);
}

TEST(BudgetLogTest, RecordsCallsInOrder) {
  BudgetLog log;
  EXPECT_EQ(log.Record({.kind = MechanismCall::Kind::kExponential,
                        .epsilon = 0.5}),
            0);
  EXPECT_EQ(log.Record({.kind = MechanismCall::Kind::kLaplaceVector,
                        .epsilon = 1.0}),
            1);
  EXPECT_EQ(log.Record({.kind = MechanismCall::Kind::kExponential,
                        .epsilon = 0.25,
                        .depth = 2,
                        .parent = 0}),
            2);
  EXPECT_EQ(log.CountOf(MechanismCall::Kind::kExponential), 2);
  EXPECT_EQ(log.CountOf(MechanismCall::Kind::kLaplaceVector), 1);
  EXPECT_EQ(log.calls()[2].parent, 0);
}

}  // namespace
}  // namespace dpq
