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


#include "dpq/random_source.h"

#include <cmath>
#include <concepts>
#include <random>
#include <set>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace dpq {
namespace {

static_assert(std::uniform_random_bit_generator<RandomSource>);

TEST(MixBitsTest, MatchesSplitMix64FirstOutputForSeedZero) {
  // SplitMix64 seeded with 0 first adds the golden gamma, then mixes.
  EXPECT_EQ(MixBits(0x9e3779b97f4a7c15ULL), 0xe220a8397b1dcdafULL);
}

TEST(RandomSourceTest, MatchesReferenceXoshiroStream) {
  // Reference values from an independent implementation of SplitMix64 state
  // expansion followed by xoshiro256**.
  RandomSource rng(0);
  EXPECT_EQ(rng.NextU64(), 0x99ec5f36cb75f2b4ULL);
  EXPECT_EQ(rng.NextU64(), 0xbf6e1f784956452aULL);
  EXPECT_EQ(rng.NextU64(), 0x1a5f849d4933e6e0ULL);
}

TEST(RandomSourceTest, SameSeedSameStream) {
  RandomSource a(42);
  RandomSource b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RandomSourceTest, ChildDependsOnlyOnSeedAndStream) {
  RandomSource parent(7);
  const RandomSource before = parent.Child(3);
  for (int i = 0; i < 10; ++i) parent.NextU64();
  RandomSource after = parent.Child(3);
  RandomSource copy = before;
  for (int i = 0; i < 100; ++i) ASSERT_EQ(copy.NextU64(), after.NextU64());
}

TEST(RandomSourceTest, DistinctStreamsGiveDistinctSeeds) {
  RandomSource parent(11);
  std::set<uint64_t> seeds;
  for (uint64_t stream = 0; stream < 10000; ++stream) {
    seeds.insert(parent.Child(stream).seed());
  }
  EXPECT_EQ(seeds.size(), 10000u);
}

TEST(RandomSourceTest, UniformOpenNeverHitsEndpoints) {
  RandomSource rng(5);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.UniformOpen();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomSourceTest, UniformDoubleMomentsMatchUniformLaw) {
  // Mean 1/2 and variance 1/12; 5 standard errors of slack.
  RandomSource rng(9);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.UniformDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  const double variance = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(variance, 1.0 / 12, 5 * std::sqrt(1.0 / 180 / n));
}

TEST(RandomSourceTest, WorksWithStandardDistributions) {
  RandomSource rng(1);
  std::uniform_int_distribution<int> die(1, 6);
  for (int i = 0; i < 1000; ++i) {
    const int roll = die(rng);
    ASSERT_GE(roll, 1);
    ASSERT_LE(roll, 6);
  }
}

}  // namespace
}  // namespace dpq
