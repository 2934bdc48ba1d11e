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

#ifndef DPQ_HISTOGRAM_H_
#define DPQ_HISTOGRAM_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpq/mechanisms.h"
#include "dpq/quantiles.h"
#include "dpq/random_source.h"

namespace dpq {

// A function on [0, 1] that is constant on each [t_k, t_{k+1}). It need not
// be nonnegative nor integrate to one.
class PiecewiseConstantFunction {
 public:
  // `breakpoints` must be strictly increasing from 0 to 1 and have one more
  // entry than `values`; values must be finite.
  static absl::StatusOr<PiecewiseConstantFunction> Create(
      std::vector<double> breakpoints, std::vector<double> values);
  // Equal-width pieces on [0, 1].
  static absl::StatusOr<PiecewiseConstantFunction> Uniform(
      std::vector<double> values);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  size_t num_pieces() const { return values_.size(); }

  // Integral over [0, 1].
  double Integral() const;

 private:
  PiecewiseConstantFunction(std::vector<double> breakpoints,
                            std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {}

  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// inf{ q in [0, 1] : integral_0^q f >= p }, or 1 when no such q exists.
// This is the first crossing of level p by the cumulative integral, so
// negative pieces are kept as they are (no clipping).
// Levels are compared with an absolute slack of 1e-12, so rounding in the
// running integral cannot skip past a level that is reached exactly.
absl::StatusOr<double> GeneralizedQuantile(const PiecewiseConstantFunction& f,
                                           double p);

// GeneralizedQuantile at every entry of `orders`, which must be
// nondecreasing and inside [0, 1]. One left-to-right pass over the pieces.
absl::StatusOr<std::vector<double>> GeneralizedQuantiles(
    const PiecewiseConstantFunction& f, std::span<const double> orders);

// Whether a histogram injects Laplace noise. kNoneForTesting produces the
// plain (non-private) histogram and exists only for tests and oracles.
enum class NoiseMode { kLaplace, kNoneForTesting };

// Density estimate on B equal bins [b/B, (b+1)/B), the last bin closed.
struct HistogramEstimate {
  int bin_count = 0;
  double bin_width = 0.0;
  // Estimated density per bin; may be negative.
  std::vector<double> values;
  double epsilon = 0.0;
  NeighboringRelation relation = NeighboringRelation::kReplace;
  NoiseMode noise_mode = NoiseMode::kLaplace;

  PiecewiseConstantFunction AsFunction() const;
};

// L1 sensitivity of the vector of bin counts: 2 under replacement (one count
// goes down, another goes up), 1 under add/remove.
double HistogramCountSensitivity(NeighboringRelation relation);

// Index of the bin holding x in [0, 1]; x = 1 goes to the last bin.
int BinIndex(double x, int bin_count);

// Raw bin counts of the sample.
std::vector<int64_t> BinCounts(const SortedSample& sample, int bin_count);

// values[b] = (count_b + (sensitivity / epsilon) * Laplace(1)) / (n * h).
// The sample size n is treated as public. That is exact under replacement,
// where n is fixed; under add/remove the normalization is a heuristic.
// n = 0 is rejected.
absl::StatusOr<HistogramEstimate> PrivateHistogram(
    const SortedSample& sample, int bin_count, const PrivacyBudget& budget,
    RandomSource& rng, NoiseMode noise_mode = NoiseMode::kLaplace,
    BudgetLog* log = nullptr);

// Builds one private histogram and reads its generalized quantile function
// at every order (orders must be strictly increasing in (0, 1)). The budget
// does not depend on the number of orders.
absl::StatusOr<std::vector<double>> QuantilesFromHistogram(
    const SortedSample& sample, int bin_count, const QuantileQuery& query,
    RandomSource& rng, NoiseMode noise_mode = NoiseMode::kLaplace,
    BudgetLog* log = nullptr);

}  // namespace dpq

#endif  // DPQ_HISTOGRAM_H_
