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

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpq {
namespace {

// Absolute slack when comparing the running integral to a level.
constexpr double kLevelTolerance = 1e-12;

}  // namespace

absl::StatusOr<PiecewiseConstantFunction> PiecewiseConstantFunction::Create(
    std::vector<double> breakpoints, std::vector<double> values) {
  if (values.empty() || breakpoints.size() != values.size() + 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Need n + 1 breakpoints for n >= 1 values; got %d and %d",
        breakpoints.size(), values.size()));
  }
  if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
    return absl::InvalidArgumentError("Breakpoints must run from 0 to 1");
  }
  for (size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > breakpoints[k - 1])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Breakpoints must be strictly increasing (index %d)", k));
    }
  }
  for (size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("Value %d is not finite", k));
    }
  }
  return PiecewiseConstantFunction(std::move(breakpoints), std::move(values));
}

absl::StatusOr<PiecewiseConstantFunction> PiecewiseConstantFunction::Uniform(
    std::vector<double> values) {
  const size_t count = values.size();
  std::vector<double> breakpoints(count + 1);
  for (size_t k = 0; k < count; ++k) {
    breakpoints[k] = static_cast<double>(k) / static_cast<double>(count);
  }
  breakpoints[count] = 1.0;
  return Create(std::move(breakpoints), std::move(values));
}

double PiecewiseConstantFunction::Integral() const {
  double total = 0.0;
  for (size_t k = 0; k < values_.size(); ++k) {
    total += values_[k] * (breakpoints_[k + 1] - breakpoints_[k]);
  }
  return total;
}

absl::StatusOr<double> GeneralizedQuantile(const PiecewiseConstantFunction& f,
                                           double p) {
  absl::StatusOr<std::vector<double>> result =
      GeneralizedQuantiles(f, std::span<const double>(&p, 1));
  if (!result.ok()) return result.status();
  return result->front();
}

absl::StatusOr<std::vector<double>> GeneralizedQuantiles(
    const PiecewiseConstantFunction& f, std::span<const double> orders) {
  const std::span<const double> t = f.breakpoints();
  const std::span<const double> v = f.values();
  const size_t num_pieces = v.size();

  std::vector<double> output;
  output.reserve(orders.size());
  size_t k = 0;
  // Integral of f over [0, t[k]].
  double cumulative = 0.0;
  for (size_t j = 0; j < orders.size(); ++j) {
    const double p = orders[j];
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("Order %g is outside [0, 1]", p));
    }
    if (j > 0 && p < orders[j - 1]) {
      return absl::InvalidArgumentError("Orders must be nondecreasing");
    }
    // The first crossing of a higher level cannot precede the first crossing
    // of a lower one, so the scan resumes where the previous order stopped.
    double result = 1.0;
    while (k < num_pieces) {
      if (cumulative >= p - kLevelTolerance) {
        result = t[k];
        break;
      }
      const double width = t[k + 1] - t[k];
      const double at_end = cumulative + v[k] * width;
      if (v[k] > 0 && p <= at_end + kLevelTolerance) {
        result = std::clamp(t[k] + (p - cumulative) / v[k], t[k], t[k + 1]);
        break;
      }
      cumulative = at_end;
      ++k;
    }
    output.push_back(result);
  }
  return output;
}

PiecewiseConstantFunction HistogramEstimate::AsFunction() const {
  // Values are finite and bin_count >= 1 by construction.
  return *PiecewiseConstantFunction::Uniform(values);
}

double HistogramCountSensitivity(NeighboringRelation relation) {
  return relation == NeighboringRelation::kReplace ? 2.0 : 1.0;
}

int BinIndex(double x, int bin_count) {
  const int index = static_cast<int>(std::floor(x * bin_count));
  return std::clamp(index, 0, bin_count - 1);
}

std::vector<int64_t> BinCounts(const SortedSample& sample, int bin_count) {
  std::vector<int64_t> counts(bin_count, 0);
  for (double x : sample.values()) ++counts[BinIndex(x, bin_count)];
  return counts;
}

absl::StatusOr<HistogramEstimate> PrivateHistogram(
    const SortedSample& sample, int bin_count, const PrivacyBudget& budget,
    RandomSource& rng, NoiseMode noise_mode, BudgetLog* log) {
  if (bin_count < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Bin count must be at least 1, got %d", bin_count));
  }
  if (sample.empty()) {
    return absl::InvalidArgumentError(
        "The histogram normalizes by n, which must be positive");
  }
  const std::vector<int64_t> counts = BinCounts(sample, bin_count);
  const double scale =
      HistogramCountSensitivity(budget.relation()) / budget.epsilon();
  // 1 / (n * h) with h = 1 / B.
  const double normalizer =
      static_cast<double>(bin_count) / static_cast<double>(sample.size());

  HistogramEstimate estimate{.bin_count = bin_count,
                             .bin_width = 1.0 / bin_count,
                             .values = std::vector<double>(bin_count),
                             .epsilon = budget.epsilon(),
                             .relation = budget.relation(),
                             .noise_mode = noise_mode};
  for (int b = 0; b < bin_count; ++b) {
    double noisy = static_cast<double>(counts[b]);
    if (noise_mode == NoiseMode::kLaplace) {
      absl::StatusOr<double> noise = LaplaceDraw(scale, rng);
      if (!noise.ok()) return noise.status();
      noisy += *noise;
    }
    estimate.values[b] = noisy * normalizer;
  }
  if (log != nullptr && noise_mode == NoiseMode::kLaplace) {
    log->Record({.kind = MechanismCall::Kind::kLaplaceVector,
                 .epsilon = budget.epsilon()});
  }
  return estimate;
}

absl::StatusOr<std::vector<double>> QuantilesFromHistogram(
    const SortedSample& sample, int bin_count, const QuantileQuery& query,
    RandomSource& rng, NoiseMode noise_mode, BudgetLog* log) {
  absl::StatusOr<HistogramEstimate> estimate = PrivateHistogram(
      sample, bin_count, query.budget(), rng, noise_mode, log);
  if (!estimate.ok()) return estimate.status();
  return GeneralizedQuantiles(estimate->AsFunction(), query.orders());
}

}  // namespace dpq
