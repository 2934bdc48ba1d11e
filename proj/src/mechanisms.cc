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

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace dpq {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double Length(std::span<const double> breakpoints, size_t k) {
  return breakpoints[k + 1] - breakpoints[k];
}

}  // namespace

absl::string_view RelationName(NeighboringRelation relation) {
  switch (relation) {
    case NeighboringRelation::kAddRemove:
      return "add-remove";
    case NeighboringRelation::kReplace:
      return "replace";
  }
  return "unknown";
}

absl::StatusOr<NeighboringRelation> ParseRelation(absl::string_view name) {
  if (name == "add-remove") return NeighboringRelation::kAddRemove;
  if (name == "replace") return NeighboringRelation::kReplace;
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown neighboring relation '", name,
      "'; expected add-remove or replace"));
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(
    double epsilon, NeighboringRelation relation) {
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Epsilon must be finite and positive, but is %g", epsilon));
  }
  return PrivacyBudget(epsilon, relation);
}

absl::StatusOr<WeightedIntervalDensity> WeightedIntervalDensity::Create(
    std::vector<double> breakpoints, std::vector<double> log_weights) {
  if (breakpoints.size() < 2) {
    return absl::InvalidArgumentError("At least two breakpoints are required");
  }
  if (log_weights.size() + 1 != breakpoints.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Expected %d log-weights for %d breakpoints, got %d",
        breakpoints.size() - 1, breakpoints.size(), log_weights.size()));
  }
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    const double b = breakpoints[i];
    if (!(b >= 0.0 && b <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("Breakpoint %d = %g is outside [0, 1]", i, b));
    }
    if (i > 0 && b < breakpoints[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrFormat("Breakpoints decrease at index %d", i));
    }
  }
  double max_weight = kNegInf;
  for (size_t k = 0; k < log_weights.size(); ++k) {
    const double w = log_weights[k];
    if (std::isnan(w) || w == std::numeric_limits<double>::infinity()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("Log-weight %d is %g", k, w));
    }
    if (Length(breakpoints, k) > 0) max_weight = std::max(max_weight, w);
  }
  if (max_weight == kNegInf) {
    return absl::FailedPreconditionError(
        "Degenerate density: no positive-length interval has a finite "
        "log-weight");
  }
  double total = 0.0;
  for (size_t k = 0; k < log_weights.size(); ++k) {
    const double length = Length(breakpoints, k);
    if (length > 0) total += length * std::exp(log_weights[k] - max_weight);
  }
  const double log_normalizer = max_weight + std::log(total);
  return WeightedIntervalDensity(std::move(breakpoints),
                                 std::move(log_weights), log_normalizer);
}

double WeightedIntervalDensity::IntervalProbability(size_t k) const {
  const double length = Length(breakpoints_, k);
  if (length <= 0) return 0.0;
  return length * std::exp(NormalizedLogWeight(k));
}

double ExponentialMechanismLogWeight(double utility, double epsilon,
                                     double sensitivity) {
  return epsilon / (2.0 * sensitivity) * utility;
}

absl::StatusOr<double> LaplaceDraw(double scale, RandomSource& rng) {
  if (!std::isfinite(scale) || scale <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace scale must be positive, but is %g", scale));
  }
  const uint64_t bits = rng.NextU64();
  const double sign = (bits >> 63) ? -1.0 : 1.0;
  // Low 53 bits mapped to the open interval (0, 1).
  const double u =
      (static_cast<double>(bits & ((uint64_t{1} << 53) - 1)) + 0.5) /
      9007199254740992.0;
  return sign * scale * -std::log(u);
}

double SamplePiecewise(const WeightedIntervalDensity& density,
                       RandomSource& rng) {
  const std::span<const double> b = density.breakpoints();
  const std::span<const double> w = density.log_weights();
  const size_t num_intervals = w.size();

  // Mass of each interval relative to the largest weight. The largest
  // finite weight maps to exp(0), so nothing overflows.
  double max_weight = kNegInf;
  for (size_t k = 0; k < num_intervals; ++k) {
    if (Length(b, k) > 0) max_weight = std::max(max_weight, w[k]);
  }
  std::vector<double> mass(num_intervals, 0.0);
  double total = 0.0;
  size_t last_positive = 0;
  for (size_t k = 0; k < num_intervals; ++k) {
    const double length = Length(b, k);
    if (length > 0 && w[k] != kNegInf) {
      mass[k] = length * std::exp(w[k] - max_weight);
      total += mass[k];
      last_positive = k;
    }
  }

  const double target = rng.UniformDouble() * total;
  size_t chosen = last_positive;
  double cumulative = 0.0;
  for (size_t k = 0; k < num_intervals; ++k) {
    if (mass[k] == 0.0) continue;
    cumulative += mass[k];
    if (target < cumulative) {
      chosen = k;
      break;
    }
  }
  const double lo = b[chosen];
  const double hi = b[chosen + 1];
  const double point = lo + rng.UniformDouble() * (hi - lo);
  return std::clamp(point, lo, hi);
}

absl::StatusOr<double> LogDensityAt(const WeightedIntervalDensity& density,
                                    double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("q = %g is outside [0, 1]", q));
  }
  if (q < density.lower() || q > density.upper()) return kNegInf;
  const std::span<const double> b = density.breakpoints();
  const auto it = std::upper_bound(b.begin(), b.end(), q);
  if (it != b.end()) {
    // b[k] <= q < b[k + 1], so interval k has positive length.
    const size_t k = static_cast<size_t>(it - b.begin()) - 1;
    return density.NormalizedLogWeight(k);
  }
  // q is the upper end: use the last positive-length interval.
  for (size_t k = density.num_intervals(); k-- > 0;) {
    if (Length(b, k) > 0) return density.NormalizedLogWeight(k);
  }
  return kNegInf;
}

double ProbabilityMass(const WeightedIntervalDensity& density, double a,
                       double b) {
  if (!(b > a)) return 0.0;
  const std::span<const double> bp = density.breakpoints();
  double mass = 0.0;
  for (size_t k = 0; k < density.num_intervals(); ++k) {
    const double lo = std::max(a, bp[k]);
    const double hi = std::min(b, bp[k + 1]);
    if (hi > lo) mass += (hi - lo) * std::exp(density.NormalizedLogWeight(k));
  }
  return std::clamp(mass, 0.0, 1.0);
}

int BudgetLog::Record(MechanismCall call) {
  calls_.push_back(call);
  return static_cast<int>(calls_.size()) - 1;
}

int BudgetLog::CountOf(MechanismCall::Kind kind) const {
  return static_cast<int>(std::count_if(
      calls_.begin(), calls_.end(),
      [kind](const MechanismCall& call) { return call.kind == kind; }));
}

}  // namespace dpq
