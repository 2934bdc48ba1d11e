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

// Differential-privacy primitives shared by every estimator: privacy budgets,
// Laplace noise, and the exponential mechanism over a utility that is
// piecewise constant on a partition of an interval.

#ifndef DPQ_MECHANISMS_H_
#define DPQ_MECHANISMS_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpq/random_source.h"

namespace dpq {

enum class NeighboringRelation {
  // Neighbors differ by adding or removing one record.
  kAddRemove,
  // Neighbors have the same size and differ in one record.
  kReplace,
};

// "add-remove" or "replace".
absl::string_view RelationName(NeighboringRelation relation);
absl::StatusOr<NeighboringRelation> ParseRelation(absl::string_view name);

class PrivacyBudget {
 public:
  // Fails unless epsilon is finite and strictly positive.
  static absl::StatusOr<PrivacyBudget> Create(double epsilon,
                                              NeighboringRelation relation);

  double epsilon() const { return epsilon_; }
  NeighboringRelation relation() const { return relation_; }

 private:
  PrivacyBudget(double epsilon, NeighboringRelation relation)
      : epsilon_(epsilon), relation_(relation) {}

  double epsilon_;
  NeighboringRelation relation_;
};

// Unnormalized log-density that is constant on each interval of a partition
// [b_0, b_K] of a sub-interval of [0, 1]. Interval k is [b_k, b_{k+1}] and has
// density proportional to exp(log_weights[k]). Zero-length intervals carry no
// mass whatever their weight.
class WeightedIntervalDensity {
 public:
  // `breakpoints` must be nondecreasing, inside [0, 1], with at least two
  // entries; `log_weights` has one entry per interval and may contain -inf
  // but not +inf or NaN. At least one positive-length interval must carry a
  // finite weight, otherwise the density cannot be normalized.
  static absl::StatusOr<WeightedIntervalDensity> Create(
      std::vector<double> breakpoints, std::vector<double> log_weights);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> log_weights() const { return log_weights_; }
  size_t num_intervals() const { return log_weights_.size(); }
  double lower() const { return breakpoints_.front(); }
  double upper() const { return breakpoints_.back(); }

  // log of sum_k length_k * exp(log_weights[k]), computed with the maximum
  // finite weight factored out.
  double log_normalizer() const { return log_normalizer_; }

  // Normalized log-density of interval k (may be -inf).
  double NormalizedLogWeight(size_t k) const {
    return log_weights_[k] - log_normalizer_;
  }

  // Probability that the sampled point lands in interval k.
  double IntervalProbability(size_t k) const;

 private:
  WeightedIntervalDensity(std::vector<double> breakpoints,
                          std::vector<double> log_weights,
                          double log_normalizer)
      : breakpoints_(std::move(breakpoints)),
        log_weights_(std::move(log_weights)),
        log_normalizer_(log_normalizer) {}

  std::vector<double> breakpoints_;
  std::vector<double> log_weights_;
  double log_normalizer_;
};

// Exponent of the exponential mechanism: epsilon / (2 * sensitivity) times
// the utility. The sensitivity is always explicit.
double ExponentialMechanismLogWeight(double utility, double epsilon,
                                     double sensitivity);

// Centered Laplace draw with the given scale (variance 2 * scale^2), by
// inverse-CDF: one 64-bit draw supplies the sign bit and a uniform in (0, 1),
// and the result is sign * scale * -log(u). Draws for different scales under
// the same seed differ exactly by the scale factor.
absl::StatusOr<double> LaplaceDraw(double scale, RandomSource& rng);

// Samples from `density`: an interval is chosen with probability
// proportional to its length times exp(weight), then a point uniformly in it.
double SamplePiecewise(const WeightedIntervalDensity& density,
                       RandomSource& rng);

// Normalized log-density of SamplePiecewise's output law at q. The density
// is taken right-continuous: at a breakpoint the interval to its right is
// used, and at the upper end of the support the last positive-length
// interval. Points of [0, 1] outside the support give -inf.
absl::StatusOr<double> LogDensityAt(const WeightedIntervalDensity& density,
                                    double q);

// Probability that SamplePiecewise's output lies in [a, b].
double ProbabilityMass(const WeightedIntervalDensity& density, double a,
                       double b);

// Optional observer that records each privacy-consuming mechanism call.
// Estimators append to it when one is supplied; it never affects outputs.
struct MechanismCall {
  enum class Kind { kExponential, kLaplaceVector };
  Kind kind;
  double epsilon;
  // Depth of the call in the estimator's computation tree (root = 1) and the
  // index of its parent call in the log (-1 for roots). Flat estimators log
  // every call at depth 1.
  int depth = 1;
  int parent = -1;
  // Quantile index this call estimates, or -1.
  int order_index = -1;
  // The call spends exactly 1/budget_denominator of the caller's stated
  // epsilon. Kept as an integer so budget sums can be checked exactly.
  int budget_denominator = 1;
};

class BudgetLog {
 public:
  // Returns the index of the recorded call.
  int Record(MechanismCall call);
  const std::vector<MechanismCall>& calls() const { return calls_; }
  int CountOf(MechanismCall::Kind kind) const;

 private:
  std::vector<MechanismCall> calls_;
};

}  // namespace dpq

#endif  // DPQ_MECHANISMS_H_
