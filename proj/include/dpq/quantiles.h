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

// Private quantile estimators built on the exponential mechanism:
//
//   QExp    one quantile, utility -| #{i : X_i < q} - floor(n p) |.
//   IndExp  m independent QExp calls at epsilon / m each.
//   RecExp  QExp on the middle order, then recursion on the data below and
//           above the released value; each call gets epsilon / depth, where
//           depth = floor(log2 m) + 1 is the height of the recursion tree.
//
// All estimators take data in [0, 1], sorted.

#ifndef DPQ_QUANTILES_H_
#define DPQ_QUANTILES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpq/mechanisms.h"
#include "dpq/random_source.h"

namespace dpq {

// Nondecreasing values in [0, 1].
class SortedSample {
 public:
  // Fails if `values` is not nondecreasing or has entries outside [0, 1].
  static absl::StatusOr<SortedSample> Create(std::vector<double> values);
  // Sorts first; fails only on values outside [0, 1] (or NaN).
  static absl::StatusOr<SortedSample> FromUnsorted(std::vector<double> values);

  SortedSample() = default;

  std::span<const double> values() const { return values_; }
  int64_t size() const { return static_cast<int64_t>(values_.size()); }
  bool empty() const { return values_.empty(); }

  // Number of points strictly below q.
  int64_t CountBelow(double q) const;

 private:
  explicit SortedSample(std::vector<double> values)
      : values_(std::move(values)) {}

  std::vector<double> values_;
};

// Strictly increasing orders in (0, 1) together with the privacy budget that
// the whole set of releases must satisfy.
class QuantileQuery {
 public:
  static absl::StatusOr<QuantileQuery> Create(std::vector<double> orders,
                                              PrivacyBudget budget);

  std::span<const double> orders() const { return orders_; }
  int m() const { return static_cast<int>(orders_.size()); }
  const PrivacyBudget& budget() const { return budget_; }

 private:
  QuantileQuery(std::vector<double> orders, PrivacyBudget budget)
      : orders_(std::move(orders)), budget_(budget) {}

  std::vector<double> orders_;
  PrivacyBudget budget_;
};

// Target count of points strictly below the output, and the output domain.
struct RankTarget {
  int64_t rank = 0;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
};

// Sensitivity of the QExp utility under both neighboring relations.
inline constexpr double kQExpSensitivity = 1.0;

// floor(n * p). n * p is nudged up by one ulp first so products that should
// be integers but land just below one still floor to that integer.
int64_t TargetRank(int64_t n, double p);

// | #{i : X_i < q} - rank |.
int64_t EmpiricalError(const SortedSample& sample, double q, int64_t rank);

// Exponential-mechanism density for QExp on a sub-sample. Breakpoints are
// [lo, X_1, ..., X_n', hi]; interval k (with k points to its left) has log
// weight -(epsilon / 2) * |k - rank|. Duplicate values give zero-length
// intervals. epsilon = 0 is accepted and gives the uniform law on the domain.
absl::StatusOr<WeightedIntervalDensity> QExpDensity(
    std::span<const double> sorted_values, const RankTarget& target,
    double epsilon);

// One private quantile of order p at budget epsilon (epsilon-DP under both
// relations).
absl::StatusOr<double> QExp(const SortedSample& sample, double p,
                            double epsilon, RandomSource& rng,
                            BudgetLog* log = nullptr);

// Independent QExp per order at epsilon / m. Outputs follow the order of
// query.orders() and are not necessarily monotone.
absl::StatusOr<std::vector<double>> IndExp(const SortedSample& sample,
                                           const QuantileQuery& query,
                                           RandomSource& rng,
                                           BudgetLog* log = nullptr);

// floor(log2 m) + 1, the height of the balanced recursion tree on m orders.
absl::StatusOr<int> RecExpDepth(int m);

// Budget handed to each QExp call inside RecExp: epsilon / depth under
// add/remove, and half of that under replacement.
absl::StatusOr<double> RecExpCallEpsilon(const QuantileQuery& query);

// Recursive estimator. The middle order (lower median index) is released
// first on the full data and domain [0, 1]; the orders to its left are then
// estimated on the points strictly below the released value with domain
// [lo, q], and the orders to its right on the remaining points with domain
// [q, hi]. Target ranks are shifted by the number of points cut away on the
// left and clamped to the sub-sample size. The output is nondecreasing.
absl::StatusOr<std::vector<double>> RecExp(const SortedSample& sample,
                                           const QuantileQuery& query,
                                           RandomSource& rng,
                                           BudgetLog* log = nullptr);

}  // namespace dpq

#endif  // DPQ_QUANTILES_H_
