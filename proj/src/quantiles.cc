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

#include "dpq/quantiles.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpq {
namespace {

absl::Status CheckUnitInterval(std::span<const double> values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Sample value %d = %g is outside [0, 1]", i, values[i]));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckEpsilon(double epsilon, bool allow_zero) {
  if (!std::isfinite(epsilon) || epsilon < 0 || (!allow_zero && epsilon == 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Epsilon must be %s, but is %g",
                        allow_zero ? "non-negative" : "positive", epsilon));
  }
  return absl::OkStatus();
}

// State shared by the recursive calls of RecExp.
class RecExpRunner {
 public:
  RecExpRunner(std::span<const double> values, std::span<const double> orders,
               double call_epsilon, int budget_denominator, RandomSource& rng,
               BudgetLog* log)
      : values_(values),
        orders_(orders),
        call_epsilon_(call_epsilon),
        budget_denominator_(budget_denominator),
        rng_(rng),
        log_(log),
        output_(orders.size(), 0.0) {}

  absl::Status Run() {
    return Recurse(0, static_cast<int>(orders_.size()) - 1, 0, values_.size(),
                   0.0, 1.0, /*depth=*/1, /*parent=*/-1);
  }

  std::vector<double> TakeOutput() { return std::move(output_); }

 private:
  // Estimates orders [j_lo, j_hi] from the points values_[a, b), all of which
  // lie in [lo, hi].
  absl::Status Recurse(int j_lo, int j_hi, size_t a, size_t b, double lo,
                       double hi, int depth, int parent) {
    if (j_lo > j_hi) return absl::OkStatus();
    const int j_mid = j_lo + (j_hi - j_lo) / 2;
    const int64_t sub_size = static_cast<int64_t>(b - a);
    const int64_t rank = std::clamp<int64_t>(
        TargetRank(static_cast<int64_t>(values_.size()), orders_[j_mid]) -
            static_cast<int64_t>(a),
        0, sub_size);

    int self = -1;
    if (log_ != nullptr) {
      self = log_->Record({.kind = MechanismCall::Kind::kExponential,
                           .epsilon = call_epsilon_,
                           .depth = depth,
                           .parent = parent,
                           .order_index = j_mid,
                           .budget_denominator = budget_denominator_});
    }

    double q = lo;
    // A collapsed domain admits a single output, which reveals nothing.
    if (hi > lo) {
      absl::StatusOr<WeightedIntervalDensity> density =
          QExpDensity(values_.subspan(a, b - a),
                      RankTarget{.rank = rank, .domain_lo = lo, .domain_hi = hi},
                      call_epsilon_);
      if (!density.ok()) return density.status();
      q = SamplePiecewise(*density, rng_);
    }
    output_[j_mid] = q;

    const auto first = values_.begin() + a;
    const size_t split = static_cast<size_t>(
        std::lower_bound(first, values_.begin() + b, q) - first);
    absl::Status status =
        Recurse(j_lo, j_mid - 1, a, a + split, lo, q, depth + 1, self);
    if (!status.ok()) return status;
    return Recurse(j_mid + 1, j_hi, a + split, b, q, hi, depth + 1, self);
  }

  std::span<const double> values_;
  std::span<const double> orders_;
  double call_epsilon_;
  int budget_denominator_;
  RandomSource& rng_;
  BudgetLog* log_;
  std::vector<double> output_;
};

}  // namespace

absl::StatusOr<SortedSample> SortedSample::Create(std::vector<double> values) {
  if (absl::Status status = CheckUnitInterval(values); !status.ok()) {
    return status;
  }
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrFormat("Sample is not sorted at index %d", i));
    }
  }
  return SortedSample(std::move(values));
}

absl::StatusOr<SortedSample> SortedSample::FromUnsorted(
    std::vector<double> values) {
  if (absl::Status status = CheckUnitInterval(values); !status.ok()) {
    return status;
  }
  std::sort(values.begin(), values.end());
  return SortedSample(std::move(values));
}

int64_t SortedSample::CountBelow(double q) const {
  return std::lower_bound(values_.begin(), values_.end(), q) - values_.begin();
}

absl::StatusOr<QuantileQuery> QuantileQuery::Create(std::vector<double> orders,
                                                    PrivacyBudget budget) {
  if (orders.empty()) {
    return absl::InvalidArgumentError("At least one order is required");
  }
  for (size_t j = 0; j < orders.size(); ++j) {
    if (!(orders[j] > 0.0 && orders[j] < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("Order %d = %g is outside (0, 1)", j, orders[j]));
    }
    if (j > 0 && !(orders[j] > orders[j - 1])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Orders must be strictly increasing; order %d is %g after %g", j,
          orders[j], orders[j - 1]));
    }
  }
  return QuantileQuery(std::move(orders), budget);
}

int64_t TargetRank(int64_t n, double p) {
  const double product = static_cast<double>(n) * p;
  return static_cast<int64_t>(std::floor(
      std::nextafter(product, std::numeric_limits<double>::infinity())));
}

int64_t EmpiricalError(const SortedSample& sample, double q, int64_t rank) {
  return std::llabs(sample.CountBelow(q) - rank);
}

absl::StatusOr<WeightedIntervalDensity> QExpDensity(
    std::span<const double> sorted_values, const RankTarget& target,
    double epsilon) {
  if (absl::Status status = CheckEpsilon(epsilon, /*allow_zero=*/true);
      !status.ok()) {
    return status;
  }
  const double lo = target.domain_lo;
  const double hi = target.domain_hi;
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Invalid domain [%g, %g]", lo, hi));
  }
  const int64_t n = static_cast<int64_t>(sorted_values.size());
  if (target.rank < 0 || target.rank > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Rank %d is outside [0, %d]", target.rank, n));
  }
  if (n > 0 && !(sorted_values.front() >= lo && sorted_values.back() <= hi)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Sample values [%g, %g] are not inside the domain [%g, %g]",
        sorted_values.front(), sorted_values.back(), lo, hi));
  }

  std::vector<double> breakpoints;
  breakpoints.reserve(n + 2);
  breakpoints.push_back(lo);
  breakpoints.insert(breakpoints.end(), sorted_values.begin(),
                     sorted_values.end());
  breakpoints.push_back(hi);

  std::vector<double> log_weights(n + 1);
  for (int64_t k = 0; k <= n; ++k) {
    const double utility = -static_cast<double>(std::llabs(k - target.rank));
    log_weights[k] =
        ExponentialMechanismLogWeight(utility, epsilon, kQExpSensitivity);
  }
  return WeightedIntervalDensity::Create(std::move(breakpoints),
                                         std::move(log_weights));
}

absl::StatusOr<double> QExp(const SortedSample& sample, double p,
                            double epsilon, RandomSource& rng,
                            BudgetLog* log) {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Order p = %g is outside (0, 1)", p));
  }
  if (absl::Status status = CheckEpsilon(epsilon, /*allow_zero=*/false);
      !status.ok()) {
    return status;
  }
  absl::StatusOr<WeightedIntervalDensity> density =
      QExpDensity(sample.values(), RankTarget{.rank = TargetRank(sample.size(), p)},
                  epsilon);
  if (!density.ok()) return density.status();
  if (log != nullptr) {
    log->Record({.kind = MechanismCall::Kind::kExponential, .epsilon = epsilon});
  }
  return SamplePiecewise(*density, rng);
}

absl::StatusOr<std::vector<double>> IndExp(const SortedSample& sample,
                                           const QuantileQuery& query,
                                           RandomSource& rng, BudgetLog* log) {
  const int m = query.m();
  const double call_epsilon = query.budget().epsilon() / m;
  std::vector<double> output;
  output.reserve(m);
  for (int j = 0; j < m; ++j) {
    absl::StatusOr<double> q =
        QExp(sample, query.orders()[j], call_epsilon, rng);
    if (!q.ok()) return q.status();
    if (log != nullptr) {
      log->Record({.kind = MechanismCall::Kind::kExponential,
                   .epsilon = call_epsilon,
                   .order_index = j,
                   .budget_denominator = m});
    }
    output.push_back(*q);
  }
  return output;
}

absl::StatusOr<int> RecExpDepth(int m) {
  if (m < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("RecExp needs at least one order, got m = %d", m));
  }
  return static_cast<int>(std::bit_width(static_cast<unsigned>(m)));
}

namespace {

// Fraction of the stated epsilon spent by each RecExp call, as 1/denominator.
absl::StatusOr<int> RecExpBudgetDenominator(const QuantileQuery& query) {
  absl::StatusOr<int> depth = RecExpDepth(query.m());
  if (!depth.ok()) return depth.status();
  // Replacement is two add/remove steps, so the budget is halved.
  const int relation_factor =
      query.budget().relation() == NeighboringRelation::kReplace ? 2 : 1;
  return *depth * relation_factor;
}

}  // namespace

absl::StatusOr<double> RecExpCallEpsilon(const QuantileQuery& query) {
  absl::StatusOr<int> denominator = RecExpBudgetDenominator(query);
  if (!denominator.ok()) return denominator.status();
  return query.budget().epsilon() / *denominator;
}

absl::StatusOr<std::vector<double>> RecExp(const SortedSample& sample,
                                           const QuantileQuery& query,
                                           RandomSource& rng, BudgetLog* log) {
  absl::StatusOr<int> denominator = RecExpBudgetDenominator(query);
  if (!denominator.ok()) return denominator.status();
  RecExpRunner runner(sample.values(), query.orders(),
                      query.budget().epsilon() / *denominator, *denominator,
                      rng, log);
  if (absl::Status status = runner.Run(); !status.ok()) return status;
  return runner.TakeOutput();
}

}  // namespace dpq
