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

// Verification suites that compare estimator behavior to exact formulas and
// to the closed-form bounds. Each suite returns a report of individual
// checks; a suite passes iff every check passes.

#ifndef DPQ_VERIFICATION_H_
#define DPQ_VERIFICATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpq/distributions.h"
#include "dpq/mechanisms.h"

namespace dpq {

struct VerificationCheck {
  std::string name;
  // The bound or exact value the check compares against.
  double bound = 0.0;
  // Empirical frequency or computed value.
  double empirical = 0.0;
  // Trials behind `empirical`; 0 for exact computations.
  int64_t trials = 0;
  // Confidence interval or tolerance band around `empirical`.
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::vector<VerificationCheck> checks;

  bool Passed() const;
  int FailureCount() const;
  // One line per check plus a summary line.
  std::string HumanSummary() const;
  std::string Json() const;
};

// Wilson score interval for `successes` out of `trials` at normal quantile z.
std::pair<double, double> WilsonInterval(int64_t successes, int64_t trials,
                                         double z);

// Normal quantile of a two-sided 99% interval.
inline constexpr double kZ99 = 2.5758293035489004;

// Empirical P(min gap > gamma) over `trials` sets of n uniform points against
// (1 - (n + 1) gamma)^n; passes iff the exact value lies in the 99% Wilson
// interval. For gamma >= 1/(n + 1) the frequency must be exactly 0.
absl::StatusOr<VerificationReport> VerifyGapLaw(
    int64_t n, const std::vector<double>& gammas, int64_t trials,
    uint64_t seed);

struct DpRatioOptions {
  std::vector<double> epsilons = {0.5, 1.0, 4.0};
  std::vector<double> values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int max_n = 4;
  std::vector<double> orders = {0.1, 0.25, 0.5, 0.75, 0.9};
  int grid_size = 1000;
};

// For every multiset of at most max_n values and every neighbor under both
// relations, the largest |log-density difference| of the single-quantile
// mechanism over a q grid (a uniform grid plus the midpoint of every piece
// of both partitions). Passes iff it is at most epsilon + 1e-9.
absl::StatusOr<VerificationReport> VerifyDpRatio(const DpRatioOptions& options);

// Frequency of sup_{k in J} |X_(floor(np)+k) - F^{-1}(p)| > gamma against
// the concentration bound, with J the rank buffer. `pi_lower` must bound the
// density from below on [0, 1]. Passes iff frequency <= bound + 3 sigma.
absl::StatusOr<VerificationReport> VerifyQuantileConcentration(
    const DistributionOracle& oracle, double pi_lower, int64_t n, double p,
    double gamma, int64_t trials, uint64_t seed);

struct LowerBoundOptions {
  std::vector<int64_t> sizes;  // Default: 0..20.
  std::vector<double> epsilons = {0.5, 1.0};
  std::vector<double> targets = {0.0, 0.3, 0.5, 0.75, 1.0};
  std::vector<double> gammas = {0.1, 0.25};
  std::vector<double> orders = {0.1, 0.5, 0.9};
};

// Exact P(|q - t| > gamma) of the single-quantile mechanism, integrated from
// its piecewise-constant density, on several sample families (clustered at
// t, at 0, at 1, evenly spaced, split around t). Passes iff it is at least
// 1/2 exp(-n eps / 2) up to 1e-12 rounding.
absl::StatusOr<VerificationReport> VerifyLowerBoundQExp(
    const LowerBoundOptions& options);

struct FactsOptions {
  std::vector<double> betas = {0.1, 0.3};
  int64_t trials = 1000;
  int64_t n = 200;
  double epsilon = 1.0;
  std::vector<double> single_orders = {0.3, 0.5};
  std::vector<int> recexp_m = {2, 4, 8};
  double slack = 0.03;
};

// Exceedance frequency of the rank-error thresholds on evenly spaced
// samples with known minimum gap; passes iff frequency <= beta + slack.
absl::StatusOr<VerificationReport> VerifyEmpiricalFacts(
    const FactsOptions& options, uint64_t seed);

// Random piecewise-constant densities perturbed in sup norm by alpha; checks
// |F^{-1}(p) - F_hat^{-1}(p)| <= 2 alpha / pi_lower + 1e-12 whenever
// [F^{-1}(p) - 2 alpha / pi_lower, F^{-1}(p) + alpha / pi_lower] is inside
// (0, 1).
absl::StatusOr<VerificationReport> VerifyInversionStability(int64_t cases,
                                                            uint64_t seed);

// |Cdf(Quantile(p)) - p| <= 1e-10 on `points` orders per distribution, and
// Beta(2,1) Quantile(0.25) = 0.5.
absl::StatusOr<VerificationReport> VerifyOracleRoundTrip(
    const std::vector<DistributionOracle>& oracles, int points);

// Records every mechanism call of one RecExp run and checks that each call
// spends epsilon / denominator, that the deepest root-to-leaf paths spend
// exactly the effective budget, and that every root-to-leaf path does.
absl::StatusOr<VerificationReport> VerifyRecExpBudget(
    int m, double epsilon, NeighboringRelation relation, uint64_t seed);

// Noiseless histogram quantiles lie within one bin width of the empirical
// quantile inf{x : F_n(x) >= p}. Uses the non-private test mode.
absl::StatusOr<VerificationReport> VerifyNoiselessHistogram(int64_t cases,
                                                            uint64_t seed);

}  // namespace dpq

#endif  // DPQ_VERIFICATION_H_
