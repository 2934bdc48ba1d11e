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

// Closed-form error and tail bounds for the quantile estimators.
//
// Every evaluator is a pure function. Inputs outside the domain of a formula
// (non-positive n, epsilon outside (0, inf), ...) produce InvalidArgument.
// Violated hypotheses of a bound that is only valid in a parameter range
// produce FailedPrecondition, so callers can tell the two apart. Values above
// one are returned unclipped: a vacuous bound stays visibly vacuous.

#ifndef DPQ_BOUNDS_H_
#define DPQ_BOUNDS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpq/distributions.h"

namespace dpq {

// Threshold on the rank error of a single exponential-mechanism quantile:
// 2 (ln(1/delta_gap) + ln(1/beta)) / epsilon. delta_gap is a lower bound on
// the spacings of the sample (including 0 and 1), in (0, 1].
absl::StatusOr<double> FactQExpThreshold(double delta_gap, double beta,
                                         double epsilon);

// Same for the recursive estimator with m orders:
// 2 (log2 m + 1)^2 (ln(1/delta_gap) + ln m + ln(1/beta)) / epsilon,
// with log2 m not floored.
absl::StatusOr<double> FactRecExpThreshold(double delta_gap, double beta,
                                           double epsilon, int64_t m);

// Which exponent the single-quantile statistical term uses.
enum class QExpTailForm {
  // 4 exp(-gamma^2 lo^2 n / 8).
  kStatement,
  // 4 exp(-gamma^2 lo^2 n / (8 max(p, 1 - p))), needs p.
  kProofVariant,
};

// 4 n sqrt(2e hi) exp(-eps n gamma lo / 32) + 4 exp(-gamma^2 lo^2 n / 8),
// with lo = envelope.lower and hi = envelope.upper.
absl::StatusOr<double> ThmQExpTail(int64_t n, double gamma, double epsilon,
                                   const DensityEnvelope& envelope,
                                   QExpTailForm form = QExpTailForm::kStatement,
                                   double p = 0.5);

// 4 n m sqrt(2e hi) exp(-eps n gamma lo / (32 m)) + 4 m exp(-gamma^2 lo^2 n/8).
absl::StatusOr<double> ThmIndExpTail(int64_t n, int64_t m, double gamma,
                                     double epsilon,
                                     const DensityEnvelope& envelope);

// 4 n sqrt(2e hi m) exp(-eps n gamma lo / (32 log2(2m)^2))
//   + 4 m exp(-gamma^2 lo^2 n / 8).
absl::StatusOr<double> ThmRecExpTail(int64_t n, int64_t m, double gamma,
                                     double epsilon,
                                     const DensityEnvelope& envelope);

// (1/h) exp(-gamma lo h n eps / 8) + (2/h) exp(-(h^2/4)(gamma lo/2 - L h)^2 n)
// for the sup error of the histogram quantile function on the central part
// of the distribution. Hypotheses (FailedPrecondition when violated):
// 1/h is an integer, h < lo / (4 L), gamma0 in (2 L h / lo, 1/2) and
// gamma in (2 L h / lo, gamma0).
absl::StatusOr<double> ThmHistTail(int64_t n, double gamma, double epsilon,
                                   const DensityEnvelope& envelope, double h,
                                   double gamma0);

// (1/h) exp(-gamma h n eps / 4) + (2/h) exp(-h^2 (gamma - L h)^2 n / 4), the
// sup-norm deviation of the private histogram density; needs gamma > L h.
absl::StatusOr<double> LemmaHistDensityTail(int64_t n, double gamma,
                                            double epsilon, double lipschitz,
                                            double h);

// Minimax-style lower bounds on P(|q - t| > gamma), gamma in (0, 1/4]:
// 1/2 exp(-n eps / 2), 1/2 exp(-n eps / (2m)) and
// 1/2 exp(-n eps / (2 (log2 m + 1))).
absl::StatusOr<double> LemmaQExpLower(int64_t n, double epsilon);
absl::StatusOr<double> IndExpLower(int64_t n, int64_t m, double epsilon);
absl::StatusOr<double> RecExpLower(int64_t n, int64_t m, double epsilon);

// P(min gap > gamma) = (1 - (n + 1) gamma)^n for n uniform points, where the
// n + 1 gaps include those to 0 and 1. Zero when gamma >= 1 / (n + 1).
absl::StatusOr<double> GapSurvivalUniform(int64_t n, double gamma);

// exp(-4 hi gamma), a lower bound on P(min gap > gamma / n^2) for densities
// bounded by hi. Needs gamma < 1 / (4 hi).
absl::StatusOr<double> LemmaGapLower(double gamma, double pi_upper);

// 2 exp(-gamma^2 lo^2 n / (8p)) + 2 exp(-gamma^2 lo^2 n / (8(1 - p))).
absl::StatusOr<double> LemmaQuantileConcentrationTail(int64_t n, double p,
                                                      double gamma,
                                                      double pi_lower);

// Half-width of the rank buffer around floor(n p) covered by the
// concentration bound: floor(n gamma lo / 2) - 1. May be negative, in which
// case the buffer is empty.
absl::StatusOr<int64_t> QuantileConcentrationBuffer(int64_t n, double gamma,
                                                    double pi_lower);

enum class Estimator { kRecExp, kHistogram };
absl::string_view EstimatorName(Estimator estimator);

// Inputs shared by the RecExp and histogram tail bounds.
struct BoundInputs {
  int64_t n = 0;
  int64_t m = 1;
  double epsilon = 0.0;
  double gamma = 0.0;
  DensityEnvelope envelope;
  double h = 0.0;
  double gamma0 = 0.0;
};

struct EstimatorChoice {
  Estimator estimator = Estimator::kRecExp;
  double recexp_bound = 0.0;
  // Unset (NaN) when the histogram bound could not be evaluated.
  double histogram_bound = 0.0;
  // Set when the histogram hypotheses fail and RecExp wins by default.
  std::string warning;
};

// Picks the estimator with the smaller tail bound. Ties go to RecExp. If the
// histogram bound's hypotheses fail, RecExp is returned with a warning; an
// invalid RecExp bound is an error.
absl::StatusOr<EstimatorChoice> ChooseEstimator(const BoundInputs& inputs);

// A guard (hypothesis) of a named bound and whether it holds.
struct GuardCheck {
  std::string condition;
  bool holds = false;
};

struct BoundEvaluation {
  std::string name;
  double value = 0.0;
  std::vector<GuardCheck> guards;
  // Extra output, e.g. the chosen estimator or the buffer half-width.
  std::string note;
};

// Names accepted by EvaluateNamedBound.
std::vector<std::string> NamedBounds();

// Evaluates a bound by name from key=value parameters (n, m, eps, gamma,
// delta, beta, p, pi_lower, pi_upper, L, h, gamma0, variant). Unknown names
// or keys, and missing keys, are InvalidArgument. A violated guard is
// FailedPrecondition naming the guard.
absl::StatusOr<BoundEvaluation> EvaluateNamedBound(
    absl::string_view name, const std::map<std::string, std::string>& params);

}  // namespace dpq

#endif  // DPQ_BOUNDS_H_
