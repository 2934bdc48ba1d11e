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

#include "dpq/bounds.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"

namespace dpq {
namespace {

constexpr double kE = std::numbers::e;

absl::Status Positive(absl::string_view name, double x) {
  if (!(std::isfinite(x) && x > 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be positive and finite, got %g", name, x));
  }
  return absl::OkStatus();
}

absl::Status AtLeast(absl::string_view name, int64_t x, int64_t minimum) {
  if (x < minimum) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be at least %d, got %d", name, minimum, x));
  }
  return absl::OkStatus();
}

absl::Status OpenUnit(absl::string_view name, double x) {
  if (!(x > 0 && x < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be in (0, 1), got %g", name, x));
  }
  return absl::OkStatus();
}

absl::Status CheckAll(std::initializer_list<absl::Status> statuses) {
  for (const absl::Status& status : statuses) {
    if (!status.ok()) return status;
  }
  return absl::OkStatus();
}

absl::Status CheckLowerUpper(const DensityEnvelope& envelope) {
  if (absl::Status s = Positive("pi_lower", envelope.lower); !s.ok()) return s;
  if (absl::Status s = Positive("pi_upper", envelope.upper); !s.ok()) return s;
  if (envelope.upper < envelope.lower) {
    return absl::InvalidArgumentError(
        absl::StrFormat("pi_upper %g is below pi_lower %g", envelope.upper,
                        envelope.lower));
  }
  return absl::OkStatus();
}

// 4 exp(-gamma^2 lo^2 n / 8), the term shared by the mechanism tail bounds.
double StatisticalTerm(int64_t n, double gamma, double lo) {
  return 4.0 * std::exp(-gamma * gamma * lo * lo * static_cast<double>(n) / 8);
}

std::vector<GuardCheck> HistTailGuards(double gamma, double lo, double L,
                                       double h, double gamma0) {
  const double inverse_h = 1.0 / h;
  const double rounded = std::round(inverse_h);
  const double floor_gamma = 2 * L * h / lo;
  return {
      {"1/h is an integer",
       rounded >= 1 && std::fabs(inverse_h - rounded) <= 1e-9 * rounded},
      {"h < pi_lower/(4L)", L == 0 || h < lo / (4 * L)},
      {"2Lh/pi_lower < gamma0 < 1/2", gamma0 > floor_gamma && gamma0 < 0.5},
      {"2Lh/pi_lower < gamma < gamma0", gamma > floor_gamma && gamma < gamma0},
  };
}

absl::Status FirstViolated(const std::vector<GuardCheck>& guards) {
  for (const GuardCheck& guard : guards) {
    if (!guard.holds) {
      return absl::FailedPreconditionError(
          absl::StrCat("Violated precondition: ", guard.condition));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> FactQExpThreshold(double delta_gap, double beta,
                                         double epsilon) {
  if (!(delta_gap > 0 && delta_gap <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must be in (0, 1], got %g", delta_gap));
  }
  if (absl::Status s = CheckAll({OpenUnit("beta", beta),
                                 Positive("epsilon", epsilon)});
      !s.ok()) {
    return s;
  }
  return 2 * (std::log(1 / delta_gap) + std::log(1 / beta)) / epsilon;
}

absl::StatusOr<double> FactRecExpThreshold(double delta_gap, double beta,
                                           double epsilon, int64_t m) {
  if (absl::Status s = AtLeast("m", m, 1); !s.ok()) return s;
  absl::StatusOr<double> single = FactQExpThreshold(delta_gap, beta, epsilon);
  if (!single.ok()) return single.status();
  const double md = static_cast<double>(m);
  const double depth = std::log2(md) + 1;
  return 2 * depth * depth *
         (std::log(1 / delta_gap) + std::log(md) + std::log(1 / beta)) /
         epsilon;
}

absl::StatusOr<double> ThmQExpTail(int64_t n, double gamma, double epsilon,
                                   const DensityEnvelope& envelope,
                                   QExpTailForm form, double p) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 1), Positive("gamma", gamma),
                                 Positive("epsilon", epsilon),
                                 CheckLowerUpper(envelope)});
      !s.ok()) {
    return s;
  }
  const double nd = static_cast<double>(n);
  const double lo = envelope.lower;
  const double privacy = 4 * nd * std::sqrt(2 * kE * envelope.upper) *
                         std::exp(-epsilon * nd * gamma * lo / 32);
  if (form == QExpTailForm::kStatement) {
    return privacy + StatisticalTerm(n, gamma, lo);
  }
  if (absl::Status s = OpenUnit("p", p); !s.ok()) return s;
  return privacy + 4 * std::exp(-gamma * gamma * lo * lo * nd /
                                (8 * std::max(p, 1 - p)));
}

absl::StatusOr<double> ThmIndExpTail(int64_t n, int64_t m, double gamma,
                                     double epsilon,
                                     const DensityEnvelope& envelope) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 1), AtLeast("m", m, 1),
                                 Positive("gamma", gamma),
                                 Positive("epsilon", epsilon),
                                 CheckLowerUpper(envelope)});
      !s.ok()) {
    return s;
  }
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double lo = envelope.lower;
  return 4 * nd * md * std::sqrt(2 * kE * envelope.upper) *
             std::exp(-epsilon * nd * gamma * lo / (32 * md)) +
         md * StatisticalTerm(n, gamma, lo);
}

absl::StatusOr<double> ThmRecExpTail(int64_t n, int64_t m, double gamma,
                                     double epsilon,
                                     const DensityEnvelope& envelope) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 1), AtLeast("m", m, 1),
                                 Positive("gamma", gamma),
                                 Positive("epsilon", epsilon),
                                 CheckLowerUpper(envelope)});
      !s.ok()) {
    return s;
  }
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double lo = envelope.lower;
  const double log_term = std::log2(2 * md);
  return 4 * nd * std::sqrt(2 * kE * envelope.upper * md) *
             std::exp(-epsilon * nd * gamma * lo / (32 * log_term * log_term)) +
         md * StatisticalTerm(n, gamma, lo);
}

absl::StatusOr<double> ThmHistTail(int64_t n, double gamma, double epsilon,
                                   const DensityEnvelope& envelope, double h,
                                   double gamma0) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 1), Positive("gamma", gamma),
                                 Positive("epsilon", epsilon),
                                 Positive("pi_lower", envelope.lower),
                                 Positive("h", h), Positive("gamma0", gamma0)});
      !s.ok()) {
    return s;
  }
  if (!(std::isfinite(envelope.lipschitz) && envelope.lipschitz >= 0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "L must be finite and non-negative, got %g", envelope.lipschitz));
  }
  const double lo = envelope.lower;
  const double L = envelope.lipschitz;
  if (absl::Status s = FirstViolated(HistTailGuards(gamma, lo, L, h, gamma0));
      !s.ok()) {
    return s;
  }
  const double nd = static_cast<double>(n);
  const double margin = gamma * lo / 2 - L * h;
  return std::exp(-gamma * lo * h * nd * epsilon / 8) / h +
         2 / h * std::exp(-(h * h / 4) * margin * margin * nd);
}

absl::StatusOr<double> LemmaHistDensityTail(int64_t n, double gamma,
                                            double epsilon, double lipschitz,
                                            double h) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 1), Positive("gamma", gamma),
                                 Positive("epsilon", epsilon),
                                 Positive("h", h)});
      !s.ok()) {
    return s;
  }
  if (!(std::isfinite(lipschitz) && lipschitz >= 0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "L must be finite and non-negative, got %g", lipschitz));
  }
  if (!(gamma > lipschitz * h)) {
    return absl::FailedPreconditionError(
        "Violated precondition: gamma > L h");
  }
  const double nd = static_cast<double>(n);
  const double margin = gamma - lipschitz * h;
  return std::exp(-gamma * h * nd * epsilon / 4) / h +
         2 / h * std::exp(-h * h * margin * margin * nd / 4);
}

absl::StatusOr<double> LemmaQExpLower(int64_t n, double epsilon) {
  return IndExpLower(n, 1, epsilon);
}

absl::StatusOr<double> IndExpLower(int64_t n, int64_t m, double epsilon) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 0), AtLeast("m", m, 1),
                                 Positive("epsilon", epsilon)});
      !s.ok()) {
    return s;
  }
  return 0.5 * std::exp(-static_cast<double>(n) * epsilon /
                        (2 * static_cast<double>(m)));
}

absl::StatusOr<double> RecExpLower(int64_t n, int64_t m, double epsilon) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 0), AtLeast("m", m, 1),
                                 Positive("epsilon", epsilon)});
      !s.ok()) {
    return s;
  }
  const double depth = std::log2(static_cast<double>(m)) + 1;
  return 0.5 * std::exp(-static_cast<double>(n) * epsilon / (2 * depth));
}

absl::StatusOr<double> GapSurvivalUniform(int64_t n, double gamma) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 0), Positive("gamma", gamma)});
      !s.ok()) {
    return s;
  }
  const double nd = static_cast<double>(n);
  const double base = 1 - (nd + 1) * gamma;
  if (base <= 0) return 0.0;
  return std::pow(base, nd);
}

absl::StatusOr<double> LemmaGapLower(double gamma, double pi_upper) {
  if (absl::Status s = CheckAll({Positive("gamma", gamma),
                                 Positive("pi_upper", pi_upper)});
      !s.ok()) {
    return s;
  }
  if (!(gamma < 1 / (4 * pi_upper))) {
    return absl::FailedPreconditionError(
        "Violated precondition: gamma < 1/(4 pi_upper)");
  }
  return std::exp(-4 * pi_upper * gamma);
}

absl::StatusOr<double> LemmaQuantileConcentrationTail(int64_t n, double p,
                                                      double gamma,
                                                      double pi_lower) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 1), OpenUnit("p", p),
                                 Positive("gamma", gamma),
                                 Positive("pi_lower", pi_lower)});
      !s.ok()) {
    return s;
  }
  const double scaled = gamma * gamma * pi_lower * pi_lower *
                        static_cast<double>(n) / 8;
  return 2 * std::exp(-scaled / p) + 2 * std::exp(-scaled / (1 - p));
}

absl::StatusOr<int64_t> QuantileConcentrationBuffer(int64_t n, double gamma,
                                                    double pi_lower) {
  if (absl::Status s = CheckAll({AtLeast("n", n, 1), Positive("gamma", gamma),
                                 Positive("pi_lower", pi_lower)});
      !s.ok()) {
    return s;
  }
  return static_cast<int64_t>(
             std::floor(0.5 * static_cast<double>(n) * gamma * pi_lower)) -
         1;
}

absl::string_view EstimatorName(Estimator estimator) {
  return estimator == Estimator::kRecExp ? "recexp" : "histogram";
}

absl::StatusOr<EstimatorChoice> ChooseEstimator(const BoundInputs& inputs) {
  absl::StatusOr<double> recexp = ThmRecExpTail(
      inputs.n, inputs.m, inputs.gamma, inputs.epsilon, inputs.envelope);
  if (!recexp.ok()) return recexp.status();
  EstimatorChoice choice{.estimator = Estimator::kRecExp,
                         .recexp_bound = *recexp};
  absl::StatusOr<double> histogram =
      ThmHistTail(inputs.n, inputs.gamma, inputs.epsilon, inputs.envelope,
                  inputs.h, inputs.gamma0);
  if (!histogram.ok()) {
    choice.histogram_bound = std::numeric_limits<double>::quiet_NaN();
    choice.warning = absl::StrCat("Histogram bound not evaluable (",
                                  histogram.status().message(),
                                  "); defaulting to RecExp");
    return choice;
  }
  choice.histogram_bound = *histogram;
  if (*histogram < *recexp) choice.estimator = Estimator::kHistogram;
  return choice;
}

// Named evaluation for the command line.

namespace {

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  absl::StatusOr<double> Real(const std::string& key) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Missing parameter ", key));
    }
    double value = 0;
    if (!absl::SimpleAtod(it->second, &value)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Parameter ", key, " is not a number: '", it->second, "'"));
    }
    return value;
  }

  absl::StatusOr<int64_t> Count(const std::string& key) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Missing parameter ", key));
    }
    int64_t value = 0;
    if (!absl::SimpleAtoi(it->second, &value)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Parameter ", key, " is not an integer: '", it->second, "'"));
    }
    return value;
  }

  bool Has(const std::string& key) {
    used_.insert(key);
    return raw_.contains(key);
  }

  std::string Text(const std::string& key) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? "" : it->second;
  }

  absl::Status CheckNoUnknown() const {
    for (const auto& [key, unused] : raw_) {
      if (!used_.contains(key)) {
        return absl::InvalidArgumentError(
            absl::StrCat("Unknown parameter ", key));
      }
    }
    return absl::OkStatus();
  }

 private:
  const std::map<std::string, std::string>& raw_;
  std::set<std::string> used_;
};

#define DPQ_ASSIGN(lhs, expr)                      \
  auto lhs##_or = (expr);                          \
  if (!lhs##_or.ok()) return lhs##_or.status();    \
  auto lhs = *lhs##_or

using Evaluator = std::function<absl::StatusOr<BoundEvaluation>(Params&)>;

BoundEvaluation Value(double value, std::vector<GuardCheck> guards = {}) {
  return BoundEvaluation{.value = value, .guards = std::move(guards)};
}

absl::StatusOr<BoundEvaluation> FromStatus(absl::StatusOr<double> value,
                                           std::vector<GuardCheck> guards = {}) {
  if (!value.ok()) return value.status();
  return Value(*value, std::move(guards));
}

absl::StatusOr<DensityEnvelope> LowerUpper(Params& params) {
  DPQ_ASSIGN(lo, params.Real("pi_lower"));
  DPQ_ASSIGN(hi, params.Real("pi_upper"));
  return DensityEnvelope{.lower = lo, .upper = hi};
}

// Hypotheses of the mechanism tail bounds that depend on the order p. They
// are only checked when p is supplied.
absl::StatusOr<std::vector<GuardCheck>> OrderGuards(Params& params, int64_t n,
                                                    double gamma, double lo) {
  if (!params.Has("p")) return std::vector<GuardCheck>{};
  DPQ_ASSIGN(p, params.Real("p"));
  const double side = std::min(p, 1 - p);
  std::vector<GuardCheck> guards = {
      {"min(p,1-p) > 2/n", side > 2.0 / static_cast<double>(n)},
      {"gamma < 2 min(p,1-p)/pi_lower", gamma < 2 * side / lo},
  };
  if (absl::Status s = FirstViolated(guards); !s.ok()) return s;
  return guards;
}

const std::map<std::string, Evaluator>& Registry() {
  static const auto* registry = new std::map<std::string, Evaluator>{
      {"fact_qexp",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(delta, params.Real("delta"));
         DPQ_ASSIGN(beta, params.Real("beta"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         return FromStatus(FactQExpThreshold(delta, beta, eps));
       }},
      {"fact_recexp",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(delta, params.Real("delta"));
         DPQ_ASSIGN(beta, params.Real("beta"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         DPQ_ASSIGN(m, params.Count("m"));
         return FromStatus(FactRecExpThreshold(delta, beta, eps, m));
       }},
      {"thm_qexp",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         DPQ_ASSIGN(envelope, LowerUpper(params));
         QExpTailForm form = QExpTailForm::kStatement;
         const std::string variant = params.Text("variant");
         if (variant == "proof") {
           form = QExpTailForm::kProofVariant;
         } else if (!variant.empty() && variant != "statement") {
           return absl::InvalidArgumentError(absl::StrCat(
               "variant must be statement or proof, got ", variant));
         }
         if (form == QExpTailForm::kProofVariant && !params.Has("p")) {
           return absl::InvalidArgumentError(
               "variant=proof needs the order p");
         }
         DPQ_ASSIGN(guards, OrderGuards(params, n, gamma, envelope.lower));
         double p = 0.5;
         if (params.Has("p")) {
           DPQ_ASSIGN(given, params.Real("p"));
           p = given;
         }
         return FromStatus(ThmQExpTail(n, gamma, eps, envelope, form, p),
                           guards);
       }},
      {"thm_indexp",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(m, params.Count("m"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         DPQ_ASSIGN(envelope, LowerUpper(params));
         return FromStatus(ThmIndExpTail(n, m, gamma, eps, envelope));
       }},
      {"thm_recexp",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(m, params.Count("m"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         DPQ_ASSIGN(envelope, LowerUpper(params));
         return FromStatus(ThmRecExpTail(n, m, gamma, eps, envelope));
       }},
      {"thm_hist",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         DPQ_ASSIGN(lo, params.Real("pi_lower"));
         DPQ_ASSIGN(L, params.Real("L"));
         DPQ_ASSIGN(h, params.Real("h"));
         DPQ_ASSIGN(gamma0, params.Real("gamma0"));
         DensityEnvelope envelope{.lower = lo, .lipschitz = L};
         std::vector<GuardCheck> guards;
         if (lo > 0 && h > 0) guards = HistTailGuards(gamma, lo, L, h, gamma0);
         return FromStatus(ThmHistTail(n, gamma, eps, envelope, h, gamma0),
                           guards);
       }},
      {"lemma_hist_density",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         DPQ_ASSIGN(L, params.Real("L"));
         DPQ_ASSIGN(h, params.Real("h"));
         return FromStatus(LemmaHistDensityTail(n, gamma, eps, L, h),
                           {{"gamma > L h", gamma > L * h}});
       }},
      {"qexp_lower",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         return FromStatus(LemmaQExpLower(n, eps));
       }},
      {"indexp_lower",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(m, params.Count("m"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         return FromStatus(IndExpLower(n, m, eps));
       }},
      {"recexp_lower",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(m, params.Count("m"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         return FromStatus(RecExpLower(n, m, eps));
       }},
      {"gap_survival",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         return FromStatus(
             GapSurvivalUniform(n, gamma),
             {{"gamma < 1/(n+1) (else the event is impossible)",
               gamma < 1.0 / (static_cast<double>(n) + 1)}});
       }},
      {"gap_lower",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(hi, params.Real("pi_upper"));
         return FromStatus(LemmaGapLower(gamma, hi),
                           {{"gamma < 1/(4 pi_upper)", gamma < 1 / (4 * hi)}});
       }},
      {"quantile_concentration",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(p, params.Real("p"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(lo, params.Real("pi_lower"));
         DPQ_ASSIGN(value, LemmaQuantileConcentrationTail(n, p, gamma, lo));
         DPQ_ASSIGN(buffer, QuantileConcentrationBuffer(n, gamma, lo));
         BoundEvaluation evaluation = Value(value);
         evaluation.note = absl::StrCat("buffer_half_width=", buffer);
         return evaluation;
       }},
      {"choose",
       [](Params& params) -> absl::StatusOr<BoundEvaluation> {
         BoundInputs inputs;
         DPQ_ASSIGN(n, params.Count("n"));
         DPQ_ASSIGN(m, params.Count("m"));
         DPQ_ASSIGN(gamma, params.Real("gamma"));
         DPQ_ASSIGN(eps, params.Real("eps"));
         DPQ_ASSIGN(envelope, LowerUpper(params));
         DPQ_ASSIGN(L, params.Real("L"));
         DPQ_ASSIGN(h, params.Real("h"));
         DPQ_ASSIGN(gamma0, params.Real("gamma0"));
         inputs.n = n;
         inputs.m = m;
         inputs.gamma = gamma;
         inputs.epsilon = eps;
         inputs.envelope = envelope;
         inputs.envelope.lipschitz = L;
         inputs.h = h;
         inputs.gamma0 = gamma0;
         DPQ_ASSIGN(choice, ChooseEstimator(inputs));
         BoundEvaluation evaluation = Value(
             std::min(choice.recexp_bound,
                      std::isnan(choice.histogram_bound)
                          ? choice.recexp_bound
                          : choice.histogram_bound));
         evaluation.note = absl::StrFormat(
             "estimator=%s recexp_bound=%.12g histogram_bound=%.12g%s",
             EstimatorName(choice.estimator), choice.recexp_bound,
             choice.histogram_bound,
             choice.warning.empty() ? "" : " warning=" + choice.warning);
         return evaluation;
       }},
  };
  return *registry;
}

#undef DPQ_ASSIGN

}  // namespace

std::vector<std::string> NamedBounds() {
  std::vector<std::string> names;
  for (const auto& [name, unused] : Registry()) names.push_back(name);
  return names;
}

absl::StatusOr<BoundEvaluation> EvaluateNamedBound(
    absl::string_view name, const std::map<std::string, std::string>& params) {
  auto it = Registry().find(std::string(name));
  if (it == Registry().end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Unknown bound '", name,
                     "'; known: ", absl::StrJoin(NamedBounds(), ", ")));
  }
  Params reader(params);
  absl::StatusOr<BoundEvaluation> evaluation = it->second(reader);
  if (!evaluation.ok()) return evaluation.status();
  if (absl::Status s = reader.CheckNoUnknown(); !s.ok()) return s;
  evaluation->name = std::string(name);
  return evaluation;
}

}  // namespace dpq
