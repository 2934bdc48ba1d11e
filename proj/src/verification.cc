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

#include "dpq/verification.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpq/bounds.h"
#include "dpq/experiment_config.h"
#include "dpq/histogram.h"
#include "dpq/quantiles.h"
#include "json.hpp"

namespace dpq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum spacing of sorted values in [0, 1], counting the gaps to 0 and 1.
double MinGap(std::span<const double> sorted) {
  double previous = 0.0;
  double gap = kInf;
  for (double x : sorted) {
    gap = std::min(gap, x - previous);
    previous = x;
  }
  return std::min(gap, 1.0 - previous);
}

SortedSample EvenlySpaced(int64_t n) {
  std::vector<double> values(n);
  for (int64_t i = 0; i < n; ++i) {
    values[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
  }
  return *SortedSample::Create(std::move(values));
}

// All nondecreasing index sequences of length `size` over `alphabet` values.
void Multisets(int alphabet, int size, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == size) {
    out.push_back(current);
    return;
  }
  const int start = current.empty() ? 0 : current.back();
  for (int v = start; v < alphabet; ++v) {
    current.push_back(v);
    Multisets(alphabet, size, current, out);
    current.pop_back();
  }
}

std::vector<double> ToValues(const std::vector<int>& indices,
                             const std::vector<double>& alphabet) {
  std::vector<double> values;
  values.reserve(indices.size());
  for (int i : indices) values.push_back(alphabet[i]);
  return values;
}

absl::StatusOr<double> MaxLogRatio(const std::vector<double>& a,
                                   const std::vector<double>& b, double p,
                                   double epsilon, int grid_size) {
  const int64_t na = static_cast<int64_t>(a.size());
  const int64_t nb = static_cast<int64_t>(b.size());
  absl::StatusOr<WeightedIntervalDensity> da =
      QExpDensity(a, RankTarget{.rank = TargetRank(na, p)}, epsilon);
  if (!da.ok()) return da.status();
  absl::StatusOr<WeightedIntervalDensity> db =
      QExpDensity(b, RankTarget{.rank = TargetRank(nb, p)}, epsilon);
  if (!db.ok()) return db.status();

  std::vector<double> grid;
  grid.reserve(grid_size + a.size() + b.size() + 2);
  for (int i = 0; i < grid_size; ++i) {
    grid.push_back(static_cast<double>(i) / (grid_size - 1));
  }
  // Midpoints of every piece of the common refinement, so no piece is missed.
  std::vector<double> cuts = {0.0, 1.0};
  cuts.insert(cuts.end(), a.begin(), a.end());
  cuts.insert(cuts.end(), b.begin(), b.end());
  std::sort(cuts.begin(), cuts.end());
  for (size_t k = 1; k < cuts.size(); ++k) {
    if (cuts[k] > cuts[k - 1]) grid.push_back(0.5 * (cuts[k] + cuts[k - 1]));
  }

  double worst = 0.0;
  for (double q : grid) {
    absl::StatusOr<double> la = LogDensityAt(*da, q);
    absl::StatusOr<double> lb = LogDensityAt(*db, q);
    if (!la.ok()) return la.status();
    if (!lb.ok()) return lb.status();
    worst = std::max(worst, std::fabs(*la - *lb));
  }
  return worst;
}

VerificationCheck ExactCheck(std::string name, double bound, double value,
                             bool pass) {
  return VerificationCheck{.name = std::move(name),
                           .bound = bound,
                           .empirical = value,
                           .ci_low = value,
                           .ci_high = value,
                           .pass = pass};
}

}  // namespace

bool VerificationReport::Passed() const { return FailureCount() == 0; }

int VerificationReport::FailureCount() const {
  return static_cast<int>(std::count_if(
      checks.begin(), checks.end(),
      [](const VerificationCheck& c) { return !c.pass; }));
}

std::string VerificationReport::HumanSummary() const {
  std::string out;
  for (const VerificationCheck& c : checks) {
    absl::StrAppendFormat(
        &out, "%s %s: value=%.6g bound=%.6g", c.pass ? "PASS" : "FAIL", c.name,
        c.empirical, c.bound);
    if (c.trials > 0) {
      absl::StrAppendFormat(&out, " trials=%d ci=[%.6g, %.6g]", c.trials,
                            c.ci_low, c.ci_high);
    }
    out += "\n";
  }
  absl::StrAppendFormat(&out, "%s: %s (%d checks, %d failed)\n", suite,
                        Passed() ? "PASS" : "FAIL", checks.size(),
                        FailureCount());
  return out;
}

std::string VerificationReport::Json() const {
  nlohmann::ordered_json json;
  json["suite"] = suite;
  json["pass"] = Passed();
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const VerificationCheck& c : checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["bound"] = c.bound;
    entry["empirical"] = c.empirical;
    entry["trials"] = c.trials;
    entry["ci"] = {c.ci_low, c.ci_high};
    entry["pass"] = c.pass;
    array.push_back(std::move(entry));
  }
  json["checks"] = std::move(array);
  return json.dump(2) + "\n";
}

std::pair<double, double> WilsonInterval(int64_t successes, int64_t trials,
                                         double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half =
      z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

absl::StatusOr<VerificationReport> VerifyGapLaw(
    int64_t n, const std::vector<double>& gammas, int64_t trials,
    uint64_t seed) {
  if (n < 1 || trials < 1) {
    return absl::InvalidArgumentError("gap law needs n >= 1 and trials >= 1");
  }
  VerificationReport report;
  report.suite = "gap-law";
  std::vector<double> points(n);
  for (size_t g = 0; g < gammas.size(); ++g) {
    const double gamma = gammas[g];
    absl::StatusOr<double> exact = GapSurvivalUniform(n, gamma);
    if (!exact.ok()) return exact.status();
    RandomSource rng = RandomSource(seed).Child(g);
    int64_t survived = 0;
    for (int64_t t = 0; t < trials; ++t) {
      for (double& x : points) x = rng.UniformDouble();
      std::sort(points.begin(), points.end());
      if (MinGap(points) > gamma) ++survived;
    }
    const auto [lo, hi] = WilsonInterval(survived, trials, kZ99);
    const bool impossible = gamma >= 1.0 / static_cast<double>(n + 1);
    const bool pass =
        impossible ? survived == 0 : (*exact >= lo && *exact <= hi);
    report.checks.push_back(VerificationCheck{
        .name = absl::StrFormat("n=%d gamma=%g", n, gamma),
        .bound = *exact,
        .empirical = static_cast<double>(survived) / trials,
        .trials = trials,
        .ci_low = lo,
        .ci_high = hi,
        .pass = pass});
  }
  return report;
}

absl::StatusOr<VerificationReport> VerifyDpRatio(const DpRatioOptions& options) {
  if (options.grid_size < 2 || options.max_n < 1 || options.values.empty()) {
    return absl::InvalidArgumentError("dp-ratio needs grid_size >= 2, max_n >= 1");
  }
  const int alphabet = static_cast<int>(options.values.size());
  std::vector<std::vector<int>> samples;
  std::vector<int> scratch;
  for (int size = 0; size <= options.max_n; ++size) {
    Multisets(alphabet, size, scratch, samples);
  }

  // Neighbor pairs as index multisets.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> add_remove;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> replace;
  for (const std::vector<int>& x : samples) {
    if (static_cast<int>(x.size()) < options.max_n) {
      for (int v = 0; v < alphabet; ++v) {
        std::vector<int> y = x;
        y.insert(std::upper_bound(y.begin(), y.end(), v), v);
        add_remove.emplace_back(x, std::move(y));
      }
    }
    for (size_t i = 0; i < x.size(); ++i) {
      if (i > 0 && x[i] == x[i - 1]) continue;
      for (int v = 0; v < alphabet; ++v) {
        if (v == x[i]) continue;
        std::vector<int> y = x;
        y.erase(y.begin() + i);
        y.insert(std::upper_bound(y.begin(), y.end(), v), v);
        // Each unordered pair once.
        if (x < y) replace.emplace_back(x, std::move(y));
      }
    }
  }

  VerificationReport report;
  report.suite = "dp-ratio";
  for (const auto& [relation, pairs] :
       {std::pair{"add-remove", &add_remove}, std::pair{"replace", &replace}}) {
    for (double epsilon : options.epsilons) {
      double worst = 0.0;
      for (const auto& [x, y] : *pairs) {
        const std::vector<double> a = ToValues(x, options.values);
        const std::vector<double> b = ToValues(y, options.values);
        for (double p : options.orders) {
          absl::StatusOr<double> ratio =
              MaxLogRatio(a, b, p, epsilon, options.grid_size);
          if (!ratio.ok()) return ratio.status();
          worst = std::max(worst, *ratio);
        }
      }
      VerificationCheck check = ExactCheck(
          absl::StrFormat("%s eps=%g pairs=%d max|log ratio|", relation,
                          epsilon, pairs->size()),
          epsilon, worst, worst <= epsilon + 1e-9);
      report.checks.push_back(check);
    }
  }
  return report;
}

absl::StatusOr<VerificationReport> VerifyQuantileConcentration(
    const DistributionOracle& oracle, double pi_lower, int64_t n, double p,
    double gamma, int64_t trials, uint64_t seed) {
  absl::StatusOr<double> bound =
      LemmaQuantileConcentrationTail(n, p, gamma, pi_lower);
  if (!bound.ok()) return bound.status();
  absl::StatusOr<int64_t> buffer =
      QuantileConcentrationBuffer(n, gamma, pi_lower);
  if (!buffer.ok()) return buffer.status();
  absl::StatusOr<double> truth = oracle.Quantile(p);
  if (!truth.ok()) return truth.status();
  if (!(gamma < std::min(*truth, 1 - *truth))) {
    return absl::InvalidArgumentError(
        "gamma must be below min(F^{-1}(p), 1 - F^{-1}(p))");
  }
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");

  const int64_t rank = TargetRank(n, p);
  const int64_t k_lo = std::max(-rank + 1, -*buffer + 1);
  const int64_t k_hi = std::min(n - rank, *buffer - 1);
  RandomSource rng(seed);
  int64_t exceed = 0;
  for (int64_t t = 0; t < trials; ++t) {
    const SortedSample sample = oracle.Sample(n, rng);
    bool deviates = false;
    for (int64_t k = k_lo; k <= k_hi && !deviates; ++k) {
      // X_(rank + k), one-based.
      const double x = sample.values()[rank + k - 1];
      deviates = std::fabs(x - *truth) > gamma;
    }
    if (deviates) ++exceed;
  }
  const double frequency = static_cast<double>(exceed) / trials;
  const double capped = std::min(*bound, 1.0);
  const double sigma = std::sqrt(capped * (1 - capped) / trials);
  const auto [lo, hi] = WilsonInterval(exceed, trials, kZ99);
  VerificationReport report;
  report.suite = "quantile-concentration";
  report.checks.push_back(VerificationCheck{
      .name = absl::StrFormat("%s n=%d p=%g gamma=%g buffer=%d", oracle.Name(),
                              n, p, gamma, *buffer),
      .bound = *bound,
      .empirical = frequency,
      .trials = trials,
      .ci_low = lo,
      .ci_high = hi,
      .pass = frequency <= capped + 3 * sigma});
  return report;
}

absl::StatusOr<VerificationReport> VerifyLowerBoundQExp(
    const LowerBoundOptions& options) {
  std::vector<int64_t> sizes = options.sizes;
  if (sizes.empty()) {
    for (int64_t n = 0; n <= 20; ++n) sizes.push_back(n);
  }
  VerificationReport report;
  report.suite = "lower-bound";
  for (int64_t n : sizes) {
    for (double epsilon : options.epsilons) {
      for (double gamma : options.gammas) {
        absl::StatusOr<double> bound = LemmaQExpLower(n, epsilon);
        if (!bound.ok()) return bound.status();
        double smallest = kInf;
        for (double t : options.targets) {
          const SortedSample evenly = EvenlySpaced(n);
          std::vector<double> split(n);
          for (int64_t i = 0; i < n; ++i) {
            split[i] = i < n / 2 ? std::max(0.0, t - gamma)
                                 : std::min(1.0, t + gamma);
          }
          const std::vector<std::vector<double>> families = {
              std::vector<double>(n, t), std::vector<double>(n, 0.0),
              std::vector<double>(n, 1.0),
              std::vector<double>(evenly.values().begin(),
                                  evenly.values().end()),
              split};
          for (const std::vector<double>& values : families) {
            for (double p : options.orders) {
              absl::StatusOr<WeightedIntervalDensity> density = QExpDensity(
                  values, RankTarget{.rank = TargetRank(n, p)}, epsilon);
              if (!density.ok()) return density.status();
              const double outside =
                  1.0 - ProbabilityMass(*density, t - gamma, t + gamma);
              smallest = std::min(smallest, outside);
            }
          }
        }
        report.checks.push_back(ExactCheck(
            absl::StrFormat("n=%d eps=%g gamma=%g min P(|q-t|>gamma)", n,
                            epsilon, gamma),
            *bound, smallest, smallest >= *bound - 1e-12));
      }
    }
  }
  return report;
}

absl::StatusOr<VerificationReport> VerifyEmpiricalFacts(
    const FactsOptions& options, uint64_t seed) {
  if (options.n < 1 || options.trials < 1) {
    return absl::InvalidArgumentError("facts need n >= 1 and trials >= 1");
  }
  const SortedSample sample = EvenlySpaced(options.n);
  const double delta = MinGap(sample.values());
  absl::StatusOr<PrivacyBudget> budget =
      PrivacyBudget::Create(options.epsilon, NeighboringRelation::kAddRemove);
  if (!budget.ok()) return budget.status();

  VerificationReport report;
  report.suite = "facts";
  auto add_check = [&](std::string name, double beta, int64_t exceed) {
    const double frequency = static_cast<double>(exceed) / options.trials;
    const auto [lo, hi] = WilsonInterval(exceed, options.trials, kZ99);
    report.checks.push_back(VerificationCheck{
        .name = std::move(name),
        .bound = beta + options.slack,
        .empirical = frequency,
        .trials = options.trials,
        .ci_low = lo,
        .ci_high = hi,
        .pass = frequency <= beta + options.slack});
  };

  uint64_t stream = 0;
  for (double beta : options.betas) {
    absl::StatusOr<double> threshold =
        FactQExpThreshold(delta, beta, options.epsilon);
    if (!threshold.ok()) return threshold.status();
    for (double p : options.single_orders) {
      RandomSource rng = RandomSource(seed).Child(stream++);
      const int64_t rank = TargetRank(options.n, p);
      int64_t exceed = 0;
      for (int64_t t = 0; t < options.trials; ++t) {
        absl::StatusOr<double> q = QExp(sample, p, options.epsilon, rng);
        if (!q.ok()) return q.status();
        if (EmpiricalError(sample, *q, rank) >= *threshold) ++exceed;
      }
      add_check(absl::StrFormat("qexp n=%d p=%g beta=%g threshold=%.4g",
                                options.n, p, beta, *threshold),
                beta, exceed);
    }
    for (int m : options.recexp_m) {
      absl::StatusOr<double> rec_threshold =
          FactRecExpThreshold(delta, beta, options.epsilon, m);
      if (!rec_threshold.ok()) return rec_threshold.status();
      absl::StatusOr<QuantileQuery> query =
          QuantileQuery::Create(PaperGrid(m), *budget);
      if (!query.ok()) return query.status();
      RandomSource rng = RandomSource(seed).Child(stream++);
      int64_t exceed = 0;
      for (int64_t t = 0; t < options.trials; ++t) {
        absl::StatusOr<std::vector<double>> q = RecExp(sample, *query, rng);
        if (!q.ok()) return q.status();
        int64_t worst = 0;
        for (int j = 0; j < m; ++j) {
          worst = std::max(
              worst, EmpiricalError(sample, (*q)[j],
                                    TargetRank(options.n, query->orders()[j])));
        }
        if (worst >= *rec_threshold) ++exceed;
      }
      add_check(absl::StrFormat("recexp n=%d m=%d beta=%g threshold=%.4g",
                                options.n, m, beta, *rec_threshold),
                beta, exceed);
    }
  }
  return report;
}

namespace {

// Integral of f over [0, x].
double IntegralUpTo(const PiecewiseConstantFunction& f, double x) {
  const std::span<const double> t = f.breakpoints();
  const std::span<const double> v = f.values();
  double total = 0.0;
  for (size_t k = 0; k < v.size() && t[k] < x; ++k) {
    total += v[k] * (std::min(x, t[k + 1]) - t[k]);
  }
  return total;
}

}  // namespace

absl::StatusOr<VerificationReport> VerifyInversionStability(int64_t cases,
                                                            uint64_t seed) {
  if (cases < 1) return absl::InvalidArgumentError("cases must be >= 1");
  double worst_excess = -kInf;
  int64_t violations = 0;
  int64_t evaluated = 0;
  for (int64_t c = 0; c < cases; ++c) {
    RandomSource rng = RandomSource(seed).Child(c);
    const int pieces = 1 + static_cast<int>(rng.NextU64() % 40);
    const int refine = 1 + static_cast<int>(rng.NextU64() % 4);
    std::vector<double> raw(pieces);
    for (double& v : raw) v = 0.2 + 2.0 * rng.UniformDouble();
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / pieces;
    std::vector<double> density;
    for (double v : raw) density.insert(density.end(), refine, v / mean);
    const double pi_lower = *std::min_element(density.begin(), density.end());
    const double alpha = 0.25 * pi_lower * rng.UniformOpen();

    std::vector<double> perturbed = density;
    for (double& v : perturbed) {
      // Mix of extreme and interior perturbations of size at most alpha.
      const uint64_t kind = rng.NextU64() % 4;
      const double shift = kind == 0   ? alpha
                           : kind == 1 ? -alpha
                                       : alpha * (2.0 * rng.UniformDouble() - 1.0);
      v += shift;
    }
    absl::StatusOr<PiecewiseConstantFunction> f =
        PiecewiseConstantFunction::Uniform(density);
    absl::StatusOr<PiecewiseConstantFunction> f_hat =
        PiecewiseConstantFunction::Uniform(perturbed);
    if (!f.ok()) return f.status();
    if (!f_hat.ok()) return f_hat.status();

    // Pick p = F(x) for x inside the admissible window.
    const double lo = 2 * alpha / pi_lower;
    const double hi = 1 - alpha / pi_lower;
    const double x = lo + (hi - lo) * rng.UniformOpen();
    const double p = std::clamp(IntegralUpTo(*f, x), 0.0, 1.0);
    absl::StatusOr<double> q = GeneralizedQuantile(*f, p);
    absl::StatusOr<double> q_hat = GeneralizedQuantile(*f_hat, p);
    if (!q.ok()) return q.status();
    if (!q_hat.ok()) return q_hat.status();
    if (!(*q - lo > 0 && *q + alpha / pi_lower < 1)) continue;
    ++evaluated;
    const double excess = std::fabs(*q - *q_hat) - 2 * alpha / pi_lower;
    worst_excess = std::max(worst_excess, excess);
    if (excess > 1e-12) ++violations;
  }
  VerificationReport report;
  report.suite = "inversion";
  report.checks.push_back(VerificationCheck{
      .name = absl::StrFormat(
          "max(|F^-1(p) - F_hat^-1(p)| - 2 alpha/pi_lower) over %d cases "
          "(%d violations)",
          evaluated, violations),
      .bound = 1e-12,
      .empirical = worst_excess,
      .trials = evaluated,
      .ci_low = worst_excess,
      .ci_high = worst_excess,
      .pass = violations == 0 && evaluated > 0});
  return report;
}

absl::StatusOr<VerificationReport> VerifyOracleRoundTrip(
    const std::vector<DistributionOracle>& oracles, int points) {
  if (points < 1) return absl::InvalidArgumentError("points must be >= 1");
  VerificationReport report;
  report.suite = "oracle";
  for (const DistributionOracle& oracle : oracles) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
      const double p = (i + 0.5) / points;
      absl::StatusOr<double> q = oracle.Quantile(p);
      if (!q.ok()) return q.status();
      worst = std::max(worst, std::fabs(oracle.Cdf(*q) - p));
    }
    report.checks.push_back(ExactCheck(
        absl::StrFormat("%s max|Cdf(Quantile(p)) - p| over %d orders",
                        oracle.Name(), points),
        1e-10, worst, worst <= 1e-10));
  }
  absl::StatusOr<DistributionOracle> beta21 = DistributionOracle::Beta(2, 1);
  if (!beta21.ok()) return beta21.status();
  absl::StatusOr<double> q = beta21->Quantile(0.25);
  if (!q.ok()) return q.status();
  report.checks.push_back(ExactCheck("beta(2,1) Quantile(0.25) vs 0.5", 0.5, *q,
                                     std::fabs(*q - 0.5) <= 1e-10));
  return report;
}

absl::StatusOr<VerificationReport> VerifyRecExpBudget(
    int m, double epsilon, NeighboringRelation relation, uint64_t seed) {
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(epsilon, relation);
  if (!budget.ok()) return budget.status();
  absl::StatusOr<std::vector<double>> orders =
      m >= 1 ? absl::StatusOr<std::vector<double>>(PaperGrid(m))
             : absl::InvalidArgumentError("m must be >= 1");
  if (!orders.ok()) return orders.status();
  absl::StatusOr<QuantileQuery> query = QuantileQuery::Create(*orders, *budget);
  if (!query.ok()) return query.status();
  absl::StatusOr<int> depth = RecExpDepth(m);
  if (!depth.ok()) return depth.status();
  const int factor = relation == NeighboringRelation::kReplace ? 2 : 1;
  const int denominator = *depth * factor;

  RandomSource rng(seed);
  const SortedSample sample = EvenlySpaced(100);
  BudgetLog log;
  absl::StatusOr<std::vector<double>> estimates =
      RecExp(sample, *query, rng, &log);
  if (!estimates.ok()) return estimates.status();
  const std::vector<MechanismCall>& calls = log.calls();

  VerificationReport report;
  report.suite = "recexp-budget";
  report.checks.push_back(ExactCheck("exponential-mechanism calls == m", m,
                                     static_cast<double>(calls.size()),
                                     static_cast<int>(calls.size()) == m));

  const double call_epsilon = epsilon / denominator;
  double worst_share = 0.0;
  bool shares_ok = true;
  for (const MechanismCall& call : calls) {
    shares_ok = shares_ok &&
                call.kind == MechanismCall::Kind::kExponential &&
                call.budget_denominator == denominator &&
                call.epsilon == call_epsilon;
    worst_share = std::max(worst_share, std::fabs(call.epsilon - call_epsilon));
  }
  report.checks.push_back(ExactCheck(
      absl::StrFormat("every call spends eps/%d = %.17g", denominator,
                      call_epsilon),
      call_epsilon, call_epsilon + worst_share, shares_ok));

  // Leaves are calls without children. A root-to-leaf path through L calls
  // spends L/denominator of eps, exactly in rationals.
  std::vector<bool> has_child(calls.size(), false);
  for (const MechanismCall& call : calls) {
    if (call.parent >= 0) has_child[call.parent] = true;
  }
  int shallowest = std::numeric_limits<int>::max();
  int deepest = 0;
  for (size_t i = 0; i < calls.size(); ++i) {
    if (has_child[i]) continue;
    shallowest = std::min(shallowest, calls[i].depth);
    deepest = std::max(deepest, calls[i].depth);
  }
  const double effective = epsilon / factor;
  report.checks.push_back(ExactCheck(
      absl::StrFormat("deepest root-to-leaf path spends %d/%d of eps", deepest,
                      denominator),
      effective, epsilon * deepest / denominator, deepest * factor == denominator));
  report.checks.push_back(ExactCheck(
      absl::StrFormat("every root-to-leaf path spends %d/%d of eps "
                      "(shallowest leaf at depth %d)",
                      *depth, denominator, shallowest),
      effective, epsilon * shallowest / denominator,
      shallowest * factor == denominator));
  return report;
}

absl::StatusOr<VerificationReport> VerifyNoiselessHistogram(int64_t cases,
                                                            uint64_t seed) {
  if (cases < 1) return absl::InvalidArgumentError("cases must be >= 1");
  absl::StatusOr<PrivacyBudget> budget =
      PrivacyBudget::Create(1.0, NeighboringRelation::kReplace);
  if (!budget.ok()) return budget.status();
  double worst_excess = -kInf;
  int64_t violations = 0;
  for (int64_t c = 0; c < cases; ++c) {
    RandomSource rng = RandomSource(seed).Child(c);
    const int64_t n = 1 + static_cast<int64_t>(rng.NextU64() % 200);
    const int bins = 1 + static_cast<int>(rng.NextU64() % 50);
    const bool coarse = rng.NextU64() % 2 == 0;
    std::vector<double> values(n);
    for (double& x : values) {
      x = rng.UniformDouble();
      // Coarse values create ties and points on bin edges.
      if (coarse) x = std::round(x * 20) / 20;
    }
    absl::StatusOr<SortedSample> sample =
        SortedSample::FromUnsorted(std::move(values));
    if (!sample.ok()) return sample.status();
    const int m = 1 + static_cast<int>(rng.NextU64() % 10);
    std::vector<double> orders(m);
    for (double& p : orders) p = rng.UniformOpen();
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    absl::StatusOr<QuantileQuery> query = QuantileQuery::Create(orders, *budget);
    if (!query.ok()) return query.status();
    absl::StatusOr<std::vector<double>> q = QuantilesFromHistogram(
        *sample, bins, *query, rng, NoiseMode::kNoneForTesting);
    if (!q.ok()) return q.status();
    for (size_t j = 0; j < orders.size(); ++j) {
      // inf{x : F_n(x) >= p} = X_(ceil(n p)).
      const int64_t index = static_cast<int64_t>(
          std::ceil(static_cast<double>(n) * orders[j]));
      const double empirical =
          sample->values()[std::clamp<int64_t>(index, 1, n) - 1];
      const double excess = std::fabs((*q)[j] - empirical) - 1.0 / bins;
      worst_excess = std::max(worst_excess, excess);
      if (excess > 1e-12) ++violations;
    }
  }
  VerificationReport report;
  report.suite = "histogram-noiseless";
  report.checks.push_back(VerificationCheck{
      .name = absl::StrFormat(
          "max(|q_hat - empirical quantile| - h) over %d cases "
          "(%d violations)",
          cases, violations),
      .bound = 1e-12,
      .empirical = worst_excess,
      .trials = cases,
      .ci_low = worst_excess,
      .ci_high = worst_excess,
      .pass = violations == 0});
  return report;
}

}  // namespace dpq
