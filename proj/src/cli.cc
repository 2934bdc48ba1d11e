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

#include "dpq/cli.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "dpq/bench.h"
#include "dpq/bounds.h"
#include "dpq/experiment_config.h"
#include "dpq/histogram.h"
#include "dpq/mechanisms.h"
#include "dpq/verification.h"

namespace dpq {
namespace {

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  if (status.code() == absl::StatusCode::kFailedPrecondition) {
    return kExitBoundPrecondition;
  }
  return kExitInputError;
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) return absl::InternalError(absl::StrCat("Cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ParseOrders(absl::string_view text) {
  std::vector<double> orders;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    item = absl::StripAsciiWhitespace(item);
    double p = 0;
    const auto [ptr, ec] =
        std::from_chars(item.data(), item.data() + item.size(), p);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("Order '", item, "' is not a number"));
    }
    orders.push_back(p);
  }
  if (orders.empty()) return absl::InvalidArgumentError("No orders given");
  return orders;
}

// estimate

struct EstimateFlags {
  std::string data;
  std::string method;
  std::string orders;
  int m = 0;
  double epsilon = 0;
  std::string relation = "replace";
  int bins = 200;
  uint64_t seed = 1;
  std::string output;
  bool zero_noise = false;
};

int RunEstimate(const EstimateFlags& flags, std::ostream& out,
                std::ostream& err) {
  if (flags.orders.empty() == (flags.m == 0)) {
    return Fail(err, absl::InvalidArgumentError(
                         "Give exactly one of --orders and --m"));
  }
  if (flags.zero_noise && flags.method != "histogram") {
    return Fail(err, absl::InvalidArgumentError(
                         "--zero-noise only applies to --method histogram"));
  }
  absl::StatusOr<SortedSample> sample = LoadDataFile(flags.data);
  if (!sample.ok()) return Fail(err, sample.status());
  absl::StatusOr<NeighboringRelation> relation = ParseRelation(flags.relation);
  if (!relation.ok()) return Fail(err, relation.status());
  absl::StatusOr<PrivacyBudget> budget =
      PrivacyBudget::Create(flags.epsilon, *relation);
  if (!budget.ok()) return Fail(err, budget.status());
  std::vector<double> orders;
  if (flags.m != 0) {
    if (flags.m < 1) {
      return Fail(err, absl::InvalidArgumentError("--m must be at least 1"));
    }
    orders = PaperGrid(flags.m);
  } else {
    absl::StatusOr<std::vector<double>> parsed = ParseOrders(flags.orders);
    if (!parsed.ok()) return Fail(err, parsed.status());
    orders = *parsed;
  }
  absl::StatusOr<QuantileQuery> query = QuantileQuery::Create(orders, *budget);
  if (!query.ok()) return Fail(err, query.status());

  RandomSource rng(flags.seed);
  BudgetLog log;
  absl::StatusOr<std::vector<double>> estimates;
  if (flags.method == "indexp") {
    estimates = IndExp(*sample, *query, rng, &log);
  } else if (flags.method == "recexp") {
    estimates = RecExp(*sample, *query, rng, &log);
  } else {
    if (flags.zero_noise) err << kNonPrivateBanner << "\n";
    estimates = QuantilesFromHistogram(
        *sample, flags.bins, *query, rng,
        flags.zero_noise ? NoiseMode::kNoneForTesting : NoiseMode::kLaplace,
        &log);
  }
  if (!estimates.ok()) return Fail(err, estimates.status());

  std::string csv = "p,q_hat\n";
  for (size_t j = 0; j < orders.size(); ++j) {
    absl::StrAppendFormat(&csv, "%.17g,%.17g\n", orders[j], (*estimates)[j]);
  }
  if (flags.output.empty()) {
    out << csv;
  } else if (absl::Status s = WriteText(flags.output, csv); !s.ok()) {
    return Fail(err, s);
  }

  // Budget report. Rational shares are summed per root-to-leaf path for
  // RecExp, per call otherwise.
  if (flags.zero_noise) {
    err << "# spent budget: none (non-private run)\n";
  } else if (flags.method == "recexp") {
    const MechanismCall& first = log.calls().front();
    absl::StatusOr<int> depth = RecExpDepth(query->m());
    err << absl::StrFormat(
        "# spent budget: epsilon=%.15g relation=%s (recexp depth=%d, per-call "
        "epsilon0=%.15g, %d calls)\n",
        flags.epsilon, flags.relation, depth.ok() ? *depth : 0, first.epsilon,
        log.calls().size());
  } else {
    double spent = 0;
    for (const MechanismCall& call : log.calls()) spent += call.epsilon;
    err << absl::StrFormat(
        "# spent budget: epsilon=%.15g relation=%s (%s, %d mechanism calls)\n",
        spent, flags.relation, flags.method, log.calls().size());
  }
  return kExitOk;
}

// bench

struct BenchFlags {
  std::string config;
  std::string output;
  int threads = -1;
  int trials = 0;
};

int RunBench(const BenchFlags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = LoadExperimentConfig(flags.config);
  if (!config.ok()) return Fail(err, config.status());
  if (flags.threads >= 0) config->threads = flags.threads;
  if (flags.trials != 0) config->trials = flags.trials;
  absl::StatusOr<ExperimentResult> result = RunExperiment(*config);
  if (!result.ok()) return Fail(err, result.status());
  absl::StatusOr<std::vector<std::string>> written =
      WriteBenchOutputs(*result, flags.output);
  if (!written.ok()) return Fail(err, written.status());
  out << "distribution,m,estimator,mean_error,std_error,trials\n";
  for (const CellResult& cell : result->cells) {
    out << absl::StrFormat("%s,%d,%s,%.6g,%.3g,%d\n", cell.distribution, cell.m,
                           EstimatorKindName(cell.estimator), cell.mean_error,
                           cell.std_error, cell.trials);
  }
  for (const std::string& path : *written) out << "wrote " << path << "\n";
  out << absl::StrFormat("total wall time %.2f s\n", result->total_wall_seconds);
  return kExitOk;
}

// bounds

int RunBounds(const std::string& name, const std::vector<std::string>& pairs,
              std::ostream& out, std::ostream& err) {
  std::map<std::string, std::string> params;
  for (const std::string& pair : pairs) {
    const size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      return Fail(err, absl::InvalidArgumentError(absl::StrCat(
                           "Expected key=value, got '", pair, "'")));
    }
    if (!params.emplace(pair.substr(0, eq), pair.substr(eq + 1)).second) {
      return Fail(err, absl::InvalidArgumentError(
                           absl::StrCat("Repeated key ", pair.substr(0, eq))));
    }
  }
  absl::StatusOr<BoundEvaluation> evaluation = EvaluateNamedBound(name, params);
  if (!evaluation.ok()) return Fail(err, evaluation.status());
  out << absl::StrFormat("%s = %.12g\n", evaluation->name, evaluation->value);
  for (const GuardCheck& guard : evaluation->guards) {
    out << absl::StrFormat("guard %s: %s\n", guard.condition,
                           guard.holds ? "holds" : "violated");
  }
  if (!evaluation->note.empty()) out << evaluation->note << "\n";
  return kExitOk;
}

// verify

struct VerifyFlags {
  std::string suite;
  uint64_t seed = 1;
  int64_t trials = 0;
  std::string output;
  bool zero_noise = false;
  int m = 4;
  double epsilon = 0.3;
  std::string relation = "add-remove";
};

using SuiteRunner =
    std::function<absl::StatusOr<VerificationReport>(const VerifyFlags&)>;

int64_t TrialsOr(const VerifyFlags& flags, int64_t fallback) {
  return flags.trials > 0 ? flags.trials : fallback;
}

absl::StatusOr<VerificationReport> Merge(
    std::string suite, std::vector<absl::StatusOr<VerificationReport>> parts) {
  VerificationReport merged;
  merged.suite = std::move(suite);
  for (absl::StatusOr<VerificationReport>& part : parts) {
    if (!part.ok()) return part.status();
    for (VerificationCheck& check : part->checks) {
      merged.checks.push_back(std::move(check));
    }
  }
  return merged;
}

const std::map<std::string, SuiteRunner>& Suites() {
  static const auto* suites = new std::map<std::string, SuiteRunner>{
      {"gap-law",
       [](const VerifyFlags& f) {
         const int64_t trials = TrialsOr(f, 100000);
         return Merge("gap-law",
                      {VerifyGapLaw(1, {0.25, 0.5}, trials, f.seed),
                       VerifyGapLaw(5, {0.05}, trials, f.seed + 1),
                       VerifyGapLaw(10, {0.02}, trials, f.seed + 2)});
       }},
      {"dp-ratio",
       [](const VerifyFlags&) { return VerifyDpRatio(DpRatioOptions{}); }},
      {"concentration",
       [](const VerifyFlags& f) {
         const int64_t trials = TrialsOr(f, 2000);
         const DistributionOracle uniform = DistributionOracle::Uniform();
         return Merge(
             "concentration",
             {VerifyQuantileConcentration(uniform, 1.0, 1000, 0.5, 0.2, trials,
                                          f.seed),
              VerifyQuantileConcentration(uniform, 1.0, 1000, 0.3, 0.1, trials,
                                          f.seed + 1),
              VerifyQuantileConcentration(uniform, 1.0, 2000, 0.5, 0.05,
                                          trials, f.seed + 2)});
       }},
      {"lower-bound",
       [](const VerifyFlags&) {
         return VerifyLowerBoundQExp(LowerBoundOptions{});
       }},
      {"facts",
       [](const VerifyFlags& f) {
         FactsOptions options;
         options.trials = TrialsOr(f, 1000);
         return VerifyEmpiricalFacts(options, f.seed);
       }},
      {"inversion",
       [](const VerifyFlags& f) {
         return VerifyInversionStability(TrialsOr(f, 1000), f.seed);
       }},
      {"oracle",
       [](const VerifyFlags& f) -> absl::StatusOr<VerificationReport> {
         std::vector<DistributionOracle> oracles = {
             DistributionOracle::Uniform()};
         for (auto [a, b] : {std::pair{2.0, 5.0}, std::pair{0.5, 0.5},
                             std::pair{2.0, 1.0}, std::pair{2.0, 2.0}}) {
           absl::StatusOr<DistributionOracle> beta =
               DistributionOracle::Beta(a, b);
           if (!beta.ok()) return beta.status();
           oracles.push_back(*beta);
         }
         return VerifyOracleRoundTrip(oracles,
                                      static_cast<int>(TrialsOr(f, 1000)));
       }},
      {"recexp-budget",
       [](const VerifyFlags& f) -> absl::StatusOr<VerificationReport> {
         absl::StatusOr<NeighboringRelation> relation =
             ParseRelation(f.relation);
         if (!relation.ok()) return relation.status();
         return VerifyRecExpBudget(f.m, f.epsilon, *relation, f.seed);
       }},
      {"histogram-noiseless",
       [](const VerifyFlags& f) {
         return VerifyNoiselessHistogram(TrialsOr(f, 1000), f.seed);
       }},
  };
  return *suites;
}

int RunVerify(const VerifyFlags& flags, std::ostream& out, std::ostream& err) {
  const bool noiseless = flags.suite == "histogram-noiseless";
  if (noiseless && !flags.zero_noise) {
    return Fail(err, absl::InvalidArgumentError(
                         "Suite histogram-noiseless needs --zero-noise"));
  }
  if (!noiseless && flags.zero_noise) {
    return Fail(err, absl::InvalidArgumentError(
                         "--zero-noise only applies to histogram-noiseless"));
  }
  if (flags.zero_noise) err << kNonPrivateBanner << "\n";

  std::vector<std::string> names;
  if (flags.suite == "all") {
    for (const auto& [name, unused] : Suites()) {
      // The non-private suite only runs when asked for by name.
      if (name != "histogram-noiseless") names.push_back(name);
    }
  } else {
    names.push_back(flags.suite);
  }
  std::vector<VerificationReport> reports;
  for (const std::string& name : names) {
    absl::StatusOr<VerificationReport> report = Suites().at(name)(flags);
    if (!report.ok()) return Fail(err, report.status());
    out << report->HumanSummary();
    reports.push_back(*std::move(report));
  }
  std::string json;
  if (reports.size() == 1) {
    json = reports.front().Json();
  } else {
    json = "[\n";
    for (size_t i = 0; i < reports.size(); ++i) {
      json += reports[i].Json();
      if (i + 1 < reports.size()) json += ",\n";
    }
    json += "]\n";
  }
  if (flags.output.empty()) {
    out << json;
  } else if (absl::Status s = WriteText(flags.output, json); !s.ok()) {
    return Fail(err, s);
  }
  for (const VerificationReport& report : reports) {
    if (!report.Passed()) return kExitVerificationFailed;
  }
  return kExitOk;
}

}  // namespace

absl::StatusOr<SortedSample> ParseDataText(absl::string_view text) {
  std::vector<double> values;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    double x = 0;
    const auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + line.size(), x);
    if (ec != std::errc() || ptr != line.data() + line.size() ||
        !std::isfinite(x)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: '%s' is not a decimal number", line_number, line));
    }
    if (!(x >= 0.0 && x <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: value %s is outside [0, 1]", line_number, line));
    }
    values.push_back(x);
  }
  return SortedSample::FromUnsorted(std::move(values));
}

absl::StatusOr<SortedSample> LoadDataFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("Cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<SortedSample> sample = ParseDataText(buffer.str());
  if (!sample.ok()) {
    return absl::Status(sample.status().code(),
                        absl::StrCat(path, ": ", sample.status().message()));
  }
  return sample;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private quantile estimation"};
  app.name(args.empty() ? "dpq" : args.front());
  app.require_subcommand(1, 1);

  EstimateFlags estimate;
  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "Estimate quantiles of a data file");
  estimate_cmd->add_option("--data", estimate.data, "Data file")->required();
  estimate_cmd
      ->add_option("--method", estimate.method, "indexp, recexp or histogram")
      ->required()
      ->check(CLI::IsMember({"indexp", "recexp", "histogram"}));
  estimate_cmd->add_option("--orders", estimate.orders,
                           "Comma-separated orders in (0, 1)");
  estimate_cmd->add_option("--m", estimate.m,
                           "Use the grid 1/4 + j/(2(m+1)), j = 1..m");
  estimate_cmd->add_option("--epsilon", estimate.epsilon, "Privacy budget")
      ->required();
  estimate_cmd->add_option("--relation", estimate.relation,
                           "add-remove or replace");
  estimate_cmd->add_option("--bins", estimate.bins, "Histogram bin count");
  estimate_cmd->add_option("--seed", estimate.seed, "Random seed");
  estimate_cmd->add_option("--output", estimate.output,
                           "CSV output path (default: stdout)");
  estimate_cmd->add_flag("--zero-noise", estimate.zero_noise,
                         "Histogram without noise. NOT PRIVATE; tests only");

  BenchFlags bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Run a Monte-Carlo benchmark");
  bench_cmd->add_option("--config", bench.config, "Config file")->required();
  bench_cmd->add_option("--output", bench.output, "Output directory")
      ->required();
  bench_cmd->add_option("--threads", bench.threads,
                        "Worker threads, overrides the config");
  bench_cmd->add_option("--trials", bench.trials,
                        "Trials per cell, overrides the config");

  std::string bound_name;
  std::vector<std::string> bound_params;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", absl::StrCat("Evaluate a bound: NAME key=value ... (",
                             absl::StrJoin(NamedBounds(), ", "), ")"));
  bounds_cmd->add_option("name", bound_name, "Bound name")->required();
  bounds_cmd->add_option("params", bound_params, "key=value parameters");

  VerifyFlags verify;
  std::vector<std::string> suite_names = {"all"};
  for (const auto& [name, unused] : Suites()) suite_names.push_back(name);
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", verify.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(suite_names));
  verify_cmd->add_option("--seed", verify.seed, "Random seed");
  verify_cmd->add_option("--trials", verify.trials,
                         "Trials (or cases) per check");
  verify_cmd->add_option("--output", verify.output, "JSON report path");
  verify_cmd->add_flag("--zero-noise", verify.zero_noise,
                       "Required by histogram-noiseless. NOT PRIVATE");
  verify_cmd->add_option("--m", verify.m, "recexp-budget: number of orders");
  verify_cmd->add_option("--epsilon", verify.epsilon,
                         "recexp-budget: privacy budget");
  verify_cmd->add_option("--relation", verify.relation,
                         "recexp-budget: add-remove or replace");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* failed = &app;
    for (CLI::App* sub : {estimate_cmd, bench_cmd, bounds_cmd, verify_cmd}) {
      if (sub->parsed()) failed = sub;
    }
    err << failed->help();
    return kExitInputError;
  }

  if (estimate_cmd->parsed()) return RunEstimate(estimate, out, err);
  if (bench_cmd->parsed()) return RunBench(bench, out, err);
  if (bounds_cmd->parsed()) return RunBounds(bound_name, bound_params, out, err);
  return RunVerify(verify, out, err);
}

}  // namespace dpq
