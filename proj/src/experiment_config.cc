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

#include "dpq/experiment_config.h"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"

namespace dpq {
namespace {

std::vector<absl::string_view> SplitList(absl::string_view value, char sep) {
  std::vector<absl::string_view> items;
  for (absl::string_view item : absl::StrSplit(value, sep)) {
    item = absl::StripAsciiWhitespace(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
absl::Status ParseInteger(absl::string_view text, T* out) {
  if (!absl::SimpleAtoi(text, out)) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", text, "' is not an integer"));
  }
  return absl::OkStatus();
}

absl::Status ParseReal(absl::string_view text, double* out) {
  if (!absl::SimpleAtod(text, out)) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", text, "' is not a number"));
  }
  return absl::OkStatus();
}

using Setter =
    std::function<absl::Status(absl::string_view value, ExperimentConfig&)>;

const std::map<std::string, Setter>& Setters() {
  static const auto* setters = new std::map<std::string, Setter>{
      {"version",
       [](absl::string_view v, ExperimentConfig& c) {
         return ParseInteger(v, &c.version);
       }},
      {"distributions",
       [](absl::string_view v, ExperimentConfig& c) -> absl::Status {
         c.distributions.clear();
         for (absl::string_view item : SplitList(v, ';')) {
           absl::StatusOr<DistributionOracle> oracle =
               DistributionOracle::Parse(item);
           if (!oracle.ok()) return oracle.status();
           c.distributions.push_back(*oracle);
         }
         return absl::OkStatus();
       }},
      {"n",
       [](absl::string_view v, ExperimentConfig& c) {
         return ParseInteger(v, &c.n);
       }},
      {"epsilon",
       [](absl::string_view v, ExperimentConfig& c) {
         return ParseReal(v, &c.epsilon);
       }},
      {"relation",
       [](absl::string_view v, ExperimentConfig& c) -> absl::Status {
         absl::StatusOr<NeighboringRelation> relation = ParseRelation(v);
         if (!relation.ok()) return relation.status();
         c.relation = *relation;
         return absl::OkStatus();
       }},
      {"m_grid",
       [](absl::string_view v, ExperimentConfig& c) -> absl::Status {
         c.m_grid.clear();
         for (absl::string_view item : SplitList(v, ',')) {
           int m = 0;
           if (absl::Status s = ParseInteger(item, &m); !s.ok()) return s;
           c.m_grid.push_back(m);
         }
         return absl::OkStatus();
       }},
      {"trials",
       [](absl::string_view v, ExperimentConfig& c) {
         return ParseInteger(v, &c.trials);
       }},
      {"bins",
       [](absl::string_view v, ExperimentConfig& c) {
         return ParseInteger(v, &c.bins);
       }},
      {"seed",
       [](absl::string_view v, ExperimentConfig& c) {
         return ParseInteger(v, &c.seed);
       }},
      {"grid",
       [](absl::string_view v, ExperimentConfig& c) -> absl::Status {
         if (v == "paper") {
           c.grid = GridRule::kPaper;
         } else if (v == "explicit") {
           c.grid = GridRule::kExplicit;
         } else {
           return absl::InvalidArgumentError(
               absl::StrCat("'", v, "' is not paper or explicit"));
         }
         return absl::OkStatus();
       }},
      {"orders",
       [](absl::string_view v, ExperimentConfig& c) -> absl::Status {
         c.orders.clear();
         for (absl::string_view item : SplitList(v, ',')) {
           double p = 0;
           if (absl::Status s = ParseReal(item, &p); !s.ok()) return s;
           c.orders.push_back(p);
         }
         return absl::OkStatus();
       }},
      {"estimators",
       [](absl::string_view v, ExperimentConfig& c) -> absl::Status {
         c.estimators.clear();
         for (absl::string_view item : SplitList(v, ',')) {
           absl::StatusOr<EstimatorKind> kind = ParseEstimatorKind(item);
           if (!kind.ok()) return kind.status();
           c.estimators.push_back(*kind);
         }
         return absl::OkStatus();
       }},
      {"threads",
       [](absl::string_view v, ExperimentConfig& c) {
         return ParseInteger(v, &c.threads);
       }},
  };
  return *setters;
}

absl::Status FieldError(absl::string_view field, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("field '", field, "': ", message));
}

}  // namespace

absl::string_view EstimatorKindName(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kIndExp:
      return "indexp";
    case EstimatorKind::kRecExp:
      return "recexp";
    case EstimatorKind::kHistogram:
      return "histogram";
  }
  return "unknown";
}

absl::StatusOr<EstimatorKind> ParseEstimatorKind(absl::string_view name) {
  for (EstimatorKind kind : {EstimatorKind::kIndExp, EstimatorKind::kRecExp,
                             EstimatorKind::kHistogram}) {
    if (name == EstimatorKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown estimator '", name, "'; expected indexp, recexp or histogram"));
}

std::vector<double> PaperGrid(int m) {
  std::vector<double> orders(m);
  for (int j = 1; j <= m; ++j) {
    orders[j - 1] = 0.25 + static_cast<double>(j) / (2.0 * (m + 1));
  }
  return orders;
}

std::vector<int> CellOrderCounts(const ExperimentConfig& config) {
  if (config.grid == GridRule::kExplicit) {
    return {static_cast<int>(config.orders.size())};
  }
  return config.m_grid;
}

std::vector<double> OrdersForCell(const ExperimentConfig& config, int m) {
  if (config.grid == GridRule::kExplicit) return config.orders;
  return PaperGrid(m);
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& config) {
  if (config.version != kConfigVersion) {
    return FieldError("version", absl::StrFormat("unsupported version %d",
                                                 config.version));
  }
  if (config.distributions.empty()) {
    return FieldError("distributions", "at least one distribution is needed");
  }
  if (config.n < 1) return FieldError("n", "must be at least 1");
  if (absl::StatusOr<PrivacyBudget> budget =
          PrivacyBudget::Create(config.epsilon, config.relation);
      !budget.ok()) {
    return FieldError("epsilon", budget.status().message());
  }
  if (config.trials < 1) return FieldError("trials", "must be at least 1");
  if (config.bins < 1) return FieldError("bins", "must be at least 1");
  if (config.threads < 0) return FieldError("threads", "must be at least 0");
  if (config.estimators.empty()) {
    return FieldError("estimators", "at least one estimator is needed");
  }
  if (std::set<EstimatorKind>(config.estimators.begin(),
                              config.estimators.end())
          .size() != config.estimators.size()) {
    return FieldError("estimators", "estimators must not repeat");
  }
  if (config.grid == GridRule::kPaper) {
    if (config.m_grid.empty()) return FieldError("m_grid", "must not be empty");
    for (size_t i = 0; i < config.m_grid.size(); ++i) {
      if (config.m_grid[i] < 1) {
        return FieldError(absl::StrCat("m_grid[", i, "]"),
                          "must be at least 1");
      }
    }
    if (!config.orders.empty()) {
      return FieldError("orders", "only allowed with grid = explicit");
    }
  } else {
    if (!config.m_grid.empty()) {
      return FieldError("m_grid", "only allowed with grid = paper");
    }
    if (config.orders.empty()) {
      return FieldError("orders", "must not be empty with grid = explicit");
    }
    for (size_t j = 0; j < config.orders.size(); ++j) {
      const double p = config.orders[j];
      if (!(p > 0 && p < 1) || (j > 0 && !(p > config.orders[j - 1]))) {
        return FieldError(absl::StrCat("orders[", j, "]"),
                          "orders must be strictly increasing in (0, 1)");
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text) {
  ExperimentConfig config;
  config.distributions.clear();
  std::set<std::string> seen;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: expected key = value, got '%s'", line_number, line));
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const absl::string_view value = absl::StripAsciiWhitespace(line.substr(eq + 1));
    auto setter = Setters().find(key);
    if (setter == Setters().end()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: unknown key '%s'", line_number, key));
    }
    if (!seen.insert(key).second) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: key '%s' is repeated", line_number, key));
    }
    if (absl::Status s = setter->second(value, config); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: field '%s': %s", line_number, key, s.message()));
    }
  }
  if (!seen.contains("version")) {
    return FieldError("version", "is required");
  }
  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("Cannot open config ", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(buffer.str());
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

std::string SerializeExperimentConfig(const ExperimentConfig& config) {
  std::vector<std::string> distributions;
  for (const DistributionOracle& d : config.distributions) {
    distributions.push_back(d.Name());
  }
  std::vector<std::string> estimators;
  for (EstimatorKind kind : config.estimators) {
    estimators.emplace_back(EstimatorKindName(kind));
  }
  std::string out = absl::StrCat(
      "version = ", config.version, "\n",
      "distributions = ", absl::StrJoin(distributions, "; "), "\n",
      "n = ", config.n, "\n",
      "epsilon = ", absl::StrFormat("%.17g", config.epsilon), "\n",
      "relation = ", RelationName(config.relation), "\n",
      "trials = ", config.trials, "\n",
      "bins = ", config.bins, "\n",
      "seed = ", config.seed, "\n",
      "estimators = ", absl::StrJoin(estimators, ","), "\n",
      "threads = ", config.threads, "\n");
  if (config.grid == GridRule::kPaper) {
    absl::StrAppend(&out, "grid = paper\nm_grid = ",
                    absl::StrJoin(config.m_grid, ","), "\n");
  } else {
    absl::StrAppend(
        &out, "grid = explicit\norders = ",
        absl::StrJoin(config.orders, ",",
                      [](std::string* s, double p) {
                        absl::StrAppend(s, absl::StrFormat("%.17g", p));
                      }),
        "\n");
  }
  return out;
}

}  // namespace dpq
