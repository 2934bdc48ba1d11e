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

#include "dpq/distributions.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "boost/math/special_functions/beta.hpp"

namespace dpq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool ParseDouble(absl::string_view text, double& out) {
  text = absl::StripAsciiWhitespace(text);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::string FormatShape(double x) { return absl::StrFormat("%.17g", x); }

}  // namespace

DistributionOracle::DistributionOracle(Kind kind, double alpha, double beta)
    : kind_(kind),
      alpha_(alpha),
      beta_(beta),
      log_beta_function_(std::lgamma(alpha) + std::lgamma(beta) -
                         std::lgamma(alpha + beta)) {}

DistributionOracle DistributionOracle::Uniform() {
  return DistributionOracle(Kind::kUniform, 1.0, 1.0);
}

absl::StatusOr<DistributionOracle> DistributionOracle::Beta(double alpha,
                                                            double beta) {
  if (!(std::isfinite(alpha) && alpha > 0 && std::isfinite(beta) && beta > 0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Beta parameters must be positive, got (%g, %g)", alpha, beta));
  }
  return DistributionOracle(Kind::kBeta, alpha, beta);
}

absl::StatusOr<DistributionOracle> DistributionOracle::Parse(
    absl::string_view text) {
  std::string lowered = absl::AsciiStrToLower(absl::StripAsciiWhitespace(text));
  lowered.erase(std::remove_if(lowered.begin(), lowered.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                lowered.end());
  if (lowered == "uniform") return Uniform();
  absl::string_view body = lowered;
  if (absl::ConsumePrefix(&body, "beta(") && absl::ConsumeSuffix(&body, ")")) {
    std::vector<absl::string_view> parts = absl::StrSplit(body, ',');
    double alpha = 0;
    double beta = 0;
    if (parts.size() == 2 && ParseDouble(parts[0], alpha) &&
        ParseDouble(parts[1], beta)) {
      return Beta(alpha, beta);
    }
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "Cannot parse distribution '", text, "'; expected uniform or beta(a,b)"));
}

std::string DistributionOracle::Name() const {
  if (kind_ == Kind::kUniform) return "uniform";
  return absl::StrCat("beta(", FormatShape(alpha_), ",", FormatShape(beta_),
                      ")");
}

std::string DistributionOracle::Label() const {
  if (kind_ == Kind::kUniform) return "uniform";
  std::string label =
      absl::StrCat("beta_", FormatShape(alpha_), "_", FormatShape(beta_));
  std::replace(label.begin(), label.end(), '.', 'p');
  return label;
}

double StandardNormalDraw(RandomSource& rng) {
  while (true) {
    const double u = 2.0 * rng.UniformDouble() - 1.0;
    const double v = 2.0 * rng.UniformDouble() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double GammaDraw(double shape, RandomSource& rng) {
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a).
    const double boosted = GammaDraw(shape + 1.0, rng);
    return boosted * std::pow(rng.UniformOpen(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = StandardNormalDraw(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.UniformOpen();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double DistributionOracle::Draw(RandomSource& rng) const {
  if (kind_ == Kind::kUniform) return rng.UniformDouble();
  while (true) {
    const double ga = GammaDraw(alpha_, rng);
    const double gb = GammaDraw(beta_, rng);
    const double total = ga + gb;
    if (total > 0.0) return std::clamp(ga / total, 0.0, 1.0);
  }
}

SortedSample DistributionOracle::Sample(int64_t n, RandomSource& rng) const {
  std::vector<double> values(std::max<int64_t>(n, 0));
  for (double& x : values) x = Draw(rng);
  // Every draw is in [0, 1].
  return *SortedSample::FromUnsorted(std::move(values));
}

double DistributionOracle::Density(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) return 0.0;
  if (kind_ == Kind::kUniform) return 1.0;
  const double a = alpha_ - 1.0;
  const double b = beta_ - 1.0;
  if ((x == 0.0 && a < 0) || (x == 1.0 && b < 0)) return kInf;
  if ((x == 0.0 && a > 0) || (x == 1.0 && b > 0)) return 0.0;
  double log_density = -log_beta_function_;
  if (a != 0) log_density += a * std::log(x);
  if (b != 0) log_density += b * std::log1p(-x);
  return std::exp(log_density);
}

double DistributionOracle::Cdf(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  if (kind_ == Kind::kUniform) return x;
  return boost::math::ibeta(alpha_, beta_, x);
}

absl::StatusOr<double> DistributionOracle::Quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Quantile order %g is outside (0, 1)", p));
  }
  if (kind_ == Kind::kUniform) return p;
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  for (int iteration = 0; iteration < 200; ++iteration) {
    const double residual = Cdf(x) - p;
    if (std::fabs(residual) <= 1e-15) return x;
    if (residual > 0) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
    // Newton step when it stays strictly inside the bracket, else bisect.
    const double slope = Density(x);
    double next = (slope > 0 && std::isfinite(slope)) ? x - residual / slope
                                                      : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  // Best of the final bracket.
  const double candidates[] = {lo, x, hi};
  double best = x;
  double best_residual = kInf;
  for (double c : candidates) {
    const double r = std::fabs(Cdf(c) - p);
    if (r < best_residual) {
      best_residual = r;
      best = c;
    }
  }
  return best;
}

namespace {

// Derivative of the Beta density, with one-sided limits at 0 and 1.
double BetaDensityDerivative(const DistributionOracle& oracle, double x) {
  const double a = oracle.alpha() - 1.0;
  const double b = oracle.beta() - 1.0;
  if (x <= 0.0 || x >= 1.0) {
    // Near an endpoint the density behaves like c * t^e with e the exponent
    // at that endpoint and t the distance to it.
    const bool at_zero = x <= 0.0;
    const double e = at_zero ? a : b;
    const double other = at_zero ? b : a;
    const double sign = at_zero ? 1.0 : -1.0;
    if (e > 1.0) return 0.0;
    if (e == 1.0) {
      return sign * std::exp(-std::lgamma(oracle.alpha()) -
                             std::lgamma(oracle.beta()) +
                             std::lgamma(oracle.alpha() + oracle.beta()));
    }
    if (e == 0.0) {
      // Density is (1 - t)^other / B near the endpoint.
      return -sign * other * oracle.Density(x);
    }
    return (e > 0.0 ? sign : -sign) * kInf;
  }
  return oracle.Density(x) * (a / x - b / (1.0 - x));
}

// Roots in (lo, hi) of c2 x^2 + c1 x + c0.
std::vector<double> QuadraticRootsIn(double c2, double c1, double c0,
                                     double lo, double hi) {
  std::vector<double> roots;
  if (std::fabs(c2) < 1e-14) {
    if (std::fabs(c1) > 1e-14) roots.push_back(-c0 / c1);
  } else {
    const double disc = c1 * c1 - 4 * c2 * c0;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      roots.push_back((-c1 - sq) / (2 * c2));
      roots.push_back((-c1 + sq) / (2 * c2));
    }
  }
  std::erase_if(roots, [lo, hi](double r) { return !(r > lo && r < hi); });
  return roots;
}

}  // namespace

absl::StatusOr<DensityEnvelope> DistributionOracle::Envelope(double a,
                                                             double b) const {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Envelope interval [%g, %g] must satisfy 0 <= a < b <= 1", a, b));
  }
  DensityEnvelope envelope{.interval_lo = a, .interval_hi = b};
  if (kind_ == Kind::kUniform || (alpha_ == 1.0 && beta_ == 1.0)) {
    envelope.lower = envelope.upper = 1.0;
    envelope.lipschitz = 0.0;
    return envelope;
  }

  std::vector<double> density_points = {a, b};
  const double am1 = alpha_ - 1.0;
  const double bm1 = beta_ - 1.0;
  if (std::fabs(am1 + bm1) > 0) {
    const double mode = am1 / (am1 + bm1);
    if (mode > a && mode < b) density_points.push_back(mode);
  }
  envelope.lower = kInf;
  envelope.upper = 0.0;
  for (double x : density_points) {
    const double f = Density(x);
    envelope.lower = std::min(envelope.lower, f);
    envelope.upper = std::max(envelope.upper, f);
  }
  envelope.upper_unbounded = std::isinf(envelope.upper);

  // Inflection points solve (A - (A+B)x)^2 - A(1-x)^2 - B x^2 = 0 with
  // A = alpha - 1, B = beta - 1.
  std::vector<double> slope_points = QuadraticRootsIn(
      (am1 + bm1) * (am1 + bm1) - am1 - bm1, 2 * am1 * (1 - am1 - bm1),
      am1 * (am1 - 1), a, b);
  slope_points.push_back(a);
  slope_points.push_back(b);
  envelope.lipschitz = 0.0;
  for (double x : slope_points) {
    envelope.lipschitz =
        std::max(envelope.lipschitz, std::fabs(BetaDensityDerivative(*this, x)));
  }
  envelope.lipschitz_unbounded = std::isinf(envelope.lipschitz);
  return envelope;
}

}  // namespace dpq
