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

// Ground-truth distributions on [0, 1] used to measure estimator error.

#ifndef DPQ_DISTRIBUTIONS_H_
#define DPQ_DISTRIBUTIONS_H_

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpq/quantiles.h"
#include "dpq/random_source.h"

namespace dpq {

// Bounds on a density over an interval: lower <= pi <= upper and
// |pi(x) - pi(y)| <= lipschitz * |x - y|. A flag is set when the quantity is
// infinite on the interval, in which case the numeric field is +inf.
struct DensityEnvelope {
  double lower = 0.0;
  double upper = 0.0;
  double lipschitz = 0.0;
  bool upper_unbounded = false;
  bool lipschitz_unbounded = false;
  double interval_lo = 0.0;
  double interval_hi = 1.0;
};

class DistributionOracle {
 public:
  enum class Kind { kUniform, kBeta };

  static DistributionOracle Uniform();
  static absl::StatusOr<DistributionOracle> Beta(double alpha, double beta);
  // Parses "uniform" or "beta(a,b)" (whitespace allowed).
  static absl::StatusOr<DistributionOracle> Parse(absl::string_view text);

  Kind kind() const { return kind_; }
  // Shape parameters; (1, 1) for Uniform.
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // "uniform" or "beta(a,b)"; parses back to the same oracle.
  std::string Name() const;
  // File-name friendly label, e.g. "beta_2_5".
  std::string Label() const;

  // n i.i.d. draws, sorted. Beta draws are G_a / (G_a + G_b) for independent
  // Gamma draws (Marsaglia-Tsang squeeze/rejection, with the U^(1/a) boost
  // for shapes below one).
  SortedSample Sample(int64_t n, RandomSource& rng) const;
  double Draw(RandomSource& rng) const;

  // Density at x in [0, 1]; +inf at a singular endpoint.
  double Density(double x) const;

  // Regularized incomplete beta I_x(alpha, beta); x is clamped to [0, 1].
  double Cdf(double x) const;

  // Inverse of Cdf on (0, 1): bracketed bisection polished by safeguarded
  // Newton steps, to |Cdf(result) - p| <= 1e-10 or better.
  absl::StatusOr<double> Quantile(double p) const;

  // Density bounds on [a, b] with 0 <= a < b <= 1. Extremes of the density
  // and of its derivative are taken among the endpoints, the mode and the
  // inflection points, all of which have closed forms for Beta densities.
  absl::StatusOr<DensityEnvelope> Envelope(double a, double b) const;

 private:
  DistributionOracle(Kind kind, double alpha, double beta);

  Kind kind_;
  double alpha_;
  double beta_;
  double log_beta_function_;
};

// Standard normal draw (Marsaglia polar method).
double StandardNormalDraw(RandomSource& rng);

// Gamma(shape, 1) draw.
double GammaDraw(double shape, RandomSource& rng);

}  // namespace dpq

#endif  // DPQ_DISTRIBUTIONS_H_
