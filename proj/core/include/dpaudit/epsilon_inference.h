// Copyright 2026 The dpaudit Authors
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

// Estimators of the empirical privacy parameter from attack outcomes.
//
// The Bayesian estimator places independent Beta posteriors on FNR and FPR
// and pushes them through the privacy region: the posterior CDF of epsilon at
// e is the joint posterior mass of R(e, delta). The CI-derived estimators
// minimize (and maximize) the point bound over a rectangle of per-rate
// confidence intervals.
//
// Example:
//
//   ConfusionTally tally{.tp = 65, .fn = 35, .fp = 25, .tn = 75};
//   absl::StatusOr<EpsilonInterval> ci =
//       CredibleInterval(tally, /*delta=*/1e-5, /*alpha=*/0.1);

#ifndef DPAUDIT_EPSILON_INFERENCE_H_
#define DPAUDIT_EPSILON_INFERENCE_H_

#include <array>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpaudit/numeric_kernel.h"
#include "dpaudit/rate_model.h"

namespace dpaudit {

struct JointRatePosterior {
  BetaPosterior fnr;
  BetaPosterior fpr;
};

// FNR ~ JeffreysPosterior(fn, tp + fn, prior) and
// FPR ~ JeffreysPosterior(fp, fp + tn, prior).
absl::StatusOr<JointRatePosterior> JointPosterior(
    const ConfusionTally& tally, const BetaPosterior& prior = kJeffreysPrior);

struct EstimatorOptions {
  QuadratureSpec quadrature;
  // Quantile searches stop here and report +infinity.
  double eps_cap = 50.0;
  // Evaluate on the lexicographically smallest of the four images of the
  // joint posterior under the region's symmetries. The law of epsilon is the
  // same for all four; picking one makes symmetric inputs produce
  // bit-identical results. It also moves mass near (1, 1) to (0, 0): near 1
  // doubles cannot resolve the region boundary at large eps, and the raw
  // orientation can then exhaust the quadrature budget.
  bool canonicalize = true;
};

absl::Status ValidateEstimatorOptions(const EstimatorOptions& options);

// Posterior law of epsilon: an atom at 0 of size Cdf(0) plus a continuous
// part with density Pdf on (0, infinity). Immutable and thread-compatible.
class EpsilonDistribution {
 public:
  static absl::StatusOr<EpsilonDistribution> Create(
      const JointRatePosterior& joint, double delta,
      const EstimatorOptions& options = {});

  // The posterior as passed to Create (before canonicalization).
  const JointRatePosterior& joint() const { return joint_; }
  double delta() const { return delta_; }
  const EstimatorOptions& options() const { return options_; }
  double point_mass_at_zero() const { return point_mass_at_zero_; }

  // Posterior mass of R(eps, delta). eps may be +infinity.
  absl::StatusOr<double> Cdf(double eps) const;

  // Density of the continuous part at eps > 0, computed as the flux of the
  // joint density through the moving region boundary.
  absl::StatusOr<double> Pdf(double eps) const;

  // inf{eps : Cdf(eps) >= q} to within 1e-6, or +infinity when Cdf at the
  // cap is still below q.
  absl::StatusOr<double> Quantile(double q) const;

 private:
  EpsilonDistribution(const JointRatePosterior& joint,
                      const JointRatePosterior& work, double delta,
                      const EstimatorOptions& options);

  std::vector<double> Breakpoints(double eps) const;

  JointRatePosterior joint_;
  // Orientation actually integrated.
  JointRatePosterior work_;
  double delta_;
  EstimatorOptions options_;
  std::array<double, 5> fnr_quantiles_;
  std::array<double, 5> fpr_quantiles_;
  double point_mass_at_zero_ = 0.0;
};

enum class EpsilonMethod { kBayesian, kJeffreysCi, kClopperPearsonCi };

std::string_view EpsilonMethodName(EpsilonMethod method);

struct EpsilonInterval {
  double lo = 0.0;
  // +infinity when unbounded.
  double hi = 0.0;
  double alpha = 0.1;
  EpsilonMethod method = EpsilonMethod::kBayesian;

  bool unbounded() const;
};

// Equal-tailed interval [Q(alpha / 2), Q(1 - alpha / 2)].
absl::StatusOr<EpsilonInterval> CredibleInterval(
    const EpsilonDistribution& dist, double alpha);

absl::StatusOr<EpsilonInterval> CredibleInterval(
    const ConfusionTally& tally, double delta, double alpha,
    const BetaPosterior& prior = kJeffreysPrior,
    const EstimatorOptions& options = {});

enum class CiFamily { kClopperPearson, kJeffreys };

// Interval for epsilon from per-rate confidence intervals built at
// per_rate_alpha = alpha / 2 (so the two rates jointly hold at level
// 1 - alpha). The lower endpoint is the minimum over the rate rectangle of
// EpsilonLowerBoundPoint, the upper endpoint the maximum of EpsilonSupremum.
// With a one-sided `sidedness` each rate interval keeps only that side.
absl::StatusOr<EpsilonInterval> CiEpsilonInterval(
    const ConfusionTally& tally, double delta, double alpha, CiFamily family,
    Sidedness sidedness = Sidedness::kTwoSided);

// Minimum of EpsilonLowerBoundPoint over [fnr.lo, fnr.hi] x [fpr.lo, fpr.hi].
double RectangleMinimumBound(const RateInterval& fnr, const RateInterval& fpr,
                             double delta);

// Maximum of EpsilonSupremum over the same rectangle.
double RectangleMaximumBound(const RateInterval& fnr, const RateInterval& fpr,
                             double delta);

// Joint posterior mass of the rectangle fnr_interval x fpr_interval.
absl::StatusOr<double> RectangleMass(const JointRatePosterior& joint,
                                     const RateInterval& fnr_interval,
                                     const RateInterval& fpr_interval);

// Posterior mass of R(eps_hi) minus R(eps_lo): Cdf(eps_hi) - Cdf(eps_lo).
absl::StatusOr<double> RingMass(const EpsilonDistribution& dist,
                                double eps_lo, double eps_hi);

}  // namespace dpaudit

#endif  // DPAUDIT_EPSILON_INFERENCE_H_
