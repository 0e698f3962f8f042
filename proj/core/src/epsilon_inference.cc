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

#include "dpaudit/epsilon_inference.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "dpaudit/privacy_region.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuantileTolerance = 1e-6;
// e^eps overflows a double a little above 709; the region is the whole
// square to double precision long before that.
constexpr double kMaxFiniteEpsilon = 700.0;
constexpr std::array<double, 5> kBreakpointLevels = {0.001, 0.05, 0.5, 0.95,
                                                     0.999};

BetaPosterior Flip(const BetaPosterior& p) { return {p.beta, p.alpha}; }

auto Key(const JointRatePosterior& j) {
  return std::make_tuple(j.fnr.alpha, j.fnr.beta, j.fpr.alpha, j.fpr.beta);
}

JointRatePosterior Canonical(const JointRatePosterior& joint) {
  const JointRatePosterior images[] = {
      joint,
      {joint.fpr, joint.fnr},
      {Flip(joint.fnr), Flip(joint.fpr)},
      {Flip(joint.fpr), Flip(joint.fnr)},
  };
  JointRatePosterior best = images[0];
  for (const JointRatePosterior& image : images) {
    if (Key(image) < Key(best)) best = image;
  }
  return best;
}

// Probability that Beta lands in [lo, hi], subtracting in the tail that
// keeps relative precision.
double BandMass(const internal::BetaKernel& g, double lo, double hi) {
  if (hi <= lo) return 0.0;
  double mass;
  if (hi <= 0.5) {
    mass = g.Cdf(hi) - g.Cdf(lo);
  } else if (lo >= 0.5) {
    mass = g.Sf(lo) - g.Sf(hi);
  } else {
    mass = 1.0 - g.Cdf(lo) - g.Sf(hi);
  }
  return std::max(0.0, mass);
}

// One branch of a boundary curve y(x; eps) at a fixed abscissa.
struct BoundaryPoint {
  double y;
  // dy / d eps at fixed x.
  double velocity;
  // dy / dx at fixed eps.
  double slope;
};

// Flux g(y) (v . n) dL / dx through the boundary. The region lies above the
// curve when `lower` is set, below it otherwise.
double BoundaryFlux(const internal::BetaKernel& g, const BoundaryPoint& b,
                    bool lower) {
  if (b.velocity == 0.0 || !(b.y > 0.0 && b.y < 1.0)) return 0.0;
  const double tangent_norm = std::hypot(1.0, b.slope);
  // Outward unit normal: (slope, -1) / |t| on the lower curve and
  // (-slope, 1) / |t| on the upper one. The velocity is (0, dy/deps).
  const double normal_y = (lower ? -1.0 : 1.0) / tangent_norm;
  const double v_dot_n = b.velocity * normal_y;
  return g.Pdf(b.y) * v_dot_n * tangent_norm;
}

absl::Status CheckAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1), got ", alpha));
  }
  return absl::OkStatus();
}

absl::Status CheckDelta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1], got ", delta));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<JointRatePosterior> JointPosterior(const ConfusionTally& tally,
                                                  const BetaPosterior& prior) {
  if (absl::Status s = ValidateTally(tally); !s.ok()) return s;
  absl::StatusOr<BetaPosterior> fnr =
      JeffreysPosterior(tally.fn, tally.positives(), prior);
  if (!fnr.ok()) return fnr.status();
  absl::StatusOr<BetaPosterior> fpr =
      JeffreysPosterior(tally.fp, tally.negatives(), prior);
  if (!fpr.ok()) return fpr.status();
  return JointRatePosterior{*fnr, *fpr};
}

absl::Status ValidateEstimatorOptions(const EstimatorOptions& options) {
  if (absl::Status s = ValidateQuadratureSpec(options.quadrature); !s.ok()) {
    return s;
  }
  if (!(options.eps_cap > 0.0 && options.eps_cap <= kMaxFiniteEpsilon)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "eps_cap must lie in (0, ", kMaxFiniteEpsilon, "], got ",
        options.eps_cap));
  }
  return absl::OkStatus();
}

EpsilonDistribution::EpsilonDistribution(const JointRatePosterior& joint,
                                         const JointRatePosterior& work,
                                         double delta,
                                         const EstimatorOptions& options)
    : joint_(joint), work_(work), delta_(delta), options_(options) {}

absl::StatusOr<EpsilonDistribution> EpsilonDistribution::Create(
    const JointRatePosterior& joint, double delta,
    const EstimatorOptions& options) {
  if (absl::Status s = ValidateBetaPosterior(joint.fnr); !s.ok()) return s;
  if (absl::Status s = ValidateBetaPosterior(joint.fpr); !s.ok()) return s;
  if (absl::Status s = CheckDelta(delta); !s.ok()) return s;
  if (absl::Status s = ValidateEstimatorOptions(options); !s.ok()) return s;

  EpsilonDistribution dist(joint,
                           options.canonicalize ? Canonical(joint) : joint,
                           delta, options);
  for (size_t i = 0; i < kBreakpointLevels.size(); ++i) {
    absl::StatusOr<double> qx = InverseRegularizedIncompleteBeta(
        kBreakpointLevels[i], dist.work_.fnr.alpha, dist.work_.fnr.beta);
    if (!qx.ok()) return qx.status();
    absl::StatusOr<double> qy = InverseRegularizedIncompleteBeta(
        kBreakpointLevels[i], dist.work_.fpr.alpha, dist.work_.fpr.beta);
    if (!qy.ok()) return qy.status();
    dist.fnr_quantiles_[i] = *qx;
    dist.fpr_quantiles_[i] = *qy;
  }
  absl::StatusOr<double> at_zero = dist.Cdf(0.0);
  if (!at_zero.ok()) return at_zero.status();
  dist.point_mass_at_zero_ = *at_zero;
  return dist;
}

std::vector<double> EpsilonDistribution::Breakpoints(double eps) const {
  const PrivacyParams params{eps, delta_};
  std::vector<double> points = RegionBandKinks(params);
  points.insert(points.end(), fnr_quantiles_.begin(), fnr_quantiles_.end());
  const double e = std::exp(eps);
  const double inv = std::exp(-eps);
  const double d = delta_;
  // Abscissas where the band edges cross the bulk of the FPR posterior.
  for (double q : fpr_quantiles_) {
    points.push_back((1.0 - d - q) * inv);
    points.push_back(1.0 - d - q * e);
    points.push_back(1.0 - (q - d) * inv);
    points.push_back(d + (1.0 - q) * e);
  }
  std::erase_if(points, [](double p) { return !(p > 0.0 && p < 1.0); });
  return points;
}

absl::StatusOr<double> EpsilonDistribution::Cdf(double eps) const {
  if (std::isnan(eps) || eps < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be >= 0, got ", eps));
  }
  if (std::isinf(eps) || delta_ >= 1.0) return 1.0;
  eps = std::min(eps, kMaxFiniteEpsilon);

  const internal::BetaKernel fx(work_.fnr.alpha, work_.fnr.beta);
  const internal::BetaKernel gy(work_.fpr.alpha, work_.fpr.beta);
  const double e = std::exp(eps);
  const double inv = std::exp(-eps);
  const double d = delta_;
  auto integrand = [&](double x) -> double {
    const RegionBand band = internal::BandUnchecked(x, d, e, inv);
    const double mass = BandMass(gy, band.y_lo, band.y_hi);
    return mass > 0.0 ? fx.Pdf(x) * mass : 0.0;
  };
  const std::vector<double> breaks = Breakpoints(eps);
  absl::StatusOr<double> value = AdaptiveIntegrateSmoothed(
      integrand, 0.0, 1.0, breaks, options_.quadrature);
  if (!value.ok()) return value.status();
  return std::clamp(*value, 0.0, 1.0);
}

absl::StatusOr<double> EpsilonDistribution::Pdf(double eps) const {
  if (!(eps > 0.0) || std::isinf(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("density requires finite epsilon > 0, got ", eps));
  }
  if (delta_ >= 1.0 || eps > kMaxFiniteEpsilon) return 0.0;

  const internal::BetaKernel fx(work_.fnr.alpha, work_.fnr.beta);
  const internal::BetaKernel gy(work_.fpr.alpha, work_.fpr.beta);
  const double e = std::exp(eps);
  const double inv = std::exp(-eps);
  const double d = delta_;
  auto integrand = [&](double x) -> double {
    const double fxv = fx.Pdf(x);
    if (fxv == 0.0) return 0.0;
    // Active branch of each boundary. Where a boundary is clamped to 0 or 1
    // it does not move and contributes nothing.
    const double lo_steep = 1.0 - d - e * x;
    const double lo_flat = (1.0 - d - x) * inv;
    const BoundaryPoint lower =
        lo_steep >= lo_flat ? BoundaryPoint{lo_steep, -e * x, -e}
                            : BoundaryPoint{lo_flat, -(1.0 - d - x) * inv, -inv};
    const double hi_steep = d + e * (1.0 - x);
    const double hi_flat = 1.0 + (d - x) * inv;
    const BoundaryPoint upper =
        hi_steep <= hi_flat ? BoundaryPoint{hi_steep, e * (1.0 - x), -e}
                            : BoundaryPoint{hi_flat, (x - d) * inv, -inv};
    const double flux =
        BoundaryFlux(gy, lower, /*lower=*/true) +
        BoundaryFlux(gy, upper, /*lower=*/false);
    return fxv * flux;
  };
  const std::vector<double> breaks = Breakpoints(eps);
  absl::StatusOr<double> value = AdaptiveIntegrateSmoothed(
      integrand, 0.0, 1.0, breaks, options_.quadrature);
  if (!value.ok()) return value.status();
  return std::max(0.0, *value);
}

absl::StatusOr<double> EpsilonDistribution::Quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("quantile level must lie in (0, 1), got ", q));
  }
  if (point_mass_at_zero_ >= q) return 0.0;
  const double cap = options_.eps_cap;
  double lo = 0.0;
  double hi = std::min(1.0, cap);
  while (true) {
    absl::StatusOr<double> c = Cdf(hi);
    if (!c.ok()) return c.status();
    if (*c >= q) break;
    if (hi >= cap) return kInf;
    lo = hi;
    hi = std::min(2.0 * hi, cap);
  }
  while (hi - lo > kQuantileTolerance) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<double> c = Cdf(mid);
    if (!c.ok()) return c.status();
    if (*c >= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string_view EpsilonMethodName(EpsilonMethod method) {
  switch (method) {
    case EpsilonMethod::kBayesian:
      return "bayesian";
    case EpsilonMethod::kJeffreysCi:
      return "jeffreys";
    case EpsilonMethod::kClopperPearsonCi:
      return "clopper-pearson";
  }
  return "unknown";
}

bool EpsilonInterval::unbounded() const { return std::isinf(hi); }

absl::StatusOr<EpsilonInterval> CredibleInterval(
    const EpsilonDistribution& dist, double alpha) {
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  absl::StatusOr<double> lo = dist.Quantile(alpha / 2.0);
  if (!lo.ok()) return lo.status();
  absl::StatusOr<double> hi = dist.Quantile(1.0 - alpha / 2.0);
  if (!hi.ok()) return hi.status();
  return EpsilonInterval{*lo, *hi, alpha, EpsilonMethod::kBayesian};
}

absl::StatusOr<EpsilonInterval> CredibleInterval(
    const ConfusionTally& tally, double delta, double alpha,
    const BetaPosterior& prior, const EstimatorOptions& options) {
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  absl::StatusOr<JointRatePosterior> joint = JointPosterior(tally, prior);
  if (!joint.ok()) return joint.status();
  absl::StatusOr<EpsilonDistribution> dist =
      EpsilonDistribution::Create(*joint, delta, options);
  if (!dist.ok()) return dist.status();
  return CredibleInterval(*dist, alpha);
}

double RectangleMinimumBound(const RateInterval& fnr, const RateInterval& fpr,
                             double delta) {
  // The rectangle touches R(0, delta), the strip |x + y - 1| <= delta.
  if (fnr.lo + fpr.lo <= 1.0 + delta && fnr.hi + fpr.hi >= 1.0 - delta) {
    return 0.0;
  }
  if (fnr.hi + fpr.hi < 1.0 - delta) {
    // Below the strip the bound falls as either rate grows.
    double best = EpsilonLowerBoundPoint(fnr.hi, fpr.hi, delta);
    if (fpr.lo == 0.0) {
      best = std::min(best, EpsilonLowerBoundPoint(fnr.hi, 0.0, delta));
    }
    if (fnr.lo == 0.0) {
      best = std::min(best, EpsilonLowerBoundPoint(0.0, fpr.hi, delta));
    }
    return best;
  }
  double best = EpsilonLowerBoundPoint(fnr.lo, fpr.lo, delta);
  if (fpr.hi == 1.0) {
    best = std::min(best, EpsilonLowerBoundPoint(fnr.lo, 1.0, delta));
  }
  if (fnr.hi == 1.0) {
    best = std::min(best, EpsilonLowerBoundPoint(1.0, fpr.lo, delta));
  }
  return best;
}

double RectangleMaximumBound(const RateInterval& fnr, const RateInterval& fpr,
                             double delta) {
  // The two lower-left branches peak at the (lo, lo) corner and the two
  // upper-right branches at (hi, hi); EpsilonSupremum is their maximum.
  return std::max(EpsilonSupremum(fnr.lo, fpr.lo, delta),
                  EpsilonSupremum(fnr.hi, fpr.hi, delta));
}

absl::StatusOr<EpsilonInterval> CiEpsilonInterval(const ConfusionTally& tally,
                                                  double delta, double alpha,
                                                  CiFamily family,
                                                  Sidedness sidedness) {
  if (absl::Status s = ValidateTally(tally); !s.ok()) return s;
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  if (absl::Status s = CheckDelta(delta); !s.ok()) return s;
  if (tally.positives() == 0 || tally.negatives() == 0) {
    return absl::FailedPreconditionError(
        "CI-derived interval needs at least one positive and one negative "
        "trial");
  }
  const double per_rate_alpha = alpha / 2.0;
  auto build = [&](int64_t k, int64_t n) {
    return family == CiFamily::kClopperPearson
               ? ClopperPearsonInterval(k, n, per_rate_alpha, sidedness)
               : JeffreysInterval(k, n, per_rate_alpha, sidedness);
  };
  absl::StatusOr<RateInterval> fnr = build(tally.fn, tally.positives());
  if (!fnr.ok()) return fnr.status();
  absl::StatusOr<RateInterval> fpr = build(tally.fp, tally.negatives());
  if (!fpr.ok()) return fpr.status();
  return EpsilonInterval{
      RectangleMinimumBound(*fnr, *fpr, delta),
      RectangleMaximumBound(*fnr, *fpr, delta), alpha,
      family == CiFamily::kClopperPearson ? EpsilonMethod::kClopperPearsonCi
                                          : EpsilonMethod::kJeffreysCi};
}

absl::StatusOr<double> RectangleMass(const JointRatePosterior& joint,
                                     const RateInterval& fnr_interval,
                                     const RateInterval& fpr_interval) {
  absl::StatusOr<double> mx = BetaMass(joint.fnr, fnr_interval);
  if (!mx.ok()) return mx.status();
  absl::StatusOr<double> my = BetaMass(joint.fpr, fpr_interval);
  if (!my.ok()) return my.status();
  return *mx * *my;
}

absl::StatusOr<double> RingMass(const EpsilonDistribution& dist,
                                double eps_lo, double eps_hi) {
  if (!(eps_lo >= 0.0 && eps_lo <= eps_hi)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ring requires 0 <= eps_lo <= eps_hi, got [", eps_lo, ", ", eps_hi,
        "]"));
  }
  if (eps_lo == eps_hi) return 0.0;
  absl::StatusOr<double> hi = dist.Cdf(eps_hi);
  if (!hi.ok()) return hi.status();
  absl::StatusOr<double> lo = dist.Cdf(eps_lo);
  if (!lo.ok()) return lo.status();
  return std::max(0.0, *hi - *lo);
}

}  // namespace dpaudit
