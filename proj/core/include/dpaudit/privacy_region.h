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

// Geometry of the (epsilon, delta) privacy region in (FNR, FPR) space.
//
// R(eps, delta) is the set of (x, y) in [0, 1]^2 with
//   x + e^eps y >= 1 - delta,     y + e^eps x >= 1 - delta,
//   y + e^eps x <= e^eps + delta, x + e^eps y <= e^eps + delta.
// It is symmetric under (x, y) -> (y, x) and (x, y) -> (1 - x, 1 - y), and
// grows with eps.

#ifndef DPAUDIT_PRIVACY_REGION_H_
#define DPAUDIT_PRIVACY_REGION_H_

#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpaudit {

struct PrivacyParams {
  // May be +infinity.
  double epsilon = 0.0;
  double delta = 0.0;
};

absl::Status ValidatePrivacyParams(const PrivacyParams& params);

// A point in rate space: x is the FNR coordinate, y the FPR coordinate.
struct RatePoint {
  double x = 0.0;
  double y = 0.0;
};

// Vertical slice {y : (x, y) in R} = [y_lo, y_hi].
struct RegionBand {
  double y_lo;
  double y_hi;
};

bool InRegion(const RatePoint& p, const PrivacyParams& params);

// Slice of R(eps, delta) at abscissa x in [0, 1]. Requires finite epsilon.
absl::StatusOr<RegionBand> ComputeRegionBand(double x,
                                             const PrivacyParams& params);

// The abscissas in (0, 1) where y_lo or y_hi switch branch. Sorted and
// deduplicated. Requires finite epsilon.
std::vector<double> RegionBandKinks(const PrivacyParams& params);

// Lower bound on epsilon implied by a single (FNR, FPR) pair: the largest of
//   log((1 - d - fpr) / fnr), log((1 - d - fnr) / fpr),
//   log((fpr - d) / (1 - fnr)), log((fnr - d) / (1 - fpr))
// and 0. A branch with a zero denominator is skipped, so a single zero rate
// contributes the finite value of its remaining branch. Both rates 0 (or both
// 1) with delta < 1 gives +infinity.
double EpsilonLowerBoundPoint(double fnr, double fpr, double delta);

// inf{eps >= 0 : (fnr, fpr) in R(eps, delta)}, +infinity if no finite eps
// admits the point. Agrees with EpsilonLowerBoundPoint away from the edges
// x, y in {0, 1}.
double EpsilonSupremum(double fnr, double fpr, double delta);

// (1 - fnr) - fpr.
double MiaAdvantage(double fnr, double fpr);

// (e^eps - 1 + 2 delta) / (e^eps + 1), the largest advantage attainable in
// R(eps, delta). Returns 1 for infinite epsilon.
double AdvantageBound(const PrivacyParams& params);

namespace internal {

// Unchecked band for hot loops; `exp_eps` is e^eps and `exp_neg_eps` is
// e^-eps.
inline RegionBand BandUnchecked(double x, double delta, double exp_eps,
                                double exp_neg_eps) {
  double y_lo = 1.0 - delta - exp_eps * x;
  const double lo2 = (1.0 - delta - x) * exp_neg_eps;
  if (lo2 > y_lo) y_lo = lo2;
  if (y_lo < 0.0) y_lo = 0.0;
  double y_hi = delta + exp_eps * (1.0 - x);
  const double hi2 = 1.0 + (delta - x) * exp_neg_eps;
  if (hi2 < y_hi) y_hi = hi2;
  if (y_hi > 1.0) y_hi = 1.0;
  return {y_lo, y_hi};
}

}  // namespace internal

}  // namespace dpaudit

#endif  // DPAUDIT_PRIVACY_REGION_H_
