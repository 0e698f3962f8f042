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

#include "dpaudit/privacy_region.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSpaceThreshold = 30.0;

// u + e^eps v >= rhs.
bool LowerConstraint(double u, double v, double eps, double rhs) {
  if (eps <= kLogSpaceThreshold) return u + std::exp(eps) * v >= rhs;
  if (u >= rhs) return true;
  if (v <= 0.0) return false;
  return eps + std::log(v) >= std::log(rhs - u);
}

// v + e^eps u <= e^eps + delta, i.e. v - delta <= e^eps (1 - u).
bool UpperConstraint(double u, double v, double eps, double delta) {
  if (eps <= kLogSpaceThreshold) {
    const double e = std::exp(eps);
    return v + e * u <= e + delta;
  }
  if (v - delta <= 0.0) return true;
  if (1.0 - u <= 0.0) return false;
  return std::log(v - delta) <= eps + std::log1p(-u);
}

// log(num / den) as a constraint on eps; -inf when the branch never binds.
double Branch(double num, double den, bool skip_zero_denominator) {
  if (num <= 0.0) return -kInf;
  if (den <= 0.0) return skip_zero_denominator ? -kInf : kInf;
  return std::log(num / den);
}

}  // namespace

absl::Status ValidatePrivacyParams(const PrivacyParams& params) {
  if (std::isnan(params.epsilon) || params.epsilon < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be >= 0, got ", params.epsilon));
  }
  if (!(params.delta >= 0.0 && params.delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1], got ", params.delta));
  }
  return absl::OkStatus();
}

bool InRegion(const RatePoint& p, const PrivacyParams& params) {
  const double eps = params.epsilon;
  const double d = params.delta;
  return LowerConstraint(p.x, p.y, eps, 1.0 - d) &&
         LowerConstraint(p.y, p.x, eps, 1.0 - d) &&
         UpperConstraint(p.x, p.y, eps, d) &&
         UpperConstraint(p.y, p.x, eps, d);
}

absl::StatusOr<RegionBand> ComputeRegionBand(double x,
                                             const PrivacyParams& params) {
  if (absl::Status s = ValidatePrivacyParams(params); !s.ok()) return s;
  if (std::isinf(params.epsilon)) {
    return absl::InvalidArgumentError("region band requires finite epsilon");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("x must lie in [0, 1], got ", x));
  }
  return internal::BandUnchecked(x, params.delta, std::exp(params.epsilon),
                                 std::exp(-params.epsilon));
}

std::vector<double> RegionBandKinks(const PrivacyParams& params) {
  const double d = params.delta;
  const double e = std::exp(params.epsilon);
  const double inv = std::exp(-params.epsilon);
  const double v = (1.0 - d) / (1.0 + e);
  std::vector<double> kinks = {v,        1.0 - d, (1.0 - d) * inv,
                               1.0 - v, d,       1.0 - (1.0 - d) * inv};
  std::erase_if(kinks, [](double k) { return !(k > 0.0 && k < 1.0); });
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  return kinks;
}

double EpsilonLowerBoundPoint(double fnr, double fpr, double delta) {
  const double x = fnr;
  const double y = fpr;
  if (delta < 1.0 && ((x <= 0.0 && y <= 0.0) || (x >= 1.0 && y >= 1.0))) {
    return kInf;
  }
  const double bound = std::max(
      {0.0, Branch(1.0 - delta - x, y, true), Branch(1.0 - delta - y, x, true),
       Branch(y - delta, 1.0 - x, true), Branch(x - delta, 1.0 - y, true)});
  return bound;
}

double EpsilonSupremum(double fnr, double fpr, double delta) {
  const double x = fnr;
  const double y = fpr;
  return std::max({0.0, Branch(1.0 - delta - x, y, false),
                   Branch(1.0 - delta - y, x, false),
                   Branch(y - delta, 1.0 - x, false),
                   Branch(x - delta, 1.0 - y, false)});
}

double MiaAdvantage(double fnr, double fpr) { return (1.0 - fnr) - fpr; }

double AdvantageBound(const PrivacyParams& params) {
  if (std::isinf(params.epsilon)) return 1.0;
  // Divide through by e^eps to stay finite for large epsilon.
  const double inv = std::exp(-params.epsilon);
  return (1.0 - inv + 2.0 * params.delta * inv) / (1.0 + inv);
}

}  // namespace dpaudit
