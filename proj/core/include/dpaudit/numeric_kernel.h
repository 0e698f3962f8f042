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

// Beta-family special functions and adaptive quadrature used by the
// estimators. Everything here is pure and safe to call concurrently.

#ifndef DPAUDIT_NUMERIC_KERNEL_H_
#define DPAUDIT_NUMERIC_KERNEL_H_

#include <cstdint>
#include <span>

#include "absl/functional/function_ref.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpaudit {

struct QuadratureSpec {
  // Absolute error target for the whole integral.
  double abs_tol = 1e-9;
  // Budget on interval bisections across all subintervals.
  int64_t max_subdivisions = int64_t{1} << 20;
};

absl::Status ValidateQuadratureSpec(const QuadratureSpec& spec);

// ln B(a, b). Requires a > 0 and b > 0.
absl::StatusOr<double> LogBeta(double a, double b);

// I_x(a, b), the CDF of Beta(a, b) at x.
absl::StatusOr<double> RegularizedIncompleteBeta(double x, double a, double b);

// The p-quantile of Beta(a, b): x with I_x(a, b) = p.
absl::StatusOr<double> InverseRegularizedIncompleteBeta(double p, double a,
                                                        double b);

// Integrates `f` over [lo, hi] with adaptive Simpson, independently on each
// subinterval delimited by `breakpoints` (points outside (lo, hi) are
// ignored). Kinks of `f` should be listed as breakpoints; `f` must be bounded
// on [lo, hi] since endpoints are evaluated.
absl::StatusOr<double> AdaptiveIntegrate(absl::FunctionRef<double(double)> f,
                                         double lo, double hi,
                                         std::span<const double> breakpoints,
                                         const QuadratureSpec& spec);

// Same contract as AdaptiveIntegrate, but each subinterval [c, d] is mapped
// through x = c + (d - c)(3t^2 - 2t^3). The map has zero slope at both ends,
// so integrable endpoint singularities such as (x - c)^(-1/2) become bounded.
// `f` is never evaluated at a breakpoint.
absl::StatusOr<double> AdaptiveIntegrateSmoothed(
    absl::FunctionRef<double(double)> f, double lo, double hi,
    std::span<const double> breakpoints, const QuadratureSpec& spec);

namespace internal {

// Beta(a, b) evaluator with the parameter-only constants cached. Callers
// guarantee a, b > 0.
class BetaKernel {
 public:
  BetaKernel(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }

  // Lower tail I_x(a, b), accurate in absolute terms.
  double Cdf(double x) const;
  // Upper tail 1 - I_x(a, b), accurate when the tail is small.
  double Sf(double x) const;
  // Density at x; 0 outside [0, 1], +inf at a singular endpoint.
  double Pdf(double x) const;
  // a ln x + b ln(1 - x) - ln B(a, b), evaluated without cancellation for
  // large a and b.
  double LogPowerTerms(double x) const;

 private:
  double LowerTail(double x, double one_minus_x, bool swapped) const;

  double a_;
  double b_;
  double log_beta_;
  // Only used when min(a, b) >= 10.
  bool large_;
  double stirling_const_;
};

// Unchecked kernels for hot loops. Callers guarantee a, b > 0.
double LogBetaUnchecked(double a, double b);
// Lower tail I_x(a, b), accurate in absolute terms.
double BetaCdfUnchecked(double x, double a, double b);
// Upper tail 1 - I_x(a, b), accurate when the tail is small.
double BetaSfUnchecked(double x, double a, double b);
// Density of Beta(a, b) at x; 0 outside (0, 1), +inf at a singular endpoint.
double BetaPdfUnchecked(double x, double a, double b);

}  // namespace internal

}  // namespace dpaudit

#endif  // DPAUDIT_NUMERIC_KERNEL_H_
