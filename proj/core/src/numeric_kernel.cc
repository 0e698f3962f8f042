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

#include "dpaudit/numeric_kernel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// 0.5 * ln(2 pi)
constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

constexpr int kMaxContinuedFractionTerms = 100000;
constexpr int kMaxInverseIterations = 400;
constexpr int kMinSimpsonDepth = 2;
constexpr int kMaxSimpsonDepth = 60;
// Floor on a segment's share of the tolerance, as a fraction of abs_tol. The
// budget caps the number of segments, so the floors add up to far less than
// abs_tol.
constexpr double kMinTolFraction = 0x1p-40;
constexpr double kRoundoffFactor = 64.0 * std::numeric_limits<double>::epsilon();

// lgamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)] for x >= 10, from the
// asymptotic Stirling series. Truncation error is below 1e-15 at x = 10.
double StirlingCorrection(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv *
         (1.0 / 12.0 +
          inv2 * (-1.0 / 360.0 +
                  inv2 * (1.0 / 1260.0 +
                          inv2 * (-1.0 / 1680.0 +
                                  inv2 * (1.0 / 1188.0 +
                                          inv2 * (-691.0 / 360360.0))))));
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b). Converges
// quickly for x < (a + 1) / (a + b + 2).
double BetaContinuedFraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

absl::Status CheckShape(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || std::isinf(a) || std::isinf(b)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Beta shape parameters must be positive and finite, got a=", a,
        " b=", b));
  }
  return absl::OkStatus();
}

struct Segment {
  double a;
  double b;
  double fa;
  double fm;
  double fb;
  double whole;
  double tol;
  int depth;
};

double SimpsonRule(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// Iterative adaptive Simpson on [a, b]. `budget` counts remaining bisections
// shared by all subintervals of one integration call; segment tolerances
// never drop below `min_tol`.
absl::StatusOr<double> SimpsonOnInterval(absl::FunctionRef<double(double)> f,
                                         double a, double b, double tol,
                                         double min_tol, int64_t& budget) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  std::vector<Segment> stack;
  stack.push_back({a, b, fa, fm, fb, SimpsonRule(a, b, fa, fm, fb), tol, 0});
  double total = 0.0;
  double compensation = 0.0;
  while (!stack.empty()) {
    const Segment s = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    const double left_mid = 0.5 * (s.a + mid);
    const double right_mid = 0.5 * (mid + s.b);
    const double f_left = f(left_mid);
    const double f_right = f(right_mid);
    const double left = SimpsonRule(s.a, mid, s.fa, f_left, s.fm);
    const double right = SimpsonRule(mid, s.b, s.fm, f_right, s.fb);
    const double delta = left + right - s.whole;
    if (!std::isfinite(delta)) {
      return absl::ResourceExhaustedError(
          absl::StrCat("integrand is not finite near x=", mid));
    }
    // Below the roundoff floor further bisection cannot reduce the error.
    const double floor =
        kRoundoffFactor * (std::fabs(left) + std::fabs(right));
    if ((s.depth >= kMinSimpsonDepth &&
         std::fabs(delta) <= std::max(15.0 * s.tol, floor)) ||
        s.depth >= kMaxSimpsonDepth) {
      // Kahan-compensated accumulation of the Richardson-corrected value.
      const double value = left + right + delta / 15.0;
      const double y = value - compensation;
      const double t = total + y;
      compensation = (t - total) - y;
      total = t;
      continue;
    }
    if (--budget < 0) {
      return absl::ResourceExhaustedError(
          "adaptive quadrature exceeded max_subdivisions without meeting the "
          "tolerance");
    }
    const double child_tol = std::max(0.5 * s.tol, min_tol);
    stack.push_back({mid, s.b, s.fm, f_right, s.fb, right, child_tol,
                     s.depth + 1});
    stack.push_back({s.a, mid, s.fa, f_left, s.fm, left, child_tol,
                     s.depth + 1});
  }
  return total;
}

absl::StatusOr<std::vector<double>> Partition(
    double lo, double hi, std::span<const double> breakpoints,
    const QuadratureSpec& spec) {
  if (absl::Status s = ValidateQuadratureSpec(spec); !s.ok()) return s;
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    return absl::InvalidArgumentError(
        absl::StrCat("integration bounds must satisfy lo <= hi, got [", lo,
                     ", ", hi, "]"));
  }
  std::vector<double> knots;
  knots.reserve(breakpoints.size() + 2);
  knots.push_back(lo);
  for (double p : breakpoints) {
    if (p > lo && p < hi) knots.push_back(p);
  }
  knots.push_back(hi);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

}  // namespace

namespace internal {

double LogBetaUnchecked(double a, double b) {
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= 10.0) {
    const double corr =
        StirlingCorrection(p) + StirlingCorrection(q) -
        StirlingCorrection(p + q);
    return -0.5 * std::log(q) + kLnSqrt2Pi + corr +
           (p - 0.5) * std::log(p / (p + q)) + q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = StirlingCorrection(q) - StirlingCorrection(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) +
           (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

BetaKernel::BetaKernel(double a, double b)
    : a_(a),
      b_(b),
      log_beta_(LogBetaUnchecked(a, b)),
      large_(std::min(a, b) >= 10.0),
      stirling_const_(0.0) {
  if (large_) {
    const double s = a + b;
    const double corr =
        StirlingCorrection(a) + StirlingCorrection(b) - StirlingCorrection(s);
    stirling_const_ = 0.5 * std::log(a * b / s) - kLnSqrt2Pi - corr;
  }
}

double BetaKernel::LogPowerTerms(double x) const {
  if (large_) {
    // a ln(x / p0) + b ln((1 - x) / q0) + ln(p0^a q0^b / B(a, b)), where
    // (p0, q0) is the mode-like split a / (a + b); both logs are small near
    // the bulk, which avoids cancelling two huge terms.
    const double s = a_ + b_;
    const double p0 = a_ / s;
    const double q0 = b_ / s;
    const double d = x - p0;
    return a_ * std::log1p(d / p0) + b_ * std::log1p(-d / q0) +
           stirling_const_;
  }
  return a_ * std::log(x) + b_ * std::log1p(-x) - log_beta_;
}

double BetaKernel::LowerTail(double x, double one_minus_x,
                             bool swapped) const {
  // Lower tail of Beta(a, b) at x when !swapped, otherwise lower tail of
  // Beta(b, a) at one_minus_x (which is the upper tail of Beta(a, b) at x).
  const double pa = swapped ? b_ : a_;
  const double pb = swapped ? a_ : b_;
  const double px = swapped ? one_minus_x : x;
  const double log_front = LogPowerTerms(x);
  return std::exp(log_front) * BetaContinuedFraction(px, pa, pb) / pa;
}

double BetaKernel::Cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x < (a_ + 1.0) / (a_ + b_ + 2.0)) return LowerTail(x, 1.0 - x, false);
  return 1.0 - LowerTail(x, 1.0 - x, true);
}

double BetaKernel::Sf(double x) const {
  if (!(x > 0.0)) return 1.0;
  if (x >= 1.0) return 0.0;
  if (x < (a_ + 1.0) / (a_ + b_ + 2.0)) return 1.0 - LowerTail(x, 1.0 - x, false);
  return LowerTail(x, 1.0 - x, true);
}

double BetaKernel::Pdf(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0) {
    if (a_ < 1.0) return kInf;
    return a_ == 1.0 ? std::exp(-log_beta_) : 0.0;
  }
  if (x == 1.0) {
    if (b_ < 1.0) return kInf;
    return b_ == 1.0 ? std::exp(-log_beta_) : 0.0;
  }
  return std::exp(LogPowerTerms(x)) / (x * (1.0 - x));
}

double BetaCdfUnchecked(double x, double a, double b) {
  return BetaKernel(a, b).Cdf(x);
}

double BetaSfUnchecked(double x, double a, double b) {
  return BetaKernel(a, b).Sf(x);
}

double BetaPdfUnchecked(double x, double a, double b) {
  return BetaKernel(a, b).Pdf(x);
}

}  // namespace internal

absl::Status ValidateQuadratureSpec(const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !std::isfinite(spec.abs_tol)) {
    return absl::InvalidArgumentError(
        absl::StrCat("abs_tol must be positive, got ", spec.abs_tol));
  }
  if (spec.max_subdivisions < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "max_subdivisions must be >= 1, got ", spec.max_subdivisions));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> LogBeta(double a, double b) {
  if (absl::Status s = CheckShape(a, b); !s.ok()) return s;
  return internal::LogBetaUnchecked(a, b);
}

absl::StatusOr<double> RegularizedIncompleteBeta(double x, double a,
                                                 double b) {
  if (absl::Status s = CheckShape(a, b); !s.ok()) return s;
  if (!(x >= 0.0 && x <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("x must lie in [0, 1], got ", x));
  }
  return internal::BetaCdfUnchecked(x, a, b);
}

absl::StatusOr<double> InverseRegularizedIncompleteBeta(double p, double a,
                                                        double b) {
  if (absl::Status s = CheckShape(a, b); !s.ok()) return s;
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("p must lie in [0, 1], got ", p));
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const internal::BetaKernel beta(a, b);

  // Starting point (Numerical Recipes, invbetai).
  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = z * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w) {
      x = std::pow(a * w * p, 1.0 / a);
    } else {
      x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
  }

  // Newton iterations inside a shrinking bisection bracket.
  double lo = 0.0;
  double hi = 1.0;
  if (!(x > lo && x < hi)) x = 0.5;
  for (int iter = 0; iter < kMaxInverseIterations; ++iter) {
    // Work on whichever tail is smaller so that the residual keeps relative
    // precision near 0 and 1.
    const double f = p <= 0.5 ? beta.Cdf(x) - p : (1.0 - p) - beta.Sf(x);
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = beta.Pdf(x);
    double next = (density > 0.0 && std::isfinite(density))
                      ? x - f / density
                      : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - x);
    x = next;
    if (step <= 1e-15 * x || hi - lo <= 1e-16 * hi) return x;
  }
  return absl::ResourceExhaustedError(absl::StrCat(
      "inverse incomplete beta did not converge for p=", p, " a=", a,
      " b=", b));
}

absl::StatusOr<double> AdaptiveIntegrate(absl::FunctionRef<double(double)> f,
                                         double lo, double hi,
                                         std::span<const double> breakpoints,
                                         const QuadratureSpec& spec) {
  absl::StatusOr<std::vector<double>> knots =
      Partition(lo, hi, breakpoints, spec);
  if (!knots.ok()) return knots.status();
  if (knots->size() < 2 || hi == lo) return 0.0;
  int64_t budget = spec.max_subdivisions;
  double total = 0.0;
  for (size_t i = 0; i + 1 < knots->size(); ++i) {
    const double a = (*knots)[i];
    const double b = (*knots)[i + 1];
    absl::StatusOr<double> part =
        SimpsonOnInterval(f, a, b, spec.abs_tol * (b - a) / (hi - lo),
                          spec.abs_tol * kMinTolFraction, budget);
    if (!part.ok()) return part.status();
    total += *part;
  }
  return total;
}

absl::StatusOr<double> AdaptiveIntegrateSmoothed(
    absl::FunctionRef<double(double)> f, double lo, double hi,
    std::span<const double> breakpoints, const QuadratureSpec& spec) {
  absl::StatusOr<std::vector<double>> knots =
      Partition(lo, hi, breakpoints, spec);
  if (!knots.ok()) return knots.status();
  if (knots->size() < 2 || hi == lo) return 0.0;
  int64_t budget = spec.max_subdivisions;
  double total = 0.0;
  for (size_t i = 0; i + 1 < knots->size(); ++i) {
    const double c = (*knots)[i];
    const double d = (*knots)[i + 1];
    const double width = d - c;
    auto mapped = [&](double t) -> double {
      if (t <= 0.0 || t >= 1.0) return 0.0;
      const double x = c + width * t * t * (3.0 - 2.0 * t);
      if (x <= c || x >= d) return 0.0;
      return f(x) * width * 6.0 * t * (1.0 - t);
    };
    absl::StatusOr<double> part = SimpsonOnInterval(
        mapped, 0.0, 1.0, spec.abs_tol * width / (hi - lo),
        spec.abs_tol * kMinTolFraction, budget);
    if (!part.ok()) return part.status();
    total += *part;
  }
  return total;
}

}  // namespace dpaudit
