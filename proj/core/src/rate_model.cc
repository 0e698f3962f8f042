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

#include "dpaudit/rate_model.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "dpaudit/numeric_kernel.h"

namespace dpaudit {
namespace {

absl::Status ValidateCounts(int64_t k, int64_t n) {
  if (k < 0 || n < 0 || k > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("counts must satisfy 0 <= k <= n, got k=", k, " n=", n));
  }
  return absl::OkStatus();
}

absl::Status ValidateIntervalArgs(int64_t k, int64_t n, double alpha) {
  if (absl::Status s = ValidateCounts(k, n); !s.ok()) return s;
  if (n < 1) {
    return absl::InvalidArgumentError("interval requires n >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("per_rate_alpha must lie in (0, 1), got ", alpha));
  }
  return absl::OkStatus();
}

// Tail probabilities assigned to the lower and upper limit.
struct TailSplit {
  double lower;
  double upper;
};

TailSplit SplitTails(double alpha, Sidedness sidedness) {
  switch (sidedness) {
    case Sidedness::kTwoSided:
      return {alpha / 2.0, alpha / 2.0};
    case Sidedness::kUpperOneSided:
      return {0.0, alpha};
    case Sidedness::kLowerOneSided:
      return {alpha, 0.0};
  }
  return {alpha / 2.0, alpha / 2.0};
}

}  // namespace

absl::Status ValidateTally(const ConfusionTally& tally) {
  if (tally.tp < 0 || tally.fn < 0 || tally.fp < 0 || tally.tn < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "tally counts must be nonnegative, got tp=", tally.tp, " fn=",
        tally.fn, " fp=", tally.fp, " tn=", tally.tn));
  }
  return absl::OkStatus();
}

absl::Status ValidateBetaPosterior(const BetaPosterior& posterior) {
  if (!(posterior.alpha > 0.0) || !(posterior.beta > 0.0) ||
      std::isinf(posterior.alpha) || std::isinf(posterior.beta)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Beta parameters must be positive and finite, got (",
        posterior.alpha, ", ", posterior.beta, ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<ConfusionTally> TallyFromOutcomes(
    std::span<const OutcomeRecord> records) {
  ConfusionTally tally;
  for (size_t i = 0; i < records.size(); ++i) {
    const OutcomeRecord& r = records[i];
    if ((r.b != 0 && r.b != 1) || (r.b_hat != 0 && r.b_hat != 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("record ", i, " has a non-binary bit (b=", r.b,
                       ", b_hat=", r.b_hat, ")"));
    }
    if (r.b == 1) {
      ++(r.b_hat == 1 ? tally.tp : tally.fn);
    } else {
      ++(r.b_hat == 1 ? tally.fp : tally.tn);
    }
  }
  return tally;
}

absl::StatusOr<EmpiricalRates> ComputeEmpiricalRates(
    const ConfusionTally& tally) {
  if (absl::Status s = ValidateTally(tally); !s.ok()) return s;
  if (tally.positives() == 0 || tally.negatives() == 0) {
    return absl::FailedPreconditionError(
        "empirical rates need at least one positive and one negative trial");
  }
  return EmpiricalRates{
      static_cast<double>(tally.fn) / static_cast<double>(tally.positives()),
      static_cast<double>(tally.fp) / static_cast<double>(tally.negatives())};
}

absl::StatusOr<BetaPosterior> JeffreysPosterior(int64_t k, int64_t n,
                                                const BetaPosterior& prior) {
  if (absl::Status s = ValidateCounts(k, n); !s.ok()) return s;
  if (absl::Status s = ValidateBetaPosterior(prior); !s.ok()) return s;
  return BetaPosterior{prior.alpha + static_cast<double>(k),
                       prior.beta + static_cast<double>(n - k)};
}

absl::StatusOr<RateInterval> ClopperPearsonInterval(int64_t k, int64_t n,
                                                    double per_rate_alpha,
                                                    Sidedness sidedness) {
  if (absl::Status s = ValidateIntervalArgs(k, n, per_rate_alpha); !s.ok()) {
    return s;
  }
  const TailSplit tails = SplitTails(per_rate_alpha, sidedness);
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  RateInterval out{0.0, 1.0, per_rate_alpha, sidedness};
  if (tails.lower > 0.0 && k > 0) {
    absl::StatusOr<double> lo =
        InverseRegularizedIncompleteBeta(tails.lower, kd, nd - kd + 1.0);
    if (!lo.ok()) return lo.status();
    out.lo = *lo;
  }
  if (tails.upper > 0.0 && k < n) {
    absl::StatusOr<double> hi =
        InverseRegularizedIncompleteBeta(1.0 - tails.upper, kd + 1.0, nd - kd);
    if (!hi.ok()) return hi.status();
    out.hi = *hi;
  }
  return out;
}

absl::StatusOr<RateInterval> JeffreysInterval(int64_t k, int64_t n,
                                              double per_rate_alpha,
                                              Sidedness sidedness) {
  if (absl::Status s = ValidateIntervalArgs(k, n, per_rate_alpha); !s.ok()) {
    return s;
  }
  const TailSplit tails = SplitTails(per_rate_alpha, sidedness);
  const double a = static_cast<double>(k) + 0.5;
  const double b = static_cast<double>(n - k) + 0.5;
  RateInterval out{0.0, 1.0, per_rate_alpha, sidedness};
  if (tails.lower > 0.0 && k > 0) {
    absl::StatusOr<double> lo = InverseRegularizedIncompleteBeta(tails.lower, a, b);
    if (!lo.ok()) return lo.status();
    out.lo = *lo;
  }
  if (tails.upper > 0.0 && k < n) {
    absl::StatusOr<double> hi =
        InverseRegularizedIncompleteBeta(1.0 - tails.upper, a, b);
    if (!hi.ok()) return hi.status();
    out.hi = *hi;
  }
  return out;
}

absl::StatusOr<double> BetaMass(const BetaPosterior& posterior,
                                const RateInterval& interval) {
  if (absl::Status s = ValidateBetaPosterior(posterior); !s.ok()) return s;
  if (!(interval.lo >= 0.0 && interval.hi <= 1.0 && interval.lo <= interval.hi)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "interval must satisfy 0 <= lo <= hi <= 1, got [", interval.lo, ", ",
        interval.hi, "]"));
  }
  const internal::BetaKernel beta(posterior.alpha, posterior.beta);
  // Subtract in whichever tail keeps more precision.
  const double mass = interval.hi <= 0.5
                          ? beta.Cdf(interval.hi) - beta.Cdf(interval.lo)
                          : beta.Sf(interval.lo) - beta.Sf(interval.hi);
  return std::max(0.0, mass);
}

}  // namespace dpaudit
