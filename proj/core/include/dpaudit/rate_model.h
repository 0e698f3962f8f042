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

// Confusion tallies, Beta posteriors over error rates, and binomial
// confidence intervals for those rates.

#ifndef DPAUDIT_RATE_MODEL_H_
#define DPAUDIT_RATE_MODEL_H_

#include <cstdint>
#include <span>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpaudit {

// One distinguishing trial. `b` is the true membership bit and `b_hat` the
// adversary's guess.
struct OutcomeRecord {
  int64_t model_id = 0;
  int64_t trial_id = 0;
  int b = 0;
  int b_hat = 0;

  friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;
};

struct ConfusionTally {
  int64_t tp = 0;
  int64_t fn = 0;
  int64_t fp = 0;
  int64_t tn = 0;

  int64_t positives() const { return tp + fn; }
  int64_t negatives() const { return fp + tn; }
  int64_t total() const { return positives() + negatives(); }

  friend bool operator==(const ConfusionTally&, const ConfusionTally&) =
      default;
};

absl::Status ValidateTally(const ConfusionTally& tally);

struct BetaPosterior {
  double alpha = 0.5;
  double beta = 0.5;

  friend bool operator==(const BetaPosterior&, const BetaPosterior&) = default;
};

// The Jeffreys prior Beta(1/2, 1/2).
inline constexpr BetaPosterior kJeffreysPrior{0.5, 0.5};

absl::Status ValidateBetaPosterior(const BetaPosterior& posterior);

enum class Sidedness { kTwoSided, kUpperOneSided, kLowerOneSided };

struct RateInterval {
  double lo = 0.0;
  double hi = 1.0;
  double per_rate_alpha = 0.05;
  Sidedness sidedness = Sidedness::kTwoSided;
};

struct EmpiricalRates {
  double fnr;
  double fpr;
};

// Counts (b, b_hat) combinations. Records with bits outside {0, 1} are
// rejected.
absl::StatusOr<ConfusionTally> TallyFromOutcomes(
    std::span<const OutcomeRecord> records);

// FNR = fn / (tp + fn) and FPR = fp / (fp + tn). Fails with
// FailedPrecondition when either class is empty.
absl::StatusOr<EmpiricalRates> ComputeEmpiricalRates(
    const ConfusionTally& tally);

// Conjugate update: Beta(prior.alpha + k, prior.beta + n - k).
absl::StatusOr<BetaPosterior> JeffreysPosterior(
    int64_t k, int64_t n, const BetaPosterior& prior = kJeffreysPrior);

// Exact binomial interval from Beta quantiles. A two-sided interval puts
// per_rate_alpha / 2 in each tail; a one-sided interval puts all of it in one
// tail and pins the other limit to 0 or 1.
absl::StatusOr<RateInterval> ClopperPearsonInterval(int64_t k, int64_t n,
                                                    double per_rate_alpha,
                                                    Sidedness sidedness);

// Equal-tailed (or one-sided) quantiles of Beta(k + 1/2, n - k + 1/2), with
// the lower limit set to 0 when k = 0 and the upper limit set to 1 when
// k = n.
absl::StatusOr<RateInterval> JeffreysInterval(int64_t k, int64_t n,
                                              double per_rate_alpha,
                                              Sidedness sidedness);

// Probability that Beta(posterior) falls in [interval.lo, interval.hi].
absl::StatusOr<double> BetaMass(const BetaPosterior& posterior,
                                const RateInterval& interval);

}  // namespace dpaudit

#endif  // DPAUDIT_RATE_MODEL_H_
