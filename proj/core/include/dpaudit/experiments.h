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

// Membership-inference games against synthetic mechanisms, and the
// experiments built on them.
//
// Randomness is keyed so that runs are reproducible and comparable:
//   * the fair bit, the challenge pair and per-record mechanism noise of a
//     sample depend only on (seed, global sample index), where the global
//     index of sample j of model k is k * m + j;
//   * the base set, model-wide noise and the attack's reference population
//     depend only on (seed, model index).
// Consequently RunIndMia(trials = T) and RunMiaM(m, n_models = T / m) with
// the same seed see the same bits and challenges and differ only in how
// samples share trained models.

#ifndef DPAUDIT_EXPERIMENTS_H_
#define DPAUDIT_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/functional/function_ref.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpaudit/epsilon_inference.h"
#include "dpaudit/mechanisms.h"
#include "dpaudit/rate_model.h"

namespace dpaudit {

enum class AdversaryVariant {
  // Guess the candidate with the smaller loss; the likelihood-ratio test for
  // randomized response.
  kOptimalRr,
  // Guess "member" iff the loss of z1 is at most the alpha_pct-percentile of
  // the model's losses on a fresh reference population.
  kLossThreshold,
};

enum class ChallengeRegime {
  // Fresh challenge pairs for every sample.
  kAverageCase,
  // Fixed pairs chosen from a candidate pool by their loss gap on pilot
  // models.
  kWorstCase,
};

struct AdversarySpec {
  AdversaryVariant variant = AdversaryVariant::kOptimalRr;
  double alpha_pct = 50.0;
  ChallengeRegime regime = ChallengeRegime::kAverageCase;
  int64_t reference_size = 200;
};

absl::Status ValidateAdversarySpec(const AdversarySpec& adv);

struct ExperimentConfig {
  // Samples per trained model.
  int64_t m = 1;
  int64_t n_models = 1;
  // Base-set size.
  int64_t n = 100;
  uint64_t seed = 0;
};

absl::Status ValidateExperimentConfig(const ExperimentConfig& cfg);

struct SimulationReport {
  std::vector<OutcomeRecord> records;
  ConfusionTally tally;
  ExperimentConfig config;
};

// One trained model per trial, each on a base set of `dataset_size` records
// plus one challenge candidate.
absl::StatusOr<SimulationReport> RunIndMia(const Mechanism& mech,
                                           const AdversarySpec& adv,
                                           int64_t trials, uint64_t seed,
                                           int64_t dataset_size = 100);

// cfg.m samples per model: each model trains once on its base set plus the
// m chosen candidates, then answers the m challenges one at a time.
absl::StatusOr<SimulationReport> RunMiaM(const Mechanism& mech,
                                         const AdversarySpec& adv,
                                         const ExperimentConfig& cfg);

// Linear-interpolation percentile (the "linear" rule: rank (n - 1) p / 100).
absl::StatusOr<double> Percentile(std::span<const double> values,
                                  double pct);

// 1 for every member score at or below the alpha_pct-percentile of
// `reference_scores`, else 0.
absl::StatusOr<std::vector<int>> PercentileThresholdAttack(
    std::span<const double> member_scores,
    std::span<const double> reference_scores, double alpha_pct);

// The candidate with the largest evaluation; ties go to the smaller alpha.
absl::StatusOr<double> CalibrateAlpha(
    std::span<const double> candidate_alphas,
    absl::FunctionRef<absl::StatusOr<double>(double)> evaluation);

// n_total / 2 trials per class with tp = tn = round(accuracy n_total / 2).
absl::StatusOr<ConfusionTally> ExpectedTally(double accuracy, int64_t n_total);

struct SweepRow {
  int64_t n_total;
  // +infinity when the interval is unbounded.
  double bayesian_width;
  double jeffreys_width;
  double clopper_pearson_width;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<int64_t> bayesian_min_n;
  std::optional<int64_t> jeffreys_min_n;
  std::optional<int64_t> clopper_pearson_min_n;
};

// 100, 150, ..., 2000.
std::vector<int64_t> DefaultSweepGrid();

// Interval widths of the three estimators on ExpectedTally(accuracy, N) for
// each N in the ascending `n_grid`, and the first N at which each width is at
// most `target_width`.
absl::StatusOr<SweepResult> SampleSizeSweep(
    double accuracy, double delta, double alpha, double target_width,
    std::span<const int64_t> n_grid, const EstimatorOptions& options = {});

struct CoverageResult {
  // Fraction of replicates whose credible interval contains eps_true.
  double containment = 0.0;
  // Fraction of replicates whose lower endpoint is at most eps_true.
  double lower_below = 0.0;
  int64_t reps = 0;

  friend bool operator==(const CoverageResult&,
                         const CoverageResult&) = default;
};

// Repeats RunIndMia `reps` times with replicate-derived seeds and checks the
// Bayesian credible interval against mech.Guarantee().epsilon.
absl::StatusOr<CoverageResult> CoverageExperiment(
    const Mechanism& mech, const AdversarySpec& adv, int64_t trials_per_rep,
    int64_t reps, double delta, double alpha, uint64_t seed,
    const EstimatorOptions& options = {});

// max |F_a(e) - F_b(e)| over `grid_points` equally spaced e in [0, eps_max].
absl::StatusOr<double> SupCdfDistance(const EpsilonDistribution& a,
                                      const EpsilonDistribution& b,
                                      double eps_max, int grid_points = 201);

}  // namespace dpaudit

#endif  // DPAUDIT_EXPERIMENTS_H_
