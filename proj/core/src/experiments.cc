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

#include "dpaudit/experiments.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dpaudit/random_streams.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kPilotModels = 8;
constexpr int64_t kMinPilotPool = 64;

// Id ranges. Challenge slots use the global sample index, which stays far
// below kPoolIdBase.
constexpr int64_t kPoolIdBase = int64_t{1} << 50;
constexpr int64_t kBaseIdBase = -(int64_t{1} << 40);
constexpr int64_t kReferenceIdBase = -(int64_t{1} << 50);

using ChallengePair = std::pair<Example, Example>;

std::vector<Example> SampleBaseSet(const Mechanism& mech, uint64_t seed,
                                   uint64_t model_index, int64_t n) {
  RandomStream rng(DeriveKey(seed, StreamTag::kBaseSet, {model_index}));
  std::vector<Example> base;
  base.reserve(n + 1);
  for (int64_t i = 0; i < n; ++i) {
    base.push_back(mech.SampleExample(kBaseIdBase - i, rng));
  }
  return base;
}

TrainingKeys KeysForModel(uint64_t seed, uint64_t model_index) {
  return {DeriveKey(seed, StreamTag::kModelNoise, {model_index}),
          DeriveKey(seed, StreamTag::kRecordNoise, {})};
}

int FairBit(uint64_t seed, uint64_t global_index) {
  return KeyedUniform(DeriveKey(seed, StreamTag::kFairBit, {}),
                      global_index) < 0.5
             ? 1
             : 0;
}

// Candidates ranked by (mean loss when held out) - (mean loss when trained
// on), over pilot models trained on random halves of the pool.
std::vector<Example> WorstCaseCandidates(const Mechanism& mech, uint64_t seed,
                                         int64_t count, int64_t n) {
  const int64_t pool_size = std::max(kMinPilotPool, 2 * count);
  RandomStream pool_rng(DeriveKey(seed, StreamTag::kPilot, {0}));
  std::vector<Example> pool;
  pool.reserve(pool_size);
  for (int64_t i = 0; i < pool_size; ++i) {
    pool.push_back(mech.SampleExample(kPoolIdBase + i, pool_rng));
  }
  std::vector<double> in_sum(pool_size, 0.0), out_sum(pool_size, 0.0);
  std::vector<int> in_count(pool_size, 0), out_count(pool_size, 0);
  for (int p = 0; p < kPilotModels; ++p) {
    const uint64_t pilot = static_cast<uint64_t>(p) + 1;
    RandomStream split(DeriveKey(seed, StreamTag::kPilot, {pilot, 0}));
    std::vector<Example> dataset = SampleBaseSet(
        mech, DeriveKey(seed, StreamTag::kPilot, {pilot, 1}), 0, n);
    std::vector<bool> included(pool_size);
    for (int64_t i = 0; i < pool_size; ++i) {
      included[i] = split.Bernoulli(0.5);
      if (included[i]) dataset.push_back(pool[i]);
    }
    const std::unique_ptr<TrainedModel> model =
        mech.Train(dataset, {DeriveKey(seed, StreamTag::kPilot, {pilot, 2}),
                             DeriveKey(seed, StreamTag::kPilot, {pilot, 3})});
    for (int64_t i = 0; i < pool_size; ++i) {
      const double loss = model->Loss(pool[i]);
      if (included[i]) {
        in_sum[i] += loss;
        ++in_count[i];
      } else {
        out_sum[i] += loss;
        ++out_count[i];
      }
    }
  }
  std::vector<double> gap(pool_size, 0.0);
  for (int64_t i = 0; i < pool_size; ++i) {
    if (in_count[i] > 0 && out_count[i] > 0) {
      gap[i] = out_sum[i] / out_count[i] - in_sum[i] / in_count[i];
    }
  }
  std::vector<int64_t> order(pool_size);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int64_t a, int64_t b) { return gap[a] > gap[b]; });
  std::vector<Example> chosen;
  chosen.reserve(count);
  for (int64_t i = 0; i < count; ++i) chosen.push_back(pool[order[i]]);
  return chosen;
}

// The pair for sample `global_index`; `slot` indexes the worst-case list.
ChallengePair ChallengeFor(const Mechanism& mech, const AdversarySpec& adv,
                           const std::vector<Example>& worst_case,
                           uint64_t seed, int64_t global_index, int64_t slot) {
  if (adv.regime == ChallengeRegime::kWorstCase) {
    ChallengePair pair{worst_case[2 * slot], worst_case[2 * slot + 1]};
    pair.first.id = global_index;
    pair.second.id = global_index;
    return pair;
  }
  RandomStream rng(DeriveKey(seed, StreamTag::kChallenge,
                             {static_cast<uint64_t>(global_index)}));
  return mech.SampleChallengePair(global_index, rng);
}

// Membership threshold of the loss-threshold attack against `model`.
absl::StatusOr<double> ModelThreshold(const Mechanism& mech,
                                      const AdversarySpec& adv,
                                      const TrainedModel& model, uint64_t seed,
                                      uint64_t model_index) {
  RandomStream rng(DeriveKey(seed, StreamTag::kReference, {model_index}));
  std::vector<double> losses;
  losses.reserve(adv.reference_size);
  for (int64_t i = 0; i < adv.reference_size; ++i) {
    losses.push_back(model.Loss(mech.SampleExample(kReferenceIdBase - i, rng)));
  }
  return Percentile(losses, adv.alpha_pct);
}

int Guess(const AdversarySpec& adv, const TrainedModel& model,
          const ChallengePair& pair, double threshold, uint64_t seed,
          int64_t global_index) {
  const double l1 = model.Loss(pair.second);
  if (adv.variant == AdversaryVariant::kLossThreshold) {
    return l1 <= threshold ? 1 : 0;
  }
  const double l0 = model.Loss(pair.first);
  if (l1 < l0) return 1;
  if (l1 > l0) return 0;
  return KeyedUniform(DeriveKey(seed, StreamTag::kTieBreak, {}),
                      static_cast<uint64_t>(global_index)) < 0.5
             ? 1
             : 0;
}

SimulationReport Finish(std::vector<OutcomeRecord> records,
                        const ExperimentConfig& cfg) {
  SimulationReport report;
  // Records are generated with valid bits, so tallying cannot fail.
  report.tally = *TallyFromOutcomes(records);
  report.records = std::move(records);
  report.config = cfg;
  return report;
}

}  // namespace

absl::Status ValidateAdversarySpec(const AdversarySpec& adv) {
  if (!(adv.alpha_pct > 0.0 && adv.alpha_pct < 100.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha_pct must lie in (0, 100), got ", adv.alpha_pct));
  }
  if (adv.variant == AdversaryVariant::kLossThreshold &&
      adv.reference_size < 1) {
    return absl::InvalidArgumentError(
        "loss-threshold attack needs a nonempty reference population");
  }
  return absl::OkStatus();
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& cfg) {
  if (cfg.m < 1 || cfg.n_models < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("m and n_models must be >= 1, got m=", cfg.m,
                     " n_models=", cfg.n_models));
  }
  if (cfg.n < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("base-set size must be >= 0, got ", cfg.n));
  }
  if (cfg.m > kPoolIdBase / cfg.n_models) {
    return absl::InvalidArgumentError("m * n_models is too large");
  }
  return absl::OkStatus();
}

absl::StatusOr<SimulationReport> RunIndMia(const Mechanism& mech,
                                           const AdversarySpec& adv,
                                           int64_t trials, uint64_t seed,
                                           int64_t dataset_size) {
  const ExperimentConfig cfg{1, trials, dataset_size, seed};
  if (absl::Status s = ValidateExperimentConfig(cfg); !s.ok()) return s;
  if (absl::Status s = ValidateAdversarySpec(adv); !s.ok()) return s;

  std::vector<Example> worst_case;
  if (adv.regime == ChallengeRegime::kWorstCase) {
    worst_case = WorstCaseCandidates(mech, seed, 2, dataset_size);
  }
  std::vector<OutcomeRecord> records;
  records.reserve(trials);
  for (int64_t t = 0; t < trials; ++t) {
    const uint64_t ut = static_cast<uint64_t>(t);
    const ChallengePair pair = ChallengeFor(mech, adv, worst_case, seed, t, 0);
    const int b = FairBit(seed, ut);
    std::vector<Example> dataset = SampleBaseSet(mech, seed, ut, dataset_size);
    dataset.push_back(b == 1 ? pair.second : pair.first);
    const std::unique_ptr<TrainedModel> model =
        mech.Train(dataset, KeysForModel(seed, ut));
    double threshold = 0.0;
    if (adv.variant == AdversaryVariant::kLossThreshold) {
      absl::StatusOr<double> tau = ModelThreshold(mech, adv, *model, seed, ut);
      if (!tau.ok()) return tau.status();
      threshold = *tau;
    }
    records.push_back(
        {t, 0, b, Guess(adv, *model, pair, threshold, seed, t)});
  }
  return Finish(std::move(records), cfg);
}

absl::StatusOr<SimulationReport> RunMiaM(const Mechanism& mech,
                                         const AdversarySpec& adv,
                                         const ExperimentConfig& cfg) {
  if (absl::Status s = ValidateExperimentConfig(cfg); !s.ok()) return s;
  if (absl::Status s = ValidateAdversarySpec(adv); !s.ok()) return s;

  std::vector<Example> worst_case;
  if (adv.regime == ChallengeRegime::kWorstCase) {
    worst_case = WorstCaseCandidates(mech, cfg.seed, 2 * cfg.m, cfg.n);
  }
  std::vector<OutcomeRecord> records;
  records.reserve(cfg.m * cfg.n_models);
  for (int64_t k = 0; k < cfg.n_models; ++k) {
    const uint64_t uk = static_cast<uint64_t>(k);
    std::vector<ChallengePair> pairs;
    std::vector<int> bits;
    pairs.reserve(cfg.m);
    bits.reserve(cfg.m);
    std::vector<Example> dataset = SampleBaseSet(mech, cfg.seed, uk, cfg.n);
    for (int64_t j = 0; j < cfg.m; ++j) {
      const int64_t g = k * cfg.m + j;
      pairs.push_back(ChallengeFor(mech, adv, worst_case, cfg.seed, g, j));
      bits.push_back(FairBit(cfg.seed, static_cast<uint64_t>(g)));
      dataset.push_back(bits.back() == 1 ? pairs.back().second
                                         : pairs.back().first);
    }
    const std::unique_ptr<TrainedModel> model =
        mech.Train(dataset, KeysForModel(cfg.seed, uk));
    double threshold = 0.0;
    if (adv.variant == AdversaryVariant::kLossThreshold) {
      absl::StatusOr<double> tau =
          ModelThreshold(mech, adv, *model, cfg.seed, uk);
      if (!tau.ok()) return tau.status();
      threshold = *tau;
    }
    for (int64_t j = 0; j < cfg.m; ++j) {
      const int64_t g = k * cfg.m + j;
      records.push_back({k, j, bits[j],
                         Guess(adv, *model, pairs[j], threshold, cfg.seed, g)});
    }
  }
  return Finish(std::move(records), cfg);
}

absl::StatusOr<double> Percentile(std::span<const double> values,
                                  double pct) {
  if (values.empty()) {
    return absl::FailedPreconditionError(
        "percentile of an empty population is undefined");
  }
  if (!(pct >= 0.0 && pct <= 100.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("percentile must lie in [0, 100], got ", pct));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = (static_cast<double>(sorted.size()) - 1.0) * pct / 100.0;
  const size_t lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

absl::StatusOr<std::vector<int>> PercentileThresholdAttack(
    std::span<const double> member_scores,
    std::span<const double> reference_scores, double alpha_pct) {
  if (!(alpha_pct > 0.0 && alpha_pct < 100.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha_pct must lie in (0, 100), got ", alpha_pct));
  }
  absl::StatusOr<double> tau = Percentile(reference_scores, alpha_pct);
  if (!tau.ok()) return tau.status();
  std::vector<int> guesses;
  guesses.reserve(member_scores.size());
  for (double s : member_scores) guesses.push_back(s <= *tau ? 1 : 0);
  return guesses;
}

absl::StatusOr<double> CalibrateAlpha(
    std::span<const double> candidate_alphas,
    absl::FunctionRef<absl::StatusOr<double>(double)> evaluation) {
  if (candidate_alphas.empty()) {
    return absl::InvalidArgumentError("no candidate alphas");
  }
  double best_alpha = 0.0;
  double best_score = -kInf;
  bool first = true;
  for (double alpha : candidate_alphas) {
    absl::StatusOr<double> score = evaluation(alpha);
    if (!score.ok()) return score.status();
    if (first || *score > best_score ||
        (*score == best_score && alpha < best_alpha)) {
      best_alpha = alpha;
      best_score = *score;
      first = false;
    }
  }
  return best_alpha;
}

absl::StatusOr<ConfusionTally> ExpectedTally(double accuracy,
                                             int64_t n_total) {
  if (!(accuracy > 0.0 && accuracy <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("accuracy must lie in (0, 1], got ", accuracy));
  }
  if (n_total < 0 || n_total % 2 != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "n_total must be a nonnegative even count, got ", n_total));
  }
  const int64_t half = n_total / 2;
  const int64_t correct =
      std::llround(accuracy * static_cast<double>(half));
  return ConfusionTally{correct, half - correct, half - correct, correct};
}

std::vector<int64_t> DefaultSweepGrid() {
  std::vector<int64_t> grid;
  for (int64_t n = 100; n <= 2000; n += 50) grid.push_back(n);
  return grid;
}

absl::StatusOr<SweepResult> SampleSizeSweep(double accuracy, double delta,
                                            double alpha, double target_width,
                                            std::span<const int64_t> n_grid,
                                            const EstimatorOptions& options) {
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
    return absl::InvalidArgumentError("sample-size grid must be ascending");
  }
  SweepResult result;
  auto width = [](const EpsilonInterval& i) {
    return i.unbounded() ? kInf : i.hi - i.lo;
  };
  for (int64_t n : n_grid) {
    absl::StatusOr<ConfusionTally> tally = ExpectedTally(accuracy, n);
    if (!tally.ok()) return tally.status();
    absl::StatusOr<EpsilonInterval> bayes =
        CredibleInterval(*tally, delta, alpha, kJeffreysPrior, options);
    if (!bayes.ok()) return bayes.status();
    absl::StatusOr<EpsilonInterval> jeffreys =
        CiEpsilonInterval(*tally, delta, alpha, CiFamily::kJeffreys);
    if (!jeffreys.ok()) return jeffreys.status();
    absl::StatusOr<EpsilonInterval> cp =
        CiEpsilonInterval(*tally, delta, alpha, CiFamily::kClopperPearson);
    if (!cp.ok()) return cp.status();
    const SweepRow row{n, width(*bayes), width(*jeffreys), width(*cp)};
    result.rows.push_back(row);
    if (!result.bayesian_min_n && row.bayesian_width <= target_width) {
      result.bayesian_min_n = n;
    }
    if (!result.jeffreys_min_n && row.jeffreys_width <= target_width) {
      result.jeffreys_min_n = n;
    }
    if (!result.clopper_pearson_min_n &&
        row.clopper_pearson_width <= target_width) {
      result.clopper_pearson_min_n = n;
    }
  }
  return result;
}

absl::StatusOr<CoverageResult> CoverageExperiment(
    const Mechanism& mech, const AdversarySpec& adv, int64_t trials_per_rep,
    int64_t reps, double delta, double alpha, uint64_t seed,
    const EstimatorOptions& options) {
  if (reps < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("reps must be >= 1, got ", reps));
  }
  const double eps_true = mech.Guarantee().epsilon;
  int64_t contained = 0;
  int64_t below = 0;
  for (int64_t r = 0; r < reps; ++r) {
    const uint64_t rep_seed =
        DeriveKey(seed, StreamTag::kReplicate, {static_cast<uint64_t>(r)});
    absl::StatusOr<SimulationReport> report =
        RunIndMia(mech, adv, trials_per_rep, rep_seed);
    if (!report.ok()) return report.status();
    absl::StatusOr<EpsilonInterval> ci = CredibleInterval(
        report->tally, delta, alpha, kJeffreysPrior, options);
    if (!ci.ok()) return ci.status();
    if (ci->lo <= eps_true) {
      ++below;
      if (eps_true <= ci->hi) ++contained;
    }
  }
  const double n = static_cast<double>(reps);
  return CoverageResult{static_cast<double>(contained) / n,
                        static_cast<double>(below) / n, reps};
}

absl::StatusOr<double> SupCdfDistance(const EpsilonDistribution& a,
                                      const EpsilonDistribution& b,
                                      double eps_max, int grid_points) {
  if (!(eps_max > 0.0) || grid_points < 2) {
    return absl::InvalidArgumentError(
        "SupCdfDistance needs eps_max > 0 and at least two grid points");
  }
  double sup = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double eps = eps_max * i / (grid_points - 1);
    absl::StatusOr<double> fa = a.Cdf(eps);
    if (!fa.ok()) return fa.status();
    absl::StatusOr<double> fb = b.Cdf(eps);
    if (!fb.ok()) return fb.status();
    sup = std::max(sup, std::fabs(*fa - *fb));
  }
  return sup;
}

}  // namespace dpaudit
