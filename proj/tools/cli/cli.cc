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

#include "cli/cli.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "dpaudit/epsilon_inference.h"
#include "dpaudit/experiments.h"
#include "dpaudit/mechanisms.h"
#include "dpaudit/outcome_tsv.h"
#include "dpaudit/rate_model.h"
#include "json.hpp"

namespace dpaudit::cli {
namespace {

using json = nlohmann::json;

// A failure carrying the exit code it maps to.
struct CliError {
  int code;
  std::string message;
};

template <typename T>
using Result = std::variant<T, CliError>;

CliError FromStatus(const absl::Status& s) {
  int code = kExitNumeric;
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
      code = kExitUsage;
      break;
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kNotFound:
      code = kExitData;
      break;
    default:
      code = kExitNumeric;
  }
  return {code, std::string(s.message())};
}

// Flags naming the trials to analyze: raw counts or an outcome file.
struct TallyFlags {
  int64_t tp = 0;
  int64_t fn = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  std::string input;
  std::vector<CLI::Option*> count_options;
  CLI::Option* input_option = nullptr;
};

void AddTallyFlags(CLI::App* app, TallyFlags& flags) {
  flags.count_options = {
      app->add_option("--tp", flags.tp, "True positives (b=1, guess 1)"),
      app->add_option("--fn", flags.fn, "False negatives (b=1, guess 0)"),
      app->add_option("--fp", flags.fp, "False positives (b=0, guess 1)"),
      app->add_option("--tn", flags.tn, "True negatives (b=0, guess 0)"),
  };
  flags.input_option =
      app->add_option("--input", flags.input, "Outcome TSV file");
}

Result<ConfusionTally> ReadTallyFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return CliError{kExitData, absl::StrCat("cannot open ", path)};
  absl::StatusOr<std::vector<OutcomeRecord>> records = ReadOutcomeTsv(in);
  if (!records.ok()) {
    return CliError{kExitData,
                    absl::StrCat(path, ": ", records.status().message())};
  }
  absl::StatusOr<ConfusionTally> tally = TallyFromOutcomes(*records);
  if (!tally.ok()) return CliError{kExitData, std::string(tally.status().message())};
  return *tally;
}

Result<ConfusionTally> ResolveTally(const TallyFlags& flags) {
  const int given = static_cast<int>(std::count_if(
      flags.count_options.begin(), flags.count_options.end(),
      [](const CLI::Option* o) { return o->count() > 0; }));
  const bool has_input = flags.input_option->count() > 0;
  if (has_input && given > 0) {
    return CliError{kExitUsage, "give either --input or the four counts"};
  }
  if (has_input) return ReadTallyFile(flags.input);
  if (given != 4) {
    return CliError{kExitUsage,
                    "need --tp, --fn, --fp and --tn, or --input"};
  }
  const ConfusionTally tally{flags.tp, flags.fn, flags.fp, flags.tn};
  if (absl::Status s = ValidateTally(tally); !s.ok()) {
    return CliError{kExitData, std::string(s.message())};
  }
  return tally;
}

Result<BetaPosterior> ParsePrior(const std::string& text) {
  const std::vector<absl::string_view> parts = absl::StrSplit(text, ',');
  BetaPosterior prior;
  if (parts.size() != 2 || !absl::SimpleAtod(parts[0], &prior.alpha) ||
      !absl::SimpleAtod(parts[1], &prior.beta) ||
      !ValidateBetaPosterior(prior).ok()) {
    return CliError{kExitUsage,
                    absl::StrCat("--prior must be two positive numbers a,b; "
                                 "got '", text, "'")};
  }
  return prior;
}

std::string FormatEps(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

json IntervalJson(const EpsilonInterval& interval) {
  json j;
  j["lo"] = interval.lo;
  j["hi"] = interval.unbounded() ? json(nullptr) : json(interval.hi);
  j["unbounded"] = interval.unbounded();
  return j;
}

json TallyJson(const ConfusionTally& t) {
  return {{"tp", t.tp}, {"fn", t.fn}, {"fp", t.fp}, {"tn", t.tn}};
}

json ReportJson(const EpsilonInterval& interval, double delta,
                const ConfusionTally& tally, const BetaPosterior& prior) {
  json j;
  j["method"] = std::string(EpsilonMethodName(interval.method));
  j["alpha"] = interval.alpha;
  j["delta"] = delta;
  j["interval"] = IntervalJson(interval);
  j["tally"] = TallyJson(tally);
  j["prior"] = {{"alpha", prior.alpha}, {"beta", prior.beta}};
  return j;
}

std::string ReportLine(const EpsilonInterval& interval, double delta) {
  return absl::StrCat(std::string(EpsilonMethodName(interval.method)),
                      ": alpha=", interval.alpha, " delta=", delta, " [",
                      FormatEps(interval.lo), ", ", FormatEps(interval.hi),
                      interval.unbounded() ? ")" : "]");
}

std::vector<std::string> ExpandMethods(const std::string& method) {
  if (method == "all") return {"bayesian", "jeffreys", "clopper-pearson"};
  return {method};
}

Result<EpsilonInterval> Estimate(const std::string& method,
                                 const ConfusionTally& tally, double delta,
                                 double alpha, const BetaPosterior& prior,
                                 const EstimatorOptions& options,
                                 bool one_sided) {
  absl::StatusOr<EpsilonInterval> interval;
  const Sidedness sidedness =
      one_sided ? Sidedness::kUpperOneSided : Sidedness::kTwoSided;
  if (method == "bayesian") {
    interval = CredibleInterval(tally, delta, alpha, prior, options);
  } else if (method == "jeffreys") {
    interval =
        CiEpsilonInterval(tally, delta, alpha, CiFamily::kJeffreys, sidedness);
  } else {
    interval = CiEpsilonInterval(tally, delta, alpha,
                                 CiFamily::kClopperPearson, sidedness);
  }
  if (!interval.ok()) return FromStatus(interval.status());
  return *interval;
}

// Shared estimator flags.
struct EstimatorFlags {
  double delta = 0.0;
  double alpha = 0.1;
  std::string prior = "0.5,0.5";
  double eps_cap = 50.0;
};

void AddEstimatorFlags(CLI::App* app, EstimatorFlags& flags,
                       bool delta_required) {
  CLI::Option* delta =
      app->add_option("--delta", flags.delta, "delta of the privacy region");
  if (delta_required) delta->required();
  app->add_option("--alpha", flags.alpha,
                  "Significance level (1 - confidence)")
      ->capture_default_str();
  app->add_option("--prior", flags.prior, "Beta prior a,b")
      ->capture_default_str();
  app->add_option("--eps-cap", flags.eps_cap,
                  "Largest epsilon searched before reporting unbounded")
      ->capture_default_str();
}

Result<EstimatorOptions> ResolveOptions(const EstimatorFlags& flags) {
  EstimatorOptions options;
  options.eps_cap = flags.eps_cap;
  if (absl::Status s = ValidateEstimatorOptions(options); !s.ok()) {
    return CliError{kExitUsage, std::string(s.message())};
  }
  if (!(flags.alpha > 0.0 && flags.alpha < 1.0)) {
    return CliError{kExitUsage, "--alpha must lie in (0, 1)"};
  }
  if (!(flags.delta >= 0.0 && flags.delta <= 1.0)) {
    return CliError{kExitUsage, "--delta must lie in [0, 1]"};
  }
  return options;
}

struct MechanismFlags {
  std::string mechanism = "rr";
  double eps_true = 1.0;
  double gm_delta = 1e-5;
  int dimension = 10;
  double clip_norm = 1.0;
  std::string adversary = "auto";
  double alpha_pct = 50.0;
  std::string regime = "average";
  int64_t reference_size = 200;
};

void AddMechanismFlags(CLI::App* app, MechanismFlags& flags) {
  app->add_option("--mechanism", flags.mechanism, "rr | gaussian-mean")
      ->capture_default_str();
  app->add_option("--eps-true", flags.eps_true,
                  "epsilon the mechanism is calibrated to")
      ->capture_default_str();
  app->add_option("--gm-delta", flags.gm_delta,
                  "delta of the Gaussian mechanism")
      ->capture_default_str();
  app->add_option("--dimension", flags.dimension,
                  "Record dimension (gaussian-mean)")
      ->capture_default_str();
  app->add_option("--clip-norm", flags.clip_norm,
                  "Clipping norm (gaussian-mean)")
      ->capture_default_str();
  app->add_option("--adversary", flags.adversary,
                  "auto | optimal | threshold")
      ->check(CLI::IsMember({"auto", "optimal", "threshold"}))
      ->capture_default_str();
  app->add_option("--alpha-pct", flags.alpha_pct,
                  "Percentile of the threshold attack")
      ->capture_default_str();
  app->add_option("--regime", flags.regime, "average | worst")
      ->check(CLI::IsMember({"average", "worst"}))
      ->capture_default_str();
  app->add_option("--reference-size", flags.reference_size,
                  "Reference population size of the threshold attack")
      ->capture_default_str();
}

Result<std::unique_ptr<Mechanism>> BuildMechanism(const MechanismFlags& f) {
  absl::StatusOr<std::unique_ptr<Mechanism>> mech;
  if (f.mechanism == "rr") {
    mech = MakeRandomizedResponse(f.eps_true);
  } else if (f.mechanism == "gaussian-mean") {
    mech = MakeGaussianMean(f.eps_true, f.gm_delta, f.dimension, f.clip_norm);
  } else {
    return CliError{kExitUsage,
                    absl::StrCat("unknown mechanism '", f.mechanism,
                                 "' (expected rr or gaussian-mean)")};
  }
  if (!mech.ok()) return CliError{kExitUsage, std::string(mech.status().message())};
  return std::move(*mech);
}

Result<AdversarySpec> BuildAdversary(const MechanismFlags& f) {
  AdversarySpec adv;
  const std::string variant =
      f.adversary != "auto" ? f.adversary
                            : (f.mechanism == "rr" ? "optimal" : "threshold");
  adv.variant = variant == "optimal" ? AdversaryVariant::kOptimalRr
                                     : AdversaryVariant::kLossThreshold;
  adv.alpha_pct = f.alpha_pct;
  adv.regime = f.regime == "worst" ? ChallengeRegime::kWorstCase
                                   : ChallengeRegime::kAverageCase;
  adv.reference_size = f.reference_size;
  if (absl::Status s = ValidateAdversarySpec(adv); !s.ok()) {
    return CliError{kExitUsage, std::string(s.message())};
  }
  return adv;
}

// Writes to `path`, or to `out` when path is "-".
Result<bool> WithOutput(const std::string& path, std::ostream& out,
                        const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(out);
    return true;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) return CliError{kExitData, absl::StrCat("cannot write ", path)};
  write(file);
  file.flush();
  if (!file) return CliError{kExitData, absl::StrCat("failed writing ", path)};
  return true;
}

// --- commands ---------------------------------------------------------------

struct EstimateCommand {
  TallyFlags tally;
  EstimatorFlags est;
  std::string method = "bayesian";
  bool json_output = false;
  bool one_sided = false;

  void Register(CLI::App* app) {
    AddTallyFlags(app, tally);
    AddEstimatorFlags(app, est, /*delta_required=*/true);
    app->add_option("--method", method,
                    "bayesian | jeffreys | clopper-pearson | all")
        ->check(CLI::IsMember({"bayesian", "jeffreys", "clopper-pearson",
                               "all"}))
        ->capture_default_str();
    app->add_flag("--json", json_output, "Print a JSON document");
    app->add_flag("--one-sided", one_sided,
                  "Use one-sided rate intervals for the CI-derived methods");
  }

  Result<bool> Run(std::ostream& out) const {
    Result<ConfusionTally> t = ResolveTally(tally);
    if (auto* e = std::get_if<CliError>(&t)) return *e;
    Result<BetaPosterior> prior = ParsePrior(est.prior);
    if (auto* e = std::get_if<CliError>(&prior)) return *e;
    Result<EstimatorOptions> options = ResolveOptions(est);
    if (auto* e = std::get_if<CliError>(&options)) return *e;

    std::vector<EpsilonInterval> intervals;
    for (const std::string& m : ExpandMethods(method)) {
      Result<EpsilonInterval> interval =
          Estimate(m, std::get<ConfusionTally>(t), est.delta, est.alpha,
                   std::get<BetaPosterior>(prior),
                   std::get<EstimatorOptions>(options), one_sided);
      if (auto* e = std::get_if<CliError>(&interval)) return *e;
      intervals.push_back(std::get<EpsilonInterval>(interval));
    }
    if (json_output) {
      std::vector<json> docs;
      for (const EpsilonInterval& i : intervals) {
        docs.push_back(ReportJson(i, est.delta, std::get<ConfusionTally>(t),
                                  std::get<BetaPosterior>(prior)));
      }
      out << (method == "all" ? json(docs) : docs.front()).dump(2) << "\n";
    } else {
      for (const EpsilonInterval& i : intervals) {
        out << ReportLine(i, est.delta) << "\n";
      }
    }
    return true;
  }
};

struct TallyCommand {
  std::string input;
  bool json_output = false;

  void Register(CLI::App* app) {
    app->add_option("--input", input, "Outcome TSV file")->required();
    app->add_flag("--json", json_output, "Print a JSON document");
  }

  Result<bool> Run(std::ostream& out) const {
    Result<ConfusionTally> t = ReadTallyFile(input);
    if (auto* e = std::get_if<CliError>(&t)) return *e;
    const ConfusionTally& tally = std::get<ConfusionTally>(t);
    std::optional<double> fnr, fpr;
    if (tally.positives() > 0) {
      fnr = static_cast<double>(tally.fn) / tally.positives();
    }
    if (tally.negatives() > 0) {
      fpr = static_cast<double>(tally.fp) / tally.negatives();
    }
    if (json_output) {
      json j = TallyJson(tally);
      j["fnr"] = fnr ? json(*fnr) : json(nullptr);
      j["fpr"] = fpr ? json(*fpr) : json(nullptr);
      out << j.dump(2) << "\n";
      return true;
    }
    auto rate = [](const std::optional<double>& r) {
      return r ? FormatEps(*r) : std::string("undefined");
    };
    out << "tp=" << tally.tp << " fn=" << tally.fn << " fp=" << tally.fp
        << " tn=" << tally.tn << "\n";
    out << "fnr=" << rate(fnr) << " fpr=" << rate(fpr) << "\n";
    return true;
  }
};

struct CurveCommand {
  TallyFlags tally;
  EstimatorFlags est;
  double eps_max = 5.0;
  int steps = 101;
  std::string output = "-";

  void Register(CLI::App* app) {
    AddTallyFlags(app, tally);
    AddEstimatorFlags(app, est, /*delta_required=*/true);
    app->add_option("--eps-max", eps_max, "Largest epsilon on the grid")
        ->capture_default_str();
    app->add_option("--steps", steps, "Number of grid points")
        ->capture_default_str();
    app->add_option("--output", output, "TSV path, - for standard output")
        ->capture_default_str();
  }

  Result<bool> Run(std::ostream& out) const {
    if (!(eps_max > 0.0) || steps < 2) {
      return CliError{kExitUsage, "need --eps-max > 0 and --steps >= 2"};
    }
    Result<ConfusionTally> t = ResolveTally(tally);
    if (auto* e = std::get_if<CliError>(&t)) return *e;
    Result<BetaPosterior> prior = ParsePrior(est.prior);
    if (auto* e = std::get_if<CliError>(&prior)) return *e;
    Result<EstimatorOptions> options = ResolveOptions(est);
    if (auto* e = std::get_if<CliError>(&options)) return *e;
    absl::StatusOr<JointRatePosterior> joint = JointPosterior(
        std::get<ConfusionTally>(t), std::get<BetaPosterior>(prior));
    if (!joint.ok()) return FromStatus(joint.status());
    absl::StatusOr<EpsilonDistribution> dist = EpsilonDistribution::Create(
        *joint, est.delta, std::get<EstimatorOptions>(options));
    if (!dist.ok()) return FromStatus(dist.status());

    std::vector<std::array<double, 3>> rows;
    double running_max = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double eps = eps_max * i / (steps - 1);
      absl::StatusOr<double> cdf = dist->Cdf(eps);
      if (!cdf.ok()) return FromStatus(cdf.status());
      // The density column at 0 holds the right limit.
      absl::StatusOr<double> pdf =
          dist->Pdf(i == 0 ? eps_max * 1e-9 : eps);
      if (!pdf.ok()) return FromStatus(pdf.status());
      running_max = std::max(running_max, *cdf);
      rows.push_back({eps, running_max, *pdf});
    }
    return WithOutput(output, out, [&](std::ostream& os) {
      os << "epsilon\tcdf\tpdf\n" << std::setprecision(10);
      for (const auto& r : rows) {
        os << r[0] << '\t' << r[1] << '\t' << r[2] << '\n';
      }
    });
  }
};

struct SimulateCommand {
  MechanismFlags mech;
  EstimatorFlags est;
  int64_t m = 1;
  int64_t models = 1;
  int64_t n = 100;
  uint64_t seed = 0;
  std::string output;
  std::string method = "bayesian";
  std::string config;

  void Register(CLI::App* app) {
    AddMechanismFlags(app, mech);
    est.delta = 1e-5;
    AddEstimatorFlags(app, est, /*delta_required=*/false);
    app->add_option("--m", m, "Samples per trained model")
        ->capture_default_str();
    app->add_option("--models", models, "Number of trained models")
        ->capture_default_str();
    app->add_option("--n", n, "Base-set size")->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--output", output,
                    "Outcome TSV path (- for standard output)");
    app->add_option("--method", method,
                    "bayesian | jeffreys | clopper-pearson | all | none")
        ->check(CLI::IsMember({"bayesian", "jeffreys", "clopper-pearson",
                               "all", "none"}))
        ->capture_default_str();
    app->add_option("--config", config,
                    "Flat JSON object of flag values; explicit flags win");
  }

  Result<bool> Run(std::ostream& out) const {
    Result<std::unique_ptr<Mechanism>> mechanism = BuildMechanism(mech);
    if (auto* e = std::get_if<CliError>(&mechanism)) return *e;
    Result<AdversarySpec> adv = BuildAdversary(mech);
    if (auto* e = std::get_if<CliError>(&adv)) return *e;
    Result<BetaPosterior> prior = ParsePrior(est.prior);
    if (auto* e = std::get_if<CliError>(&prior)) return *e;
    Result<EstimatorOptions> options = ResolveOptions(est);
    if (auto* e = std::get_if<CliError>(&options)) return *e;

    const ExperimentConfig cfg{m, models, n, seed};
    if (absl::Status s = ValidateExperimentConfig(cfg); !s.ok()) {
      return CliError{kExitUsage, std::string(s.message())};
    }
    absl::StatusOr<SimulationReport> report =
        RunMiaM(*std::get<std::unique_ptr<Mechanism>>(mechanism),
                std::get<AdversarySpec>(adv), cfg);
    if (!report.ok()) return FromStatus(report.status());

    // With the records on standard output the summary is suppressed.
    const bool summary = output != "-";
    if (!output.empty()) {
      Result<bool> written = WithOutput(output, out, [&](std::ostream& os) {
        (void)WriteOutcomeTsv(report->records, os);
      });
      if (auto* e = std::get_if<CliError>(&written)) return *e;
    }
    if (!summary) return true;
    const ConfusionTally& t = report->tally;
    out << "mechanism="
        << std::get<std::unique_ptr<Mechanism>>(mechanism)->Name()
        << " records=" << report->records.size() << "\n";
    out << "tp=" << t.tp << " fn=" << t.fn << " fp=" << t.fp
        << " tn=" << t.tn << "\n";
    if (method == "none") return true;
    for (const std::string& mm : ExpandMethods(method)) {
      Result<EpsilonInterval> interval =
          Estimate(mm, t, est.delta, est.alpha, std::get<BetaPosterior>(prior),
                   std::get<EstimatorOptions>(options), false);
      if (auto* e = std::get_if<CliError>(&interval)) return *e;
      out << ReportLine(std::get<EpsilonInterval>(interval), est.delta)
          << "\n";
    }
    return true;
  }
};

struct CoverageCommand {
  MechanismFlags mech;
  EstimatorFlags est;
  int64_t trials = 1000;
  int64_t reps = 200;
  uint64_t seed = 0;

  void Register(CLI::App* app) {
    AddMechanismFlags(app, mech);
    est.delta = 1e-5;
    AddEstimatorFlags(app, est, /*delta_required=*/false);
    app->add_option("--trials", trials, "Trials per replicate")
        ->capture_default_str();
    app->add_option("--reps", reps, "Number of replicates")
        ->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
  }

  Result<bool> Run(std::ostream& out) const {
    Result<std::unique_ptr<Mechanism>> mechanism = BuildMechanism(mech);
    if (auto* e = std::get_if<CliError>(&mechanism)) return *e;
    Result<AdversarySpec> adv = BuildAdversary(mech);
    if (auto* e = std::get_if<CliError>(&adv)) return *e;
    Result<EstimatorOptions> options = ResolveOptions(est);
    if (auto* e = std::get_if<CliError>(&options)) return *e;
    if (trials < 1 || reps < 1) {
      return CliError{kExitUsage, "--trials and --reps must be >= 1"};
    }
    absl::StatusOr<CoverageResult> result = CoverageExperiment(
        *std::get<std::unique_ptr<Mechanism>>(mechanism),
        std::get<AdversarySpec>(adv), trials, reps, est.delta, est.alpha,
        seed, std::get<EstimatorOptions>(options));
    if (!result.ok()) return FromStatus(result.status());
    out << "containment=" << result->containment
        << " lower_below=" << result->lower_below << " reps=" << result->reps
        << "\n";
    return true;
  }
};

struct SweepCommand {
  double accuracy = 0.6;
  double delta = 1e-5;
  double alpha = 0.1;
  double target_width = 0.3;
  int64_t n_min = 100;
  int64_t n_max = 2000;
  int64_t n_step = 50;

  void Register(CLI::App* app) {
    app->add_option("--accuracy", accuracy, "Balanced attack accuracy")
        ->capture_default_str();
    app->add_option("--delta", delta, "delta of the privacy region")
        ->capture_default_str();
    app->add_option("--alpha", alpha, "Significance level")
        ->capture_default_str();
    app->add_option("--target-width", target_width,
                    "Interval width to reach")
        ->capture_default_str();
    app->add_option("--n-min", n_min, "Smallest total sample count")
        ->capture_default_str();
    app->add_option("--n-max", n_max, "Largest total sample count")
        ->capture_default_str();
    app->add_option("--n-step", n_step, "Grid step")->capture_default_str();
  }

  Result<bool> Run(std::ostream& out) const {
    if (n_step < 1 || n_min < 2 || n_max < n_min) {
      return CliError{kExitUsage,
                      "need --n-step >= 1 and 2 <= --n-min <= --n-max"};
    }
    std::vector<int64_t> grid;
    for (int64_t v = n_min; v <= n_max; v += n_step) grid.push_back(v);
    absl::StatusOr<SweepResult> result =
        SampleSizeSweep(accuracy, delta, alpha, target_width, grid);
    if (!result.ok()) return FromStatus(result.status());
    out << "n\tbayesian\tjeffreys\tclopper_pearson\n" << std::setprecision(6);
    for (const SweepRow& r : result->rows) {
      out << r.n_total << '\t' << FormatEps(r.bayesian_width) << '\t'
          << FormatEps(r.jeffreys_width) << '\t'
          << FormatEps(r.clopper_pearson_width) << '\n';
    }
    auto fmt = [](const std::optional<int64_t>& v) {
      return v ? std::to_string(*v) : std::string("none");
    };
    out << "minimal_n bayesian=" << fmt(result->bayesian_min_n)
        << " jeffreys=" << fmt(result->jeffreys_min_n)
        << " clopper_pearson=" << fmt(result->clopper_pearson_min_n) << "\n";
    return true;
  }
};

// Turns the flat JSON object in the file named by --config into flags placed
// ahead of the explicit ones, so explicit flags take precedence.
Result<std::vector<std::string>> ExpandConfig(std::vector<std::string> args) {
  if (args.size() < 2 || args[1] != "simulate") return args;
  std::string path;
  for (size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) return CliError{kExitData, absl::StrCat("cannot open ", path)};
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_object()) {
    return CliError{kExitData,
                    absl::StrCat(path, ": expected a flat JSON object")};
  }
  std::vector<std::string> injected;
  for (const auto& [key, value] : doc.items()) {
    if (key == "config") continue;
    if (value.is_object() || value.is_array() || value.is_null()) {
      return CliError{kExitData, absl::StrCat(path, ": value of '", key,
                                              "' must be a scalar")};
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_boolean()) {
      text = value.get<bool>() ? "true" : "false";
    } else {
      text = value.dump();
    }
    injected.push_back(absl::StrCat("--", key, "=", text));
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

}  // namespace

int RunCli(const std::vector<std::string>& raw_args, std::ostream& out,
           std::ostream& err) {
  Result<std::vector<std::string>> expanded = ExpandConfig(raw_args);
  if (auto* e = std::get_if<CliError>(&expanded)) {
    err << "error: " << e->message << "\n";
    return e->code;
  }
  std::vector<std::string> args = std::get<std::vector<std::string>>(expanded);

  CLI::App app{"Empirical differential-privacy estimates from "
               "membership-inference outcomes",
               "dpaudit"};
  app.require_subcommand(1);

  EstimateCommand estimate;
  estimate.Register(
      app.add_subcommand("estimate", "Interval estimate of epsilon"));
  TallyCommand tally;
  tally.Register(app.add_subcommand("tally", "Confusion counts of a file"));
  CurveCommand curve;
  curve.Register(
      app.add_subcommand("curve", "Posterior CDF and density of epsilon"));
  SimulateCommand simulate;
  CLI::App* simulate_app =
      app.add_subcommand("simulate", "Run the membership game");
  simulate_app->option_defaults()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  simulate.Register(simulate_app);
  CoverageCommand coverage;
  coverage.Register(app.add_subcommand(
      "coverage", "Coverage of the credible interval on a known mechanism"));
  SweepCommand sweep;
  sweep.Register(app.add_subcommand(
      "sweep", "Interval width against sample size at fixed accuracy"));

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Result<bool> result = CliError{kExitUsage, "no command"};
  if (app.got_subcommand("estimate")) {
    result = estimate.Run(out);
  } else if (app.got_subcommand("tally")) {
    result = tally.Run(out);
  } else if (app.got_subcommand("curve")) {
    result = curve.Run(out);
  } else if (app.got_subcommand("simulate")) {
    result = simulate.Run(out);
  } else if (app.got_subcommand("coverage")) {
    result = coverage.Run(out);
  } else if (app.got_subcommand("sweep")) {
    result = sweep.Run(out);
  }
  if (auto* e = std::get_if<CliError>(&result)) {
    err << "error: " << e->message << "\n";
    return e->code;
  }
  return kExitOk;
}

}  // namespace dpaudit::cli
