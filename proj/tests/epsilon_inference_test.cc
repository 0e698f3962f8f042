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
#include <vector>

#include "absl/status/status.h"
#include "dpaudit/numeric_kernel.h"
#include "dpaudit/privacy_region.h"
#include "dpaudit/rate_model.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace dpaudit {
namespace {

using ::dpaudit::testing::DrawJointPosterior;
using ::dpaudit::testing::FixtureTallies;
using ::dpaudit::testing::MonteCarloCdf;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDelta = 1e-5;

EpsilonDistribution MakeDist(const ConfusionTally& tally, double delta,
                             const EstimatorOptions& options = {}) {
  return *EpsilonDistribution::Create(*JointPosterior(tally), delta, options);
}

// Sample quantile of the per-draw minimal epsilon.
double MonteCarloQuantile(const std::vector<RatePoint>& draws, double delta,
                          double q) {
  std::vector<double> eps;
  eps.reserve(draws.size());
  for (const RatePoint& p : draws) {
    eps.push_back(EpsilonSupremum(p.x, p.y, delta));
  }
  const size_t k = static_cast<size_t>(q * (eps.size() - 1));
  std::nth_element(eps.begin(), eps.begin() + k, eps.end());
  return eps[k];
}

TEST(JointPosteriorTest, Examples) {
  const JointRatePosterior worked = *JointPosterior({65, 35, 25, 75});
  EXPECT_EQ(worked.fnr, (BetaPosterior{35.5, 65.5}));
  EXPECT_EQ(worked.fpr, (BetaPosterior{25.5, 75.5}));
  const JointRatePosterior zero = *JointPosterior({0, 0, 0, 0}, {1.5, 2.5});
  EXPECT_EQ(zero.fnr, (BetaPosterior{1.5, 2.5}));
  EXPECT_EQ(zero.fpr, (BetaPosterior{1.5, 2.5}));
  const JointRatePosterior flipped = *JointPosterior({0, 40, 0, 40});
  EXPECT_EQ(flipped.fnr, (BetaPosterior{40.5, 0.5}));
  EXPECT_EQ(flipped.fpr, (BetaPosterior{0.5, 40.5}));
  EXPECT_FALSE(JointPosterior({-1, 0, 0, 0}).ok());
}

TEST(EpsilonCdfTest, MatchesMonteCarloOracleOnFixtures) {
  constexpr int64_t kDraws = 1000000;
  const double grid[] = {0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 7.0};
  uint64_t seed = 100;
  for (const auto& fixture : FixtureTallies()) {
    const EpsilonDistribution dist = MakeDist(fixture.tally, kDelta);
    const std::vector<RatePoint> draws =
        DrawJointPosterior(dist.joint(), kDraws, ++seed);
    for (double eps : grid) {
      const double exact = *dist.Cdf(eps);
      const double mc = MonteCarloCdf(draws, eps, kDelta);
      const double se = std::sqrt(exact * (1.0 - exact) / kDraws);
      EXPECT_LE(std::abs(exact - mc), std::max(3.0 * se, 1e-5))
          << fixture.name << " eps=" << eps;
      EXPECT_LE(std::abs(exact - mc), 0.003) << fixture.name;
    }
  }
}

TEST(EpsilonCdfTest, MonotoneAndBounded) {
  for (const auto& fixture : FixtureTallies()) {
    const EpsilonDistribution dist = MakeDist(fixture.tally, kDelta);
    double prev = dist.point_mass_at_zero();
    EXPECT_NEAR(prev, *dist.Cdf(0.0), 0.0);
    for (int i = 1; i <= 120; ++i) {
      const double c = *dist.Cdf(i * 0.125);
      EXPECT_GE(c, prev - 1e-9) << fixture.name << " eps=" << i * 0.125;
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
      prev = c;
    }
    EXPECT_EQ(*dist.Cdf(kInf), 1.0);
  }
}

TEST(EpsilonCdfTest, DeltaOneIsAllMassAtZero) {
  const EpsilonDistribution dist = MakeDist({65, 35, 25, 75}, 1.0);
  for (double eps : {0.0, 0.3, 5.0, kInf}) EXPECT_EQ(*dist.Cdf(eps), 1.0);
  EXPECT_EQ(dist.point_mass_at_zero(), 1.0);
  for (double q : {0.01, 0.5, 0.99}) EXPECT_EQ(*dist.Quantile(q), 0.0);
}

TEST(EpsilonCdfTest, RejectsBadInputs) {
  const EpsilonDistribution dist = MakeDist({65, 35, 25, 75}, kDelta);
  EXPECT_EQ(dist.Cdf(-1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(dist.Quantile(0.0).ok());
  EXPECT_FALSE(dist.Quantile(1.0).ok());
  EXPECT_FALSE(dist.Pdf(0.0).ok());
  EXPECT_FALSE(EpsilonDistribution::Create(*JointPosterior({1, 1, 1, 1}), 1.5)
                   .ok());
  EstimatorOptions bad;
  bad.eps_cap = 0.0;
  EXPECT_FALSE(
      EpsilonDistribution::Create(*JointPosterior({1, 1, 1, 1}), 0.0, bad)
          .ok());
}

TEST(EpsilonCdfTest, GuessFlipAndClassSwapInvariance) {
  for (const auto& fixture : FixtureTallies()) {
    const ConfusionTally t = fixture.tally;
    const ConfusionTally flip{t.fn, t.tp, t.tn, t.fp};
    const ConfusionTally swap{t.tn, t.fp, t.fn, t.tp};
    const EpsilonDistribution base = MakeDist(t, kDelta);
    const EpsilonDistribution d_flip = MakeDist(flip, kDelta);
    const EpsilonDistribution d_swap = MakeDist(swap, kDelta);
    for (double eps : {0.0, 0.3, 1.0, 3.0, 8.0}) {
      const double c = *base.Cdf(eps);
      EXPECT_NEAR(*d_flip.Cdf(eps), c, 1e-9) << fixture.name;
      EXPECT_NEAR(*d_swap.Cdf(eps), c, 1e-9) << fixture.name;
    }
  }
}

TEST(EpsilonCdfTest, RawOrientationsAgreeWithinQuadratureTolerance) {
  EstimatorOptions raw;
  raw.canonicalize = false;
  const double tol = 10.0 * raw.quadrature.abs_tol;
  for (const auto& fixture : FixtureTallies()) {
    const ConfusionTally t = fixture.tally;
    const ConfusionTally images[] = {
        t, {t.fn, t.tp, t.tn, t.fp}, {t.tn, t.fp, t.fn, t.tp},
        {t.fp, t.tn, t.tp, t.fn}};
    const EpsilonDistribution base = MakeDist(t, kDelta, raw);
    for (const ConfusionTally& image : images) {
      const EpsilonDistribution d = MakeDist(image, kDelta, raw);
      for (double eps : {0.0, 0.3, 1.0, 3.0, 8.0}) {
        EXPECT_NEAR(*d.Cdf(eps), *base.Cdf(eps), tol) << fixture.name;
      }
    }
  }
}

TEST(EpsilonPdfTest, MatchesFiniteDifferenceOfCdf) {
  constexpr double kStep = 1e-4;
  for (const auto& fixture : FixtureTallies()) {
    const EpsilonDistribution dist = MakeDist(fixture.tally, kDelta);
    for (double eps : {0.01, 0.1, 0.4, 0.9, 1.5, 2.5, 4.0, 6.5, 9.0}) {
      const double pdf = *dist.Pdf(eps);
      const double fd =
          (*dist.Cdf(eps + kStep) - *dist.Cdf(eps - kStep)) / (2 * kStep);
      EXPECT_GE(pdf, 0.0);
      EXPECT_LE(std::abs(pdf - fd), std::max(1e-3, 1e-2 * pdf))
          << fixture.name << " eps=" << eps;
    }
  }
}

TEST(EpsilonPdfTest, DensityPlusAtomIsNormalized) {
  for (const char* name : {"worked_example", "cifar_avg_dp_m1",
                           "sst2_nodp_m1", "perfect_attack"}) {
    const auto& fixtures = FixtureTallies();
    const auto it = std::find_if(fixtures.begin(), fixtures.end(),
                                 [&](const auto& f) { return f.name == name; });
    const EpsilonDistribution dist = MakeDist(it->tally, kDelta);
    const double top = *dist.Quantile(1.0 - 1e-6);
    ASSERT_TRUE(std::isfinite(top)) << name;
    QuadratureSpec spec;
    spec.abs_tol = 1e-4;
    const double body = *AdaptiveIntegrateSmoothed(
        [&](double e) { return *dist.Pdf(e); }, 0.0, top, {}, spec);
    EXPECT_NEAR(body + dist.point_mass_at_zero(), 1.0, 1e-3) << name;
  }
}

TEST(EpsilonQuantileTest, InvertsCdf) {
  const EpsilonDistribution dist = MakeDist({65, 35, 25, 75}, kDelta);
  for (double q : {0.05, 0.25, 0.5, 0.95}) {
    const double e = *dist.Quantile(q);
    EXPECT_GE(*dist.Cdf(e + 1e-6), q - 1e-9);
    EXPECT_LE(*dist.Cdf(std::max(0.0, e - 2e-6)), q + 1e-9);
  }
}

TEST(EpsilonQuantileTest, MedianMatchesMonteCarlo) {
  const ConfusionTally symmetric{70, 30, 30, 70};
  const EpsilonDistribution dist = MakeDist(symmetric, kDelta);
  const std::vector<RatePoint> draws =
      DrawJointPosterior(dist.joint(), 4000000, 7);
  EXPECT_NEAR(*dist.Quantile(0.5), MonteCarloQuantile(draws, kDelta, 0.5),
              1e-3);
}

TEST(EpsilonQuantileTest, PointMassAndCap) {
  // Near-chance tally with a wide strip |x + y - 1| <= delta at eps = 0.
  const EpsilonDistribution chance = MakeDist({50, 50, 50, 50}, 0.1);
  ASSERT_GT(chance.point_mass_at_zero(), 0.05);
  EXPECT_EQ(*chance.Quantile(0.05), 0.0);
  EXPECT_GT(*chance.Quantile(0.99), 0.0);

  EstimatorOptions capped;
  capped.eps_cap = 5.0;
  const EpsilonDistribution strong =
      MakeDist({1000, 0, 0, 1000}, kDelta, capped);
  EXPECT_EQ(*strong.Quantile(0.5), kInf);
  const EpsilonInterval iv = *CredibleInterval(strong, 0.1);
  EXPECT_TRUE(iv.unbounded());
  EXPECT_EQ(iv.lo, kInf);
}

TEST(CredibleIntervalTest, TableRowsAtPrintedPrecision) {
  struct Row {
    ConfusionTally tally;
    double lo, lo_unit, hi, hi_unit;
  };
  // Printed endpoints with two units of their last digit.
  const Row rows[] = {
      {{2, 511, 0, 487}, 0.22, 0.01, 7.0, 0.1},
      {{31, 968, 5, 996}, 1.08, 0.01, 2.7, 0.1},
      {{175, 312, 188, 325}, 0.0054, 0.0001, 0.17, 0.01},
      {{461, 3, 534, 2}, 0.062, 0.001, 2.1, 0.1},
  };
  for (const Row& row : rows) {
    const EpsilonInterval iv = *CredibleInterval(row.tally, kDelta, 0.1);
    EXPECT_EQ(iv.method, EpsilonMethod::kBayesian);
    EXPECT_NEAR(iv.lo, row.lo, 2 * row.lo_unit + 0.5 * row.lo_unit);
    EXPECT_NEAR(iv.hi, row.hi, 2 * row.hi_unit + 0.5 * row.hi_unit);
  }
}

TEST(CredibleIntervalTest, EndpointsMatchMonteCarloQuantiles) {
  const ConfusionTally tally{65, 35, 25, 75};
  const EpsilonInterval iv = *CredibleInterval(tally, kDelta, 0.1);
  const std::vector<RatePoint> draws =
      DrawJointPosterior(*JointPosterior(tally), 1000000, 99);
  EXPECT_NEAR(iv.lo, MonteCarloQuantile(draws, kDelta, 0.05), 5e-3);
  EXPECT_NEAR(iv.hi, MonteCarloQuantile(draws, kDelta, 0.95), 5e-3);
}

TEST(CiEpsilonIntervalTest, Examples) {
  const EpsilonInterval zero_edge = *CiEpsilonInterval(
      {90, 10, 0, 100}, kDelta, 0.1, CiFamily::kClopperPearson);
  EXPECT_NEAR(zero_edge.lo, 1.736, 2e-3);
  EXPECT_EQ(zero_edge.method, EpsilonMethod::kClopperPearsonCi);

  const ConfusionTally perfect{1000, 0, 0, 1000};
  EXPECT_NEAR(
      CiEpsilonInterval(perfect, kDelta, 0.1, CiFamily::kClopperPearson)->lo,
      5.60, 0.02);
  EXPECT_NEAR(CiEpsilonInterval(perfect, kDelta, 0.1,
                                CiFamily::kClopperPearson,
                                Sidedness::kUpperOneSided)
                  ->lo,
              5.81, 0.02);
  EXPECT_NEAR(CiEpsilonInterval(perfect, kDelta, 0.1, CiFamily::kJeffreys,
                                Sidedness::kUpperOneSided)
                  ->lo,
              6.25, 0.02);

  for (CiFamily family : {CiFamily::kClopperPearson, CiFamily::kJeffreys}) {
    const EpsilonInterval iv =
        *CiEpsilonInterval({2, 511, 0, 487}, kDelta, 0.1, family);
    EXPECT_EQ(iv.lo, 0.0);
    EXPECT_EQ(iv.hi, kInf);
  }
  EXPECT_EQ(CiEpsilonInterval({0, 0, 3, 3}, kDelta, 0.1,
                              CiFamily::kJeffreys)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(CiEpsilonIntervalTest, RectangleExtremaMatchGridSearch) {
  constexpr int kGrid = 400;
  const RateInterval rects[][2] = {
      {{0.0, 0.12, 0.05, Sidedness::kTwoSided},
       {0.0, 0.03, 0.05, Sidedness::kTwoSided}},
      {{0.2, 0.4, 0.05, Sidedness::kTwoSided},
       {0.1, 0.3, 0.05, Sidedness::kTwoSided}},
      {{0.6, 0.8, 0.05, Sidedness::kTwoSided},
       {0.5, 0.9, 0.05, Sidedness::kTwoSided}},
      {{0.45, 0.55, 0.05, Sidedness::kTwoSided},
       {0.4, 0.6, 0.05, Sidedness::kTwoSided}},
      {{0.9, 1.0, 0.05, Sidedness::kTwoSided},
       {0.95, 1.0, 0.05, Sidedness::kTwoSided}},
  };
  for (double delta : {0.0, kDelta, 0.05}) {
    for (const auto& r : rects) {
      double grid_min = kInf;
      double grid_max = 0.0;
      for (int i = 0; i <= kGrid; ++i) {
        const double x = r[0].lo + (r[0].hi - r[0].lo) * i / kGrid;
        for (int j = 0; j <= kGrid; ++j) {
          const double y = r[1].lo + (r[1].hi - r[1].lo) * j / kGrid;
          grid_min = std::min(grid_min, EpsilonLowerBoundPoint(x, y, delta));
          grid_max = std::max(grid_max, EpsilonSupremum(x, y, delta));
        }
      }
      EXPECT_NEAR(RectangleMinimumBound(r[0], r[1], delta), grid_min, 1e-12);
      EXPECT_EQ(RectangleMaximumBound(r[0], r[1], delta), grid_max);
    }
  }
}

TEST(IntervalDominanceTest, BayesianWithinJeffreysWithinClopperPearson) {
  for (const auto& fixture : FixtureTallies()) {
    const EpsilonInterval b = *CredibleInterval(fixture.tally, kDelta, 0.1);
    const EpsilonInterval j =
        *CiEpsilonInterval(fixture.tally, kDelta, 0.1, CiFamily::kJeffreys);
    const EpsilonInterval c = *CiEpsilonInterval(fixture.tally, kDelta, 0.1,
                                                 CiFamily::kClopperPearson);
    EXPECT_LE(j.lo, b.lo) << fixture.name;
    EXPECT_GE(j.hi, b.hi) << fixture.name;
    EXPECT_LE(c.lo, j.lo) << fixture.name;
    EXPECT_GE(c.hi, j.hi) << fixture.name;
  }
}

TEST(MassTest, RectangleMass) {
  const JointRatePosterior joint = *JointPosterior({65, 35, 25, 75});
  const RateInterval unit{0.0, 1.0, 0.05, Sidedness::kTwoSided};
  EXPECT_NEAR(*RectangleMass(joint, unit, unit), 1.0, 1e-15);

  const RateInterval fnr = *JeffreysInterval(35, 100, 0.05,
                                             Sidedness::kTwoSided);
  const RateInterval fpr = *JeffreysInterval(25, 100, 0.05,
                                             Sidedness::kTwoSided);
  const double mass = *RectangleMass(joint, fnr, fpr);
  EXPECT_NEAR(mass, *BetaMass(joint.fnr, fnr) * *BetaMass(joint.fpr, fpr),
              1e-15);
  // Each equal-tailed interval holds 95% of its own posterior.
  EXPECT_NEAR(mass, 0.95 * 0.95, 1e-9);

  const std::vector<RatePoint> draws = DrawJointPosterior(joint, 200000, 5);
  const double inside = std::count_if(draws.begin(), draws.end(), [&](auto p) {
    return fnr.lo <= p.x && p.x <= fnr.hi && fpr.lo <= p.y && p.y <= fpr.hi;
  }) / static_cast<double>(draws.size());
  EXPECT_NEAR(inside, mass, 3.0 * std::sqrt(mass * (1 - mass) / 200000));
}

TEST(MassTest, RingMass) {
  const EpsilonDistribution dist = MakeDist({65, 35, 25, 75}, kDelta);
  EXPECT_NEAR(*RingMass(dist, 0.0, kInf), 1.0 - *dist.Cdf(0.0), 1e-15);
  EXPECT_EQ(*RingMass(dist, 0.7, 0.7), 0.0);
  EXPECT_NEAR(*RingMass(dist, 0.3, 1.2), *dist.Cdf(1.2) - *dist.Cdf(0.3),
              1e-15);
  EXPECT_FALSE(RingMass(dist, 1.0, 0.5).ok());
  EXPECT_FALSE(RingMass(dist, -1.0, 0.5).ok());
}

}  // namespace
}  // namespace dpaudit
