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

// Shared fixtures and sampling oracles for the test suites.

#ifndef DPAUDIT_TESTS_TEST_SUPPORT_H_
#define DPAUDIT_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpaudit/epsilon_inference.h"
#include "dpaudit/privacy_region.h"
#include "dpaudit/rate_model.h"

namespace dpaudit::testing {

struct FixtureTally {
  std::string name;
  ConfusionTally tally;
};

// Tallies exercised throughout: the worked example, the published table
// rows, the perfect attack and the zero-edge example.
const std::vector<FixtureTally>& FixtureTallies();

// Independent draws from the joint posterior via gamma ratios.
std::vector<RatePoint> DrawJointPosterior(const JointRatePosterior& joint,
                                          int64_t draws, uint64_t seed);

// Fraction of `draws` inside R(eps, delta) according to InRegion.
double MonteCarloCdf(std::span<const RatePoint> draws, double eps,
                     double delta);

}  // namespace dpaudit::testing

#endif  // DPAUDIT_TESTS_TEST_SUPPORT_H_
