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


#include <cstdint>
#include <memory>

#include "benchmark/benchmark.h"
#include "dpaudit/epsilon_inference.h"
#include "dpaudit/experiments.h"
#include "dpaudit/mechanisms.h"
#include "dpaudit/numeric_kernel.h"
#include "dpaudit/rate_model.h"

namespace dpaudit {
namespace {

void BM_RegularizedIncompleteBeta(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0)) + 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RegularizedIncompleteBeta(0.3, a, a + 7.0));
  }
}
BENCHMARK(BM_RegularizedIncompleteBeta)->Arg(1)->Arg(100)->Arg(10000);

void BM_InverseRegularizedIncompleteBeta(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0)) + 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        InverseRegularizedIncompleteBeta(0.025, a, a + 7.0));
  }
}
BENCHMARK(BM_InverseRegularizedIncompleteBeta)->Arg(1)->Arg(100)->Arg(10000);

void BM_EpsilonCdf(benchmark::State& state) {
  const int64_t n = state.range(0);
  const ConfusionTally tally{n * 7 / 10, n * 3 / 10, n * 3 / 10, n * 7 / 10};
  EpsilonDistribution dist =
      EpsilonDistribution::Create(JointPosterior(tally).value(), 1e-5).value();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dist.Cdf(1.0));
  }
}
BENCHMARK(BM_EpsilonCdf)->Arg(100)->Arg(1000)->Arg(10000);

void BM_CredibleInterval(benchmark::State& state) {
  const int64_t n = state.range(0);
  const ConfusionTally tally{n * 7 / 10, n * 3 / 10, n * 3 / 10, n * 7 / 10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(CredibleInterval(tally, 1e-5, 0.1));
  }
}
BENCHMARK(BM_CredibleInterval)
    ->Arg(100)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);

void BM_ClopperPearsonEpsilonInterval(benchmark::State& state) {
  const ConfusionTally tally{350, 150, 150, 350};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CiEpsilonInterval(tally, 1e-5, 0.1, CiFamily::kClopperPearson));
  }
}
BENCHMARK(BM_ClopperPearsonEpsilonInterval);

void BM_RunIndMiaRandomizedResponse(benchmark::State& state) {
  std::unique_ptr<Mechanism> mech = MakeRandomizedResponse(1.0).value();
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunIndMia(*mech, AdversarySpec{}, state.range(0),
                                       /*seed=*/7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunIndMiaRandomizedResponse)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dpaudit

BENCHMARK_MAIN();
