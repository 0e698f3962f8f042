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

// Synthetic training mechanisms with known privacy guarantees.

#ifndef DPAUDIT_MECHANISMS_H_
#define DPAUDIT_MECHANISMS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpaudit/privacy_region.h"
#include "dpaudit/random_streams.h"

namespace dpaudit {

// A data record. `id` names the dataset slot the record occupies.
struct Example {
  int64_t id = 0;
  std::vector<double> features;
};

// Output of one training run, queried through a per-example loss.
class TrainedModel {
 public:
  virtual ~TrainedModel() = default;
  virtual double Loss(const Example& z) const = 0;
};

// Keys for the randomness a training run consumes. Noise shared by the whole
// model is drawn from `model_key`; noise attached to one record is addressed
// by (record_key, record id), so it does not depend on which model the record
// lands in.
struct TrainingKeys {
  uint64_t model_key = 0;
  uint64_t record_key = 0;
};

class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual std::string Name() const = 0;
  // The (epsilon, delta) guarantee the mechanism is calibrated to.
  virtual PrivacyParams Guarantee() const = 0;
  // A fresh record from the data distribution.
  virtual Example SampleExample(int64_t id, RandomStream& rng) const = 0;
  // Two candidates for slot `id`; exactly one will be trained on.
  virtual std::pair<Example, Example> SampleChallengePair(
      int64_t id, RandomStream& rng) const = 0;
  virtual std::unique_ptr<TrainedModel> Train(
      std::span<const Example> dataset, const TrainingKeys& keys) const = 0;
};

// Releases every record's bit, flipped with probability 1 / (1 + e^eps).
// Records carry a single feature in {0, 1}. A record's loss is 0 if the
// release for its slot matches its bit, 1 if not, and 1/2 for a slot absent
// from the training set. Challenge pairs share a slot and hold opposite bits.
absl::StatusOr<std::unique_ptr<Mechanism>> MakeRandomizedResponse(double eps);

// Releases the mean of the records clipped to L2 norm `clip_norm`, plus
// N(0, sigma^2 I) noise with sigma = (2 C / n) sqrt(2 ln(1.25 / delta)) / eps
// for a dataset of size n. Records are N(0, (C^2 / d) I) in dimension d. A
// record's loss is the squared distance from its clipped value to the
// release.
absl::StatusOr<std::unique_ptr<Mechanism>> MakeGaussianMean(double eps,
                                                            double delta,
                                                            int dimension,
                                                            double clip_norm);

}  // namespace dpaudit

#endif  // DPAUDIT_MECHANISMS_H_
