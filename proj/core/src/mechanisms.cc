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

#include "dpaudit/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpaudit {
namespace {

class RandomizedResponseModel : public TrainedModel {
 public:
  explicit RandomizedResponseModel(std::unordered_map<int64_t, int> release)
      : release_(std::move(release)) {}

  double Loss(const Example& z) const override {
    auto it = release_.find(z.id);
    if (it == release_.end()) return 0.5;
    const int bit = z.features.empty() ? 0 : (z.features[0] >= 0.5 ? 1 : 0);
    return it->second == bit ? 0.0 : 1.0;
  }

 private:
  std::unordered_map<int64_t, int> release_;
};

class RandomizedResponse : public Mechanism {
 public:
  explicit RandomizedResponse(double eps)
      : eps_(eps), flip_probability_(1.0 / (1.0 + std::exp(eps))) {}

  std::string Name() const override {
    return absl::StrCat("randomized_response(eps=", eps_, ")");
  }

  PrivacyParams Guarantee() const override { return {eps_, 0.0}; }

  Example SampleExample(int64_t id, RandomStream& rng) const override {
    return {id, {rng.Bernoulli(0.5) ? 1.0 : 0.0}};
  }

  std::pair<Example, Example> SampleChallengePair(
      int64_t id, RandomStream& rng) const override {
    const double bit = rng.Bernoulli(0.5) ? 1.0 : 0.0;
    return {{id, {bit}}, {id, {1.0 - bit}}};
  }

  std::unique_ptr<TrainedModel> Train(
      std::span<const Example> dataset,
      const TrainingKeys& keys) const override {
    std::unordered_map<int64_t, int> release;
    release.reserve(dataset.size());
    for (const Example& z : dataset) {
      const int bit = z.features.empty() ? 0 : (z.features[0] >= 0.5 ? 1 : 0);
      const bool flip = KeyedUniform(keys.record_key,
                                     static_cast<uint64_t>(z.id)) <
                        flip_probability_;
      release[z.id] = flip ? 1 - bit : bit;
    }
    return std::make_unique<RandomizedResponseModel>(std::move(release));
  }

 private:
  double eps_;
  double flip_probability_;
};

std::vector<double> Clip(const std::vector<double>& v, double clip_norm) {
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  const double norm = std::sqrt(norm2);
  if (norm <= clip_norm || norm == 0.0) return v;
  std::vector<double> out(v);
  const double scale = clip_norm / norm;
  for (double& x : out) x *= scale;
  return out;
}

class GaussianMeanModel : public TrainedModel {
 public:
  GaussianMeanModel(std::vector<double> theta, double clip_norm)
      : theta_(std::move(theta)), clip_norm_(clip_norm) {}

  double Loss(const Example& z) const override {
    const std::vector<double> c = Clip(z.features, clip_norm_);
    double loss = 0.0;
    for (size_t i = 0; i < theta_.size() && i < c.size(); ++i) {
      const double diff = c[i] - theta_[i];
      loss += diff * diff;
    }
    return loss;
  }

 private:
  std::vector<double> theta_;
  double clip_norm_;
};

class GaussianMean : public Mechanism {
 public:
  GaussianMean(double eps, double delta, int dimension, double clip_norm)
      : eps_(eps),
        delta_(delta),
        dimension_(dimension),
        clip_norm_(clip_norm),
        noise_factor_(std::sqrt(2.0 * std::log(1.25 / delta)) / eps) {}

  std::string Name() const override {
    return absl::StrCat("gaussian_mean(eps=", eps_, ", delta=", delta_,
                        ", d=", dimension_, ", C=", clip_norm_, ")");
  }

  PrivacyParams Guarantee() const override { return {eps_, delta_}; }

  Example SampleExample(int64_t id, RandomStream& rng) const override {
    Example z{id, std::vector<double>(dimension_)};
    const double scale = clip_norm_ / std::sqrt(static_cast<double>(dimension_));
    for (double& x : z.features) x = scale * rng.Normal();
    return z;
  }

  std::pair<Example, Example> SampleChallengePair(
      int64_t id, RandomStream& rng) const override {
    Example z0 = SampleExample(id, rng);
    Example z1 = SampleExample(id, rng);
    return {std::move(z0), std::move(z1)};
  }

  std::unique_ptr<TrainedModel> Train(
      std::span<const Example> dataset,
      const TrainingKeys& keys) const override {
    std::vector<double> theta(dimension_, 0.0);
    const double n = static_cast<double>(std::max<size_t>(dataset.size(), 1));
    for (const Example& z : dataset) {
      const std::vector<double> c = Clip(z.features, clip_norm_);
      for (int i = 0; i < dimension_ && i < static_cast<int>(c.size()); ++i) {
        theta[i] += c[i] / n;
      }
    }
    // Replacing one record moves the clipped mean by at most 2 C / n.
    const double sigma = 2.0 * clip_norm_ / n * noise_factor_;
    RandomStream rng(keys.model_key);
    for (double& t : theta) t += sigma * rng.Normal();
    return std::make_unique<GaussianMeanModel>(std::move(theta), clip_norm_);
  }

 private:
  double eps_;
  double delta_;
  int dimension_;
  double clip_norm_;
  double noise_factor_;
};

}  // namespace

absl::StatusOr<std::unique_ptr<Mechanism>> MakeRandomizedResponse(double eps) {
  if (!(eps >= 0.0) || std::isinf(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("randomized response needs finite eps >= 0, got ", eps));
  }
  return std::make_unique<RandomizedResponse>(eps);
}

absl::StatusOr<std::unique_ptr<Mechanism>> MakeGaussianMean(double eps,
                                                            double delta,
                                                            int dimension,
                                                            double clip_norm) {
  if (!(eps > 0.0) || std::isinf(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gaussian_mean needs finite eps > 0, got ", eps));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gaussian_mean needs delta in (0, 1), got ", delta));
  }
  if (dimension < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension must be >= 1, got ", dimension));
  }
  if (!(clip_norm > 0.0) || std::isinf(clip_norm)) {
    return absl::InvalidArgumentError(
        absl::StrCat("clip_norm must be positive, got ", clip_norm));
  }
  return std::make_unique<GaussianMean>(eps, delta, dimension, clip_norm);
}

}  // namespace dpaudit
