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

// Deterministic, order-independent random streams.
//
// Every stream is identified by a 64-bit key derived from the master seed and
// a path of tags (stream purpose, replicate, model, sample). Two streams with
// different paths are statistically independent, and a stream's output does
// not depend on which other streams were consumed first. All transforms are
// spelled out here rather than taken from <random> distributions, whose
// output is implementation-defined, so results match across platforms.

#ifndef DPAUDIT_RANDOM_STREAMS_H_
#define DPAUDIT_RANDOM_STREAMS_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpaudit {

// Stream purposes.
enum class StreamTag : uint64_t {
  kFairBit = 1,
  kChallenge = 2,
  kRecordNoise = 3,
  kBaseSet = 4,
  kModelNoise = 5,
  kReference = 6,
  kPilot = 7,
  kTieBreak = 8,
  kReplicate = 9,
};

// The splitmix64 output function applied to `x`.
uint64_t SplitMix64(uint64_t x);

// Folds `path` into `seed` one element at a time with SplitMix64.
uint64_t DeriveKey(uint64_t seed, std::initializer_list<uint64_t> path);

inline uint64_t DeriveKey(uint64_t seed, StreamTag tag,
                          std::initializer_list<uint64_t> path) {
  return DeriveKey(DeriveKey(seed, {static_cast<uint64_t>(tag)}), path);
}

// Uniform double in [0, 1) from the top 53 bits of `bits`.
inline double BitsToUniform(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// A single uniform draw addressed by (key, index), without a stream.
inline double KeyedUniform(uint64_t key, uint64_t index) {
  return BitsToUniform(SplitMix64(key ^ SplitMix64(index)));
}

class RandomStream {
 public:
  explicit RandomStream(uint64_t key) : engine_(key) {}

  uint64_t Bits() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform() { return BitsToUniform(engine_()); }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n) by rejection; n > 0.
  uint64_t UniformInt(uint64_t n);
  // Standard normal via Box-Muller.
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dpaudit

#endif  // DPAUDIT_RANDOM_STREAMS_H_
