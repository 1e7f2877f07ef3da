// Copyright 2026 The LDP Ratings Authors
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

#ifndef LDP_RANDOM_H_
#define LDP_RANDOM_H_

#include <cstdint>
#include <random>

namespace ldp {

// Seeded source of randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard, and every derived variate is computed
// here from raw 64-bit words rather than through <random> distributions
// (those are implementation-defined). Identical seeds therefore give
// identical variates on every platform.
//
// A stream is not thread-safe; concurrent tasks each take their own stream,
// usually via ForSubstream.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed);

  // Independent stream for task `index` of a computation seeded by `seed`.
  // The mapping is a SplitMix64 mix of both values.
  static RandomStream ForSubstream(uint64_t seed, uint64_t index);

  uint64_t seed() const { return seed_; }
  // Number of 64-bit words consumed so far.
  uint64_t position() const { return position_; }

  uint64_t NextBits();

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double Uniform01();
  // Uniform on [lo, hi].
  double UniformRange(double lo, double hi);
  bool Bernoulli(double p);
  // Standard normal by Box-Muller; consumes two words.
  double StandardNormal();

 private:
  std::mt19937_64 engine_;
  uint64_t seed_;
  uint64_t position_ = 0;
};

uint64_t SplitMix64(uint64_t x);

// Seed of substream `index` under `seed`; what ForSubstream uses.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

}  // namespace ldp

#endif  // LDP_RANDOM_H_
