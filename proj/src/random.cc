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

#include "ldp/random.h"

#include <cmath>
#include <numbers>

namespace ldp {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(uint64_t seed) : engine_(seed), seed_(seed) {}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(~index));
}

RandomStream RandomStream::ForSubstream(uint64_t seed, uint64_t index) {
  return RandomStream(DeriveSeed(seed, index));
}

uint64_t RandomStream::NextBits() {
  ++position_;
  return engine_();
}

double RandomStream::Uniform01() {
  // Midpoint of one of 2^53 equal cells, so never exactly 0 or 1.
  return (static_cast<double>(NextBits() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::UniformRange(double lo, double hi) {
  return lo + (hi - lo) * Uniform01();
}

bool RandomStream::Bernoulli(double p) { return Uniform01() < p; }

double RandomStream::StandardNormal() {
  const double u1 = Uniform01();
  const double u2 = Uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ldp
