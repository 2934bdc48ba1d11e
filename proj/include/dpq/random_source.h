//
// Copyright 2026 The dpq Authors
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
//

#ifndef DPQ_RANDOM_SOURCE_H_
#define DPQ_RANDOM_SOURCE_H_

#include <array>
#include <cstdint>
#include <limits>

namespace dpq {

// Seedable source of all algorithmic randomness.
//
// The generator is xoshiro256** (Blackman & Vigna). Its 256-bit state is
// expanded from the 64-bit seed with SplitMix64. Child sources are keyed by
// (seed, stream) through a SplitMix64 finalizer, so a child depends only on
// the parent's seed and the stream index, never on how many values the parent
// has already produced. Both algorithms are fixed: the draw sequence for a
// given seed is part of the library's reproducibility contract.
//
// A RandomSource must be confined to one thread at a time. Parallel work
// should obtain one child per task.
//
// Satisfies std::uniform_random_bit_generator.
class RandomSource {
 public:
  using result_type = uint64_t;

  explicit RandomSource(uint64_t seed);

  uint64_t seed() const { return seed_; }

  // Independent source for `stream`. Distinct streams give distinct seeds.
  RandomSource Child(uint64_t stream) const;

  uint64_t NextU64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double UniformDouble();

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double UniformOpen();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

 private:
  uint64_t seed_;
  std::array<uint64_t, 4> state_;
};

// SplitMix64 output function applied to `x`. Exposed for seed derivation.
uint64_t MixBits(uint64_t x);

}  // namespace dpq

#endif  // DPQ_RANDOM_SOURCE_H_
