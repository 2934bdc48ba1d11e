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

#include "dpq/random_source.h"

#include <bit>

namespace dpq {
namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
// Separates the child-derivation hash from the state-expansion sequence.
constexpr uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;

constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;

}  // namespace

uint64_t MixBits(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(uint64_t seed) : seed_(seed) {
  uint64_t s = seed;
  for (uint64_t& word : state_) {
    s += kGolden;
    word = MixBits(s);
  }
  // xoshiro must not start from the all-zero state; SplitMix64 never yields
  // four zero words in a row, but keep the invariant explicit.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
}

RandomSource RandomSource::Child(uint64_t stream) const {
  return RandomSource(MixBits(seed_ ^ MixBits(stream * kGolden + kStreamSalt)));
}

uint64_t RandomSource::NextU64() {
  const uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double RandomSource::UniformDouble() {
  return static_cast<double>(NextU64() >> 11) * kTwoPowMinus53;
}

double RandomSource::UniformOpen() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * kTwoPowMinus53;
}

}  // namespace dpq
