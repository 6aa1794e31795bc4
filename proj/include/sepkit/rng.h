// sepkit/rng.h

// Copyright 2026  The sepkit project authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SEPKIT_RNG_H_
#define SEPKIT_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace sepkit {

// Deterministic random stream. The engine is std::mt19937_64 (fully specified
// by the standard); the uniform/gaussian mappings are spelled out here instead
// of using std::*_distribution, whose output is implementation-defined.
//
// Streams are derived from a master seed plus a string key so that every
// consumer (one corpus sample, one training batch, one weight tensor) owns an
// independent stream regardless of evaluation order.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Stream keyed by (master_seed, key). Same inputs, same stream, always.
  static Rng ForKey(uint64_t master_seed, std::string_view key);

  // 64-bit mix of (master_seed, key), usable as a derived seed.
  static uint64_t DeriveSeed(uint64_t master_seed, std::string_view key);

  uint64_t NextU64();

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi);

  // Uniform integer in [lo, hi], inclusive, unbiased.
  int64_t UniformInt(int64_t lo, int64_t hi);

  // Standard normal via Box-Muller; second value of each pair is cached.
  double Gaussian();

 private:
  std::mt19937_64 engine_;
  bool have_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

}  // namespace sepkit

#endif  // SEPKIT_RNG_H_
