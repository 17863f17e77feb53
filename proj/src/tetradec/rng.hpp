// Copyright 2026 The TetraDec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef TETRADEC_RNG_HPP_
#define TETRADEC_RNG_HPP_

#include <array>
#include <cstdint>

namespace tetradec {

// xoshiro256** seeded through splitmix64. The standard library engines are
// portable but their distributions are not, so uniform and normal draws are
// derived here to keep synthetic data byte-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  // Uniform in [0, 1), 53 bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi] inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi);
  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

  // Independent stream for a sub-task, e.g. one scene of a batch.
  static uint64_t derive_seed(uint64_t base, uint64_t stream);

 private:
  std::array<uint64_t, 4> s_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tetradec

#endif  // TETRADEC_RNG_HPP_
