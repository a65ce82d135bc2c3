/******************************************************************************
 *
 *  Copyright 2026 The scosim Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at:
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 *
 ******************************************************************************/

#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace scosim {

// The only source of randomness in a simulation. Owned by the scheduler and
// passed by reference to whoever needs to draw keys, nonces or phases.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in [lo, hi].
  uint64_t uniform(uint64_t lo, uint64_t hi) {
    const uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();
    // Rejection sampling keeps the draw unbiased.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % span;
  }

  // Uniform double in [0, 1). Built from 53 raw bits so the value does not
  // depend on the standard library's distribution implementation.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <size_t N>
  std::array<uint8_t, N> bytes() {
    std::array<uint8_t, N> out{};
    for (size_t i = 0; i < N; i += 8) {
      uint64_t word = engine_();
      for (size_t j = 0; j < 8 && i + j < N; ++j) {
        out[i + j] = static_cast<uint8_t>(word >> (8 * j));
      }
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scosim
