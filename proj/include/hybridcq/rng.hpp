// Copyright 2026 The hybridcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reproducible per-trajectory random streams.
//
// Stream i of master seed s is an mt19937_64 seeded with
//   splitmix64(s ^ splitmix64(i + 0x9E3779B97F4A7C15)).
// Uniform variates take the top 53 bits of each output, so every platform
// with a conforming mt19937_64 sees the same sequence of doubles.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hybridcq {

/// One round of the splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) noexcept {
  return splitmix64(master_seed ^ splitmix64(stream_index + 0x9E3779B97F4A7C15ULL));
}

class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}
  StreamRng(std::uint64_t master_seed, std::uint64_t stream_index)
      : StreamRng(stream_seed(master_seed, stream_index)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double operator()() { return uniform(); }

  /// Standard normal by Box-Muller; platform independent unlike std::normal_distribution.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hybridcq
