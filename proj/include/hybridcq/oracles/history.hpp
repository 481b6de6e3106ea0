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


// Position of a particle after a fixed number of position-type and
// momentum-type jumps, averaged over the order in which they occur.
//
// A history is a bit string of length n + k with exactly n ones (momentum
// jumps). Its final position in jump units is
//   q(x) = n k + n (n - 1) / 2 - sum_l l x_l,   l = 0 .. n + k - 1.

#pragma once

#include <cstdint>

namespace hybridcq {

enum class HistoryMode { ClosedForm, Enumerate };

struct HistoryStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Largest n + k accepted by the enumeration.
inline constexpr unsigned kMaxHistoryLength = 20;

std::int64_t history_position(unsigned k, unsigned n, std::uint32_t bits);

/// ClosedForm treats the bits as independent with P(1) = n / (n + k):
///   mean = n k / 2,  variance = n k (N - 1)(2N - 1) / (6N),  N = n + k.
/// Enumerate averages over all C(N, n) histories exactly; throws SizeFault for N > 20.
HistoryStats history_position_stats(unsigned k, unsigned n, HistoryMode mode);

}  // namespace hybridcq
