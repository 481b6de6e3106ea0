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


#include "hybridcq/oracles/history.hpp"

#include <bit>
#include <string>

#include "hybridcq/errors.hpp"

namespace hybridcq {

std::int64_t history_position(unsigned k, unsigned n, std::uint32_t bits) {
  const unsigned len = n + k;
  if (len > 32) throw SizeFault("history longer than 32 bits");
  if (len < 32 && (bits >> len) != 0) throw InvalidInput("history has bits beyond its length");
  if (static_cast<unsigned>(std::popcount(bits)) != n) throw InvalidInput("history must contain exactly n ones");
  const auto ni = static_cast<std::int64_t>(n);
  std::int64_t q = ni * static_cast<std::int64_t>(k) + ni * (ni - 1) / 2;
  for (unsigned l = 0; l < len; ++l) {
    if ((bits >> l) & 1U) q -= static_cast<std::int64_t>(l);
  }
  return q;
}

HistoryStats history_position_stats(unsigned k, unsigned n, HistoryMode mode) {
  const unsigned len = n + k;
  if (mode == HistoryMode::ClosedForm) {
    if (len == 0) return {};
    const double nk = static_cast<double>(n) * static_cast<double>(k);
    const double big_n = static_cast<double>(len);
    return {nk / 2.0, nk * (big_n - 1.0) * (2.0 * big_n - 1.0) / (6.0 * big_n)};
  }
  if (len > kMaxHistoryLength) {
    throw SizeFault("history enumeration supports n + k <= " + std::to_string(kMaxHistoryLength));
  }
  // Exact integer sums; the largest case (C(20,10) strings, |q| < 300) is far
  // from overflowing 64 bits.
  std::int64_t count = 0;
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;
  auto visit = [&](std::uint32_t bits) {
    const std::int64_t q = history_position(k, n, bits);
    ++count;
    sum += q;
    sum_sq += q * q;
  };
  if (n == 0) {
    visit(0);
  } else {
    // Gosper's hack walks all len-bit words with n ones in increasing order.
    const std::uint32_t limit = 1U << len;
    std::uint32_t bits = (1U << n) - 1U;
    while (bits < limit) {
      visit(bits);
      const std::uint32_t c = bits & (~bits + 1U);
      const std::uint32_t r = bits + c;
      bits = (((r ^ bits) >> 2) / c) | r;
    }
  }
  const double c = static_cast<double>(count);
  const double mean = static_cast<double>(sum) / c;
  const double variance = static_cast<double>(count * sum_sq - sum * sum) / (c * c);
  return {mean, variance};
}

}  // namespace hybridcq
