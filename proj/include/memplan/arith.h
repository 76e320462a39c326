/* Copyright 2026 The memplan Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef MEMPLAN_ARITH_H_
#define MEMPLAN_ARITH_H_

#include <cstdint>
#include <stdexcept>

namespace memplan {

// Memory quantities are exact byte counts.
using Bytes = std::uint64_t;

inline constexpr Bytes kMiB = Bytes{1} << 20;
inline constexpr Bytes kGiB = Bytes{1} << 30;

// Throws std::overflow_error when the result does not fit in 64 bits.
inline std::uint64_t CheckedMul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("memplan: byte count overflows 64 bits");
  }
  return r;
}

inline std::uint64_t CheckedAdd(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("memplan: byte count overflows 64 bits");
  }
  return r;
}

// Requires den > 0.
inline constexpr std::uint64_t CeilDiv(std::uint64_t num, std::uint64_t den) {
  return num / den + (num % den != 0 ? 1 : 0);
}

// Smallest multiple of `page` that is >= `raw`. Throws std::invalid_argument
// for a zero page.
Bytes AlignToPage(Bytes raw, Bytes page);

// ceil(num / (den * page)) * page, i.e. page alignment of the rational byte
// count num/den without intermediate rounding.
Bytes AlignRationalToPage(std::uint64_t num, std::uint64_t den, Bytes page);

}  // namespace memplan

#endif  // MEMPLAN_ARITH_H_
