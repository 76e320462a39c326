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

#include "memplan/arith.h"

#include <stdexcept>

namespace memplan {

Bytes AlignToPage(Bytes raw, Bytes page) {
  if (page == 0) {
    throw std::invalid_argument("memplan: page size must be at least 1 byte");
  }
  return CheckedMul(CeilDiv(raw, page), page);
}

Bytes AlignRationalToPage(std::uint64_t num, std::uint64_t den, Bytes page) {
  if (page == 0 || den == 0) {
    throw std::invalid_argument("memplan: zero page size or denominator");
  }
  return CheckedMul(CeilDiv(num, CheckedMul(den, page)), page);
}

}  // namespace memplan
