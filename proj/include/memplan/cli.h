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

#ifndef MEMPLAN_CLI_H_
#define MEMPLAN_CLI_H_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "memplan/arith.h"

namespace memplan {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitPredictedOom = 2;

// Environment variable consulted for the page size when --page-size is
// absent.
inline constexpr const char* kPageSizeEnv = "MEMPLAN_PAGE_SIZE";

// "17179869184", "16384MB", "16GB" (MB = 2^20 bytes, GB = 2^30 bytes).
// Throws ValidationError naming `field`.
Bytes ParseMemorySize(std::string_view text, const std::string& field);

// Runs the memplan command line. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace memplan

#endif  // MEMPLAN_CLI_H_
