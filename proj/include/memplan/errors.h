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

#ifndef MEMPLAN_ERRORS_H_
#define MEMPLAN_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace memplan {

// An input violates a documented invariant. `field()` names the offending
// field or flag.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A manifest file could not be read or is not well-formed JSON.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The batch search hit its cap while the strategy still fit in memory.
class CensoredSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A formula produced a value that cannot come from a valid profile.
class InconsistentProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace memplan

#endif  // MEMPLAN_ERRORS_H_
