// Copyright 2026 The xclust Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace xclust {

/// Malformed input: bad dimensions, duplicate centers, invalid indices,
/// unparseable files. The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// An exact routine was asked to work beyond its configured limits.
/// The CLI maps this to exit code 3.
class CapsExceeded : public std::runtime_error {
 public:
  explicit CapsExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A checked invariant failed at runtime (used by the verify suites).
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace xclust
