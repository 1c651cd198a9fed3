// Copyright 2026 The jcprog Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace jcprog {

/// Caller passed arguments that do not describe a valid request
/// (empty factor list, mismatched dimensions, bad mode index, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition on numerical input was violated, e.g. a
/// non-hermitian generator handed to the hermitian exponential.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The physical configuration cannot support the requested construction.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A control sequence could not be lowered to a pulse schedule.
class CompilationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tolerance {
inline constexpr double kUnitarity = 1e-10;
inline constexpr double kHermiticity = 1e-10;
inline constexpr double kAlgebraic = 1e-9;
}  // namespace tolerance

}  // namespace jcprog
