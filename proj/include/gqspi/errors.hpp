// Copyright 2026 The gqspi Authors
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

namespace gqspi {

// Raised when a derived quantity violates an identity it must satisfy
// (imaginary residue of a real response, norm drift, and so on).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Analytic forms with exponential cost refuse degrees above their budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace gqspi
