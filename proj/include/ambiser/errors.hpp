// Copyright 2026 The ambiser Authors.
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

namespace ambiser {

/// Shape or contract violation in the inputs (length mismatch, trace/map
/// mismatch, empty label set). Distinct from an invalid distribution, which
/// is an ordinary value.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation that needs a valid distribution was handed an invalid one.
class InvalidDistributionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A metric is mathematically undefined for the given inputs (zero variance,
/// empty intersection).
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad or unreadable input files. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ambiser
