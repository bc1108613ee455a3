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

#include "ambiser/distribution.hpp"

#include <array>
#include <utility>

namespace ambiser {

namespace {
constexpr std::array<std::pair<InvalidReason, std::string_view>, 4> kReasonNames{{
    {InvalidReason::kUnparseable, "unparseable"},
    {InvalidReason::kZeroSum, "zero-sum"},
    {InvalidReason::kNegativeMass, "negative-mass"},
    {InvalidReason::kMissingClasses, "missing-classes"},
}};
}  // namespace

std::string_view to_string(InvalidReason r) {
  for (const auto& [reason, name] : kReasonNames)
    if (reason == r) return name;
  return "unknown";
}

std::optional<InvalidReason> parse_invalid_reason(std::string_view s) {
  for (const auto& [reason, name] : kReasonNames)
    if (name == s) return reason;
  return std::nullopt;
}

}  // namespace ambiser
