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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ambiser {

/// ASCII lowercase copy.
std::string to_lower(std::string_view s);

/// Ordered set of emotion-class names. The order defines vector indexing and
/// argmax tie-breaking for the whole run.
class EmotionSet {
 public:
  /// [anger, happiness, neutral, sadness].
  EmotionSet();

  /// Names are lowercased. Throws StructuralError on fewer than two classes,
  /// empty names or duplicates.
  explicit EmotionSet(std::vector<std::string> classes);

  std::size_t size() const { return classes_.size(); }
  const std::string& name(std::size_t i) const { return classes_.at(i); }
  const std::vector<std::string>& classes() const { return classes_; }

  /// Case-insensitive lookup.
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const EmotionSet&) const = default;

 private:
  std::vector<std::string> classes_;
};

}  // namespace ambiser
