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

#include "ambiser/emotion_set.hpp"

#include <algorithm>
#include <set>

#include "ambiser/errors.hpp"

namespace ambiser {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
  });
  return out;
}

EmotionSet::EmotionSet() : classes_{"anger", "happiness", "neutral", "sadness"} {}

EmotionSet::EmotionSet(std::vector<std::string> classes) {
  if (classes.size() < 2)
    throw StructuralError("emotion set needs at least 2 classes, got " +
                          std::to_string(classes.size()));
  std::set<std::string> seen;
  classes_.reserve(classes.size());
  for (auto& c : classes) {
    std::string name = to_lower(c);
    if (name.empty()) throw StructuralError("emotion class name is empty");
    if (!seen.insert(name).second)
      throw StructuralError("duplicate emotion class '" + name + "'");
    classes_.push_back(std::move(name));
  }
}

std::optional<std::size_t> EmotionSet::index_of(std::string_view name) const {
  const std::string key = to_lower(name);
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i] == key) return i;
  return std::nullopt;
}

}  // namespace ambiser
