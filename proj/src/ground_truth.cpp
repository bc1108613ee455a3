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

#include "ambiser/ground_truth.hpp"

#include <algorithm>

namespace ambiser {

namespace detail {

std::vector<std::vector<std::size_t>> resolve_labels(const AnnotationRecord& rec,
                                                     const EmotionSet& set) {
  const auto& id = rec.utterance.utterance_id;
  if (rec.annotator_labels.empty())
    throw StructuralError("utterance '" + id + "' has no annotators");
  std::vector<std::vector<std::size_t>> out;
  out.reserve(rec.annotator_labels.size());
  for (const auto& labels : rec.annotator_labels) {
    if (labels.empty())
      throw StructuralError("utterance '" + id + "' has an annotator with no labels");
    std::vector<std::size_t> idx;
    for (const auto& label : labels) {
      auto cls = set.index_of(label);
      if (!cls)
        throw StructuralError("utterance '" + id + "' has out-of-set label '" + label + "'");
      idx.push_back(*cls);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    out.push_back(std::move(idx));
  }
  return out;
}

}  // namespace detail

std::optional<std::size_t> majority_index(const AnnotationRecord& rec, const EmotionSet& set) {
  std::vector<int> counts(set.size(), 0);
  for (const auto& chosen : detail::resolve_labels(rec, set))
    for (auto cls : chosen) ++counts[cls];
  const auto top = std::max_element(counts.begin(), counts.end());
  if (std::count(counts.begin(), counts.end(), *top) != 1) return std::nullopt;
  return static_cast<std::size_t>(top - counts.begin());
}

std::optional<std::string> majority_label(const AnnotationRecord& rec, const EmotionSet& set) {
  if (auto i = majority_index(rec, set)) return set.name(*i);
  return std::nullopt;
}

}  // namespace ambiser
