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

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "ambiser/distribution.hpp"
#include "ambiser/emotion_set.hpp"
#include "ambiser/errors.hpp"

namespace ambiser {

struct UtteranceRef {
  std::string utterance_id;
  std::optional<std::string> audio_path;  // informational, never opened

  bool operator==(const UtteranceRef&) const = default;
};

/// Labels chosen by one annotator; class names, lowercase.
using LabelSet = std::vector<std::string>;

struct AnnotationRecord {
  UtteranceRef utterance;
  std::vector<LabelSet> annotator_labels;

  bool operator==(const AnnotationRecord&) const = default;
};

namespace detail {

/// Class indices per annotator, deduplicated. Throws StructuralError on an
/// empty record, an empty label set or an out-of-set label.
std::vector<std::vector<std::size_t>> resolve_labels(const AnnotationRecord& rec,
                                                     const EmotionSet& set);

}  // namespace detail

/// Ground-truth distribution p(y|A). Each of the M annotators contributes
/// mass 1/M split equally over the labels they chose.
template <typename Scalar = double>
BasicEmotionDistribution<Scalar> build_distribution(const AnnotationRecord& rec,
                                                    const EmotionSet& set) {
  const auto labels = detail::resolve_labels(rec, set);
  const auto n = static_cast<Eigen::Index>(set.size());
  // counts(cls, k - 1): annotators with a k-label set that include cls.
  // Summing from integer counts keeps the result independent of annotator order.
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(n, n);
  for (const auto& chosen : labels)
    for (auto cls : chosen)
      ++counts(static_cast<Eigen::Index>(cls), static_cast<Eigen::Index>(chosen.size()) - 1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mass(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Scalar m = 0;
    for (Eigen::Index k = 0; k < n; ++k) m += Scalar(counts(c, k)) / Scalar(k + 1);
    mass(c) = m / Scalar(labels.size());
  }
  return make_distribution(mass, set);
}

/// Class whose annotator count strictly exceeds every other class's count.
/// An annotator counts toward every label in their set. nullopt on a tie
/// for the top count.
std::optional<std::size_t> majority_index(const AnnotationRecord& rec, const EmotionSet& set);

std::optional<std::string> majority_label(const AnnotationRecord& rec, const EmotionSet& set);

}  // namespace ambiser
