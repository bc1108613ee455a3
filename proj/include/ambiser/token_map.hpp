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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ambiser/emotion_set.hpp"

namespace ambiser {

struct SubwordToken {
  std::string text;
  std::int64_t id = 0;

  bool operator==(const SubwordToken&) const = default;
};

/// Maps each emotion class to the ordered subword pieces its word is
/// tokenized into.
///
/// Subword tokens are also laid out in one flat list (class order, then piece
/// order). Per-step logit vectors in traces use this flat layout.
class EmotionTokenMap {
 public:
  /// `pieces[n]` holds the subwords of `set.name(n)`. Throws StructuralError
  /// when a class has no pieces or a token text or id repeats.
  EmotionTokenMap(EmotionSet set, std::vector<std::vector<SubwordToken>> pieces);

  /// A small illustrative tokenization:
  /// ang|er, h|app|iness, ne|ut|ral, sad|ness. Token ids are placeholders
  /// (1000 upward); real maps come from the model's tokenizer.
  static EmotionTokenMap example(const EmotionSet& set = EmotionSet());

  const EmotionSet& set() const { return set_; }
  std::size_t num_classes() const { return set_.size(); }
  const std::vector<SubwordToken>& pieces(std::size_t cls) const { return pieces_.at(cls); }

  /// Total number of subword tokens across all classes.
  std::size_t flat_size() const { return flat_.size(); }
  const std::vector<SubwordToken>& flat_tokens() const { return flat_; }
  /// Position of the first piece of `cls` in the flat layout.
  std::size_t offset(std::size_t cls) const { return offsets_.at(cls); }
  std::optional<std::size_t> flat_index_of(std::string_view token_text) const;

  /// N x T matrix with 1/K_n over class n's pieces. Multiplying a flat
  /// subword-logit vector by it averages each class's pieces.
  template <typename Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> averaging_matrix() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
            static_cast<Eigen::Index>(num_classes()), static_cast<Eigen::Index>(flat_size()));
    for (std::size_t n = 0; n < num_classes(); ++n) {
      const auto k = pieces_[n].size();
      for (std::size_t i = 0; i < k; ++i)
        a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(offsets_[n] + i)) =
            Scalar(1) / Scalar(k);
    }
    return a;
  }

  bool operator==(const EmotionTokenMap& o) const {
    return set_ == o.set_ && pieces_ == o.pieces_;
  }

 private:
  EmotionSet set_;
  std::vector<std::vector<SubwordToken>> pieces_;
  std::vector<SubwordToken> flat_;
  std::vector<std::size_t> offsets_;
  std::unordered_map<std::string, std::size_t> by_text_;
};

}  // namespace ambiser
