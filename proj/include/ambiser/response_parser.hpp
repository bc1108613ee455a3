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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ambiser/distribution.hpp"
#include "ambiser/emotion_set.hpp"
#include "ambiser/ground_truth.hpp"

namespace ambiser {

struct TextResponse {
  UtteranceRef utterance;
  std::string prompt_id;
  std::string text;

  bool operator==(const TextResponse&) const = default;
};

/// Surface forms (single words, case-insensitive) that name an emotion class.
class SynonymTable {
 public:
  /// Every class name maps to itself; angry, happy, sad and neutrality are
  /// added for the classes present in `set`.
  explicit SynonymTable(const EmotionSet& set);

  /// Adds or replaces a surface form. Throws StructuralError if `cls` is out
  /// of range or `surface` is not a single alphabetic word.
  void add(std::string_view surface, std::size_t cls);

  std::optional<std::size_t> lookup(std::string_view word) const;

 private:
  std::size_t num_classes_;
  std::unordered_map<std::string, std::size_t> forms_;
};

struct ParseOutcome {
  EmotionDistribution distribution;
  /// Values as read, keyed by class name. Percent units.
  std::map<std::string, double> raw_percentages;
  /// True when the raw values missed 100 +- sum tolerance and were rescaled.
  bool normalized = false;
};

struct ParserOptions {
  double sum_tolerance = 0.5;
  /// Largest magnitude accepted as a percentage; bigger numbers are not read.
  double max_value = 1000.0;
  /// Report invalid(missing-classes) instead of zero-filling absent classes.
  bool require_all_classes = false;
};

/// Reads "<emotion>: <number>%" pairs from a generated response.
///
/// Never throws on content: unparseable, zero-sum and negative values come
/// back as invalid distributions.
ParseOutcome parse_response(const TextResponse& r, const EmotionSet& set,
                            const SynonymTable& synonyms, const ParserOptions& opts = {});
ParseOutcome parse_response(const TextResponse& r, const EmotionSet& set);

/// First emotion word (whole-word, synonym aware) in the text.
std::optional<std::size_t> parse_single_label(const TextResponse& r, const EmotionSet& set,
                                              const SynonymTable& synonyms);
std::optional<std::size_t> parse_single_label(const TextResponse& r, const EmotionSet& set);

/// Fraction of outcomes whose distribution is invalid. Throws
/// std::invalid_argument on an empty list.
double exclusion_rate(std::span<const ParseOutcome> outcomes);

/// "Anger: 65.000000%, Happiness: 0.000000%, ..." in set order, class names
/// capitalized.
std::string format_percentages(const EmotionDistribution& d, const EmotionSet& set,
                               int decimals = 6);

}  // namespace ambiser
