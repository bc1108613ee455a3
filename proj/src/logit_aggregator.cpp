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

#include "ambiser/logit_aggregator.hpp"

#include <array>
#include <utility>

namespace ambiser {

namespace {

constexpr std::array<std::pair<AggregationScope, std::string_view>, 2> kScopes{{
    {AggregationScope::kAllTokens, "all-tokens"},
    {AggregationScope::kEmotionWordTokens, "emotion-word-tokens"},
}};

constexpr std::array<std::pair<NormalizationPolicy, std::string_view>, 3> kPolicies{{
    {NormalizationPolicy::kPaperDivision, "paper-division"},
    {NormalizationPolicy::kShiftMinZero, "shift-min-zero"},
    {NormalizationPolicy::kSoftmax, "softmax"},
}};

constexpr std::string_view kSentencePieceMarker = "\xE2\x96\x81";  // U+2581
constexpr std::string_view kByteLevelMarker = "\xC4\xA0";          // U+0120

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

std::string_view to_string(AggregationScope s) {
  for (auto [v, name] : kScopes)
    if (v == s) return name;
  return "unknown";
}

std::optional<AggregationScope> parse_aggregation_scope(std::string_view s) {
  for (auto [v, name] : kScopes)
    if (name == s) return v;
  return std::nullopt;
}

std::string_view to_string(NormalizationPolicy p) {
  for (auto [v, name] : kPolicies)
    if (v == p) return name;
  return "unknown";
}

std::optional<NormalizationPolicy> parse_normalization_policy(std::string_view s) {
  for (auto [v, name] : kPolicies)
    if (name == s) return v;
  return std::nullopt;
}

std::string strip_whitespace_marker(std::string_view token) {
  for (;;) {
    if (!token.empty() && is_space(token.front())) {
      token.remove_prefix(1);
    } else if (token.starts_with(kSentencePieceMarker)) {
      token.remove_prefix(kSentencePieceMarker.size());
    } else if (token.starts_with(kByteLevelMarker)) {
      token.remove_prefix(kByteLevelMarker.size());
    } else {
      break;
    }
  }
  while (!token.empty() && is_space(token.back())) token.remove_suffix(1);
  return std::string(token);
}

std::vector<std::size_t> select_steps(const LogitTrace& trace, const EmotionTokenMap& map,
                                      AggregationScope scope) {
  std::vector<std::size_t> selected;
  const std::size_t j = trace.steps.size();
  if (scope == AggregationScope::kAllTokens) {
    selected.resize(j);
    for (std::size_t i = 0; i < j; ++i) selected[i] = i;
    return selected;
  }

  std::vector<std::string> generated(j);
  for (std::size_t i = 0; i < j; ++i)
    generated[i] = to_lower(strip_whitespace_marker(trace.steps[i].token_text));

  std::vector<std::vector<std::string>> words(map.num_classes());
  for (std::size_t n = 0; n < map.num_classes(); ++n)
    for (const auto& piece : map.pieces(n))
      words[n].push_back(to_lower(strip_whitespace_marker(piece.text)));

  std::size_t i = 0;
  while (i < j) {
    std::size_t best = 0;
    for (const auto& word : words) {
      if (word.size() <= best || i + word.size() > j) continue;
      bool match = true;
      for (std::size_t k = 0; k < word.size() && match; ++k) match = generated[i + k] == word[k];
      if (match) best = word.size();
    }
    if (best == 0) {
      ++i;
      continue;
    }
    for (std::size_t k = 0; k < best; ++k) selected.push_back(i + k);
    i += best;
  }
  return selected;
}

std::optional<Eigen::VectorXd> aggregate_trace(const LogitTrace& trace, const EmotionTokenMap& map,
                                               AggregationScope scope) {
  if (trace.steps.empty())
    throw StructuralError("trace '" + trace.utterance.utterance_id + "' has no steps");
  const auto selected = select_steps(trace, map, scope);
  if (selected.empty()) return std::nullopt;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.num_classes()));
  for (auto s : selected) sum += step_emotion_logits(trace.steps[s], map);
  return Eigen::VectorXd(sum / static_cast<double>(selected.size()));
}

}  // namespace ambiser
