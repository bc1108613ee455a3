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
#include <vector>

#include "ambiser/emotion_set.hpp"

namespace ambiser {

/// Settings echoed into every report so results can be traced to the run
/// that produced them.
struct ReportConfig {
  std::string corpus_id;
  std::string approach;       // text | token
  std::string text_mode;      // distribution | single-label (text approach)
  std::string scope;          // all-tokens | emotion-word-tokens
  std::string normalization;  // paper-division | shift-min-zero | softmax
  std::string kl_direction;
  double epsilon = 1e-10;
  std::string f1_averaging;
  std::string prompt_id;
  bool strict = false;

  bool operator==(const ReportConfig&) const = default;
};

struct UtteranceResult {
  std::string utterance_id;
  bool excluded = false;
  std::string reason;  // exclusion reason, empty when included
  std::optional<double> kl;
  std::optional<double> bd;  // +inf when supports are disjoint
  std::optional<std::vector<double>> ground_truth;
  std::optional<std::vector<double>> predicted;
  std::optional<std::string> predicted_label;
  std::optional<std::string> majority_label;  // nullopt: no strict majority

  bool operator==(const UtteranceResult&) const = default;
};

struct CorpusMetrics {
  std::optional<double> mean_kl;
  std::optional<double> mean_bd;
  std::optional<double> r2;
  std::optional<double> accuracy;
  std::optional<double> f1;
  double exclusion_rate = 0;
  std::size_t n_total = 0;
  std::size_t n_evaluated = 0;
  std::size_t n_excluded = 0;
  std::size_t n_bd_infinite = 0;  // left out of mean_bd
  std::size_t n_no_majority = 0;  // left out of accuracy/F1
  std::size_t n_single_label = 0;  // utterances scored by accuracy/F1
  std::vector<std::optional<double>> r2_per_class;
  std::vector<double> f1_per_class;

  bool operator==(const CorpusMetrics&) const = default;
};

/// Result of one evaluation run. per_utterance is sorted by utterance_id.
struct EvalReport {
  std::string condition;  // label used by comparison tables
  EmotionSet emotion_set;
  ReportConfig config;
  CorpusMetrics corpus;
  std::vector<UtteranceResult> per_utterance;

  bool operator==(const EvalReport&) const = default;
};

}  // namespace ambiser
