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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ambiser/logit_aggregator.hpp"
#include "ambiser/metrics.hpp"
#include "ambiser/report.hpp"
#include "ambiser/trace_io.hpp"

namespace ambiser {

enum class Approach { kText, kToken };
enum class TextMode { kAuto, kDistribution, kSingleLabel };

std::string_view to_string(Approach a);
std::optional<Approach> parse_approach(std::string_view s);
std::string_view to_string(TextMode m);
std::optional<TextMode> parse_text_mode(std::string_view s);

struct RunConfig {
  std::filesystem::path manifest;
  Approach approach = Approach::kToken;
  TextMode text_mode = TextMode::kAuto;
  AggregationScope scope = AggregationScope::kAllTokens;
  NormalizationPolicy normalization = NormalizationPolicy::kPaperDivision;
  MetricConfig metrics;
  std::optional<std::filesystem::path> output;
  bool strict = false;
  unsigned workers = 1;
  std::optional<std::string> prompt_id;  // required when inputs mix prompts
  std::optional<std::string> label;      // condition label for comparisons
};

/// Applies the keys present in `j` (approach, text_mode, scope,
/// normalization, kl_direction, epsilon, f1_averaging, output, strict,
/// workers, prompt_id, label). Throws InputError on unknown values.
void merge_run_config(RunConfig& cfg, const nlohmann::json& j);

/// Runs one evaluation: ground truth from the annotation file, predictions
/// from responses (text) or traces (token), all metrics, and the exclusion
/// ledger. Writes the report when cfg.output is set. Exclusions never
/// throw; missing or unreadable inputs throw InputError. Non-fatal reader
/// diagnostics are appended to `warnings` when given.
EvalReport run_eval(const RunConfig& cfg, std::vector<io::Diagnostic>* warnings = nullptr);

struct FileSummary {
  std::string path;
  std::string kind;  // annotations | responses | traces
  std::size_t records = 0;
  std::size_t errors = 0;
  std::size_t warnings = 0;
  std::vector<io::Diagnostic> diagnostics;  // first few, errors and warnings
};

struct ValidationSummary {
  std::string manifest;
  std::size_t utterances = 0;
  std::vector<FileSummary> files;

  std::size_t total_errors() const;
};

/// Runs every reader's schema checks over the manifest's files plus the
/// cross-file checks (ids resolve to the manifest, no duplicates, token map
/// present when traces are). Throws InputError on an empty or unreadable
/// manifest.
ValidationSummary validate_corpus(const std::filesystem::path& manifest,
                                  std::size_t max_diagnostics_per_file = 20);

std::string render_validation(const ValidationSummary& s);

// Comparison tables.

struct ComparisonRow {
  std::string label;
  bool baseline = false;  // user-supplied context row, not produced here
  std::string prompt_id;
  std::string approach;
  std::string scope;
  std::optional<double> kl, bd, r2, accuracy, f1;
  std::optional<double> exclusion_rate;
  std::optional<std::size_t> n_evaluated;
};

/// Percent change of one row against the reference (first report).
/// Positive means better: lower KL/BD, higher R^2/accuracy/F1.
struct RelativeImprovement {
  std::string label;
  std::string reference;
  std::optional<double> kl, bd, r2, accuracy, f1;
};

struct ComparisonTable {
  std::vector<std::string> emotion_set;
  std::vector<ComparisonRow> rows;
  std::vector<RelativeImprovement> improvements;
};

/// Throws InputError on fewer than two reports, repeated labels or
/// mismatched emotion sets. `labels`, when non-empty, overrides each
/// report's condition label. `baselines` is an optional array of
/// {label, kl, bd, r2, accuracy, f1} rows appended verbatim.
ComparisonTable compare_reports(const std::vector<EvalReport>& reports,
                                const std::vector<std::string>& labels = {},
                                const nlohmann::json& baselines = nullptr);

std::string render_text(const ComparisonTable& t);
std::string render_csv(const ComparisonTable& t);
nlohmann::json to_json(const ComparisonTable& t);

}  // namespace ambiser
