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
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ambiser/emotion_set.hpp"
#include "ambiser/ground_truth.hpp"
#include "ambiser/logit_aggregator.hpp"
#include "ambiser/report.hpp"
#include "ambiser/response_parser.hpp"
#include "ambiser/token_map.hpp"

namespace ambiser::io {

/// Problem found while reading a file, with its provenance.
struct Diagnostic {
  std::string file;
  std::size_t line = 0;  // 1-based; 0 when not tied to a line
  std::string field;
  std::string message;
  std::string utterance_id;  // when known

  std::string to_string() const;
};

/// Thrown by readers in strict mode on the first record error.
class RecordError : public InputError {
 public:
  explicit RecordError(Diagnostic d) : InputError(d.to_string()), diagnostic(std::move(d)) {}
  Diagnostic diagnostic;
};

/// One step of a reader. Either `record` or `error` is set.
template <typename T>
struct ReadResult {
  std::optional<T> record;
  std::optional<Diagnostic> error;
  std::vector<Diagnostic> warnings;
};

/// Streams JSONL files line by line. Blank lines are skipped.
class LineReader {
 public:
  /// Throws InputError when the file cannot be opened.
  explicit LineReader(std::filesystem::path path);

  /// Next non-blank line, or nullopt at end of file.
  std::optional<std::string> next();
  std::size_t line_number() const { return line_; }
  const std::string& file() const { return file_; }

 private:
  std::ifstream in_;
  std::string file_;
  std::size_t line_ = 0;
};

/// Reads `{utterance_id, prompt_id, generated_text, steps[]}` records.
/// Each step's emotion_logits object must carry exactly the token map's
/// subword keys with finite values.
class TraceReader {
 public:
  TraceReader(std::filesystem::path path, EmotionTokenMap map, bool strict = false);
  std::optional<ReadResult<LogitTrace>> next();

 private:
  LineReader lines_;
  EmotionTokenMap map_;
  bool strict_;
};

/// Reads `{utterance_id, prompt_id, text}` records.
class ResponseReader {
 public:
  explicit ResponseReader(std::filesystem::path path, bool strict = false);
  std::optional<ReadResult<TextResponse>> next();

 private:
  LineReader lines_;
  bool strict_;
};

/// Reads a delimited annotation file with a header naming the columns
/// utterance_id, annotator_id and labels. Tab-delimited if the header holds
/// a tab, comma-delimited otherwise; fields may be double-quoted. Labels are
/// ';'-separated, lowercased and synonym-mapped. Rows of one utterance must
/// be contiguous.
class AnnotationReader {
 public:
  AnnotationReader(std::filesystem::path path, EmotionSet set, bool strict = false);
  std::optional<ReadResult<AnnotationRecord>> next();

 private:
  struct Row {
    std::size_t line;
    std::string utterance_id;
    std::string annotator_id;
    std::string labels;
  };
  std::optional<Row> read_row(std::vector<Diagnostic>& warnings);

  std::ifstream in_;
  std::string file_;
  EmotionSet set_;
  SynonymTable synonyms_;
  bool strict_;
  std::size_t line_ = 0;
  char delimiter_ = ',';
  std::size_t col_utt_ = 0, col_ann_ = 1, col_labels_ = 2, n_cols_ = 3;
  std::optional<Row> pending_;
};

/// Splits one delimited line, honoring double quotes ("" escapes a quote).
std::vector<std::string> split_delimited(const std::string& line, char delimiter);

// Record <-> JSON.
nlohmann::json to_json(const LogitTrace& t, const EmotionTokenMap& map);
nlohmann::json to_json(const TextResponse& r);
nlohmann::json to_json(const EmotionTokenMap& map);
EmotionTokenMap token_map_from_json(const nlohmann::json& j, const EmotionSet& set);

/// Streaming writers; one record per line, "\n" terminated.
class TraceWriter {
 public:
  TraceWriter(std::ostream& out, EmotionTokenMap map) : out_(out), map_(std::move(map)) {}
  void write(const LogitTrace& t);

 private:
  std::ostream& out_;
  EmotionTokenMap map_;
};

class ResponseWriter {
 public:
  explicit ResponseWriter(std::ostream& out) : out_(out) {}
  void write(const TextResponse& r);

 private:
  std::ostream& out_;
};

/// Writes the header once, then one row per (utterance, annotator).
class AnnotationWriter {
 public:
  explicit AnnotationWriter(std::ostream& out);
  void write(const AnnotationRecord& rec);

 private:
  std::ostream& out_;
};

/// Declarative description of a corpus and its input files. Relative paths
/// resolve against the manifest's directory.
struct CorpusManifest {
  std::string corpus_id;
  EmotionSet emotion_set;
  std::optional<EmotionTokenMap> token_map;
  std::vector<UtteranceRef> utterances;
  std::optional<std::filesystem::path> annotations;
  std::vector<std::filesystem::path> responses;
  std::vector<std::filesystem::path> traces;
  nlohmann::json run;  // optional run defaults, same keys as the eval flags
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Throws InputError on unreadable files or schema violations, including a
/// token map that does not cover the emotion set.
CorpusManifest read_manifest(const std::filesystem::path& path);
nlohmann::json to_json(const CorpusManifest& m);

/// Writes `content` to `path` through a sibling temp file and rename. On
/// failure the temp file is removed and InputError is thrown.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

nlohmann::json to_json(const EvalReport& r);
EvalReport report_from_json(const nlohmann::json& j);

/// Serialized report: sorted keys, two-space indent, trailing newline.
std::string render_report(const EvalReport& r);

/// Throws InputError for an empty corpus (nothing is written) or a failed
/// write.
void write_report(const EvalReport& r, const std::filesystem::path& path);
EvalReport read_report(const std::filesystem::path& path);

}  // namespace ambiser::io
