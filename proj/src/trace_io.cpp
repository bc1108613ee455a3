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

#include "ambiser/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "ambiser/errors.hpp"

namespace ambiser::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kReportFormat = "ambiser-report/1";

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return std::string(s.substr(b, e - b));
}

bool is_blank(const std::string& s) { return trim(s).empty(); }

// Field accessors that raise a Diagnostic-carrying exception on schema errors.
struct SchemaError {
  std::string field;
  std::string message;
};

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError{path + key, "missing field"};
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path = "") {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw SchemaError{path + key, "expected a string"};
  return v.get<std::string>();
}

std::int64_t require_integer(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number_integer()) throw SchemaError{path + key, "expected an integer"};
  return v.get<std::int64_t>();
}

// Generated text with every whitespace character and tokenizer marker removed.
std::string squash(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, 3, "\xE2\x96\x81") == 0) { i += 3; continue; }
    if (s.compare(i, 2, "\xC4\xA0") == 0) { i += 2; continue; }
    const char c = s[i];
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out.push_back(c);
    ++i;
  }
  return out;
}

template <typename T>
std::optional<ReadResult<T>> fail(Diagnostic d, bool strict) {
  if (strict) throw RecordError(std::move(d));
  ReadResult<T> r;
  r.error = std::move(d);
  return r;
}

json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  if (std::isnan(*v)) return nullptr;
  return *v;
}

std::optional<double> read_optional_number(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InputError("report: unexpected number string '" + s + "'");
  }
  return j.get<double>();
}

json optional_string(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::string> read_optional_string(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

json optional_vector(const std::optional<std::vector<double>>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::vector<double>> read_optional_vector(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::vector<double>>();
}

}  // namespace

std::string Diagnostic::to_string() const {
  std::string out = file;
  if (line > 0) out += ":" + std::to_string(line);
  if (!out.empty()) out += ": ";
  if (!utterance_id.empty()) out += "[" + utterance_id + "] ";
  if (!field.empty()) out += field + ": ";
  out += message;
  return out;
}

// ---------------------------------------------------------------------------
// LineReader

LineReader::LineReader(fs::path path) : in_(path), file_(path.string()) {
  if (!in_) throw InputError("cannot open '" + file_ + "'");
}

std::optional<std::string> LineReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!is_blank(line)) return line;
  }
  if (in_.bad()) throw InputError("read error in '" + file_ + "'");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Traces

TraceReader::TraceReader(fs::path path, EmotionTokenMap map, bool strict)
    : lines_(std::move(path)), map_(std::move(map)), strict_(strict) {}

std::optional<ReadResult<LogitTrace>> TraceReader::next() {
  auto line = lines_.next();
  if (!line) return std::nullopt;
  Diagnostic diag{lines_.file(), lines_.line_number(), "", "", ""};

  json j;
  try {
    j = json::parse(*line);
  } catch (const json::parse_error& e) {
    diag.message = std::string("malformed JSON: ") + e.what();
    return fail<LogitTrace>(std::move(diag), strict_);
  }

  ReadResult<LogitTrace> result;
  try {
    if (!j.is_object()) throw SchemaError{"", "record is not an object"};
    LogitTrace t;
    t.utterance.utterance_id = require_string(j, "utterance_id");
    diag.utterance_id = t.utterance.utterance_id;
    if (t.utterance.utterance_id.empty()) throw SchemaError{"utterance_id", "empty"};
    if (auto it = j.find("audio_path"); it != j.end() && it->is_string())
      t.utterance.audio_path = it->get<std::string>();
    t.prompt_id = require_string(j, "prompt_id");
    t.generated_text = require_string(j, "generated_text");
    const auto& steps = require(j, "steps", "");
    if (!steps.is_array()) throw SchemaError{"steps", "expected an array"};
    if (steps.empty()) throw SchemaError{"steps", "trace has no steps"};

    const auto flat = static_cast<Eigen::Index>(map_.flat_size());
    t.steps.reserve(steps.size());
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const std::string path = "steps[" + std::to_string(s) + "].";
      const auto& js = steps[s];
      if (!js.is_object()) throw SchemaError{path.substr(0, path.size() - 1), "expected an object"};
      LogitStep step;
      step.index = static_cast<int>(require_integer(js, "index", path));
      if (step.index != static_cast<int>(s) + 1)
        throw SchemaError{path + "index", "expected " + std::to_string(s + 1) + ", got " +
                                              std::to_string(step.index)};
      step.token_text = require_string(js, "token_text", path);
      step.token_id = require_integer(js, "token_id", path);
      const auto& logits = require(js, "emotion_logits", path);
      if (!logits.is_object()) throw SchemaError{path + "emotion_logits", "expected an object"};
      step.subword_logits.resize(flat);
      for (const auto& tok : map_.flat_tokens()) {
        auto it = logits.find(tok.text);
        if (it == logits.end())
          throw SchemaError{path + "emotion_logits", "missing subword key '" + tok.text + "'"};
        if (!it->is_number())
          throw SchemaError{path + "emotion_logits." + tok.text, "expected a number"};
        const double v = it->get<double>();
        if (!std::isfinite(v))
          throw SchemaError{path + "emotion_logits." + tok.text, "non-finite logit"};
        step.subword_logits(static_cast<Eigen::Index>(*map_.flat_index_of(tok.text))) = v;
      }
      if (logits.size() != map_.flat_size()) {
        for (const auto& [key, value] : logits.items())
          if (!map_.flat_index_of(key))
            throw SchemaError{path + "emotion_logits", "undeclared subword key '" + key + "'"};
      }
      t.steps.push_back(std::move(step));
    }

    std::string joined;
    for (const auto& step : t.steps) joined += step.token_text;
    if (squash(joined) != squash(t.generated_text))
      result.warnings.push_back({lines_.file(), lines_.line_number(), "generated_text",
                                 "concatenated step tokens do not reproduce generated_text",
                                 t.utterance.utterance_id});
    result.record = std::move(t);
  } catch (const SchemaError& e) {
    diag.field = e.field;
    diag.message = e.message;
    return fail<LogitTrace>(std::move(diag), strict_);
  } catch (const json::exception& e) {
    diag.message = e.what();
    return fail<LogitTrace>(std::move(diag), strict_);
  }
  return result;
}

json to_json(const LogitTrace& t, const EmotionTokenMap& map) {
  json steps = json::array();
  for (const auto& step : t.steps) {
    if (step.subword_logits.size() != static_cast<Eigen::Index>(map.flat_size()))
      throw StructuralError("step logits do not match token map");
    json logits = json::object();
    for (std::size_t i = 0; i < map.flat_size(); ++i)
      logits[map.flat_tokens()[i].text] = step.subword_logits(static_cast<Eigen::Index>(i));
    steps.push_back({{"index", step.index},
                     {"token_text", step.token_text},
                     {"token_id", step.token_id},
                     {"emotion_logits", std::move(logits)}});
  }
  json j = {{"utterance_id", t.utterance.utterance_id},
            {"prompt_id", t.prompt_id},
            {"generated_text", t.generated_text},
            {"steps", std::move(steps)}};
  if (t.utterance.audio_path) j["audio_path"] = *t.utterance.audio_path;
  return j;
}

void TraceWriter::write(const LogitTrace& t) { out_ << to_json(t, map_).dump() << '\n'; }

// ---------------------------------------------------------------------------
// Responses

ResponseReader::ResponseReader(fs::path path, bool strict)
    : lines_(std::move(path)), strict_(strict) {}

std::optional<ReadResult<TextResponse>> ResponseReader::next() {
  auto line = lines_.next();
  if (!line) return std::nullopt;
  Diagnostic diag{lines_.file(), lines_.line_number(), "", "", ""};
  try {
    const json j = json::parse(*line);
    if (!j.is_object()) throw SchemaError{"", "record is not an object"};
    TextResponse r;
    r.utterance.utterance_id = require_string(j, "utterance_id");
    diag.utterance_id = r.utterance.utterance_id;
    if (r.utterance.utterance_id.empty()) throw SchemaError{"utterance_id", "empty"};
    if (auto it = j.find("audio_path"); it != j.end() && it->is_string())
      r.utterance.audio_path = it->get<std::string>();
    r.prompt_id = require_string(j, "prompt_id");
    r.text = require_string(j, "text");
    ReadResult<TextResponse> out;
    out.record = std::move(r);
    return out;
  } catch (const SchemaError& e) {
    diag.field = e.field;
    diag.message = e.message;
  } catch (const json::exception& e) {
    diag.message = std::string("malformed JSON: ") + e.what();
  }
  return fail<TextResponse>(std::move(diag), strict_);
}

json to_json(const TextResponse& r) {
  json j = {{"utterance_id", r.utterance.utterance_id}, {"prompt_id", r.prompt_id}, {"text", r.text}};
  if (r.utterance.audio_path) j["audio_path"] = *r.utterance.audio_path;
  return j;
}

void ResponseWriter::write(const TextResponse& r) { out_ << to_json(r).dump() << '\n'; }

// ---------------------------------------------------------------------------
// Annotations

std::vector<std::string> split_delimited(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

AnnotationReader::AnnotationReader(fs::path path, EmotionSet set, bool strict)
    : in_(path), file_(path.string()), set_(set), synonyms_(set), strict_(strict) {
  if (!in_) throw InputError("cannot open '" + file_ + "'");
  std::string header;
  while (std::getline(in_, header)) {
    ++line_;
    if (!is_blank(header)) break;
  }
  if (is_blank(header)) throw InputError(file_ + ": empty annotation file (no header)");
  delimiter_ = header.find('\t') != std::string::npos ? '\t' : ',';
  const auto cols = split_delimited(header, delimiter_);
  std::optional<std::size_t> utt, ann, labels;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto name = to_lower(trim(cols[i]));
    if (name == "utterance_id") utt = i;
    else if (name == "annotator_id") ann = i;
    else if (name == "labels") labels = i;
  }
  if (!utt || !ann || !labels)
    throw InputError(file_ + ":" + std::to_string(line_) +
                     ": header must name utterance_id, annotator_id and labels");
  col_utt_ = *utt;
  col_ann_ = *ann;
  col_labels_ = *labels;
  n_cols_ = std::max({col_utt_, col_ann_, col_labels_}) + 1;
}

std::optional<AnnotationReader::Row> AnnotationReader::read_row(std::vector<Diagnostic>& warnings) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (is_blank(line)) continue;
    auto fields = split_delimited(line, delimiter_);
    if (fields.size() < n_cols_) {
      warnings.push_back({file_, line_, "", "row has " + std::to_string(fields.size()) +
                                              " fields, expected " + std::to_string(n_cols_) +
                                              "; skipped", ""});
      continue;
    }
    Row row{line_, trim(fields[col_utt_]), trim(fields[col_ann_]), fields[col_labels_]};
    if (row.utterance_id.empty()) {
      warnings.push_back({file_, line_, "utterance_id", "empty; row skipped", ""});
      continue;
    }
    return row;
  }
  return std::nullopt;
}

std::optional<ReadResult<AnnotationRecord>> AnnotationReader::next() {
  ReadResult<AnnotationRecord> result;
  for (;;) {
    std::optional<Row> first = pending_ ? std::move(pending_) : read_row(result.warnings);
    pending_.reset();
    if (!first) {
      if (!result.warnings.empty()) return result;  // trailing warnings, no record
      return std::nullopt;
    }
    std::vector<Row> rows{std::move(*first)};
    while (auto row = read_row(result.warnings)) {
      if (row->utterance_id != rows.front().utterance_id) {
        pending_ = std::move(row);
        break;
      }
      rows.push_back(std::move(*row));
    }

    AnnotationRecord rec;
    rec.utterance.utterance_id = rows.front().utterance_id;
    std::optional<Diagnostic> rejection;
    for (const auto& row : rows) {
      LabelSet labels;
      for (auto& piece : split_delimited(row.labels, ';')) {
        const auto label = trim(piece);
        if (label.empty()) continue;
        auto cls = synonyms_.lookup(label);
        if (!cls) {
          if (!rejection)
            rejection = Diagnostic{file_, row.line, "labels",
                                   "out-of-set label '" + to_lower(label) + "'; record rejected",
                                   rec.utterance.utterance_id};
          continue;
        }
        const auto& name = set_.name(*cls);
        if (std::find(labels.begin(), labels.end(), name) == labels.end()) labels.push_back(name);
      }
      if (labels.empty()) {
        if (!rejection)
          result.warnings.push_back({file_, row.line, "labels",
                                     "annotator '" + row.annotator_id + "' has no labels; row skipped",
                                     rec.utterance.utterance_id});
        continue;
      }
      rec.annotator_labels.push_back(std::move(labels));
    }
    if (rejection) {
      if (strict_) throw RecordError(*rejection);
      result.error = std::move(rejection);
      return result;
    }
    if (rec.annotator_labels.empty()) {
      result.warnings.push_back({file_, rows.front().line, "", "utterance has zero annotator rows; skipped",
                                 rec.utterance.utterance_id});
      continue;
    }
    result.record = std::move(rec);
    return result;
  }
}

AnnotationWriter::AnnotationWriter(std::ostream& out) : out_(out) {
  out_ << "utterance_id,annotator_id,labels\n";
}

void AnnotationWriter::write(const AnnotationRecord& rec) {
  for (std::size_t a = 0; a < rec.annotator_labels.size(); ++a) {
    std::string labels;
    for (const auto& l : rec.annotator_labels[a]) {
      if (!labels.empty()) labels += ';';
      labels += l;
    }
    out_ << rec.utterance.utterance_id << ",a" << (a + 1) << ',';
    if (labels.find(';') != std::string::npos) out_ << '"' << labels << '"';
    else out_ << labels;
    out_ << '\n';
  }
}

// ---------------------------------------------------------------------------
// Token map and manifest

json to_json(const EmotionTokenMap& map) {
  json j = json::object();
  for (std::size_t n = 0; n < map.num_classes(); ++n) {
    json pieces = json::array();
    for (const auto& tok : map.pieces(n)) pieces.push_back({{"token", tok.text}, {"id", tok.id}});
    j[map.set().name(n)] = std::move(pieces);
  }
  return j;
}

EmotionTokenMap token_map_from_json(const json& j, const EmotionSet& set) {
  if (!j.is_object()) throw InputError("token_map must be an object");
  std::vector<std::vector<SubwordToken>> pieces(set.size());
  for (const auto& [key, value] : j.items()) {
    auto cls = set.index_of(key);
    if (!cls) throw InputError("token_map names '" + key + "', which is not in the emotion set");
    if (!value.is_array()) throw InputError("token_map." + key + " must be an array");
    for (const auto& tok : value) {
      if (!tok.is_object() || !tok.contains("token") || !tok.contains("id") ||
          !tok["token"].is_string() || !tok["id"].is_number_integer())
        throw InputError("token_map." + key + " entries need a string token and an integer id");
      pieces[*cls].push_back({tok["token"].get<std::string>(), tok["id"].get<std::int64_t>()});
    }
  }
  for (std::size_t n = 0; n < set.size(); ++n)
    if (pieces[n].empty()) throw InputError("token_map does not cover class '" + set.name(n) + "'");
  try {
    return EmotionTokenMap(set, std::move(pieces));
  } catch (const StructuralError& e) {
    throw InputError(std::string("token_map: ") + e.what());
  }
}

fs::path CorpusManifest::resolve(const fs::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

namespace {

std::vector<fs::path> read_paths(const json& j, const char* key) {
  std::vector<fs::path> out;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (it->is_string()) {
    out.emplace_back(it->get<std::string>());
  } else if (it->is_array()) {
    for (const auto& p : *it) {
      if (!p.is_string()) throw InputError(std::string("manifest: ") + key + " entries must be strings");
      out.emplace_back(p.get<std::string>());
    }
  } else {
    throw InputError(std::string("manifest: ") + key + " must be a string or array");
  }
  return out;
}

}  // namespace

CorpusManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object() || j.empty()) throw InputError("manifest '" + path.string() + "' is empty");

  CorpusManifest m;
  m.base_dir = path.parent_path();
  try {
    m.corpus_id = j.value("corpus_id", std::string());
    if (auto it = j.find("emotion_set"); it != j.end())
      m.emotion_set = EmotionSet(it->get<std::vector<std::string>>());
    if (auto it = j.find("token_map"); it != j.end() && !it->is_null())
      m.token_map = token_map_from_json(*it, m.emotion_set);
    std::set<std::string> ids;
    if (auto it = j.find("utterances"); it != j.end()) {
      for (const auto& u : *it) {
        UtteranceRef ref;
        if (u.is_string()) {
          ref.utterance_id = u.get<std::string>();
        } else {
          ref.utterance_id = u.at("utterance_id").get<std::string>();
          if (u.contains("audio_path") && u["audio_path"].is_string())
            ref.audio_path = u["audio_path"].get<std::string>();
        }
        if (ref.utterance_id.empty()) throw InputError("manifest: empty utterance_id");
        if (!ids.insert(ref.utterance_id).second)
          throw InputError("manifest: duplicate utterance_id '" + ref.utterance_id + "'");
        m.utterances.push_back(std::move(ref));
      }
    }
    auto ann = read_paths(j, "annotations");
    if (ann.size() > 1) throw InputError("manifest: only one annotation file is supported");
    if (!ann.empty()) m.annotations = ann.front();
    m.responses = read_paths(j, "responses");
    m.traces = read_paths(j, "traces");
    if (auto it = j.find("run"); it != j.end()) m.run = *it;
  } catch (const json::exception& e) {
    throw InputError("manifest '" + path.string() + "': " + e.what());
  } catch (const StructuralError& e) {
    throw InputError("manifest '" + path.string() + "': " + e.what());
  }
  return m;
}

json to_json(const CorpusManifest& m) {
  json utts = json::array();
  for (const auto& u : m.utterances) {
    json e = {{"utterance_id", u.utterance_id}};
    if (u.audio_path) e["audio_path"] = *u.audio_path;
    utts.push_back(std::move(e));
  }
  auto paths = [](const std::vector<fs::path>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(p.generic_string());
    return a;
  };
  json j = {{"corpus_id", m.corpus_id},
            {"emotion_set", m.emotion_set.classes()},
            {"utterances", std::move(utts)},
            {"responses", paths(m.responses)},
            {"traces", paths(m.traces)}};
  if (m.token_map) j["token_map"] = to_json(*m.token_map);
  if (m.annotations) j["annotations"] = m.annotations->generic_string();
  if (!m.run.is_null()) j["run"] = m.run;
  return j;
}

// ---------------------------------------------------------------------------
// Reports

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw InputError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InputError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw InputError("cannot move report into '" + path.string() + "': " + ec.message());
  }
}

json to_json(const EvalReport& r) {
  const auto& c = r.corpus;
  json r2_per_class = json::array();
  for (const auto& v : c.r2_per_class) r2_per_class.push_back(optional_number(v));

  json per_utt = json::array();
  json exclusions = json::array();
  for (const auto& u : r.per_utterance) {
    per_utt.push_back({{"utterance_id", u.utterance_id},
                       {"excluded", u.excluded},
                       {"reason", u.reason},
                       {"kl", optional_number(u.kl)},
                       {"bd", optional_number(u.bd)},
                       {"ground_truth", optional_vector(u.ground_truth)},
                       {"predicted", optional_vector(u.predicted)},
                       {"predicted_label", optional_string(u.predicted_label)},
                       {"majority_label", optional_string(u.majority_label)}});
    if (u.excluded) exclusions.push_back({{"utterance_id", u.utterance_id}, {"reason", u.reason}});
  }

  return {
      {"format", kReportFormat},
      {"condition", r.condition},
      {"emotion_set", r.emotion_set.classes()},
      {"config",
       {{"corpus_id", r.config.corpus_id},
        {"approach", r.config.approach},
        {"text_mode", r.config.text_mode},
        {"scope", r.config.scope},
        {"normalization", r.config.normalization},
        {"kl_direction", r.config.kl_direction},
        {"epsilon", r.config.epsilon},
        {"f1_averaging", r.config.f1_averaging},
        {"prompt_id", r.config.prompt_id},
        {"strict", r.config.strict}}},
      {"corpus",
       {{"mean_kl", optional_number(c.mean_kl)},
        {"mean_bd", optional_number(c.mean_bd)},
        {"r2", optional_number(c.r2)},
        {"accuracy", optional_number(c.accuracy)},
        {"f1", optional_number(c.f1)},
        {"exclusion_rate", c.exclusion_rate},
        {"n_total", c.n_total},
        {"n_evaluated", c.n_evaluated},
        {"n_excluded", c.n_excluded},
        {"n_bd_infinite", c.n_bd_infinite},
        {"n_no_majority", c.n_no_majority},
        {"n_single_label", c.n_single_label},
        {"r2_per_class", std::move(r2_per_class)},
        {"f1_per_class", c.f1_per_class}}},
      {"exclusions", std::move(exclusions)},
      {"per_utterance", std::move(per_utt)},
  };
}

EvalReport report_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != kReportFormat)
      throw InputError("not an ambiser report (format field missing or unknown)");
    EvalReport r;
    r.condition = j.at("condition").get<std::string>();
    r.emotion_set = EmotionSet(j.at("emotion_set").get<std::vector<std::string>>());
    const auto& cfg = j.at("config");
    r.config.corpus_id = cfg.at("corpus_id").get<std::string>();
    r.config.approach = cfg.at("approach").get<std::string>();
    r.config.text_mode = cfg.at("text_mode").get<std::string>();
    r.config.scope = cfg.at("scope").get<std::string>();
    r.config.normalization = cfg.at("normalization").get<std::string>();
    r.config.kl_direction = cfg.at("kl_direction").get<std::string>();
    r.config.epsilon = cfg.at("epsilon").get<double>();
    r.config.f1_averaging = cfg.at("f1_averaging").get<std::string>();
    r.config.prompt_id = cfg.at("prompt_id").get<std::string>();
    r.config.strict = cfg.at("strict").get<bool>();

    const auto& c = j.at("corpus");
    r.corpus.mean_kl = read_optional_number(c.at("mean_kl"));
    r.corpus.mean_bd = read_optional_number(c.at("mean_bd"));
    r.corpus.r2 = read_optional_number(c.at("r2"));
    r.corpus.accuracy = read_optional_number(c.at("accuracy"));
    r.corpus.f1 = read_optional_number(c.at("f1"));
    r.corpus.exclusion_rate = c.at("exclusion_rate").get<double>();
    r.corpus.n_total = c.at("n_total").get<std::size_t>();
    r.corpus.n_evaluated = c.at("n_evaluated").get<std::size_t>();
    r.corpus.n_excluded = c.at("n_excluded").get<std::size_t>();
    r.corpus.n_bd_infinite = c.at("n_bd_infinite").get<std::size_t>();
    r.corpus.n_no_majority = c.at("n_no_majority").get<std::size_t>();
    r.corpus.n_single_label = c.at("n_single_label").get<std::size_t>();
    for (const auto& v : c.at("r2_per_class")) r.corpus.r2_per_class.push_back(read_optional_number(v));
    r.corpus.f1_per_class = c.at("f1_per_class").get<std::vector<double>>();

    for (const auto& u : j.at("per_utterance")) {
      UtteranceResult res;
      res.utterance_id = u.at("utterance_id").get<std::string>();
      res.excluded = u.at("excluded").get<bool>();
      res.reason = u.at("reason").get<std::string>();
      res.kl = read_optional_number(u.at("kl"));
      res.bd = read_optional_number(u.at("bd"));
      res.ground_truth = read_optional_vector(u.at("ground_truth"));
      res.predicted = read_optional_vector(u.at("predicted"));
      res.predicted_label = read_optional_string(u.at("predicted_label"));
      res.majority_label = read_optional_string(u.at("majority_label"));
      r.per_utterance.push_back(std::move(res));
    }
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  } catch (const StructuralError& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string render_report(const EvalReport& r) { return to_json(r).dump(2) + "\n"; }

void write_report(const EvalReport& r, const fs::path& path) {
  if (r.corpus.n_total == 0 || r.per_utterance.empty())
    throw InputError("refusing to write a report for an empty corpus");
  write_file_atomic(path, render_report(r));
}

EvalReport read_report(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open report '" + path.string() + "'");
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InputError("report '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace ambiser::io
