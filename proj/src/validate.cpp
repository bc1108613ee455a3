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

#include <map>
#include <set>
#include <sstream>

#include "ambiser/pipeline.hpp"

namespace ambiser {

namespace fs = std::filesystem;

std::size_t ValidationSummary::total_errors() const {
  std::size_t n = 0;
  for (const auto& f : files) n += f.errors;
  return n;
}

namespace {

class FileCheck {
 public:
  FileCheck(FileSummary& s, const std::set<std::string>& known, std::size_t max_diag)
      : s_(s), known_(known), max_diag_(max_diag) {}

  void error(io::Diagnostic d) {
    ++s_.errors;
    keep(std::move(d));
  }
  void warning(io::Diagnostic d) {
    ++s_.warnings;
    d.message = "warning: " + d.message;
    keep(std::move(d));
  }

  template <typename Result>
  void consume(Result& r, const std::string& key) {
    for (auto& w : r.warnings) warning(std::move(w));
    if (r.error) {
      error(std::move(*r.error));
      return;
    }
    ++s_.records;
    const auto& id = r.record->utterance.utterance_id;
    if (!known_.count(id))
      error({s_.path, 0, "utterance_id", "does not resolve to a manifest entry", id});
    if (!seen_.insert(key).second) error({s_.path, 0, "utterance_id", "duplicate record", id});
  }

 private:
  void keep(io::Diagnostic d) {
    if (s_.diagnostics.size() < max_diag_) s_.diagnostics.push_back(std::move(d));
  }

  FileSummary& s_;
  const std::set<std::string>& known_;
  std::size_t max_diag_;
  std::set<std::string> seen_;
};

FileSummary summary_for(const fs::path& path, const char* kind) {
  FileSummary s;
  s.path = path.string();
  s.kind = kind;
  return s;
}

}  // namespace

ValidationSummary validate_corpus(const fs::path& manifest_path, std::size_t max_diag) {
  const auto m = io::read_manifest(manifest_path);
  if (m.utterances.empty()) throw InputError("manifest '" + manifest_path.string() + "' lists no utterances");
  if (!m.annotations && m.responses.empty() && m.traces.empty())
    throw InputError("manifest '" + manifest_path.string() + "' names no input files");

  ValidationSummary out;
  out.manifest = manifest_path.string();
  out.utterances = m.utterances.size();
  std::set<std::string> known;
  for (const auto& u : m.utterances) known.insert(u.utterance_id);

  auto open_failed = [&](FileSummary& s, const std::exception& e) {
    ++s.errors;
    s.diagnostics.push_back({s.path, 0, "", e.what(), ""});
  };

  if (m.annotations) {
    auto s = summary_for(m.resolve(*m.annotations), "annotations");
    FileCheck check(s, known, max_diag);
    try {
      io::AnnotationReader reader(m.resolve(*m.annotations), m.emotion_set);
      while (auto r = reader.next()) {
        if (!r->record && !r->error) {
          for (auto& w : r->warnings) check.warning(std::move(w));
          continue;
        }
        const auto key = r->record ? r->record->utterance.utterance_id : std::string();
        check.consume(*r, key);
      }
    } catch (const InputError& e) {
      open_failed(s, e);
    }
    out.files.push_back(std::move(s));
  }

  for (const auto& p : m.responses) {
    auto s = summary_for(m.resolve(p), "responses");
    FileCheck check(s, known, max_diag);
    try {
      io::ResponseReader reader(m.resolve(p));
      while (auto r = reader.next())
        check.consume(*r, r->record ? r->record->prompt_id + '\x1f' + r->record->utterance.utterance_id : "");
    } catch (const InputError& e) {
      open_failed(s, e);
    }
    out.files.push_back(std::move(s));
  }

  for (const auto& p : m.traces) {
    auto s = summary_for(m.resolve(p), "traces");
    if (!m.token_map) {
      ++s.errors;
      s.diagnostics.push_back({out.manifest, 0, "token_map", "trace files need a token_map in the manifest", ""});
      out.files.push_back(std::move(s));
      continue;
    }
    FileCheck check(s, known, max_diag);
    try {
      io::TraceReader reader(m.resolve(p), *m.token_map);
      while (auto r = reader.next())
        check.consume(*r, r->record ? r->record->prompt_id + '\x1f' + r->record->utterance.utterance_id : "");
    } catch (const InputError& e) {
      open_failed(s, e);
    }
    out.files.push_back(std::move(s));
  }
  return out;
}

std::string render_validation(const ValidationSummary& s) {
  std::ostringstream os;
  os << "manifest " << s.manifest << ": " << s.utterances << " utterances\n";
  for (const auto& f : s.files) {
    os << "  " << f.kind << " " << f.path << ": " << f.records << " records, " << f.errors
       << " errors, " << f.warnings << " warnings\n";
    for (const auto& d : f.diagnostics) os << "    " << d.to_string() << "\n";
  }
  os << "total errors: " << s.total_errors() << "\n";
  return os.str();
}

}  // namespace ambiser
