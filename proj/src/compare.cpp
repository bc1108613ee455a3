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

#include <cstdio>
#include <set>
#include <sstream>

#include "ambiser/pipeline.hpp"

namespace ambiser {

using nlohmann::json;

namespace {

std::optional<double> relative(const std::optional<double>& ref, const std::optional<double>& x,
                               bool lower_is_better) {
  if (!ref || !x || *ref == 0) return std::nullopt;
  return 100.0 * (lower_is_better ? (*ref - *x) : (*x - *ref)) / std::abs(*ref);
}

std::optional<double> json_number(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw InputError(std::string("baseline field '") + key + "' must be a number or null");
  return it->get<double>();
}

std::string cell(const std::optional<double>& v, const char* fmt = "%.4f") {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ComparisonTable compare_reports(const std::vector<EvalReport>& reports,
                                const std::vector<std::string>& labels, const json& baselines) {
  if (reports.size() < 2) throw InputError("compare needs at least two reports");
  if (!labels.empty() && labels.size() != reports.size())
    throw InputError("compare: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(reports.size()) + " reports");

  ComparisonTable t;
  t.emotion_set = reports.front().emotion_set.classes();
  std::set<std::string> seen;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (r.emotion_set.classes() != t.emotion_set)
      throw InputError("compare: report '" + r.condition + "' uses a different emotion set");
    ComparisonRow row;
    row.label = labels.empty() ? r.condition : labels[i];
    if (!seen.insert(row.label).second)
      throw InputError("compare: condition label '" + row.label + "' appears twice; pass --labels");
    row.prompt_id = r.config.prompt_id;
    row.approach = r.config.approach;
    row.scope = r.config.approach == "token" ? r.config.scope : "";
    row.kl = r.corpus.mean_kl;
    row.bd = r.corpus.mean_bd;
    row.r2 = r.corpus.r2;
    row.accuracy = r.corpus.accuracy;
    row.f1 = r.corpus.f1;
    row.exclusion_rate = r.corpus.exclusion_rate;
    row.n_evaluated = r.corpus.n_evaluated;
    t.rows.push_back(std::move(row));
  }

  const auto& ref = t.rows.front();
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    t.improvements.push_back({row.label, ref.label, relative(ref.kl, row.kl, true),
                              relative(ref.bd, row.bd, true), relative(ref.r2, row.r2, false),
                              relative(ref.accuracy, row.accuracy, false),
                              relative(ref.f1, row.f1, false)});
  }

  if (!baselines.is_null()) {
    if (!baselines.is_array()) throw InputError("baselines must be a JSON array");
    for (const auto& b : baselines) {
      if (!b.is_object() || !b.contains("label") || !b["label"].is_string())
        throw InputError("each baseline row needs a string label");
      ComparisonRow row;
      row.label = b["label"].get<std::string>();
      row.baseline = true;
      row.kl = json_number(b, "kl");
      row.bd = json_number(b, "bd");
      row.r2 = json_number(b, "r2");
      row.accuracy = json_number(b, "accuracy");
      row.f1 = json_number(b, "f1");
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

std::string render_text(const ComparisonTable& t) {
  std::ostringstream os;
  std::size_t width = 9;
  for (const auto& r : t.rows) width = std::max(width, r.label.size() + (r.baseline ? 11 : 0));
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s %8s %8s %8s %8s %8s %9s\n", static_cast<int>(width), "condition",
                "KL", "BD", "R2", "accuracy", "F1", "excluded");
  os << buf;
  for (const auto& r : t.rows) {
    const std::string label = r.baseline ? r.label + " (baseline)" : r.label;
    std::snprintf(buf, sizeof(buf), "%-*s %8s %8s %8s %8s %8s %9s\n", static_cast<int>(width),
                  label.c_str(), cell(r.kl).c_str(), cell(r.bd).c_str(), cell(r.r2).c_str(),
                  cell(r.accuracy).c_str(), cell(r.f1).c_str(),
                  r.exclusion_rate ? cell(100.0 * *r.exclusion_rate, "%.2f%%").c_str() : "-");
    os << buf;
  }
  if (!t.improvements.empty()) {
    os << "\nrelative improvement vs " << t.improvements.front().reference << " (%)\n";
    for (const auto& imp : t.improvements) {
      std::snprintf(buf, sizeof(buf), "%-*s %8s %8s %8s %8s %8s\n", static_cast<int>(width),
                    imp.label.c_str(), cell(imp.kl, "%.2f").c_str(), cell(imp.bd, "%.2f").c_str(),
                    cell(imp.r2, "%.2f").c_str(), cell(imp.accuracy, "%.2f").c_str(),
                    cell(imp.f1, "%.2f").c_str());
      os << buf;
    }
  }
  return os.str();
}

std::string render_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "condition,baseline,prompt_id,approach,scope,kl,bd,r2,accuracy,f1,exclusion_rate\n";
  auto num = [](const std::optional<double>& v) { return v ? cell(v, "%.10g") : std::string(); };
  for (const auto& r : t.rows)
    os << r.label << ',' << (r.baseline ? "true" : "false") << ',' << r.prompt_id << ','
       << r.approach << ',' << r.scope << ',' << num(r.kl) << ',' << num(r.bd) << ',' << num(r.r2)
       << ',' << num(r.accuracy) << ',' << num(r.f1) << ',' << num(r.exclusion_rate) << '\n';
  return os.str();
}

json to_json(const ComparisonTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"label", r.label},
                    {"baseline", r.baseline},
                    {"prompt_id", r.prompt_id},
                    {"approach", r.approach},
                    {"scope", r.scope},
                    {"kl", number_or_null(r.kl)},
                    {"bd", number_or_null(r.bd)},
                    {"r2", number_or_null(r.r2)},
                    {"accuracy", number_or_null(r.accuracy)},
                    {"f1", number_or_null(r.f1)},
                    {"exclusion_rate", number_or_null(r.exclusion_rate)},
                    {"n_evaluated", r.n_evaluated ? json(*r.n_evaluated) : json(nullptr)}});
  json imps = json::array();
  for (const auto& i : t.improvements)
    imps.push_back({{"label", i.label},
                    {"reference", i.reference},
                    {"kl_percent", number_or_null(i.kl)},
                    {"bd_percent", number_or_null(i.bd)},
                    {"r2_percent", number_or_null(i.r2)},
                    {"accuracy_percent", number_or_null(i.accuracy)},
                    {"f1_percent", number_or_null(i.f1)}});
  return {{"emotion_set", t.emotion_set}, {"rows", std::move(rows)}, {"relative_improvement", std::move(imps)}};
}

}  // namespace ambiser
