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

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <thread>
#include <utility>
#include <variant>

#include "ambiser/ground_truth.hpp"
#include "ambiser/pipeline.hpp"
#include "ambiser/prompts.hpp"
#include "ambiser/response_parser.hpp"

namespace ambiser {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<std::pair<Approach, std::string_view>, 2> kApproaches{{
    {Approach::kText, "text"}, {Approach::kToken, "token"}}};
constexpr std::array<std::pair<TextMode, std::string_view>, 3> kTextModes{{
    {TextMode::kAuto, "auto"}, {TextMode::kDistribution, "distribution"},
    {TextMode::kSingleLabel, "single-label"}}};

template <typename T>
T parse_or_throw(std::optional<T> v, const std::string& key, const std::string& value) {
  if (!v) throw InputError("unknown " + key + " '" + value + "'");
  return *v;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// What a single utterance brings to the evaluation.
struct Inputs {
  const AnnotationRecord* annotation = nullptr;
  std::string gt_problem;  // why ground truth is missing, if it is
  const TextResponse* response = nullptr;
  const LogitTrace* trace = nullptr;
  bool record_error = false;
};

struct Context {
  const EmotionSet* set;
  const EmotionTokenMap* map;
  const SynonymTable* synonyms;
  const RunConfig* cfg;
  bool single_label;
};

UtteranceResult evaluate_one(const std::string& id, const Inputs& in, const Context& ctx) {
  const auto& set = *ctx.set;
  UtteranceResult res;
  res.utterance_id = id;

  std::optional<EmotionDistribution> gt;
  if (in.annotation) {
    gt = build_distribution(*in.annotation, set);
    res.ground_truth = to_std(gt->probs());
    res.majority_label = majority_label(*in.annotation, set);
  }

  std::optional<EmotionDistribution> pred;
  std::string pred_problem;
  if (ctx.cfg->approach == Approach::kText) {
    if (!in.response) {
      pred_problem = in.record_error ? "record-error" : "missing-prediction";
    } else if (ctx.single_label) {
      if (auto cls = parse_single_label(*in.response, set, *ctx.synonyms))
        res.predicted_label = set.name(*cls);
      else
        pred_problem = std::string(to_string(InvalidReason::kUnparseable));
    } else {
      auto outcome = parse_response(*in.response, set, *ctx.synonyms);
      if (outcome.distribution.is_valid()) pred = outcome.distribution;
      else pred_problem = std::string(to_string(*outcome.distribution.reason()));
    }
  } else {
    if (!in.trace) {
      pred_problem = in.record_error ? "record-error" : "missing-prediction";
    } else if (auto z = aggregate_trace(*in.trace, *ctx.map, ctx.cfg->scope)) {
      auto d = logits_to_distribution(*z, ctx.cfg->normalization);
      if (d.is_valid()) pred = std::move(d);
      else pred_problem = std::string(to_string(*d.reason()));
    } else {
      pred_problem = "no-emotion-tokens";
    }
  }

  if (pred) {
    res.predicted = to_std(pred->probs());
    res.predicted_label = argmax_label(*pred, set);
  }

  if (!gt) {
    res.excluded = true;
    res.reason = in.gt_problem.empty() ? "missing-ground-truth" : in.gt_problem;
  } else if (!pred_problem.empty()) {
    res.excluded = true;
    res.reason = pred_problem;
  } else if (pred) {
    res.kl = kl_divergence(*gt, *pred, ctx.cfg->metrics);
    res.bd = bhattacharyya(*gt, *pred);
  }
  return res;
}

template <typename Record, typename Reader>
void collect(Reader& reader, std::map<std::string, Record>& out,
             std::map<std::string, std::string>& prompts, std::set<std::string>& errored,
             std::vector<io::Diagnostic>* warnings, bool strict) {
  while (auto r = reader.next()) {
    if (warnings)
      for (auto& w : r->warnings) warnings->push_back(std::move(w));
    if (r->error) {
      if (!r->error->utterance_id.empty()) errored.insert(r->error->utterance_id);
      if (warnings) warnings->push_back(*r->error);
      continue;
    }
    auto& rec = *r->record;
    const auto id = rec.utterance.utterance_id;
    prompts.emplace(rec.prompt_id, id);
    // The same utterance may appear once per prompt; key by (prompt, id).
    const auto key = rec.prompt_id + '\x1f' + id;
    if (!out.emplace(key, std::move(rec)).second) {
      io::Diagnostic d{"", 0, "utterance_id", "duplicate record for prompt '" + key.substr(0, key.find('\x1f')) + "'; later copy ignored", id};
      if (strict) throw io::RecordError(d);
      if (warnings) warnings->push_back(std::move(d));
    }
  }
}

template <typename Record>
std::map<std::string, const Record*> select_prompt(const std::map<std::string, Record>& all,
                                                   const std::string& prompt_id) {
  std::map<std::string, const Record*> out;
  for (const auto& [key, rec] : all)
    if (rec.prompt_id == prompt_id) out.emplace(rec.utterance.utterance_id, &rec);
  return out;
}

}  // namespace

std::string_view to_string(Approach a) {
  for (auto [v, n] : kApproaches)
    if (v == a) return n;
  return "unknown";
}

std::optional<Approach> parse_approach(std::string_view s) {
  for (auto [v, n] : kApproaches)
    if (n == s) return v;
  return std::nullopt;
}

std::string_view to_string(TextMode m) {
  for (auto [v, n] : kTextModes)
    if (v == m) return n;
  return "unknown";
}

std::optional<TextMode> parse_text_mode(std::string_view s) {
  for (auto [v, n] : kTextModes)
    if (n == s) return v;
  return std::nullopt;
}

void merge_run_config(RunConfig& cfg, const json& j) {
  if (j.is_null()) return;
  if (!j.is_object()) throw InputError("run configuration must be an object");
  try {
    auto str = [&](const char* key) { return j.at(key).get<std::string>(); };
    if (j.contains("approach")) cfg.approach = parse_or_throw(parse_approach(str("approach")), "approach", str("approach"));
    if (j.contains("text_mode")) cfg.text_mode = parse_or_throw(parse_text_mode(str("text_mode")), "text_mode", str("text_mode"));
    if (j.contains("scope")) cfg.scope = parse_or_throw(parse_aggregation_scope(str("scope")), "scope", str("scope"));
    if (j.contains("normalization"))
      cfg.normalization = parse_or_throw(parse_normalization_policy(str("normalization")), "normalization", str("normalization"));
    if (j.contains("kl_direction"))
      cfg.metrics.kl_direction = parse_or_throw(parse_kl_direction(str("kl_direction")), "kl_direction", str("kl_direction"));
    if (j.contains("f1_averaging"))
      cfg.metrics.f1_averaging = parse_or_throw(parse_f1_averaging(str("f1_averaging")), "f1_averaging", str("f1_averaging"));
    if (j.contains("epsilon")) cfg.metrics.epsilon = j.at("epsilon").get<double>();
    if (j.contains("output")) cfg.output = str("output");
    if (j.contains("strict")) cfg.strict = j.at("strict").get<bool>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<unsigned>();
    if (j.contains("prompt_id")) cfg.prompt_id = str("prompt_id");
    if (j.contains("label")) cfg.label = str("label");
  } catch (const json::exception& e) {
    throw InputError(std::string("run configuration: ") + e.what());
  }
}

EvalReport run_eval(const RunConfig& cfg, std::vector<io::Diagnostic>* warnings) {
  try {
    cfg.metrics.validate();
  } catch (const StructuralError& e) {
    throw InputError(e.what());
  }
  const auto manifest = io::read_manifest(cfg.manifest);
  const auto& set = manifest.emotion_set;
  if (manifest.utterances.empty()) throw InputError("manifest lists no utterances");
  if (!manifest.annotations) throw InputError("manifest names no annotation file");
  if (cfg.approach == Approach::kToken) {
    if (manifest.traces.empty()) throw InputError("approach token needs trace files in the manifest");
    if (!manifest.token_map) throw InputError("approach token needs a token_map in the manifest");
  } else if (manifest.responses.empty()) {
    throw InputError("approach text needs response files in the manifest");
  }

  std::set<std::string> known;
  for (const auto& u : manifest.utterances) known.insert(u.utterance_id);

  // Ground truth.
  std::map<std::string, AnnotationRecord> annotations;
  std::map<std::string, std::string> rejected;
  {
    io::AnnotationReader reader(manifest.resolve(*manifest.annotations), set, cfg.strict);
    while (auto r = reader.next()) {
      if (warnings)
        for (auto& w : r->warnings) warnings->push_back(std::move(w));
      if (r->error) {
        rejected[r->error->utterance_id] = "ground-truth-rejected";
        if (warnings) warnings->push_back(*r->error);
        continue;
      }
      const auto id = r->record->utterance.utterance_id;
      if (!annotations.emplace(id, std::move(*r->record)).second) {
        io::Diagnostic d{manifest.resolve(*manifest.annotations).string(), 0, "utterance_id",
                         "rows are not contiguous; later group ignored", id};
        if (cfg.strict) throw io::RecordError(d);
        if (warnings) warnings->push_back(std::move(d));
      }
    }
  }

  // Predictions.
  std::map<std::string, TextResponse> responses;
  std::map<std::string, LogitTrace> traces;
  std::map<std::string, std::string> prompts;  // prompt_id -> some utterance
  std::set<std::string> errored;
  if (cfg.approach == Approach::kText) {
    for (const auto& p : manifest.responses) {
      io::ResponseReader reader(manifest.resolve(p), cfg.strict);
      collect(reader, responses, prompts, errored, warnings, cfg.strict);
    }
  } else {
    for (const auto& p : manifest.traces) {
      io::TraceReader reader(manifest.resolve(p), *manifest.token_map, cfg.strict);
      collect(reader, traces, prompts, errored, warnings, cfg.strict);
    }
  }

  std::string prompt_id;
  if (cfg.prompt_id) {
    prompt_id = *cfg.prompt_id;
  } else if (prompts.size() == 1) {
    prompt_id = prompts.begin()->first;
  } else if (prompts.size() > 1) {
    std::string ids;
    for (const auto& [p, _] : prompts) ids += (ids.empty() ? "" : ", ") + p;
    throw InputError("inputs mix several prompt_ids (" + ids + "); pick one with --prompt-id");
  }
  const auto by_response = select_prompt(responses, prompt_id);
  const auto by_trace = select_prompt(traces, prompt_id);

  auto check_known = [&](const auto& records) {
    for (const auto& [id, _] : records) {
      if (known.count(id)) continue;
      io::Diagnostic d{cfg.manifest.string(), 0, "utterance_id", "not listed in the manifest; ignored", id};
      if (cfg.strict) throw io::RecordError(d);
      if (warnings) warnings->push_back(std::move(d));
    }
  };
  check_known(by_response);
  check_known(by_trace);

  bool single_label = cfg.text_mode == TextMode::kSingleLabel;
  if (cfg.approach == Approach::kText && cfg.text_mode == TextMode::kAuto) {
    const auto* tmpl = find_template(prompt_id);
    single_label = tmpl && tmpl->kind == PromptKind::kSingle;
  }

  // Per-utterance work, sorted by utterance_id.
  std::vector<std::string> ids(known.begin(), known.end());
  std::vector<Inputs> inputs(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& in = inputs[i];
    const auto& id = ids[i];
    if (auto it = annotations.find(id); it != annotations.end()) in.annotation = &it->second;
    else if (auto rj = rejected.find(id); rj != rejected.end()) in.gt_problem = rj->second;
    if (auto it = by_response.find(id); it != by_response.end()) in.response = it->second;
    if (auto it = by_trace.find(id); it != by_trace.end()) in.trace = it->second;
    in.record_error = errored.count(id) > 0;
  }

  const SynonymTable synonyms(set);
  const EmotionTokenMap map = manifest.token_map ? *manifest.token_map : EmotionTokenMap::example(set);
  const Context ctx{&set, &map, &synonyms, &cfg, single_label};

  std::vector<UtteranceResult> results(ids.size());
  const std::size_t workers = std::clamp<std::size_t>(cfg.workers, 1, std::max<std::size_t>(ids.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) results[i] = evaluate_one(ids[i], inputs[i], ctx);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    const std::size_t chunk = (ids.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t end = std::min(ids.size(), (w + 1) * chunk);
          for (std::size_t i = w * chunk; i < end; ++i) results[i] = evaluate_one(ids[i], inputs[i], ctx);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);
  }

  // Corpus reduction in utterance_id order.
  EvalReport report;
  report.emotion_set = set;
  report.config.corpus_id = manifest.corpus_id;
  report.config.approach = std::string(to_string(cfg.approach));
  report.config.text_mode = cfg.approach == Approach::kText
                                ? std::string(to_string(single_label ? TextMode::kSingleLabel : TextMode::kDistribution))
                                : "";
  report.config.scope = std::string(to_string(cfg.scope));
  report.config.normalization = std::string(to_string(cfg.normalization));
  report.config.kl_direction = std::string(to_string(cfg.metrics.kl_direction));
  report.config.epsilon = cfg.metrics.epsilon;
  report.config.f1_averaging = std::string(to_string(cfg.metrics.f1_averaging));
  report.config.prompt_id = prompt_id;
  report.config.strict = cfg.strict;
  if (cfg.label) {
    report.condition = *cfg.label;
  } else {
    report.condition = (prompt_id.empty() ? "unknown-prompt" : prompt_id) + "/" + report.config.approach;
    if (cfg.approach == Approach::kToken) report.condition += "/" + report.config.scope;
  }

  auto& c = report.corpus;
  c.n_total = results.size();
  double kl_sum = 0, bd_sum = 0;
  std::size_t kl_n = 0, bd_n = 0;
  std::vector<const UtteranceResult*> with_dist;
  std::map<std::string, std::size_t> pred_labels, gt_labels;
  for (const auto& r : results) {
    if (r.excluded) {
      ++c.n_excluded;
      continue;
    }
    ++c.n_evaluated;
    if (r.kl) {
      kl_sum += *r.kl;
      ++kl_n;
    }
    if (r.bd) {
      if (std::isinf(*r.bd)) {
        ++c.n_bd_infinite;
      } else {
        bd_sum += *r.bd;
        ++bd_n;
      }
    }
    if (r.predicted && r.ground_truth) with_dist.push_back(&r);
    if (!r.majority_label) {
      ++c.n_no_majority;
    } else if (r.predicted_label) {
      pred_labels[r.utterance_id] = *set.index_of(*r.predicted_label);
      gt_labels[r.utterance_id] = *set.index_of(*r.majority_label);
    }
  }
  c.exclusion_rate = static_cast<double>(c.n_excluded) / static_cast<double>(c.n_total);
  if (kl_n) c.mean_kl = kl_sum / static_cast<double>(kl_n);
  if (bd_n) c.mean_bd = bd_sum / static_cast<double>(bd_n);

  const auto n = static_cast<Eigen::Index>(set.size());
  if (with_dist.size() >= 2) {
    Eigen::MatrixXd y(n, static_cast<Eigen::Index>(with_dist.size()));
    Eigen::MatrixXd y_hat(n, y.cols());
    for (std::size_t u = 0; u < with_dist.size(); ++u) {
      y.col(static_cast<Eigen::Index>(u)) = Eigen::Map<const Eigen::VectorXd>(with_dist[u]->ground_truth->data(), n);
      y_hat.col(static_cast<Eigen::Index>(u)) = Eigen::Map<const Eigen::VectorXd>(with_dist[u]->predicted->data(), n);
    }
    try {
      c.r2 = r2_score(y, y_hat);
    } catch (const UndefinedMetricError&) {
    }
    const Eigen::VectorXd per_class = r2_per_class(y, y_hat);
    for (Eigen::Index k = 0; k < n; ++k)
      c.r2_per_class.push_back(std::isnan(per_class(k)) ? std::nullopt : std::optional<double>(per_class(k)));
  }
  if (!gt_labels.empty()) {
    const auto scores = accuracy_f1(pred_labels, gt_labels, set.size(), cfg.metrics);
    c.accuracy = scores.accuracy;
    c.f1 = scores.f1;
    c.f1_per_class = scores.per_class_f1;
    c.n_single_label = scores.n;
  }

  report.per_utterance = std::move(results);
  if (cfg.output) io::write_report(report, *cfg.output);
  return report;
}

}  // namespace ambiser
