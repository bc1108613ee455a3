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

#include "ambiser/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "ambiser/errors.hpp"
#include "ambiser/trace_io.hpp"

namespace ambiser::synth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Stream : std::uint64_t { kAnnotations = 1, kTraces = 2, kResponses = 3 };

const std::string kMarker = "\xE2\x96\x81";

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// Stable stand-in vocabulary id (FNV-1a) for tokens outside the token map.
std::int64_t placeholder_token_id(std::string_view token) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : token) h = (h ^ c) * 1099511628211ULL;
  return 10'000 + static_cast<std::int64_t>(h % 20'000);
}

// Label index drawn from a categorical distribution.
std::size_t draw(Rng& rng, const Eigen::VectorXd& p) {
  const double x = rng.uniform() * p.sum();
  double acc = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    if (x < acc) return static_cast<std::size_t>(i);
  }
  for (Eigen::Index i = p.size() - 1; i >= 0; --i)
    if (p(i) > 0) return static_cast<std::size_t>(i);
  return 0;
}

}  // namespace

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::below(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t utterance) {
  return splitmix64(splitmix64(seed) ^ splitmix64((stream << 48) ^ utterance));
}

void SynthSpec::validate() const {
  if (n_utterances == 0) throw StructuralError("synth: n_utterances must be positive");
  if (!(noise_level >= 0)) throw StructuralError("synth: noise_level must be nonnegative");
  if (!(malformed_rate >= 0 && malformed_rate <= 1))
    throw StructuralError("synth: malformed rate must lie in [0, 1]");
  if (!(multi_label_rate >= 0 && multi_label_rate <= 1))
    throw StructuralError("synth: multi_label_rate must lie in [0, 1]");
  if (n_annotators == 0) throw StructuralError("synth: n_annotators must be positive");
  for (const auto& t : targets) {
    if (!t.is_valid()) throw StructuralError("synth: target distributions must be valid");
    if (t.size() != static_cast<Eigen::Index>(emotion_set().size()))
      throw StructuralError("synth: target size does not match the emotion set");
  }
}

std::string utterance_id(std::size_t u) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth-%06zu", u);
  return buf;
}

AnnotationRecord generate_annotations(const SynthSpec& spec, std::size_t u) {
  Rng rng(derive_seed(spec.seed, kAnnotations, u));
  const auto& set = spec.emotion_set();
  const auto n = static_cast<Eigen::Index>(set.size());

  Eigen::VectorXd latent(n);
  const bool derived = spec.targets.empty();
  if (derived) {
    // Dirichlet(1, ..., 1) via normalized exponentials.
    for (Eigen::Index i = 0; i < n; ++i) {
      double x = rng.uniform();
      while (x <= 0) x = rng.uniform();
      latent(i) = -std::log(x);
    }
    latent /= latent.sum();
  } else {
    latent = spec.targets[u % spec.targets.size()].probs();
  }

  AnnotationRecord rec;
  rec.utterance.utterance_id = utterance_id(u);
  for (std::size_t a = 0; a < spec.n_annotators; ++a) {
    LabelSet labels{set.name(draw(rng, latent))};
    if (derived && rng.uniform() < spec.multi_label_rate) {
      Eigen::VectorXd rest = latent;
      rest(static_cast<Eigen::Index>(*set.index_of(labels.front()))) = 0;
      if (rest.sum() > 0) labels.push_back(set.name(draw(rng, rest)));
    }
    rec.annotator_labels.push_back(std::move(labels));
  }
  return rec;
}

EmotionDistribution target(const SynthSpec& spec, std::size_t u) {
  if (!spec.targets.empty()) return spec.targets[u % spec.targets.size()];
  return build_distribution(generate_annotations(spec, u), spec.emotion_set());
}

LogitTrace generate_trace(const SynthSpec& spec, std::size_t u) {
  const auto& map = spec.token_map;
  const auto& set = map.set();
  const Eigen::VectorXd t = target(spec, u).probs();
  Rng rng(derive_seed(spec.seed, kTraces, u));

  // Token sequence shaped like "Anger: 65%, Happiness: 0%, ...".
  std::vector<std::string> tokens;
  for (std::size_t n = 0; n < set.size(); ++n) {
    const auto& pieces = map.pieces(n);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      std::string piece = k == 0 ? capitalize(pieces[k].text) : pieces[k].text;
      tokens.push_back(n > 0 && k == 0 ? kMarker + piece : piece);
    }
    tokens.emplace_back(":");
    const auto percent = std::to_string(std::lround(100.0 * t(static_cast<Eigen::Index>(n))));
    for (std::size_t d = 0; d < percent.size(); ++d)
      tokens.push_back(d == 0 ? kMarker + percent.substr(0, 1) : percent.substr(d, 1));
    tokens.emplace_back("%");
    if (n + 1 < set.size()) tokens.emplace_back(",");
  }
  const std::size_t steps = tokens.size();
  const auto classes = static_cast<Eigen::Index>(set.size());

  // Per-step emotion values: the target times a zero-mean wobble shared by
  // all classes, so every step vector is proportional to the target.
  const double scale = 5.0 + 10.0 * rng.uniform();
  Eigen::VectorXd w(static_cast<Eigen::Index>(steps));
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = 2.0 * rng.uniform() - 1.0;
  w.array() -= w.mean();
  const Eigen::MatrixXd value = t * (Eigen::VectorXd::Ones(w.size()) + 0.5 * w).transpose();

  LogitTrace trace;
  trace.utterance.utterance_id = utterance_id(u);
  trace.prompt_id = spec.prompt_id;
  for (std::size_t j = 0; j < steps; ++j) {
    LogitStep step;
    step.index = static_cast<int>(j) + 1;
    step.token_text = tokens[j];
    step.token_id = placeholder_token_id(tokens[j]);
    const auto bare = to_lower(strip_whitespace_marker(tokens[j]));
    for (const auto& tok : map.flat_tokens())
      if (to_lower(tok.text) == bare) step.token_id = tok.id;
    step.subword_logits = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.flat_size()));
    for (Eigen::Index n = 0; n < classes; ++n) {
      const auto k = static_cast<Eigen::Index>(map.pieces(static_cast<std::size_t>(n)).size());
      const auto off = static_cast<Eigen::Index>(map.offset(static_cast<std::size_t>(n)));
      const bool exact_zero = t(n) == 0 && spec.noise_level == 0;
      if (exact_zero) continue;
      const double base = scale * (value(n, static_cast<Eigen::Index>(j)) +
                                   spec.noise_level * rng.normal());
      // Zero-sum jitter across subwords so the subword mean is exercised.
      Eigen::VectorXd jitter(k);
      for (Eigen::Index i = 0; i < k; ++i) jitter(i) = rng.uniform();
      jitter.array() -= jitter.mean();
      step.subword_logits.segment(off, k) = (base + (0.3 * scale * t(n)) * jitter.array()).matrix();
    }
    trace.steps.push_back(std::move(step));
  }
  for (const auto& tok : tokens) {
    if (tok.rfind(kMarker, 0) == 0) trace.generated_text += " " + tok.substr(kMarker.size());
    else trace.generated_text += tok;
  }
  return trace;
}

TextResponse generate_response(const SynthSpec& spec, std::size_t u) {
  const auto& set = spec.emotion_set();
  Rng rng(derive_seed(spec.seed, kResponses, u));
  TextResponse r;
  r.utterance.utterance_id = utterance_id(u);
  r.prompt_id = spec.prompt_id;

  if (spec.response_style == ResponseStyle::kMalformed && rng.uniform() < spec.malformed_rate) {
    switch (rng.below(3)) {
      case 0:
        r.text = "I'm sorry, I cannot determine the emotions in this audio.";
        break;
      case 1: {
        std::string s;
        for (std::size_t n = 0; n < set.size(); ++n)
          s += (n ? ", " : "") + capitalize(set.name(n)) + ": 0%";
        r.text = s;
        break;
      }
      default: {
        std::string s;
        for (std::size_t n = 0; n < set.size(); ++n)
          s += (n ? ", " : "") + capitalize(set.name(n)) + (n == 0 ? ": -20%" : ": 40%");
        r.text = s;
        break;
      }
    }
    return r;
  }

  const std::string rendered = format_percentages(target(spec, u), set);
  if (spec.response_style != ResponseStyle::kShuffled) {
    r.text = rendered;
    return r;
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto comma = rendered.find(", ", start);
    parts.push_back(rendered.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 2;
  }
  for (std::size_t i = parts.size(); i > 1; --i) std::swap(parts[i - 1], parts[rng.below(i)]);
  for (std::size_t i = 0; i < parts.size(); ++i) r.text += (i ? ", " : "") + parts[i];
  return r;
}

SynthSpec spec_from_json(const json& j) {
  SynthSpec s;
  try {
    s.seed = j.value("seed", std::uint64_t{0});
    s.n_utterances = j.value("n_utterances", std::size_t{100});
    s.noise_level = j.value("noise_level", 0.0);
    s.n_annotators = j.value("n_annotators", std::size_t{3});
    s.multi_label_rate = j.value("multi_label_rate", 0.15);
    s.corpus_id = j.value("corpus_id", std::string("synth"));
    s.prompt_id = j.value("prompt_id", std::string("paper-ambiguous-v1"));
    EmotionSet set;
    if (j.contains("emotion_set")) set = EmotionSet(j["emotion_set"].get<std::vector<std::string>>());
    s.token_map = j.contains("token_map") ? io::token_map_from_json(j["token_map"], set)
                                          : EmotionTokenMap::example(set);
    if (auto it = j.find("response_style"); it != j.end()) {
      if (it->is_string()) {
        const auto style = it->get<std::string>();
        if (style == "clean") s.response_style = ResponseStyle::kClean;
        else if (style == "shuffled") s.response_style = ResponseStyle::kShuffled;
        else throw InputError("synth: unknown response_style '" + style + "'");
      } else if (it->is_object() && it->contains("malformed")) {
        s.response_style = ResponseStyle::kMalformed;
        s.malformed_rate = (*it)["malformed"].get<double>();
      } else {
        throw InputError("synth: response_style must be \"clean\", \"shuffled\" or {\"malformed\": rate}");
      }
    }
    if (auto it = j.find("targets"); it != j.end()) {
      for (const auto& t : *it) {
        auto v = t.get<std::vector<double>>();
        auto d = make_distribution(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())),
                                   set);
        if (!d.is_valid()) throw InputError("synth: target is not a valid distribution");
        s.targets.push_back(std::move(d));
      }
    }
    s.validate();
  } catch (const json::exception& e) {
    throw InputError(std::string("synth spec: ") + e.what());
  } catch (const StructuralError& e) {
    throw InputError(std::string("synth spec: ") + e.what());
  }
  return s;
}

json to_json(const SynthSpec& s) {
  json j = {{"seed", s.seed},
            {"n_utterances", s.n_utterances},
            {"noise_level", s.noise_level},
            {"n_annotators", s.n_annotators},
            {"multi_label_rate", s.multi_label_rate},
            {"corpus_id", s.corpus_id},
            {"prompt_id", s.prompt_id},
            {"emotion_set", s.emotion_set().classes()},
            {"token_map", io::to_json(s.token_map)}};
  switch (s.response_style) {
    case ResponseStyle::kClean: j["response_style"] = "clean"; break;
    case ResponseStyle::kShuffled: j["response_style"] = "shuffled"; break;
    case ResponseStyle::kMalformed: j["response_style"] = {{"malformed", s.malformed_rate}}; break;
  }
  if (!s.targets.empty()) {
    json targets = json::array();
    for (const auto& t : s.targets)
      targets.push_back(std::vector<double>(t.probs().data(), t.probs().data() + t.size()));
    j["targets"] = std::move(targets);
  }
  return j;
}

fs::path write_corpus(const SynthSpec& spec, const fs::path& dir) {
  spec.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create '" + dir.string() + "': " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  auto annotations = open("annotations.csv");
  auto responses = open("responses.jsonl");
  auto traces = open("traces.jsonl");
  auto targets = open("targets.jsonl");
  io::AnnotationWriter ann_writer(annotations);
  io::ResponseWriter resp_writer(responses);
  io::TraceWriter trace_writer(traces, spec.token_map);

  io::CorpusManifest m;
  m.corpus_id = spec.corpus_id;
  m.emotion_set = spec.emotion_set();
  m.token_map = spec.token_map;
  m.annotations = "annotations.csv";
  m.responses = {"responses.jsonl"};
  m.traces = {"traces.jsonl"};

  for (std::size_t u = 0; u < spec.n_utterances; ++u) {
    const auto rec = generate_annotations(spec, u);
    ann_writer.write(rec);
    resp_writer.write(generate_response(spec, u));
    trace_writer.write(generate_trace(spec, u));
    const auto t = target(spec, u);
    targets << json{{"utterance_id", utterance_id(u)},
                    {"target", std::vector<double>(t.probs().data(), t.probs().data() + t.size())}}
                   .dump()
            << '\n';
    m.utterances.push_back(rec.utterance);
  }
  for (auto* out : {&annotations, &responses, &traces, &targets}) {
    out->flush();
    if (!*out) throw InputError("write failed in '" + dir.string() + "'");
  }
  const auto manifest_path = dir / "manifest.json";
  io::write_file_atomic(manifest_path, io::to_json(m).dump(2) + "\n");
  return manifest_path;
}

}  // namespace ambiser::synth
