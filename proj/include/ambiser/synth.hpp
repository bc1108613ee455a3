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

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ambiser/distribution.hpp"
#include "ambiser/ground_truth.hpp"
#include "ambiser/logit_aggregator.hpp"
#include "ambiser/response_parser.hpp"
#include "ambiser/token_map.hpp"

namespace ambiser::synth {

/// Seeded generator with platform-independent conversions (the std::
/// distributions are implementation-defined, so they are not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of one (stream, utterance) pair. Streams keep annotations, traces
/// and responses independent of each other and of the utterance count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t utterance);

enum class ResponseStyle { kClean, kShuffled, kMalformed };

struct SynthSpec {
  std::uint64_t seed = 0;
  std::size_t n_utterances = 100;
  /// Explicit targets, cycled over utterances. When empty, each utterance's
  /// target is the ground truth of its sampled annotations, so the planted
  /// distribution and the annotation-derived one coincide exactly.
  std::vector<EmotionDistribution> targets;
  double noise_level = 0;  // sigma, in probability units
  EmotionTokenMap token_map = EmotionTokenMap::example();
  ResponseStyle response_style = ResponseStyle::kClean;
  double malformed_rate = 0;
  std::size_t n_annotators = 3;
  /// Chance that an annotator picks two labels (annotation-derived targets).
  double multi_label_rate = 0.15;
  std::string corpus_id = "synth";
  std::string prompt_id = "paper-ambiguous-v1";

  const EmotionSet& emotion_set() const { return token_map.set(); }

  /// Throws StructuralError on out-of-range fields or mis-sized targets.
  void validate() const;
};

SynthSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthSpec& s);

std::string utterance_id(std::size_t u);

AnnotationRecord generate_annotations(const SynthSpec& spec, std::size_t u);

/// Planted distribution of utterance u.
EmotionDistribution target(const SynthSpec& spec, std::size_t u);

/// Trace whose all-tokens / paper-division image is target(spec, u) when
/// noise_level is 0. Zero target entries get exact zero logits.
LogitTrace generate_trace(const SynthSpec& spec, std::size_t u);

/// "Class: P%" rendering of the target, shuffled or malformed per style.
TextResponse generate_response(const SynthSpec& spec, std::size_t u);

/// Writes manifest.json, annotations.csv, responses.jsonl, traces.jsonl and
/// targets.jsonl into `dir` (created if needed). Returns the manifest path.
std::filesystem::path write_corpus(const SynthSpec& spec, const std::filesystem::path& dir);

}  // namespace ambiser::synth
