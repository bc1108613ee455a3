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

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ambiser/distribution.hpp"
#include "ambiser/errors.hpp"
#include "ambiser/ground_truth.hpp"
#include "ambiser/token_map.hpp"

namespace ambiser {

/// One generation step: the emitted token and the pre-sampling logits of
/// every emotion subword token, in EmotionTokenMap::flat_tokens() order.
struct LogitStep {
  int index = 0;  // 1-based position in the generated sequence
  std::string token_text;
  std::int64_t token_id = 0;
  Eigen::VectorXd subword_logits;

  bool operator==(const LogitStep& o) const {
    return index == o.index && token_text == o.token_text && token_id == o.token_id &&
           subword_logits.size() == o.subword_logits.size() &&
           subword_logits == o.subword_logits;
  }
};

struct LogitTrace {
  UtteranceRef utterance;
  std::string prompt_id;
  std::string generated_text;
  std::vector<LogitStep> steps;

  bool operator==(const LogitTrace&) const = default;
};

enum class AggregationScope { kAllTokens, kEmotionWordTokens };

enum class NormalizationPolicy {
  kPaperDivision,  // z / sum(z), invalid on negative or nonpositive mass
  kShiftMinZero,   // (z - min z) / sum(z - min z)
  kSoftmax,
};

std::string_view to_string(AggregationScope s);
std::optional<AggregationScope> parse_aggregation_scope(std::string_view s);
std::string_view to_string(NormalizationPolicy p);
std::optional<NormalizationPolicy> parse_normalization_policy(std::string_view s);

/// Drops a leading SentencePiece/BPE word marker (U+2581, U+0120) and
/// surrounding ASCII whitespace.
std::string strip_whitespace_marker(std::string_view token);

/// Per-class mean of the subword logits: z_j^n = (1/K_n) sum_k z_{j,k}^n.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> step_emotion_logits(
    const Eigen::MatrixBase<Derived>& subword_logits, const EmotionTokenMap& map) {
  using Scalar = typename Derived::Scalar;
  if (subword_logits.size() != static_cast<Eigen::Index>(map.flat_size()))
    throw StructuralError("step carries " + std::to_string(subword_logits.size()) +
                          " subword logits, token map declares " +
                          std::to_string(map.flat_size()));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z(static_cast<Eigen::Index>(map.num_classes()));
  for (std::size_t n = 0; n < map.num_classes(); ++n) {
    const auto k = static_cast<Eigen::Index>(map.pieces(n).size());
    z(static_cast<Eigen::Index>(n)) =
        subword_logits.segment(static_cast<Eigen::Index>(map.offset(n)), k).sum() / Scalar(k);
  }
  return z;
}

inline Eigen::VectorXd step_emotion_logits(const LogitStep& step, const EmotionTokenMap& map) {
  return step_emotion_logits(step.subword_logits, map);
}

/// Positions (0-based) of the steps that feed the sequence average.
///
/// All-tokens returns every step. Emotion-word-tokens returns the steps
/// covered by maximal runs of generated tokens spelling some class's subword
/// sequence (compared after marker stripping, case-insensitive); longest
/// match wins, scanning left to right. The result may be empty.
std::vector<std::size_t> select_steps(const LogitTrace& trace, const EmotionTokenMap& map,
                                      AggregationScope scope);

/// Mean over the selected steps of step_emotion_logits. nullopt when the
/// scope selects nothing (the no-emotion-tokens exclusion). Throws
/// StructuralError on a trace with no steps.
std::optional<Eigen::VectorXd> aggregate_trace(const LogitTrace& trace, const EmotionTokenMap& map,
                                               AggregationScope scope);

/// Converts aggregated logits into a distribution under `policy`.
template <typename Derived>
BasicEmotionDistribution<typename Derived::Scalar> logits_to_distribution(
    const Eigen::MatrixBase<Derived>& z, NormalizationPolicy policy) {
  using Scalar = typename Derived::Scalar;
  using Dist = BasicEmotionDistribution<Scalar>;
  using Vector = typename Dist::Vector;
  const auto n = z.size();
  if (n == 0) throw StructuralError("empty logit vector");
  if (!z.allFinite()) throw StructuralError("non-finite logit");

  switch (policy) {
    case NormalizationPolicy::kPaperDivision: {
      const Scalar denom = z.sum();
      if (!(denom > 0)) return Dist::invalid(InvalidReason::kZeroSum, n);
      if ((z.array() < 0).any()) return Dist::invalid(InvalidReason::kNegativeMass, n);
      return Dist::from_probabilities(Vector(z / denom));
    }
    case NormalizationPolicy::kShiftMinZero: {
      Vector shifted = z.array() - z.minCoeff();
      const Scalar denom = shifted.sum();
      if (!(denom > 0)) return Dist::from_probabilities(Vector::Constant(n, Scalar(1) / Scalar(n)));
      return Dist::from_probabilities(Vector(shifted / denom));
    }
    case NormalizationPolicy::kSoftmax: {
      Vector e = (z.array() - z.maxCoeff()).exp();
      return Dist::from_probabilities(Vector(e / e.sum()));
    }
  }
  throw StructuralError("unknown normalization policy");
}

}  // namespace ambiser
