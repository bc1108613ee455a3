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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ambiser/emotion_set.hpp"

namespace ambiser {

enum class PromptKind { kAmbiguous, kSingle };

enum class PromptComponent { kDistributionPrediction, kLogicalReasoning, kOutputConstraints, kSingleLabel };

/// How the {emotion_list} placeholder is spelled out.
enum class ListStyle {
  kProse,      // "anger, happiness, sadness, and neutral"; two items: "a and b"
  kBracketed,  // "[Happiness, Sadness, Neutral, Angry]"
};

std::string_view to_string(PromptKind k);

struct PromptTemplate {
  std::string prompt_id;
  PromptKind kind = PromptKind::kAmbiguous;
  std::string text;  // contains "{emotion_list}"
  std::set<PromptComponent> components;
  ListStyle list_style = ListStyle::kProse;
  /// Classes named in this order first; remaining set classes follow in set
  /// order.
  std::vector<std::string> display_order;
  /// Per-class wording overrides (class name -> surface form).
  std::map<std::string, std::string> surface_forms;
};

inline constexpr std::string_view kEmotionListPlaceholder = "{emotion_list}";

/// Substitutes the emotion list. Throws StructuralError when the template
/// has no placeholder or breaks its kind's component requirements.
std::string render(const PromptTemplate& t, const EmotionSet& set);

/// The distribution prompt ("paper-ambiguous-v1") and the single-label
/// prompt ("paper-single-v1").
const std::vector<PromptTemplate>& builtin_templates();

const PromptTemplate* find_template(std::string_view prompt_id);

}  // namespace ambiser
