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

#include "ambiser/prompts.hpp"

#include <algorithm>

#include "ambiser/errors.hpp"

namespace ambiser {

namespace {

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

void check_components(const PromptTemplate& t) {
  auto has = [&](PromptComponent c) { return t.components.count(c) > 0; };
  if (t.kind == PromptKind::kAmbiguous &&
      !(has(PromptComponent::kDistributionPrediction) && has(PromptComponent::kLogicalReasoning)))
    throw StructuralError("ambiguous prompt '" + t.prompt_id +
                          "' must declare distribution-prediction and logical-reasoning");
  if (t.kind == PromptKind::kSingle && !has(PromptComponent::kSingleLabel))
    throw StructuralError("single prompt '" + t.prompt_id + "' must declare single-label");
}

std::vector<PromptTemplate> make_builtins() {
  PromptTemplate ambiguous;
  ambiguous.prompt_id = "paper-ambiguous-v1";
  ambiguous.kind = PromptKind::kAmbiguous;
  ambiguous.text =
      "Provide the likelihood (in percentages) that this audio represents each of the following "
      "emotions: {emotion_list}. Use logical reasoning to determine the percentages, but do not "
      "include this reasoning in your response.";
  ambiguous.components = {PromptComponent::kDistributionPrediction, PromptComponent::kLogicalReasoning,
                          PromptComponent::kOutputConstraints};
  ambiguous.list_style = ListStyle::kProse;
  ambiguous.display_order = {"anger", "happiness", "sadness", "neutral"};

  PromptTemplate single;
  single.prompt_id = "paper-single-v1";
  single.kind = PromptKind::kSingle;
  single.text =
      "You are an expert in identifying emotions from speech. Predict the emotion of the audio "
      "from the choices {emotion_list}. Respond with only one of the emotion labels.";
  single.components = {PromptComponent::kSingleLabel};
  single.list_style = ListStyle::kBracketed;
  single.display_order = {"happiness", "sadness", "neutral", "anger"};
  single.surface_forms = {{"anger", "angry"}};

  return {ambiguous, single};
}

}  // namespace

std::string_view to_string(PromptKind k) {
  return k == PromptKind::kAmbiguous ? "ambiguous" : "single";
}

std::string render(const PromptTemplate& t, const EmotionSet& set) {
  check_components(t);
  const auto pos = t.text.find(kEmotionListPlaceholder);
  if (pos == std::string::npos)
    throw StructuralError("prompt '" + t.prompt_id + "' has no {emotion_list} placeholder");

  std::vector<std::string> order;
  for (const auto& name : t.display_order)
    if (set.index_of(name)) order.push_back(name);
  for (const auto& name : set.classes())
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);

  std::vector<std::string> words;
  for (const auto& name : order) {
    auto it = t.surface_forms.find(name);
    std::string word = it == t.surface_forms.end() ? name : it->second;
    words.push_back(t.list_style == ListStyle::kBracketed ? capitalize(word) : word);
  }

  std::string list;
  if (t.list_style == ListStyle::kBracketed) {
    list = "[";
    for (std::size_t i = 0; i < words.size(); ++i) list += (i ? ", " : "") + words[i];
    list += "]";
  } else if (words.size() == 2) {
    list = words[0] + " and " + words[1];
  } else {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) list += ", ";
      if (i + 1 == words.size()) list += "and ";
      list += words[i];
    }
  }

  std::string out = t.text;
  out.replace(pos, kEmotionListPlaceholder.size(), list);
  return out;
}

const std::vector<PromptTemplate>& builtin_templates() {
  static const std::vector<PromptTemplate> kTemplates = make_builtins();
  return kTemplates;
}

const PromptTemplate* find_template(std::string_view prompt_id) {
  for (const auto& t : builtin_templates())
    if (t.prompt_id == prompt_id) return &t;
  return nullptr;
}

}  // namespace ambiser
