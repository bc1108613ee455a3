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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "ambiser/errors.hpp"
#include "ambiser/prompts.hpp"

using namespace ambiser;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(AMBISER_TEST_DATA_DIR) + "/golden/" + name + ".txt", std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("builtin templates byte-match golden files") {
  const auto& all = builtin_templates();
  REQUIRE(all.size() == 2);
  for (const auto& t : all) CHECK(render(t, EmotionSet()) == golden(t.prompt_id));
}

TEST_CASE("builtin template contents") {
  const auto* amb = find_template("paper-ambiguous-v1");
  const auto* single = find_template("paper-single-v1");
  REQUIRE(amb);
  REQUIRE(single);
  CHECK_FALSE(find_template("nope"));
  const auto a = render(*amb, EmotionSet());
  const auto s = render(*single, EmotionSet());
  CHECK(a.find("Use logical reasoning to determine the percentages") != std::string::npos);
  CHECK(a.find("anger, happiness, sadness, and neutral") != std::string::npos);
  CHECK(a.ends_with("do not include this reasoning in your response."));
  CHECK(s.find("Predict the emotion of the audio from the choices") != std::string::npos);
  CHECK(s.find("[Happiness, Sadness, Neutral, Angry]") != std::string::npos);
  CHECK(amb->kind == PromptKind::kAmbiguous);
  CHECK(amb->components.count(PromptComponent::kDistributionPrediction));
  CHECK(amb->components.count(PromptComponent::kLogicalReasoning));
  CHECK(single->kind == PromptKind::kSingle);
  CHECK(single->components.count(PromptComponent::kSingleLabel));
}

TEST_CASE("render list joining") {
  PromptTemplate t{"t", PromptKind::kAmbiguous, "Classes: {emotion_list}.",
                   {PromptComponent::kDistributionPrediction, PromptComponent::kLogicalReasoning},
                   ListStyle::kProse, {}, {}};
  CHECK(render(t, EmotionSet({"calm", "fear"})) == "Classes: calm and fear.");
  CHECK(render(t, EmotionSet({"calm", "fear", "joy"})) == "Classes: calm, fear, and joy.");
  t.display_order = {"joy"};
  CHECK(render(t, EmotionSet({"calm", "fear", "joy"})) == "Classes: joy, calm, and fear.");
  t.list_style = ListStyle::kBracketed;
  t.surface_forms = {{"fear", "afraid"}};
  CHECK(render(t, EmotionSet({"calm", "fear", "joy"})) == "Classes: [Joy, Calm, Afraid].");

  t.text = "no placeholder";
  CHECK_THROWS_AS(render(t, EmotionSet()), StructuralError);
}

TEST_CASE("render is deterministic") {
  const auto* amb = find_template("paper-ambiguous-v1");
  CHECK(render(*amb, EmotionSet()) == render(*amb, EmotionSet()));
}
