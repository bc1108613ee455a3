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

#include <algorithm>
#include <random>

#include "ambiser/response_parser.hpp"
#include "test_util.hpp"

using namespace ambiser;

namespace {

TextResponse response(std::string text) { return TextResponse{{"u1", std::nullopt}, "p", std::move(text)}; }

}  // namespace

TEST_CASE("parse_response on the worked example") {
  EmotionSet set;
  auto out = parse_response(response("Happiness: 0%, Neutral: 0%, Sadness: 35%, Anger: 65%"), set);
  REQUIRE(out.distribution.is_valid());
  CHECK_FALSE(out.normalized);
  CHECK(out.distribution[0] == doctest::Approx(0.65).epsilon(1e-15));
  CHECK(out.distribution[1] == 0.0);
  CHECK(out.distribution[2] == 0.0);
  CHECK(out.distribution[3] == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(out.raw_percentages.at("anger") == 65.0);
  CHECK(argmax_label(out.distribution, set) == "anger");
}

TEST_CASE("parse_response renormalizes partial answers") {
  EmotionSet set;
  auto out = parse_response(response("Anger: 50%, Sadness: 30%"), set);
  REQUIRE(out.distribution.is_valid());
  CHECK(out.normalized);
  CHECK(out.distribution[0] == doctest::Approx(0.625));
  CHECK(out.distribution[3] == doctest::Approx(0.375));
  CHECK(out.raw_percentages.size() == 2);
}

TEST_CASE("parse_response rounding tolerance") {
  EmotionSet set;
  CHECK_FALSE(parse_response(response("anger 33%, happiness 33%, neutral 34%, sadness 0%"), set).normalized);
  CHECK_FALSE(parse_response(response("anger 33.3%, happiness 33.3%, neutral 33.3%"), set).normalized);
  CHECK(parse_response(response("anger 33%, happiness 33%, neutral 33%"), set).normalized);
}

TEST_CASE("parse_response failures") {
  EmotionSet set;
  CHECK(parse_response(response("The speaker sounds upset."), set).distribution.reason() ==
        InvalidReason::kUnparseable);
  CHECK(parse_response(response(""), set).distribution.reason() == InvalidReason::kUnparseable);
  CHECK(parse_response(response("Anger: 0%, Sadness: 0%"), set).distribution.reason() ==
        InvalidReason::kZeroSum);
  CHECK(parse_response(response("Anger: -20%, Sadness: 40%"), set).distribution.reason() ==
        InvalidReason::kNegativeMass);
  // Neutral mentioned without a number is not a pair.
  CHECK(parse_response(response("It sounds neutral to me."), set).distribution.reason() ==
        InvalidReason::kUnparseable);
}

TEST_CASE("parse_response surface forms") {
  EmotionSet set;
  auto out = parse_response(response("ANGRY - 40%\nhappy=10\nSad: 50 %"), set);
  REQUIRE(out.distribution.is_valid());
  CHECK(out.distribution[0] == doctest::Approx(0.4));
  CHECK(out.distribution[1] == doctest::Approx(0.1));
  CHECK(out.distribution[3] == doctest::Approx(0.5));

  out = parse_response(response("**Anger**: 70%, Neutrality is about 30%"), set);
  CHECK(out.distribution[0] == doctest::Approx(0.7));
  CHECK(out.distribution[2] == doctest::Approx(0.3));

  // Last occurrence wins.
  out = parse_response(response("Anger: 90%, Sadness: 10%. Correction: Anger: 60%, Sadness: 40%"), set);
  CHECK(out.distribution[0] == doctest::Approx(0.6));

  // Numbers above 1000 (years, ids) are not read.
  out = parse_response(response("Anger 2024, Sadness: 100%"), set);
  CHECK(out.distribution[3] == 1.0);
  CHECK(out.raw_percentages.count("anger") == 0);

  // Values above 100 are fine before normalization.
  out = parse_response(response("Anger: 150, Sadness: 50"), set);
  CHECK(out.distribution[0] == doctest::Approx(0.75));
  CHECK(out.normalized);
}

TEST_CASE("require_all_classes option") {
  EmotionSet set;
  ParserOptions opts;
  opts.require_all_classes = true;
  auto out = parse_response(response("Anger: 50%, Sadness: 50%"), set, SynonymTable(set), opts);
  CHECK(out.distribution.reason() == InvalidReason::kMissingClasses);
}

TEST_CASE("parse_single_label") {
  EmotionSet set;
  CHECK(parse_single_label(response("Sadness"), set) == 3);
  CHECK(parse_single_label(response("The emotion is Angry."), set) == 0);
  CHECK_FALSE(parse_single_label(response(""), set));
  CHECK_FALSE(parse_single_label(response("Unhappy and sadly"), set));
  CHECK(parse_single_label(response("neutral, maybe sad"), set) == 2);
}

TEST_CASE("synonym table") {
  EmotionSet set;
  SynonymTable table(set);
  CHECK(table.lookup("Angry") == 0);
  CHECK(table.lookup("happy") == 1);
  CHECK(table.lookup("neutrality") == 2);
  CHECK(table.lookup("SAD") == 3);
  CHECK_FALSE(table.lookup("furious"));
  table.add("furious", 0);
  CHECK(table.lookup("Furious") == 0);
  CHECK_THROWS_AS(table.add("very angry", 0), StructuralError);
  CHECK_THROWS_AS(table.add("x", 9), StructuralError);
}

TEST_CASE("exclusion_rate") {
  EmotionSet set;
  std::vector<ParseOutcome> outcomes;
  for (int i = 0; i < 98; ++i) outcomes.push_back(parse_response(response("Anger: 100%"), set));
  for (int i = 0; i < 2; ++i) outcomes.push_back(parse_response(response("no idea"), set));
  CHECK(exclusion_rate(outcomes) == doctest::Approx(0.02));
  CHECK(exclusion_rate(std::span(outcomes).first(98)) == 0.0);
  CHECK(exclusion_rate(std::span(outcomes).last(2)) == 1.0);
  CHECK_THROWS_AS(exclusion_rate({}), std::invalid_argument);
}

TEST_CASE("round trip and order/case/whitespace invariance") {
  EmotionSet set;
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto d = ambiser::testing::random_distribution(rng);
    const std::string text = format_percentages(d, set, 4);
    auto out = parse_response(response(text), set);
    REQUIRE(out.distribution.is_valid());
    CHECK((out.distribution.probs() - d.probs()).cwiseAbs().maxCoeff() <= 1e-6);

    // Shuffle pairs, vary case and whitespace.
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      auto comma = text.find(", ", start);
      parts.push_back(text.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 2;
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    std::string variant;
    for (auto& p : parts) {
      if (rng() % 2) std::transform(p.begin(), p.end(), p.begin(), ::toupper);
      variant += p + (rng() % 2 ? " ,\n  " : ",");
    }
    auto out2 = parse_response(response(variant), set);
    REQUIRE(out2.distribution.is_valid());
    CHECK((out2.distribution.probs() - out.distribution.probs()).cwiseAbs().maxCoeff() == 0.0);
  }
}
