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

#include "ambiser/ground_truth.hpp"

using namespace ambiser;

namespace {

AnnotationRecord record(std::vector<LabelSet> labels) {
  return AnnotationRecord{{"u1", std::nullopt}, std::move(labels)};
}

// Mass accounting by brute force: enumerate every (annotator, label) pair
// and add 1 / (M * |labels|) with long double accumulation.
std::vector<long double> mass_oracle(const AnnotationRecord& rec, const EmotionSet& set) {
  std::vector<long double> mass(set.size(), 0.0L);
  const long double m = static_cast<long double>(rec.annotator_labels.size());
  for (const auto& labels : rec.annotator_labels)
    for (const auto& l : labels) mass[*set.index_of(l)] += 1.0L / (m * labels.size());
  return mass;
}

}  // namespace

TEST_CASE("build_distribution examples") {
  EmotionSet set;
  auto d = build_distribution(record({{"anger"}, {"anger"}, {"sadness"}}), set);
  CHECK(d[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(d[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  d = build_distribution(record({{"happiness"}, {"happiness"}, {"happiness"}}), set);
  CHECK(d[1] == 1.0);
  CHECK(d.probs().sum() == 1.0);

  const auto multi = record({{"anger", "sadness"}, {"anger"}, {"neutral"}});
  d = build_distribution(multi, set);
  const auto oracle = mass_oracle(multi, set);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d[i] - static_cast<double>(oracle[i])) < 1e-15);
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == doctest::Approx(1.0 / 3.0));
  CHECK(d[3] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("build_distribution errors") {
  EmotionSet set;
  CHECK_THROWS_AS(build_distribution(record({{"anger"}, {}}), set), StructuralError);
  CHECK_THROWS_AS(build_distribution(record({}), set), StructuralError);
  CHECK_THROWS_AS(build_distribution(record({{"frustration"}}), set), StructuralError);
}

TEST_CASE("majority_label") {
  EmotionSet set;
  CHECK(majority_label(record({{"anger"}, {"anger"}, {"sadness"}}), set) == "anger");
  CHECK_FALSE(majority_label(record({{"anger"}, {"sadness"}, {"neutral"}}), set));
  // sadness 2, anger 1, neutral 1
  CHECK(majority_label(record({{"anger", "sadness"}, {"sadness"}, {"neutral"}}), set) == "sadness");
  CHECK_FALSE(majority_label(record({{"anger", "sadness"}}), set));
}

TEST_CASE("ground truth properties over random records") {
  EmotionSet set;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng() % 5;
    std::vector<LabelSet> labels(m);
    for (auto& ls : labels) {
      const std::size_t k = 1 + rng() % 2;
      for (std::size_t i = 0; i < k; ++i) ls.push_back(set.name(rng() % 4));
    }
    const auto rec = record(labels);
    const auto d = build_distribution(rec, set);
    REQUIRE(d.is_valid());
    CHECK(std::abs(d.probs().sum() - 1.0) <= 1e-12);

    auto shuffled = labels;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto d2 = build_distribution(record(shuffled), set);
    const auto maj = majority_label(rec, set);
    CHECK(majority_label(record(shuffled), set) == maj);
    CHECK(d.probs() == d2.probs());

    bool all_single = std::all_of(labels.begin(), labels.end(), [&](const LabelSet& ls) {
      return std::count(ls.begin(), ls.end(), ls.front()) == static_cast<long>(ls.size());
    });
    if (all_single && maj) CHECK(argmax_label(d, set) == *maj);
  }
}

TEST_CASE("unanimous singleton labels give one-hot and majority") {
  EmotionSet set;
  for (const auto& name : set.classes()) {
    const auto rec = record({{name}, {name}, {name}});
    const auto d = build_distribution(rec, set);
    CHECK(d[static_cast<Eigen::Index>(*set.index_of(name))] == 1.0);
    CHECK(majority_label(rec, set) == name);
  }
}
