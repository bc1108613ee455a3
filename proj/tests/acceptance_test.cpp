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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "ambiser/metrics.hpp"
#include "ambiser/pipeline.hpp"
#include "ambiser/prompts.hpp"
#include "ambiser/synth.hpp"
#include "test_util.hpp"

using namespace ambiser;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path oracle_corpus(const std::string& name, std::size_t n, std::uint64_t seed,
                       double malformed = 0) {
  synth::SynthSpec s;
  s.seed = seed;
  s.n_utterances = n;
  if (malformed > 0) {
    s.response_style = synth::ResponseStyle::kMalformed;
    s.malformed_rate = malformed;
  }
  return synth::write_corpus(s, ambiser::testing::scratch_dir(name));
}

Outcome token_closure() {
  const auto manifest = oracle_corpus("acc-token", 1000, 1);
  RunConfig cfg;
  cfg.manifest = manifest;
  cfg.approach = Approach::kToken;
  cfg.scope = AggregationScope::kAllTokens;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_eval(cfg);
  const double secs = seconds_since(t0);
  const auto& c = r.corpus;
  const bool pass = c.n_evaluated == 1000 && *c.mean_kl < 1e-9 && *c.mean_bd < 1e-9 &&
                    *c.r2 > 1 - 1e-9 && secs < 10.0;
  return {pass, "n=1000 KL=" + fmt("%.3g", *c.mean_kl) + " BD=" + fmt("%.3g", *c.mean_bd) +
                    " 1-R2=" + fmt("%.3g", 1 - *c.r2) + " time=" + fmt("%.2fs", secs)};
}

Outcome text_closure() {
  const auto manifest = oracle_corpus("acc-text", 1000, 2);
  RunConfig cfg;
  cfg.manifest = manifest;
  cfg.approach = Approach::kText;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_eval(cfg);
  const double secs = seconds_since(t0);
  const auto& c = r.corpus;
  const bool pass = c.n_evaluated == 1000 && *c.r2 > 1 - 1e-6 && secs < 5.0;
  return {pass, "n=1000 1-R2=" + fmt("%.3g", 1 - *c.r2) + " time=" + fmt("%.2fs", secs)};
}

Outcome subword_step_equivalence() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const EmotionSet set;
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<std::vector<SubwordToken>> pieces(set.size());
    std::int64_t id = 0;
    for (std::size_t n = 0; n < set.size(); ++n)
      for (std::size_t k = 0, kn = 1 + rng() % 3; k < kn; ++k)
        pieces[n].push_back({"t" + std::to_string(id), id++});
    const EmotionTokenMap map(set, pieces);
    LogitTrace t{{"u", std::nullopt}, "p", "", {}};
    const int steps = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < steps; ++j) {
      Eigen::VectorXd flat(static_cast<Eigen::Index>(map.flat_size()));
      for (auto& x : flat) x = u(rng);
      t.steps.push_back({j + 1, "x", 0, flat});
    }
    const auto z = *aggregate_trace(t, map, AggregationScope::kAllTokens);
    for (std::size_t n = 0; n < set.size(); ++n) {
      long double flat_sum = 0;
      for (const auto& s : t.steps)
        for (std::size_t k = 0; k < pieces[n].size(); ++k)
          flat_sum += s.subword_logits(static_cast<Eigen::Index>(map.offset(n) + k));
      const long double oracle = flat_sum / (static_cast<long double>(steps) * pieces[n].size());
      worst = std::max(worst, std::abs(z(static_cast<Eigen::Index>(n)) - static_cast<double>(oracle)));
    }
  }
  return {worst <= 1e-12, "10000 traces, max deviation " + fmt("%.3g", worst)};
}

Outcome relative_improvement() {
  const auto dir = ambiser::testing::scratch_dir("acc-compare");
  auto fixture = [&](const std::string& name, double kl, double bd) {
    EvalReport r;
    r.condition = name;
    r.config.approach = name;
    r.corpus.mean_kl = kl;
    r.corpus.mean_bd = bd;
    r.corpus.n_total = r.corpus.n_evaluated = 1;
    r.per_utterance = {{"u1", false, "", kl, bd, std::nullopt, std::nullopt, std::nullopt, std::nullopt}};
    io::write_report(r, dir / (name + ".json"));
    return io::read_report(dir / (name + ".json"));
  };
  const auto t = compare_reports({fixture("text", 2.05, 0.51), fixture("token", 0.99, 0.47)});
  const auto& imp = t.improvements.at(0);
  const bool pass = std::abs(*imp.kl - 51.71) <= 0.01 && std::abs(*imp.bd - 7.84) <= 0.01;
  return {pass, "KL " + fmt("%.4f%%", *imp.kl) + " BD " + fmt("%.4f%%", *imp.bd)};
}

Outcome exclusion_rate_reproduction() {
  const auto manifest = oracle_corpus("acc-exclusion", 10000, 2021, 0.021);
  RunConfig cfg;
  cfg.manifest = manifest;
  cfg.approach = Approach::kText;
  cfg.workers = 4;
  const auto r = run_eval(cfg);
  const double rate = r.corpus.exclusion_rate;
  return {rate >= 0.018 && rate <= 0.024,
          "n=10000 exclusion_rate=" + fmt("%.4f", rate) + " excluded=" + std::to_string(r.corpus.n_excluded)};
}

Outcome metric_identities() {
  std::mt19937_64 rng(41);
  double worst_kl = 0, worst_bd = 0;
  bool symmetric = true, nonneg = true;
  std::vector<DistributionPair> perfect, mean_pred;
  for (int i = 0; i < 1000; ++i) {
    const auto p = ambiser::testing::random_distribution(rng);
    const auto q = ambiser::testing::random_distribution(rng);
    worst_kl = std::max(worst_kl, kl_divergence(p, p));
    worst_bd = std::max(worst_bd, bhattacharyya(p, p));
    symmetric = symmetric && bhattacharyya(p, q) == bhattacharyya(q, p);
    nonneg = nonneg && kl_divergence(p, q) >= 0 && kl_divergence(q, p) >= 0;
    perfect.emplace_back(p, p);
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  for (const auto& [p, q] : perfect) mean += p.probs();
  mean /= static_cast<double>(perfect.size());
  // The flattened mean is 1/N for any set of distributions, so the mean
  // predictor is the uniform distribution.
  const double ybar = mean.mean();
  for (const auto& [p, q] : perfect)
    mean_pred.emplace_back(p, make_distribution(Eigen::VectorXd::Constant(4, ybar), EmotionSet()));
  const double r2_perfect = r2_score(perfect);
  const double r2_mean = r2_score(mean_pred);
  const bool pass = worst_kl <= 1e-9 && worst_bd <= 1e-9 && symmetric && nonneg &&
                    std::abs(r2_perfect - 1) <= 1e-9 && std::abs(r2_mean) <= 1e-9;
  return {pass, "max KL(p,p)=" + fmt("%.3g", worst_kl) + " max BD(p,p)=" + fmt("%.3g", worst_bd) +
                    (symmetric ? " BD symmetric" : " BD asymmetric") + " R2 perfect=" +
                    fmt("%.12g", r2_perfect) + " R2 mean=" + fmt("%.3g", r2_mean)};
}

Outcome worked_parse_example() {
  const EmotionSet set;
  const auto out = parse_response(
      {{"u", std::nullopt}, "paper-ambiguous-v1", "Happiness: 0%, Neutral: 0%, Sadness: 35%, Anger: 65%"}, set);
  if (!out.distribution.is_valid()) return {false, "invalid distribution"};
  Eigen::VectorXd expected(4);
  expected << 0.65, 0, 0, 0.35;
  const double dev = (out.distribution.probs() - expected).cwiseAbs().maxCoeff();
  const auto label = argmax_label(out.distribution, set);
  std::ostringstream s;
  s << "[" << out.distribution[0] << ", " << out.distribution[1] << ", " << out.distribution[2]
    << ", " << out.distribution[3] << "] argmax " << label;
  return {dev <= 1e-12 && label == "anger", s.str()};
}

Outcome prompt_fidelity() {
  std::string detail;
  bool pass = builtin_templates().size() == 2;
  for (const auto& t : builtin_templates()) {
    const auto golden = read_text(fs::path(AMBISER_TEST_DATA_DIR) / "golden" / (t.prompt_id + ".txt"));
    const bool same = !golden.empty() && render(t, EmotionSet()) == golden;
    pass = pass && same;
    detail += t.prompt_id + (same ? " match " : " MISMATCH ");
  }
  return {pass, detail};
}

Outcome determinism() {
  const auto manifest = oracle_corpus("acc-determinism", 1000, 3, 0.05);
  const auto dir = manifest.parent_path();
  std::string detail;
  bool pass = true;
  for (auto approach : {Approach::kToken, Approach::kText}) {
    RunConfig cfg;
    cfg.manifest = manifest;
    cfg.approach = approach;
    cfg.workers = 1;
    io::write_report(run_eval(cfg), dir / "serial.json");
    cfg.workers = 8;
    io::write_report(run_eval(cfg), dir / "parallel.json");
    const bool same = read_text(dir / "serial.json") == read_text(dir / "parallel.json");
    pass = pass && same;
    detail += std::string(to_string(approach)) + (same ? " identical " : " DIFFERENT ");
  }
  return {pass, detail + "(workers 1 vs 8)"};
}

Outcome ground_truth_properties() {
  const EmotionSet set;
  std::mt19937_64 rng(53);
  double worst_sum = 0;
  bool invariant = true, one_hot = true;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 1 + rng() % 6;
    AnnotationRecord rec{{"u" + std::to_string(i), std::nullopt}, {}};
    for (std::size_t a = 0; a < m; ++a) {
      LabelSet labels;
      for (std::size_t k = 0, kn = 1 + rng() % 3; k < kn; ++k) labels.push_back(set.name(rng() % 4));
      rec.annotator_labels.push_back(labels);
    }
    const auto d = build_distribution(rec, set);
    worst_sum = std::max(worst_sum, std::abs(d.probs().sum() - 1.0));
    auto shuffled = rec;
    std::shuffle(shuffled.annotator_labels.begin(), shuffled.annotator_labels.end(), rng);
    invariant = invariant && build_distribution(shuffled, set).probs() == d.probs();

    const std::size_t cls = rng() % 4;
    const AnnotationRecord unanimous{{"v", std::nullopt},
                                     std::vector<LabelSet>(m, LabelSet{set.name(cls)})};
    const auto u = build_distribution(unanimous, set);
    one_hot = one_hot && u[static_cast<Eigen::Index>(cls)] == 1.0 && u.probs().sum() == 1.0;
  }
  return {worst_sum <= 1e-12 && invariant && one_hot,
          "1000 records, max |sum-1|=" + fmt("%.3g", worst_sum) +
              (invariant ? " permutation-invariant" : " NOT permutation-invariant") +
              (one_hot ? " unanimous one-hot" : " unanimous NOT one-hot")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle closure, token path", token_closure},
      {"oracle closure, text path", text_closure},
      {"subword/step averaging equals flat summation", subword_step_equivalence},
      {"relative improvement arithmetic", relative_improvement},
      {"exclusion rate reproduction", exclusion_rate_reproduction},
      {"metric identities", metric_identities},
      {"worked parse example", worked_parse_example},
      {"prompt fidelity", prompt_fidelity},
      {"serial vs parallel determinism", determinism},
      {"ground-truth properties", ground_truth_properties},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
