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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const auto log = fs::temp_directory_path() / "ambiser-cli-test.log";
  const std::string cmd = env + " \"" + std::string(AMBISER_CLI) + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream s;
  s << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("synth, validate, eval, compare") {
  const auto dir = ambiser::testing::scratch_dir("cli");
  const auto d = dir.string();
  auto r = run("synth --seed 5 --n 150 --malformed-rate 0.05 --out \"" + d + "/corpus\"");
  REQUIRE(r.code == 0);
  r = run("validate --manifest \"" + d + "/corpus/manifest.json\"");
  CHECK(r.code == 0);

  r = run("eval --manifest \"" + d + "/corpus/manifest.json\" --out \"" + d + "/token.json\"");
  REQUIRE(r.code == 0);
  r = run("eval --manifest \"" + d + "/corpus/manifest.json\" --approach text --out \"" + d + "/text.json\"");
  REQUIRE(r.code == 0);  // exclusions never change the exit code
  const auto text = json::parse(read_text(dir / "text.json"));
  CHECK(text.at("corpus").at("n_excluded").get<int>() > 0);
  const auto token = json::parse(read_text(dir / "token.json"));
  CHECK(token.at("corpus").at("mean_kl").get<double>() < 1e-9);
  CHECK(token.at("config").at("normalization") == "paper-division");

  r = run("eval --manifest \"" + d + "/corpus/manifest.json\" --workers 4 --out \"" + d + "/token4.json\"");
  REQUIRE(r.code == 0);
  CHECK(read_text(dir / "token.json") == read_text(dir / "token4.json"));

  r = run("compare \"" + d + "/text.json\" \"" + d + "/token.json\" --format json --out \"" + d + "/cmp.json\"");
  REQUIRE(r.code == 0);
  const auto cmp = json::parse(read_text(dir / "cmp.json"));
  CHECK(cmp.at("rows").size() == 2);
  CHECK(cmp.at("rows")[1].at("label") == "paper-ambiguous-v1/token/all-tokens");

  r = run("compare \"" + d + "/token.json\" \"" + d + "/token4.json\"");
  CHECK(r.code == 1);
  r = run("compare \"" + d + "/token.json\" \"" + d + "/token4.json\" --labels a,b");
  CHECK(r.code == 0);
}

TEST_CASE("flag, config file and environment precedence") {
  const auto dir = ambiser::testing::scratch_dir("cli-precedence");
  const auto d = dir.string();
  REQUIRE(run("synth --seed 1 --n 20 --out \"" + d + "/c\"").code == 0);
  std::ofstream(dir / "run.json") << R"({"approach": "text", "label": "from-config"})";

  REQUIRE(run("eval --manifest \"" + d + "/c/manifest.json\" --config \"" + d + "/run.json\" --out \"" + d + "/a.json\"").code == 0);
  auto a = json::parse(read_text(dir / "a.json"));
  CHECK(a.at("config").at("approach") == "text");
  CHECK(a.at("condition") == "from-config");

  REQUIRE(run("eval --manifest \"" + d + "/c/manifest.json\" --config \"" + d + "/run.json\" --approach token --label flag --out \"" + d + "/b.json\"").code == 0);
  auto b = json::parse(read_text(dir / "b.json"));
  CHECK(b.at("config").at("approach") == "token");
  CHECK(b.at("condition") == "flag");

  CHECK(run("eval --manifest \"" + d + "/c/manifest.json\" --out \"" + d + "/e.json\"", "AMBISER_WORKERS=3").code == 0);
  CHECK(run("eval --manifest \"" + d + "/c/manifest.json\" --out \"" + d + "/e.json\"", "AMBISER_WORKERS=zero").code == 1);
}

TEST_CASE("exit codes for bad input") {
  const auto dir = ambiser::testing::scratch_dir("cli-errors");
  const auto d = dir.string();
  std::ofstream(dir / "empty.json") << R"({"corpus_id": "x", "emotion_set": ["anger", "happiness", "neutral", "sadness"], "utterances": []})";
  auto r = run("validate --manifest \"" + d + "/empty.json\"");
  CHECK(r.code == 1);
  CHECK(r.out.find("no utterances") != std::string::npos);
  CHECK(run("eval --manifest \"" + d + "/absent.json\"").code == 1);
  CHECK(run("eval --manifest \"" + d + "/empty.json\" --approach audio").code == 1);
  CHECK(run("bogus").code == 1);
  CHECK(run("--help").code == 0);

  REQUIRE(run("synth --n 10 --out \"" + d + "/c\"").code == 0);
  std::ofstream(dir / "c" / "traces.jsonl", std::ios::app) << "{truncated\n";
  r = run("validate --manifest \"" + d + "/c/manifest.json\"");
  CHECK(r.code == 1);
  CHECK(r.out.find("traces.jsonl:11") != std::string::npos);
  CHECK(run("eval --manifest \"" + d + "/c/manifest.json\" --strict --out \"" + d + "/s.json\"").code == 1);
}

TEST_CASE("prompts export matches golden files") {
  const auto dir = ambiser::testing::scratch_dir("cli-prompts");
  REQUIRE(run("prompts --export \"" + dir.string() + "\"").code == 0);
  for (const char* id : {"paper-ambiguous-v1", "paper-single-v1"})
    CHECK(read_text(dir / (std::string(id) + ".txt")) ==
          read_text(fs::path(AMBISER_TEST_DATA_DIR) / "golden" / (std::string(id) + ".txt")));
  auto r = run("prompts --render paper-single-v1");
  CHECK(r.out.find("[Happiness, Sadness, Neutral, Angry]") != std::string::npos);
}
