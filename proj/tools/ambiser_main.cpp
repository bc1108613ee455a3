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

// ambiser: evaluate emotion distributions inferred from speech foundation
// model outputs against multi-annotator ground truth.
//
//   ambiser eval --manifest corpus/manifest.json --approach token --out report.json
//   ambiser compare text.json token.json
//   ambiser synth --out corpus --n 1000 --seed 7
//   ambiser validate --manifest corpus/manifest.json
//   ambiser prompts --export prompts/

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ambiser/errors.hpp"
#include "ambiser/pipeline.hpp"
#include "ambiser/prompts.hpp"
#include "ambiser/synth.hpp"
#include "ambiser/trace_io.hpp"

namespace {

using namespace ambiser;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

json read_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open '" + p.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + p.string() + "' is not valid JSON: " + e.what());
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void write_output(const std::string& content, const std::optional<std::string>& path) {
  if (path) io::write_file_atomic(*path, content);
  else std::cout << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ambiguous speech-emotion distribution evaluation toolkit"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate one prompting/extraction condition");
  std::string manifest, config_file, approach, text_mode, scope, normalization, kl_direction, f1_avg,
      out, prompt_id, label;
  double epsilon = 0;
  unsigned workers = 0;
  bool strict = false;
  eval->add_option("--manifest", manifest, "Corpus manifest (JSON)")->required();
  auto* o_config = eval->add_option("--config", config_file, "Run configuration file; flags win over it");
  auto* o_approach = eval->add_option("--approach", approach, "text | token");
  auto* o_text_mode = eval->add_option("--text-mode", text_mode, "auto | distribution | single-label");
  auto* o_scope = eval->add_option("--scope", scope, "all-tokens | emotion-word-tokens");
  auto* o_norm = eval->add_option("--normalization", normalization, "paper-division | shift-min-zero | softmax");
  auto* o_kl = eval->add_option("--kl-direction", kl_direction, "gt-to-pred | pred-to-gt");
  auto* o_eps = eval->add_option("--epsilon", epsilon, "KL smoothing epsilon");
  auto* o_f1 = eval->add_option("--f1-averaging", f1_avg, "macro | weighted");
  auto* o_out = eval->add_option("--out", out, "Report path");
  auto* o_strict = eval->add_flag("--strict", strict, "Abort on the first malformed record");
  auto* o_workers = eval->add_option("--workers", workers, "Worker threads (default $AMBISER_WORKERS or 1)");
  auto* o_prompt = eval->add_option("--prompt-id", prompt_id, "Prompt condition to evaluate");
  auto* o_label = eval->add_option("--label", label, "Condition label for comparison tables");

  // compare
  auto* compare = app.add_subcommand("compare", "Side-by-side table of several reports");
  std::vector<std::string> report_paths;
  std::string labels, baselines, format = "text", json_out, table_out;
  compare->add_option("reports", report_paths, "Report files")->required()->expected(2, -1);
  compare->add_option("--labels", labels, "Comma-separated condition labels, one per report");
  compare->add_option("--baselines", baselines, "JSON array of external reference rows");
  compare->add_option("--format", format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
  compare->add_option("--out", table_out, "Write the table here instead of stdout");
  compare->add_option("--json-out", json_out, "Also write the structured table here");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic oracle corpus");
  std::string spec_path, synth_out, style;
  std::uint64_t seed = 0;
  std::size_t n_utt = 0;
  double noise = 0, malformed = 0;
  synth_cmd->add_option("--spec", spec_path, "Synth spec (JSON)");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  auto* o_seed = synth_cmd->add_option("--seed", seed, "Random seed");
  auto* o_n = synth_cmd->add_option("--n", n_utt, "Number of utterances");
  auto* o_noise = synth_cmd->add_option("--noise", noise, "Logit noise sigma");
  auto* o_style = synth_cmd->add_option("--style", style, "clean | shuffled")->check(CLI::IsMember({"clean", "shuffled"}));
  auto* o_malformed = synth_cmd->add_option("--malformed-rate", malformed, "Fraction of malformed responses");

  // validate
  auto* validate = app.add_subcommand("validate", "Schema-check every file of a corpus");
  std::string validate_manifest;
  validate->add_option("--manifest", validate_manifest, "Corpus manifest (JSON)")->required();

  // prompts
  auto* prompts = app.add_subcommand("prompts", "List, render or export the built-in prompts");
  std::string render_id, export_dir, prompts_manifest;
  prompts->add_option("--render", render_id, "Print one rendered prompt");
  prompts->add_option("--export", export_dir, "Write <prompt_id>.txt files into this directory");
  prompts->add_option("--manifest", prompts_manifest, "Take the emotion set from this manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*eval) {
      RunConfig cfg;
      cfg.manifest = manifest;
      if (const char* env = std::getenv("AMBISER_WORKERS")) {
        try {
          cfg.workers = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
          throw InputError(std::string("AMBISER_WORKERS is not a number: ") + env);
        }
      }
      merge_run_config(cfg, io::read_manifest(manifest).run);
      if (*o_config) merge_run_config(cfg, read_json_file(config_file));
      json flags = json::object();
      if (*o_approach) flags["approach"] = approach;
      if (*o_text_mode) flags["text_mode"] = text_mode;
      if (*o_scope) flags["scope"] = scope;
      if (*o_norm) flags["normalization"] = normalization;
      if (*o_kl) flags["kl_direction"] = kl_direction;
      if (*o_eps) flags["epsilon"] = epsilon;
      if (*o_f1) flags["f1_averaging"] = f1_avg;
      if (*o_out) flags["output"] = out;
      if (*o_strict) flags["strict"] = strict;
      if (*o_workers) flags["workers"] = workers;
      if (*o_prompt) flags["prompt_id"] = prompt_id;
      if (*o_label) flags["label"] = label;
      merge_run_config(cfg, flags);

      std::vector<io::Diagnostic> warnings;
      const auto report = run_eval(cfg, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w.to_string() << "\n";
      const auto& c = report.corpus;
      auto show = [](const std::optional<double>& v) {
        return v ? std::to_string(*v) : std::string("n/a");
      };
      std::cerr << report.condition << ": KL " << show(c.mean_kl) << ", BD " << show(c.mean_bd)
                << ", R2 " << show(c.r2) << ", accuracy " << show(c.accuracy) << ", F1 " << show(c.f1)
                << ", excluded " << c.n_excluded << "/" << c.n_total << "\n";
      if (!cfg.output) std::cout << io::render_report(report);
      return 0;
    }

    if (*compare) {
      std::vector<EvalReport> reports;
      for (const auto& p : report_paths) reports.push_back(io::read_report(p));
      const json base = baselines.empty() ? json(nullptr) : read_json_file(baselines);
      const auto table = compare_reports(reports, labels.empty() ? std::vector<std::string>{} : split_commas(labels), base);
      if (!json_out.empty()) io::write_file_atomic(json_out, to_json(table).dump(2) + "\n");
      std::string rendered;
      if (format == "csv") rendered = render_csv(table);
      else if (format == "json") rendered = to_json(table).dump(2) + "\n";
      else rendered = render_text(table);
      write_output(rendered, table_out.empty() ? std::nullopt : std::optional<std::string>(table_out));
      return 0;
    }

    if (*synth_cmd) {
      synth::SynthSpec spec;
      if (!spec_path.empty()) spec = synth::spec_from_json(read_json_file(spec_path));
      if (*o_seed) spec.seed = seed;
      if (*o_n) spec.n_utterances = n_utt;
      if (*o_noise) spec.noise_level = noise;
      if (*o_style) spec.response_style = style == "shuffled" ? synth::ResponseStyle::kShuffled : synth::ResponseStyle::kClean;
      if (*o_malformed) {
        spec.response_style = synth::ResponseStyle::kMalformed;
        spec.malformed_rate = malformed;
      }
      try {
        spec.validate();
      } catch (const StructuralError& e) {
        throw InputError(e.what());
      }
      const auto path = synth::write_corpus(spec, synth_out);
      std::cerr << "wrote " << spec.n_utterances << " utterances; manifest " << path.string() << "\n";
      return 0;
    }

    if (*validate) {
      const auto summary = validate_corpus(validate_manifest);
      std::cout << render_validation(summary);
      return summary.total_errors() == 0 ? 0 : kExitInput;
    }

    if (*prompts) {
      EmotionSet set;
      if (!prompts_manifest.empty()) set = io::read_manifest(prompts_manifest).emotion_set;
      if (!render_id.empty()) {
        const auto* t = find_template(render_id);
        if (!t) throw InputError("unknown prompt_id '" + render_id + "'");
        std::cout << render(*t, set) << "\n";
      } else if (!export_dir.empty()) {
        fs::create_directories(export_dir);
        for (const auto& t : builtin_templates())
          io::write_file_atomic(fs::path(export_dir) / (t.prompt_id + ".txt"), render(t, set));
      } else {
        for (const auto& t : builtin_templates())
          std::cout << t.prompt_id << "\t" << to_string(t.kind) << "\t" << render(t, set) << "\n";
      }
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
