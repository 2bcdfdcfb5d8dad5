// Copyright 2026 The Avatar Alias Authors.
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

// alias_cli: command-line front end.
//
//   alias_cli extract  events.csv meta.csv --tau 90 -o features.csv
//   alias_cli classify features.csv --classifier knn --folds 10 --seed 7 --theta 20
//                      -o confusion.json
//   alias_cli mine     confusion.json --lambda 0.9 --min-score 0.5 --top-k 100 -o pairs.csv
//   alias_cli evaluate pairs.csv meta.csv surrogates.json --tier SUG -o report.json
//   alias_cli pipeline config.ini
//   alias_cli synth    --avatars 50 --traces 30 --seed 1 -o fixture_dir

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "avatar_alias/alias_miner.h"
#include "avatar_alias/classifier.h"
#include "avatar_alias/csv.h"
#include "avatar_alias/errors.h"
#include "avatar_alias/evaluation.h"
#include "avatar_alias/pattern_lattice.h"
#include "avatar_alias/pipeline.h"
#include "avatar_alias/synthetic.h"
#include "avatar_alias/trace_dataset.h"

namespace fs = std::filesystem;
using namespace avatar_alias;

namespace {

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

// Empty path means stdout.
void Emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw InputError("cannot write to stdout");
  } else {
    WriteTextFile(path, content);
  }
}

std::string ToText(auto writer, const auto& items) {
  std::ostringstream out;
  writer(out, items);
  return out.str();
}

// Accepts count matrices ("counts") and already normalized ones ("rows").
NormalizedConfusionMatrix LoadMatrix(const std::string& path) {
  const std::string text = ReadTextFile(path);
  try {
    if (text.find("\"counts\"") != std::string::npos) {
      return Normalize(ConfusionFromJson(text));
    }
    NormalizedConfusionMatrix m = NormalizedFromJson(text);
    m.Validate();
    return m;
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Avatar alias identification from behavioural traces"};
  app.require_subcommand(1);

  std::string events_path, meta_path, features_path, matrix_path, pairs_path,
      surrogates_path, config_path, output, labeled_path, json_path, concepts_path;

  DatasetSpec dataset;
  auto* extract = app.add_subcommand("extract", "events + meta -> feature CSV");
  extract->add_option("events", events_path, "events CSV")->required();
  extract->add_option("meta", meta_path, "trace metadata CSV")->required();
  extract->add_option("--tau", dataset.tau, "truncation horizon in seconds")
      ->capture_default_str();
  extract->add_option("-o,--output", output, "feature CSV (default stdout)");

  ClassifierConfig classifier;
  std::string classifier_name = "knn";
  int theta = 1;
  auto* classify = app.add_subcommand("classify", "feature CSV -> confusion matrix JSON");
  classify->add_option("features", features_path, "feature CSV")->required();
  classify->add_option("--classifier", classifier_name, "knn | naive_bayes")
      ->capture_default_str();
  classify->add_option("--k", classifier.k, "neighbours for knn")->capture_default_str();
  classify->add_option("--variance-floor", classifier.variance_floor,
                       "naive Bayes variance floor")
      ->capture_default_str();
  classify->add_option("--folds", classifier.folds)->capture_default_str();
  classify->add_option("--seed", classifier.seed)->capture_default_str();
  classify->add_option("--theta", theta, "minimum traces per avatar")->capture_default_str();
  classify->add_option("--threads", classifier.threads)->capture_default_str();
  classify->add_flag("--allow-small-classes", classifier.allow_small_classes,
                     "accept avatars with fewer traces than folds");
  classify->add_option("-o,--output", output, "confusion JSON (default stdout)");

  MiningConfig mining;
  auto* mine = app.add_subcommand("mine", "confusion JSON -> ranked alias pairs");
  mine->add_option("confusion", matrix_path, "count or normalized matrix JSON")->required();
  mine->add_option("--lambda", mining.lambda, "cluster-score threshold")
      ->capture_default_str();
  mine->add_option("--min-score", mining.min_score, "concept score pruning threshold")
      ->capture_default_str();
  mine->add_option("--top-k", mining.top_k)->capture_default_str();
  mine->add_option("-o,--output", output, "pairs CSV (default stdout)");
  mine->add_option("--json", json_path, "also write the pairs as JSON");
  mine->add_option("--concepts", concepts_path, "also write the concepts as JSON");

  std::string tier_name = "SUG";
  int cutoff = 100;
  auto* evaluate = app.add_subcommand("evaluate", "ranked pairs -> metrics report");
  evaluate->add_option("pairs", pairs_path, "pairs CSV")->required();
  evaluate->add_option("meta", meta_path, "trace metadata CSV")->required();
  evaluate->add_option("surrogates", surrogates_path, "surrogates JSON")->required();
  evaluate->add_option("--tier", tier_name, "SUG | SUG_URLS | SUG_URLS_NAMES")
      ->capture_default_str();
  evaluate->add_option("--cutoff", cutoff, "pairs considered for precision/recall")
      ->capture_default_str();
  evaluate->add_option("-o,--output", output, "report JSON (default stdout)");
  evaluate->add_option("--labeled-csv", labeled_path, "also write the labeled pairs");

  std::string output_dir;
  auto* pipeline = app.add_subcommand("pipeline", "run every stage from an INI config");
  pipeline->add_option("config", config_path, "INI config")->required();
  pipeline->add_option("--output-dir", output_dir, "override [output] dir");

  SyntheticSpec synth_spec;
  auto* synth = app.add_subcommand("synth", "write a synthetic events/meta fixture");
  synth->add_option("--avatars", synth_spec.num_avatars)->capture_default_str();
  synth->add_option("--traces", synth_spec.traces_per_avatar)->capture_default_str();
  synth->add_option("--tau", synth_spec.tau)->capture_default_str();
  synth->add_option("--std", synth_spec.intra_std, "intra-avatar standard deviation")
      ->capture_default_str();
  synth->add_option("--seed", synth_spec.seed)->capture_default_str();
  synth->add_option("-o,--output", output, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      dataset.Validate();
      auto events_in = OpenInput(events_path);
      auto meta_in = OpenInput(meta_path);
      const auto events = ReadEventsCsv(events_in, events_path);
      const auto meta = ReadMetaCsv(meta_in, meta_path);
      Emit(output, ToText(WriteFeatureCsv, ExtractFeatures(events, dataset.tau, meta)));
    } else if (*classify) {
      classifier.kind = ParseClassifierKind(classifier_name);
      auto in = OpenInput(features_path);
      const auto features = ReadFeatureCsv(in, features_path);
      Emit(output, ConfusionToJson(ClassifyFeatures(features, theta, classifier)));
    } else if (*mine) {
      mining.Validate();
      const NormalizedConfusionMatrix m = LoadMatrix(matrix_path);
      const auto pairs = Mine(m, mining);
      if (!concepts_path.empty()) {
        WriteTextFile(concepts_path, ConceptsToJson(EnumerateConcepts(m, mining.min_score)));
      }
      if (!json_path.empty()) WriteTextFile(json_path, PairsToJson(pairs));
      Emit(output, ToText(WritePairsCsv, pairs));
    } else if (*evaluate) {
      const Tier tier = ParseTier(tier_name);
      auto pairs_in = OpenInput(pairs_path);
      auto meta_in = OpenInput(meta_path);
      const auto pairs = ReadPairsCsv(pairs_in, pairs_path);
      const auto meta = ReadMetaCsv(meta_in, meta_path);
      const GroundTruth gt = LoadGroundTruth(meta, ReadTextFile(surrogates_path), tier);
      const EvaluationResult result = Evaluate(pairs, gt, cutoff);
      if (!labeled_path.empty()) WriteTextFile(labeled_path, ToText(WriteLabeledCsv, result));
      Emit(output, ReportToJson(result));
    } else if (*pipeline) {
      PipelineConfig config = LoadPipelineConfig(config_path);
      if (!output_dir.empty()) config.output_dir = output_dir;
      const PipelineResult result = RunPipeline(config);
      const MetricsReport& m = result.evaluation.metrics;
      std::cerr << "avatars " << result.avatars.size() << ", surrogate pairs "
                << result.injection.pairs.size() << ", ranked pairs " << result.pairs.size()
                << "\nprecision " << FormatDouble(m.precision, 4) << " recall "
                << FormatDouble(m.recall, 4) << " f1 " << FormatDouble(m.f1, 4) << " P@10 "
                << FormatDouble(m.p_at_10, 4) << " MAP " << FormatDouble(m.map, 4) << " AUC "
                << FormatDouble(m.auc, 4) << "\n";
      for (const std::string& w : result.injection.warnings) {
        std::cerr << "warning: " << w << "\n";
      }
    } else if (*synth) {
      const SyntheticData data = GenerateSynthetic(synth_spec);
      fs::create_directories(output);
      WriteTextFile(fs::path(output) / "events.csv", ToText(WriteEventsCsv, data.events));
      WriteTextFile(fs::path(output) / "meta.csv", ToText(WriteMetaCsv, data.meta));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
