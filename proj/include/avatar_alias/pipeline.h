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

// End-to-end runs: extract -> filter -> surrogates -> classify -> mine ->
// evaluate, driven by one INI file.
//
//   [dataset]     events, meta, tau, theta
//   [surrogates]  gamma, beta, seed           (section optional)
//   [classifier]  kind, k, variance_floor, folds, seed, threads
//   [mining]      lambda, min_score, top_k
//   [evaluation]  tier, cutoff
//   [output]      dir, concepts
//
// Relative paths are resolved against the directory of the config file.

#ifndef AVATAR_ALIAS_PIPELINE_H_
#define AVATAR_ALIAS_PIPELINE_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avatar_alias/alias_miner.h"
#include "avatar_alias/classifier.h"
#include "avatar_alias/evaluation.h"
#include "avatar_alias/trace_dataset.h"

namespace avatar_alias {

struct PipelineConfig {
  std::filesystem::path events_path;
  std::filesystem::path meta_path;
  DatasetSpec dataset;
  std::optional<SurrogateSpec> surrogates;
  ClassifierConfig classifier;
  MiningConfig mining;
  Tier tier = Tier::kSug;
  int cutoff = 100;
  std::filesystem::path output_dir;
  bool write_concepts = false;

  // Parameter ranges plus existence of the input files.
  void Validate() const;
};

PipelineConfig ParsePipelineConfig(std::istream& in, const std::filesystem::path& base_dir);
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);

struct PipelineResult {
  std::vector<FeatureVector> features;  // straight out of extraction
  SurrogateInjection injection;         // filtered dataset with surrogates
  std::vector<std::string> avatars;     // sorted labels that were classified
  ConfusionMatrix confusion;
  NormalizedConfusionMatrix normalized;
  std::vector<CandidatePair> pairs;
  EvaluationResult evaluation;
};

// Writes features.csv, dataset.csv, surrogates.json, confusion.json,
// normalized.json, pairs.csv, pairs.json, report.json, labeled.csv (and
// concepts.json on request) into config.output_dir.
PipelineResult RunPipeline(const PipelineConfig& config);

// Same stages on in-memory traces; writes nothing when output_dir is empty.
PipelineResult RunPipeline(std::span<const TraceEvent> events,
                           std::span<const TraceMeta> meta, const PipelineConfig& config);

// theta filter followed by cross-validation.
ConfusionMatrix ClassifyFeatures(std::span<const FeatureVector> features, int theta,
                                 const ClassifierConfig& config);

// {"avatars": [...], "pairs": [{"a", "b", "source"}], "warnings": [...]}
std::string SurrogatesToJson(const std::vector<std::string>& avatars,
                             const SurrogateInjection& injection);

// The evaluated universe is the "avatars" list; surrogate labels inherit the
// identity of their source avatar.
GroundTruth LoadGroundTruth(std::span<const TraceMeta> meta, std::string_view surrogates_json,
                            Tier tier);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view content);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_PIPELINE_H_
