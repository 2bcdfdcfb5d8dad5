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

#include "avatar_alias/pipeline.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "avatar_alias/csv.h"
#include "avatar_alias/errors.h"
#include "avatar_alias/pattern_lattice.h"
#include "json.hpp"

namespace avatar_alias {
namespace {

namespace fs = std::filesystem;
using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"dataset", {"events", "meta", "tau", "theta"}},
      {"surrogates", {"gamma", "beta", "seed"}},
      {"classifier", {"kind", "k", "variance_floor", "folds", "seed", "threads"}},
      {"mining", {"lambda", "min_score", "top_k"}},
      {"evaluation", {"tier", "cutoff"}},
      {"output", {"dir", "concepts"}},
  };
  return keys;
}

class Section {
 public:
  Section(const ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  template <typename F>
  auto Parse(F parse, const std::string& key) const {
    try {
      return parse();
    } catch (const InputError& e) {
      throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
    }
  }

  std::optional<std::string> Get(const std::string& key) const {
    if (tree_ == nullptr) return std::nullopt;
    auto value = tree_->get_optional<std::string>(ptree::path_type(key, '\0'));
    if (!value) return std::nullopt;
    return *value;
  }

  std::string Require(const std::string& key) const {
    auto value = Get(key);
    if (!value || value->empty()) throw ConfigError("missing [" + name_ + "] " + key);
    return *value;
  }

  double Double(const std::string& key, double fallback) const {
    auto value = Get(key);
    return value ? Parse([&] { return ParseDouble(*value, key); }, key) : fallback;
  }

  std::int64_t Int(const std::string& key, std::int64_t fallback) const {
    auto value = Get(key);
    return value ? Parse([&] { return ParseInt(*value, key); }, key) : fallback;
  }

  bool Bool(const std::string& key, bool fallback) const {
    auto value = Get(key);
    if (!value) return fallback;
    if (*value == "true" || *value == "1" || *value == "yes") return true;
    if (*value == "false" || *value == "0" || *value == "no") return false;
    throw ConfigError("[" + name_ + "] " + key + ": expected true or false");
  }

 private:
  const ptree* tree_;
  std::string name_;
};

fs::path Resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::string ToCsv(auto writer, const auto& items) {
  std::ostringstream out;
  writer(out, items);
  return out.str();
}

std::vector<std::string> SortedLabels(std::span<const FeatureVector> dataset) {
  std::vector<std::string> labels;
  for (const auto& [label, count] : CountTraces(dataset)) labels.push_back(label);
  return labels;
}

}  // namespace

void PipelineConfig::Validate() const {
  dataset.Validate();
  if (surrogates) surrogates->Validate();
  classifier.Validate();
  if (classifier.kind == ClassifierKind::kExternal) {
    throw ConfigError("the pipeline needs an in-process classifier (knn or naive_bayes)");
  }
  mining.Validate();
  if (cutoff < 1) throw ConfigError("cutoff must be >= 1");
  for (const fs::path& p : {events_path, meta_path}) {
    if (p.empty()) throw ConfigError("missing input path");
    if (!fs::is_regular_file(p)) throw ConfigError("input file not found: " + p.string());
  }
}

PipelineConfig ParsePipelineConfig(std::istream& in, const fs::path& base_dir) {
  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [name, section] : tree) {
    auto known = KnownKeys().find(name);
    if (known == KnownKeys().end()) throw ConfigError("unknown config section [" + name + "]");
    if (section.empty() && !section.data().empty()) {
      throw ConfigError("key '" + name + "' outside of a section");
    }
    for (const auto& [key, value] : section) {
      if (!known->second.contains(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + name + "]");
      }
    }
  }
  auto section = [&](const std::string& name) {
    auto child = tree.get_child_optional(ptree::path_type(name, '\0'));
    return Section(child ? &*child : nullptr, name);
  };

  PipelineConfig config;
  const Section dataset = section("dataset");
  config.events_path = Resolve(base_dir, dataset.Require("events"));
  config.meta_path = Resolve(base_dir, dataset.Require("meta"));
  config.dataset.tau = dataset.Double("tau", config.dataset.tau);
  config.dataset.theta = static_cast<int>(dataset.Int("theta", config.dataset.theta));

  if (tree.get_child_optional("surrogates")) {
    const Section s = section("surrogates");
    SurrogateSpec spec;
    spec.gamma = s.Double("gamma", spec.gamma);
    spec.beta = s.Double("beta", spec.beta);
    spec.seed = static_cast<std::uint64_t>(s.Int("seed", 0));
    config.surrogates = spec;
  }

  const Section c = section("classifier");
  if (auto kind = c.Get("kind")) config.classifier.kind = ParseClassifierKind(*kind);
  config.classifier.k = static_cast<int>(c.Int("k", config.classifier.k));
  config.classifier.variance_floor = c.Double("variance_floor", config.classifier.variance_floor);
  config.classifier.folds = static_cast<int>(c.Int("folds", config.classifier.folds));
  config.classifier.seed = static_cast<std::uint64_t>(c.Int("seed", 0));
  config.classifier.threads = static_cast<int>(c.Int("threads", config.classifier.threads));
  config.classifier.allow_small_classes = true;

  const Section m = section("mining");
  config.mining.lambda = m.Double("lambda", config.mining.lambda);
  config.mining.min_score = m.Double("min_score", config.mining.min_score);
  config.mining.top_k = static_cast<int>(m.Int("top_k", config.mining.top_k));

  const Section e = section("evaluation");
  if (auto tier = e.Get("tier")) config.tier = ParseTier(*tier);
  config.cutoff = static_cast<int>(e.Int("cutoff", config.cutoff));

  const Section o = section("output");
  config.output_dir = Resolve(base_dir, o.Require("dir"));
  config.write_concepts = o.Bool("concepts", false);

  config.Validate();
  return config;
}

PipelineConfig LoadPipelineConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return ParsePipelineConfig(in, path.parent_path());
}

ConfusionMatrix ClassifyFeatures(std::span<const FeatureVector> features, int theta,
                                 const ClassifierConfig& config) {
  const std::vector<FeatureVector> kept = FilterMinTraces(features, theta);
  return CrossValidate(kept, config);
}

std::string SurrogatesToJson(const std::vector<std::string>& avatars,
                             const SurrogateInjection& injection) {
  nlohmann::ordered_json doc;
  doc["avatars"] = avatars;
  auto& pairs = doc["pairs"] = nlohmann::ordered_json::array();
  for (const SurrogatePair& p : injection.pairs) {
    pairs.push_back({{"a", p.first}, {"b", p.second}, {"source", p.source}});
  }
  doc["warnings"] = injection.warnings;
  return doc.dump(2) + "\n";
}

GroundTruth LoadGroundTruth(std::span<const TraceMeta> meta, std::string_view surrogates_json,
                            Tier tier) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(surrogates_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("surrogates.json: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("avatars") || !doc["avatars"].is_array() ||
      !doc.contains("pairs") || !doc["pairs"].is_array()) {
    throw InputError("surrogates.json: expected an object with 'avatars' and 'pairs' arrays");
  }
  const auto identities = BuildIdentityIndex(meta);
  GroundTruth gt;
  gt.tier = tier;
  std::map<std::string, std::string> source_of;
  try {
    for (const auto& p : doc["pairs"]) {
      const auto a = p.at("a").get<std::string>();
      const auto b = p.at("b").get<std::string>();
      const auto source = p.at("source").get<std::string>();
      source_of[a] = source;
      source_of[b] = source;
      gt.AddSurrogatePair(a, b);
    }
    for (const auto& entry : doc["avatars"]) {
      const auto label = entry.get<std::string>();
      auto it = source_of.find(label);
      const std::string& lookup = it == source_of.end() ? label : it->second;
      auto identity = identities.find(lookup);
      if (identity == identities.end()) {
        throw InputError("surrogates.json: avatar '" + lookup + "' has no meta rows");
      }
      AvatarIdentity copy = identity->second;
      copy.label = label;
      gt.identity_index.emplace(label, std::move(copy));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("surrogates.json: ") + e.what());
  }
  for (const auto& [a, b] : gt.surrogate_pairs) {
    if (!gt.identity_index.contains(a) || !gt.identity_index.contains(b)) {
      throw InputError("surrogates.json: pair (" + a + ", " + b + ") is not in 'avatars'");
    }
  }
  return gt;
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw InputError("cannot write " + path.string());
}

PipelineResult RunPipeline(std::span<const TraceEvent> events, std::span<const TraceMeta> meta,
                           const PipelineConfig& config) {
  const bool write = !config.output_dir.empty();
  if (write) fs::create_directories(config.output_dir);
  auto emit = [&](const char* name, const std::string& content) {
    if (write) WriteTextFile(config.output_dir / name, content);
  };

  PipelineResult result;
  result.features = ExtractFeatures(events, config.dataset.tau, meta);
  emit("features.csv", ToCsv(WriteFeatureCsv, result.features));

  std::vector<FeatureVector> kept = FilterMinTraces(result.features, config.dataset.theta);
  if (config.surrogates) {
    result.injection = InjectSurrogates(kept, *config.surrogates, config.dataset.theta);
  } else {
    result.injection.dataset = std::move(kept);
  }
  result.avatars = SortedLabels(result.injection.dataset);
  emit("dataset.csv", ToCsv(WriteFeatureCsv, result.injection.dataset));
  const std::string surrogates_json = SurrogatesToJson(result.avatars, result.injection);
  emit("surrogates.json", surrogates_json);

  result.confusion = CrossValidate(result.injection.dataset, config.classifier);
  emit("confusion.json", ConfusionToJson(result.confusion));
  result.normalized = Normalize(result.confusion);
  emit("normalized.json", NormalizedToJson(result.normalized));

  if (write && config.write_concepts) {
    emit("concepts.json", ConceptsToJson(EnumerateConcepts(result.normalized,
                                                           config.mining.min_score)));
  }
  result.pairs = Mine(result.normalized, config.mining);
  emit("pairs.csv", ToCsv(WritePairsCsv, result.pairs));
  emit("pairs.json", PairsToJson(result.pairs));

  const GroundTruth gt = LoadGroundTruth(meta, surrogates_json, config.tier);
  result.evaluation = Evaluate(result.pairs, gt, config.cutoff);
  emit("report.json", ReportToJson(result.evaluation));
  emit("labeled.csv", ToCsv(WriteLabeledCsv, result.evaluation));
  return result;
}

PipelineResult RunPipeline(const PipelineConfig& config) {
  config.Validate();
  if (config.output_dir.empty()) throw ConfigError("missing output directory");
  std::ifstream events_in(config.events_path, std::ios::binary);
  if (!events_in) throw InputError("cannot open " + config.events_path.string());
  const auto events = ReadEventsCsv(events_in, config.events_path.string());
  std::ifstream meta_in(config.meta_path, std::ios::binary);
  if (!meta_in) throw InputError("cannot open " + config.meta_path.string());
  const auto meta = ReadMetaCsv(meta_in, config.meta_path.string());
  return RunPipeline(events, meta, config);
}

}  // namespace avatar_alias
