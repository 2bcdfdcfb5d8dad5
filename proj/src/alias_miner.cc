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

#include "avatar_alias/alias_miner.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "avatar_alias/csv.h"
#include "avatar_alias/errors.h"
#include "json.hpp"

namespace avatar_alias {
namespace {

bool ByScoreThenLabels(const CandidatePair& x, const CandidatePair& y) {
  if (x.score != y.score) return x.score > y.score;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

}  // namespace

void MiningConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must be in [0, 1]");
  if (!(min_score >= 0.0)) throw ConfigError("min_score must be >= 0");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
}

std::vector<CandidatePair> ConceptsToPairs(const ConceptSet& concepts) {
  std::map<std::pair<std::string, std::string>, CandidatePair> pairs;
  for (const PatternConcept& pc : concepts.concepts) {
    if (pc.extent.size() < 2) continue;
    for (std::size_t x = 0; x < pc.extent.size(); ++x) {
      for (std::size_t y = x + 1; y < pc.extent.size(); ++y) {
        std::string a = concepts.labels.at(pc.extent[x]);
        std::string b = concepts.labels.at(pc.extent[y]);
        if (b < a) std::swap(a, b);
        auto [it, inserted] = pairs.try_emplace({a, b});
        CandidatePair& pair = it->second;
        if (inserted) {
          pair.a = std::move(a);
          pair.b = std::move(b);
          pair.score = pc.score;
        } else {
          pair.score = std::max(pair.score, pc.score);
        }
        pair.provenance.push_back(pc.extent);
      }
    }
  }
  std::vector<CandidatePair> out;
  out.reserve(pairs.size());
  for (auto& [key, pair] : pairs) out.push_back(std::move(pair));
  std::stable_sort(out.begin(), out.end(), ByScoreThenLabels);
  return out;
}

double ClusterScore(std::size_t i, std::size_t j, const NormalizedConfusionMatrix& m) {
  if (i >= m.size() || j >= m.size()) throw InputError("cluster score: index out of range");
  if (i == j) throw InputError("cluster score needs two distinct avatars");
  const double u0 = m.at(i, i), u1 = m.at(i, j);
  const double v0 = m.at(j, j), v1 = m.at(j, i);
  const double nu = std::sqrt(u0 * u0 + u1 * u1);
  const double nv = std::sqrt(v0 * v0 + v1 * v1);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp((u0 * v0 + u1 * v1) / (nu * nv), 0.0, 1.0);
}

double ClusterScore(std::string_view a, std::string_view b,
                    const NormalizedConfusionMatrix& m) {
  return ClusterScore(m.IndexOf(a), m.IndexOf(b), m);
}

std::vector<CandidatePair> Mine(const NormalizedConfusionMatrix& m,
                                const MiningConfig& config) {
  config.Validate();
  if (m.size() > kMaxUnprunedAvatars && config.min_score <= 0.0) {
    throw ConfigError("more than " + std::to_string(kMaxUnprunedAvatars) +
                      " avatars: set a positive min_score");
  }
  const ConceptSet concepts = EnumerateConcepts(m, config.min_score);
  std::vector<CandidatePair> kept;
  for (CandidatePair& pair : ConceptsToPairs(concepts)) {
    // Zero score means no shared confusion at all.
    if (!(pair.score > 0.0)) continue;
    pair.cluster_score = ClusterScore(pair.a, pair.b, m);
    if (pair.cluster_score < config.lambda) continue;
    kept.push_back(std::move(pair));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.cluster_score != y.cluster_score) return x.cluster_score > y.cluster_score;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  if (kept.size() > static_cast<std::size_t>(config.top_k)) kept.resize(config.top_k);
  return kept;
}

void WritePairsCsv(std::ostream& out, const std::vector<CandidatePair>& pairs) {
  out << "rank,a,b,score,cluster_score\n";
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    WriteCsvRow(out, {std::to_string(r + 1), pairs[r].a, pairs[r].b,
                      FormatDouble(pairs[r].score), FormatDouble(pairs[r].cluster_score)});
  }
}

std::vector<CandidatePair> ReadPairsCsv(std::istream& in, std::string_view source) {
  const CsvTable table = ReadCsv(in, source);
  RequireColumns(table, {"rank", "a", "b", "score", "cluster_score"}, source);
  std::vector<CandidatePair> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = std::string(source) + ":" + std::to_string(table.lines[r]);
    if (ParseInt(row[0], "rank") != static_cast<std::int64_t>(r + 1)) {
      throw InputError(where + ": ranks must be 1, 2, 3, ... in file order");
    }
    CandidatePair pair;
    pair.a = row[1];
    pair.b = row[2];
    if (pair.a == pair.b) throw InputError(where + ": pair of identical avatars");
    if (pair.b < pair.a) std::swap(pair.a, pair.b);
    pair.score = ParseDouble(row[3], "score");
    pair.cluster_score = ParseDouble(row[4], "cluster_score");
    out.push_back(std::move(pair));
  }
  return out;
}

std::string PairsToJson(const std::vector<CandidatePair>& pairs) {
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    out << (r ? ",\n" : "\n") << "  {\"rank\": " << r + 1
        << ", \"a\": " << nlohmann::json(pairs[r].a).dump()
        << ", \"b\": " << nlohmann::json(pairs[r].b).dump()
        << ", \"score\": " << FormatDouble(pairs[r].score)
        << ", \"cluster_score\": " << FormatDouble(pairs[r].cluster_score) << "}";
  }
  out << (pairs.empty() ? "]\n" : "\n]\n");
  return out.str();
}

}  // namespace avatar_alias
