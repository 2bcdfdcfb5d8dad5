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

// From pattern concepts to a ranked list of alias candidates.
//
// Every extent with two or more avatars is expanded into its unordered pairs;
// a pair keeps the best score among the concepts that generate it. Pairs are
// then checked with the cluster score, the cosine between
// ⟨M[i][i], M[i][j]⟩ and ⟨M[j][j], M[j][i]⟩: true aliases split their
// traces between each other in the same proportions, so both vectors point
// the same way. Pairs under the lambda threshold are dropped.

#ifndef AVATAR_ALIAS_ALIAS_MINER_H_
#define AVATAR_ALIAS_ALIAS_MINER_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "avatar_alias/classifier.h"
#include "avatar_alias/fuzzy_pattern.h"
#include "avatar_alias/pattern_lattice.h"

namespace avatar_alias {

struct MiningConfig {
  double lambda = 0.9;     // cluster-score threshold
  double min_score = 0.0;  // concept score pruning threshold
  int top_k = 100;

  void Validate() const;
};

// Above this many avatars, a positive min_score is mandatory.
inline constexpr std::size_t kMaxUnprunedAvatars = 200;

struct CandidatePair {
  std::string a;  // a < b
  std::string b;
  double score = 0.0;
  double cluster_score = 0.0;
  std::vector<AvatarSet> provenance;  // extents of the generating concepts
};

std::vector<CandidatePair> ConceptsToPairs(const ConceptSet& concepts);

// 0 when either vector is zero. Throws InputError for i == j.
double ClusterScore(std::size_t i, std::size_t j, const NormalizedConfusionMatrix& m);
double ClusterScore(std::string_view a, std::string_view b,
                    const NormalizedConfusionMatrix& m);

// EnumerateConcepts -> ConceptsToPairs -> keep pairs with score > 0 and
// cluster_score >= lambda -> sort by (score desc, cluster_score desc, a, b)
// -> first top_k.
std::vector<CandidatePair> Mine(const NormalizedConfusionMatrix& m,
                                const MiningConfig& config);

// rank,a,b,score,cluster_score
void WritePairsCsv(std::ostream& out, const std::vector<CandidatePair>& pairs);
std::vector<CandidatePair> ReadPairsCsv(std::istream& in,
                                        std::string_view source = "pairs.csv");
std::string PairsToJson(const std::vector<CandidatePair>& pairs);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_ALIAS_MINER_H_
