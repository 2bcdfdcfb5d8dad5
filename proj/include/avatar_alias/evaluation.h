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

// Scoring a ranked alias list against tiered ground truth.
//
// Evidence for a pair, strongest first: surrogate siblings, same account id,
// same display name. The tier decides which evidence counts as positive:
// SUG (surrogates only), SUG_URLS (+ same account), SUG_URLS_NAMES
// (+ same name).
//
// Conventions: "MAP" is the average precision of the single ranking;
// positives missing from the ranking add 0 to it and rank below every
// returned pair (tied among themselves) for the ROC AUC; pairs with equal
// (score, cluster_score) tie and share AUC credit.

#ifndef AVATAR_ALIAS_EVALUATION_H_
#define AVATAR_ALIAS_EVALUATION_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avatar_alias/alias_miner.h"
#include "avatar_alias/trace_dataset.h"

namespace avatar_alias {

enum class Tier { kSug, kSugUrls, kSugUrlsNames };
std::string_view TierName(Tier tier);
Tier ParseTier(std::string_view text);

enum class Evidence { kSurrogate, kSameAccount, kSameName, kNegative };
std::string_view EvidenceName(Evidence evidence);

struct GroundTruth {
  // Unordered pairs stored as (min, max).
  std::set<std::pair<std::string, std::string>> surrogate_pairs;
  // Identity of every avatar in the evaluated universe.
  std::map<std::string, AvatarIdentity> identity_index;
  Tier tier = Tier::kSug;

  void AddSurrogatePair(std::string a, std::string b);
  bool IsSurrogatePair(std::string_view a, std::string_view b) const;
};

Evidence LabelPair(std::string_view a, std::string_view b, const GroundTruth& gt);
Evidence LabelPair(const CandidatePair& pair, const GroundTruth& gt);
bool IsPositive(Evidence evidence, Tier tier);

// One ranked entry; score and cluster_score only matter for tie detection.
struct RankedItem {
  bool positive = false;
  double score = 0.0;
  double cluster_score = 0.0;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Precision over the first min(cutoff, size) entries, recall against
// total_positives (0 if there are none).
PrecisionRecall PrecisionRecallF1(std::span<const RankedItem> ranking, int cutoff,
                                  std::int64_t total_positives);
double PrecisionAtK(std::span<const RankedItem> ranking, int k = 10);
double AveragePrecision(std::span<const RankedItem> ranking, std::int64_t total_positives);
double RocAuc(std::span<const RankedItem> ranking, std::int64_t total_positives,
              std::int64_t total_negatives);

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double p_at_10 = 0.0;
  double map = 0.0;
  double auc = 0.0;
  std::int64_t positives_in_ranking = 0;
  std::int64_t total_positives = 0;
};

struct LabeledPair {
  CandidatePair pair;
  Evidence evidence = Evidence::kNegative;
  bool positive = false;
};

struct EvaluationResult {
  Tier tier = Tier::kSug;
  int cutoff = 100;
  std::int64_t universe_size = 0;
  std::int64_t total_negatives = 0;
  MetricsReport metrics;
  std::vector<LabeledPair> labeled;
  // Positive pairs for each tier (the nesting SUG ⊆ SUG_URLS ⊆ ... is
  // reported for inspection).
  std::map<std::string, std::int64_t> total_positives_per_tier;
};

// Positive unordered pairs among the avatars of gt.identity_index.
std::int64_t CountPositivePairs(const GroundTruth& gt);

// Throws InputError when the tier has no positive pair (AP undefined) or the
// ranking names an avatar outside gt.identity_index.
EvaluationResult Evaluate(const std::vector<CandidatePair>& ranking, const GroundTruth& gt,
                          int cutoff = 100);

std::string ReportToJson(const EvaluationResult& result);
// rank,a,b,score,cluster_score,evidence
void WriteLabeledCsv(std::ostream& out, const EvaluationResult& result);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_EVALUATION_H_
