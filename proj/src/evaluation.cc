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

#include "avatar_alias/evaluation.h"

#include <algorithm>
#include <ostream>

#include "avatar_alias/csv.h"
#include "avatar_alias/errors.h"
#include "json.hpp"

namespace avatar_alias {
namespace {

const AvatarIdentity& Identity(std::string_view label, const GroundTruth& gt) {
  auto it = gt.identity_index.find(std::string(label));
  if (it == gt.identity_index.end()) {
    throw InputError("avatar '" + std::string(label) + "' is not in the ground truth");
  }
  return it->second;
}

std::int64_t CountPositivePairs(const GroundTruth& gt, Tier tier) {
  std::int64_t count = 0;
  for (auto i = gt.identity_index.begin(); i != gt.identity_index.end(); ++i) {
    for (auto j = std::next(i); j != gt.identity_index.end(); ++j) {
      if (IsPositive(LabelPair(i->first, j->first, gt), tier)) ++count;
    }
  }
  return count;
}

}  // namespace

std::string_view TierName(Tier tier) {
  switch (tier) {
    case Tier::kSug: return "SUG";
    case Tier::kSugUrls: return "SUG_URLS";
    case Tier::kSugUrlsNames: return "SUG_URLS_NAMES";
  }
  return "SUG";
}

Tier ParseTier(std::string_view text) {
  if (text == "SUG") return Tier::kSug;
  if (text == "SUG_URLS") return Tier::kSugUrls;
  if (text == "SUG_URLS_NAMES") return Tier::kSugUrlsNames;
  throw ConfigError("unknown tier '" + std::string(text) +
                    "' (expected SUG, SUG_URLS or SUG_URLS_NAMES)");
}

std::string_view EvidenceName(Evidence evidence) {
  switch (evidence) {
    case Evidence::kSurrogate: return "surrogate";
    case Evidence::kSameAccount: return "same_account";
    case Evidence::kSameName: return "same_name";
    case Evidence::kNegative: return "negative";
  }
  return "negative";
}

void GroundTruth::AddSurrogatePair(std::string a, std::string b) {
  if (a == b) throw InputError("surrogate pair of identical labels '" + a + "'");
  if (b < a) std::swap(a, b);
  surrogate_pairs.emplace(std::move(a), std::move(b));
}

bool GroundTruth::IsSurrogatePair(std::string_view a, std::string_view b) const {
  std::pair<std::string, std::string> key(a, b);
  if (key.second < key.first) std::swap(key.first, key.second);
  return surrogate_pairs.contains(key);
}

Evidence LabelPair(std::string_view a, std::string_view b, const GroundTruth& gt) {
  const AvatarIdentity& x = Identity(a, gt);
  const AvatarIdentity& y = Identity(b, gt);
  if (gt.IsSurrogatePair(a, b)) return Evidence::kSurrogate;
  if (!x.account_id.empty() && x.account_id == y.account_id) return Evidence::kSameAccount;
  if (!x.name.empty() && x.name == y.name) return Evidence::kSameName;
  return Evidence::kNegative;
}

Evidence LabelPair(const CandidatePair& pair, const GroundTruth& gt) {
  return LabelPair(pair.a, pair.b, gt);
}

bool IsPositive(Evidence evidence, Tier tier) {
  switch (evidence) {
    case Evidence::kSurrogate: return true;
    case Evidence::kSameAccount: return tier != Tier::kSug;
    case Evidence::kSameName: return tier == Tier::kSugUrlsNames;
    case Evidence::kNegative: return false;
  }
  return false;
}

PrecisionRecall PrecisionRecallF1(std::span<const RankedItem> ranking, int cutoff,
                                  std::int64_t total_positives) {
  if (cutoff < 1) throw ConfigError("cutoff must be >= 1");
  if (total_positives < 0) throw InputError("total_positives must be >= 0");
  const std::size_t considered = std::min<std::size_t>(cutoff, ranking.size());
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < considered; ++i) hits += ranking[i].positive ? 1 : 0;
  if (hits > total_positives) {
    throw InputError("ranking holds more positives than total_positives");
  }
  PrecisionRecall out;
  if (considered > 0) out.precision = static_cast<double>(hits) / considered;
  if (total_positives > 0) out.recall = static_cast<double>(hits) / total_positives;
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

double PrecisionAtK(std::span<const RankedItem> ranking, int k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  const std::size_t considered = std::min<std::size_t>(k, ranking.size());
  if (considered == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < considered; ++i) hits += ranking[i].positive ? 1 : 0;
  return static_cast<double>(hits) / considered;
}

double AveragePrecision(std::span<const RankedItem> ranking, std::int64_t total_positives) {
  if (total_positives < 1) {
    throw InputError("average precision is undefined without positives");
  }
  std::int64_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (!ranking[i].positive) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  if (hits > total_positives) {
    throw InputError("ranking holds more positives than total_positives");
  }
  return sum / static_cast<double>(total_positives);
}

double RocAuc(std::span<const RankedItem> ranking, std::int64_t total_positives,
              std::int64_t total_negatives) {
  if (total_positives < 1 || total_negatives < 1) {
    throw InputError("ROC AUC needs at least one positive and one negative");
  }
  std::int64_t retrieved_pos = 0, retrieved_neg = 0;
  for (const auto& item : ranking) (item.positive ? retrieved_pos : retrieved_neg) += 1;
  if (retrieved_pos > total_positives || retrieved_neg > total_negatives) {
    throw InputError("ranking holds more items of a class than its total");
  }

  // Twice the Mann-Whitney count keeps the arithmetic in integers.
  std::int64_t twice_wins = 0;
  std::int64_t negatives_seen = 0;
  for (std::size_t start = 0; start < ranking.size();) {
    std::size_t end = start + 1;
    while (end < ranking.size() && ranking[end].score == ranking[start].score &&
           ranking[end].cluster_score == ranking[start].cluster_score) {
      ++end;
    }
    std::int64_t p = 0, q = 0;
    for (std::size_t i = start; i < end; ++i) (ranking[i].positive ? p : q) += 1;
    const std::int64_t below = total_negatives - negatives_seen - q;
    twice_wins += 2 * p * below + p * q;
    negatives_seen += q;
    start = end;
  }
  const std::int64_t missing_pos = total_positives - retrieved_pos;
  const std::int64_t missing_neg = total_negatives - retrieved_neg;
  twice_wins += missing_pos * missing_neg;
  return static_cast<double>(twice_wins) /
         (2.0 * static_cast<double>(total_positives) * static_cast<double>(total_negatives));
}

std::int64_t CountPositivePairs(const GroundTruth& gt) {
  return CountPositivePairs(gt, gt.tier);
}

EvaluationResult Evaluate(const std::vector<CandidatePair>& ranking, const GroundTruth& gt,
                          int cutoff) {
  EvaluationResult result;
  result.tier = gt.tier;
  result.cutoff = cutoff;
  for (Tier t : {Tier::kSug, Tier::kSugUrls, Tier::kSugUrlsNames}) {
    result.total_positives_per_tier[std::string(TierName(t))] = CountPositivePairs(gt, t);
  }
  const std::int64_t u = static_cast<std::int64_t>(gt.identity_index.size());
  result.universe_size = u;
  const std::int64_t total_positives =
      result.total_positives_per_tier.at(std::string(TierName(gt.tier)));
  result.total_negatives = u * (u - 1) / 2 - total_positives;
  if (total_positives == 0) {
    throw InputError("the ground truth has no positive pair for tier " +
                     std::string(TierName(gt.tier)));
  }

  std::vector<RankedItem> items;
  for (const CandidatePair& pair : ranking) {
    LabeledPair labeled{pair, LabelPair(pair, gt), false};
    labeled.positive = IsPositive(labeled.evidence, gt.tier);
    items.push_back({labeled.positive, pair.score, pair.cluster_score});
    result.labeled.push_back(std::move(labeled));
  }

  MetricsReport& m = result.metrics;
  const PrecisionRecall pr = PrecisionRecallF1(items, cutoff, total_positives);
  m.precision = pr.precision;
  m.recall = pr.recall;
  m.f1 = pr.f1;
  m.p_at_10 = PrecisionAtK(items, 10);
  m.map = AveragePrecision(items, total_positives);
  m.auc = RocAuc(items, total_positives, result.total_negatives);
  m.total_positives = total_positives;
  m.positives_in_ranking = std::count_if(items.begin(), items.end(),
                                         [](const RankedItem& i) { return i.positive; });
  return result;
}

std::string ReportToJson(const EvaluationResult& result) {
  nlohmann::ordered_json doc;
  const MetricsReport& m = result.metrics;
  doc["tier"] = TierName(result.tier);
  doc["cutoff"] = result.cutoff;
  doc["precision"] = m.precision;
  doc["recall"] = m.recall;
  doc["f1"] = m.f1;
  doc["p_at_10"] = m.p_at_10;
  doc["map"] = m.map;
  doc["auc"] = m.auc;
  doc["positives_in_ranking"] = m.positives_in_ranking;
  doc["total_positives"] = m.total_positives;
  doc["total_negatives"] = result.total_negatives;
  doc["universe_size"] = result.universe_size;
  doc["total_positives_per_tier"] = result.total_positives_per_tier;
  auto& pairs = doc["pairs"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < result.labeled.size(); ++r) {
    const LabeledPair& lp = result.labeled[r];
    nlohmann::ordered_json entry;
    entry["rank"] = r + 1;
    entry["a"] = lp.pair.a;
    entry["b"] = lp.pair.b;
    entry["score"] = lp.pair.score;
    entry["cluster_score"] = lp.pair.cluster_score;
    entry["evidence"] = EvidenceName(lp.evidence);
    entry["positive"] = lp.positive;
    pairs.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

void WriteLabeledCsv(std::ostream& out, const EvaluationResult& result) {
  out << "rank,a,b,score,cluster_score,evidence\n";
  for (std::size_t r = 0; r < result.labeled.size(); ++r) {
    const LabeledPair& lp = result.labeled[r];
    WriteCsvRow(out, {std::to_string(r + 1), lp.pair.a, lp.pair.b,
                      FormatDouble(lp.pair.score), FormatDouble(lp.pair.cluster_score),
                      std::string(EvidenceName(lp.evidence))});
  }
}

}  // namespace avatar_alias
