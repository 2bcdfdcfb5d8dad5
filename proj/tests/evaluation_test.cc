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

#include <gtest/gtest.h>

#include <sstream>

#include "avatar_alias/errors.h"
#include "json.hpp"
#include "metric_oracles.h"

namespace avatar_alias {
namespace {

// "+-+" -> ranking with strictly decreasing scores.
std::vector<RankedItem> Ranking(const std::string& signs) {
  std::vector<RankedItem> out;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    out.push_back({signs[i] == '+', 1.0 - 0.01 * static_cast<double>(i), 1.0});
  }
  return out;
}

GroundTruth Truth(Tier tier) {
  GroundTruth gt;
  gt.tier = tier;
  auto add = [&](const std::string& label, const std::string& account, const std::string& name) {
    gt.identity_index[label] = AvatarIdentity{label, account, "eu", name};
  };
  add("s#1", "100", "Solo");
  add("s#2", "100", "Solo");
  add("foo", "1234", "Foo");
  add("bar", "1234", "Bar");
  add("bat1", "1", "Batman");
  add("bat2", "2", "Batman");
  add("x", "9", "Xeno");
  gt.AddSurrogatePair("s#2", "s#1");
  return gt;
}

CandidatePair Pair(const std::string& a, const std::string& b, double score) {
  return CandidatePair{a, b, score, 1.0, {}};
}

TEST(LabelPair, EvidenceKinds) {
  const GroundTruth gt = Truth(Tier::kSug);
  EXPECT_EQ(LabelPair("s#1", "s#2", gt), Evidence::kSurrogate);
  EXPECT_EQ(LabelPair("s#2", "s#1", gt), Evidence::kSurrogate);
  EXPECT_EQ(LabelPair("bar", "foo", gt), Evidence::kSameAccount);
  EXPECT_EQ(LabelPair("bat1", "bat2", gt), Evidence::kSameName);
  EXPECT_EQ(LabelPair("foo", "x", gt), Evidence::kNegative);
  EXPECT_THROW(LabelPair("foo", "nobody", gt), InputError);
}

TEST(LabelPair, TierDecidesPositives) {
  EXPECT_TRUE(IsPositive(Evidence::kSurrogate, Tier::kSug));
  EXPECT_FALSE(IsPositive(Evidence::kSameAccount, Tier::kSug));
  EXPECT_TRUE(IsPositive(Evidence::kSameAccount, Tier::kSugUrls));
  EXPECT_FALSE(IsPositive(Evidence::kSameName, Tier::kSugUrls));
  EXPECT_TRUE(IsPositive(Evidence::kSameName, Tier::kSugUrlsNames));
  EXPECT_FALSE(IsPositive(Evidence::kNegative, Tier::kSugUrlsNames));
}

TEST(LabelPair, TierPositivesAreNested) {
  GroundTruth gt = Truth(Tier::kSug);
  const auto sug = CountPositivePairs(gt);
  gt.tier = Tier::kSugUrls;
  const auto urls = CountPositivePairs(gt);
  gt.tier = Tier::kSugUrlsNames;
  const auto names = CountPositivePairs(gt);
  EXPECT_EQ(sug, 1);
  EXPECT_EQ(urls, 2);
  EXPECT_EQ(names, 3);
  for (const auto& [a, x] : gt.identity_index) {
    for (const auto& [b, y] : gt.identity_index) {
      if (a >= b) continue;
      const Evidence e = LabelPair(a, b, gt);
      if (IsPositive(e, Tier::kSug)) EXPECT_TRUE(IsPositive(e, Tier::kSugUrls));
      if (IsPositive(e, Tier::kSugUrls)) EXPECT_TRUE(IsPositive(e, Tier::kSugUrlsNames));
    }
  }
}

TEST(PrecisionRecall, FortyOfFortyOne) {
  std::string signs(100, '-');
  for (int i = 0; i < 40; ++i) signs[i * 2] = '+';
  const auto pr = PrecisionRecallF1(Ranking(signs), 100, 41);
  EXPECT_DOUBLE_EQ(pr.precision, 0.40);
  EXPECT_DOUBLE_EQ(pr.recall, 40.0 / 41.0);
}

TEST(PrecisionRecall, PerfectAndWorst) {
  const auto perfect = PrecisionRecallF1(Ranking("+++"), 3, 3);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  const auto worst = PrecisionRecallF1(Ranking("---"), 3, 2);
  EXPECT_EQ(worst.precision, 0.0);
  EXPECT_EQ(worst.recall, 0.0);
  EXPECT_EQ(worst.f1, 0.0);
}

TEST(PrecisionRecall, ShortListUsesItsLength) {
  const auto pr = PrecisionRecallF1(Ranking("+-"), 100, 4);
  EXPECT_EQ(pr.precision, 0.5);
  EXPECT_EQ(pr.recall, 0.25);
  EXPECT_DOUBLE_EQ(pr.f1, 2 * 0.5 * 0.25 / 0.75);
  EXPECT_THROW(PrecisionRecallF1(Ranking("++"), 2, 1), InputError);
  EXPECT_THROW(PrecisionRecallF1(Ranking("++"), 0, 2), ConfigError);
}

TEST(PrecisionAtK, Examples) {
  EXPECT_EQ(PrecisionAtK(Ranking("++++++++++--")), 1.0);
  EXPECT_DOUBLE_EQ(PrecisionAtK(Ranking("+++++-++++")), 0.9);
  EXPECT_EQ(PrecisionAtK(Ranking("+-+-")), 0.5);
  EXPECT_EQ(PrecisionAtK(Ranking("")), 0.0);
}

TEST(AveragePrecision, Examples) {
  EXPECT_EQ(AveragePrecision(Ranking("++-"), 2), 1.0);
  EXPECT_DOUBLE_EQ(AveragePrecision(Ranking("+-+"), 2), (1.0 + 2.0 / 3.0) / 2.0);
  EXPECT_DOUBLE_EQ(AveragePrecision(Ranking("--+"), 2), (1.0 / 3.0) / 2.0);
  EXPECT_THROW(AveragePrecision(Ranking("-"), 0), InputError);
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(RocAuc(Ranking("++--"), 2, 2), 1.0);
  EXPECT_EQ(RocAuc(Ranking("--++"), 2, 2), 0.0);
  EXPECT_EQ(RocAuc(Ranking("+-+-"), 3, 2), 0.5);
  EXPECT_THROW(RocAuc(Ranking("++"), 2, 0), InputError);
  EXPECT_THROW(RocAuc(Ranking("+++"), 2, 1), InputError);
}

TEST(RocAuc, TiesShareCredit) {
  std::vector<RankedItem> tied = {{true, 0.5, 0.9}, {false, 0.5, 0.9}};
  EXPECT_EQ(RocAuc(tied, 1, 1), 0.5);
  // Same score, different cluster score: not a tie.
  std::vector<RankedItem> split = {{true, 0.5, 0.95}, {false, 0.5, 0.9}};
  EXPECT_EQ(RocAuc(split, 1, 1), 1.0);
}

TEST(RocAuc, UnretrievedItemsTieAtTheBottom) {
  // One retrieved negative; one positive and one negative missing.
  EXPECT_EQ(RocAuc(Ranking("-"), 1, 2), 0.25);
}

TEST(Metrics, MatchOraclesOnEveryShortRanking) {
  for (int length = 1; length <= 8; ++length) {
    for (int mask = 0; mask < (1 << length); ++mask) {
      for (int ties = 0; ties < 2; ++ties) {
        std::vector<RankedItem> ranking;
        std::int64_t pos = 0;
        for (int i = 0; i < length; ++i) {
          const bool positive = (mask >> i) & 1;
          pos += positive ? 1 : 0;
          // With ties, consecutive pairs of items share a score.
          const double score = 1.0 - 0.1 * (ties ? i / 2 : i);
          ranking.push_back({positive, score, 0.5});
        }
        const std::int64_t neg = length - pos;
        for (std::int64_t extra_pos = 0; extra_pos <= 2; ++extra_pos) {
          for (std::int64_t extra_neg = 0; extra_neg <= 2; ++extra_neg) {
            const std::int64_t p = pos + extra_pos;
            const std::int64_t n = neg + extra_neg;
            if (p > 0) {
              EXPECT_EQ(AveragePrecision(ranking, p), testing::OracleAveragePrecision(ranking, p));
            }
            if (p > 0 && n > 0) {
              EXPECT_EQ(RocAuc(ranking, p, n), testing::OracleRocAuc(ranking, p, n))
                  << "length " << length << " mask " << mask << " ties " << ties;
            }
          }
        }
      }
    }
  }
}

TEST(Evaluate, AllSurrogatesAtTheTop) {
  GroundTruth gt = Truth(Tier::kSug);
  const std::vector<CandidatePair> ranking = {Pair("s#1", "s#2", 0.9), Pair("bar", "foo", 0.5),
                                              Pair("bat1", "bat2", 0.4)};
  const EvaluationResult result = Evaluate(ranking, gt, 1);
  EXPECT_EQ(result.metrics.precision, 1.0);
  EXPECT_EQ(result.metrics.recall, 1.0);
  EXPECT_EQ(result.metrics.total_positives, 1);
  EXPECT_EQ(result.universe_size, 7);
  EXPECT_EQ(result.total_negatives, 20);
  EXPECT_EQ(result.total_positives_per_tier.at("SUG"), 1);
  EXPECT_EQ(result.total_positives_per_tier.at("SUG_URLS"), 2);
  EXPECT_EQ(result.total_positives_per_tier.at("SUG_URLS_NAMES"), 3);
  EXPECT_EQ(result.labeled[1].evidence, Evidence::kSameAccount);
  EXPECT_FALSE(result.labeled[1].positive);
}

TEST(Evaluate, BroaderTierCountsMorePositives) {
  GroundTruth gt = Truth(Tier::kSugUrlsNames);
  const std::vector<CandidatePair> ranking = {Pair("s#1", "s#2", 0.9), Pair("bar", "foo", 0.5),
                                              Pair("bat1", "bat2", 0.4), Pair("x", "foo", 0.3)};
  const auto m = Evaluate(ranking, gt, 100).metrics;
  EXPECT_EQ(m.positives_in_ranking, 3);
  EXPECT_EQ(m.precision, 0.75);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.map, 1.0);
  EXPECT_EQ(m.auc, 1.0);
}

TEST(Evaluate, NoPositivesIsAnError) {
  GroundTruth gt;
  gt.identity_index["a"] = AvatarIdentity{"a", "1", "eu", "A"};
  gt.identity_index["b"] = AvatarIdentity{"b", "2", "eu", "B"};
  EXPECT_THROW(Evaluate({Pair("a", "b", 1.0)}, gt), InputError);
}

TEST(Evaluate, ReportAndLabeledCsv) {
  const GroundTruth gt = Truth(Tier::kSugUrls);
  const EvaluationResult result = Evaluate({Pair("bar", "foo", 0.5)}, gt);
  const auto report = nlohmann::json::parse(ReportToJson(result));
  for (const char* key : {"tier", "precision", "recall", "f1", "p_at_10", "map", "auc",
                          "total_positives", "total_positives_per_tier", "pairs"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_EQ(report["tier"], "SUG_URLS");
  EXPECT_EQ(report["pairs"][0]["evidence"], "same_account");
  std::ostringstream csv;
  WriteLabeledCsv(csv, result);
  EXPECT_EQ(csv.str(), "rank,a,b,score,cluster_score,evidence\n1,bar,foo,0.5,1,same_account\n");
}

TEST(Tier, Parse) {
  EXPECT_EQ(ParseTier("SUG_URLS_NAMES"), Tier::kSugUrlsNames);
  EXPECT_EQ(TierName(ParseTier("SUG")), "SUG");
  EXPECT_THROW(ParseTier("sug"), ConfigError);
}

}  // namespace
}  // namespace avatar_alias
