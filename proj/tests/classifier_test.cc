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

#include "avatar_alias/classifier.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "avatar_alias/errors.h"
#include "avatar_alias/random.h"

namespace avatar_alias {
namespace {

TrainingSet Points(const std::vector<std::pair<std::vector<double>, std::size_t>>& points) {
  TrainingSet train(points.front().first.size());
  for (const auto& [x, label] : points) train.Add(x, label);
  return train;
}

// Reference kNN: full stable sort by distance, then count votes.
std::size_t OracleKnn(const TrainingSet& train, const std::vector<double>& q, int k) {
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  auto dist = [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t f = 0; f < q.size(); ++f) s += std::pow(train.row(i)[f] - q[f], 2);
    return std::sqrt(s);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
  std::map<std::size_t, std::pair<int, double>> votes;
  for (int r = 0; r < k; ++r) {
    votes[train.label(order[r])].first++;
    votes[train.label(order[r])].second += dist(order[r]);
  }
  std::size_t best = 0;
  int most = -1;
  double mean = 0.0;
  for (const auto& [label, v] : votes) {
    if (v.first > most || (v.first == most && v.second / v.first < mean)) {
      best = label;
      most = v.first;
      mean = v.second / v.first;
    }
  }
  return best;
}

std::vector<FeatureVector> Clusters(const std::vector<std::pair<std::string, double>>& centres,
                                    int per_label, double spread, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> out;
  for (const auto& [label, centre] : centres) {
    for (int i = 0; i < per_label; ++i) {
      FeatureVector fv;
      fv.trace_id = label + "-" + std::to_string(i);
      fv.avatar.label = label;
      for (std::size_t f = 0; f < kNumHotkeyFeatures; ++f) {
        fv.features[f] = centre + spread * StandardNormal(rng);
      }
      out.push_back(fv);
    }
  }
  return out;
}

TEST(Knn, ExactMatchWins) {
  const auto train = Points({{{0, 0}, 0}, {{5, 5}, 1}});
  EXPECT_EQ(KnnPredict(train, std::vector<double>{5, 5}, 1), 1u);
}

TEST(Knn, ThreeNeighbourMajority) {
  const auto train = Points({{{0, 0}, 0}, {{1, 0}, 0}, {{10, 10}, 1}});
  EXPECT_EQ(KnnPredict(train, std::vector<double>{0.4, 0}, 3), 0u);
}

TEST(Knn, KEqualToTrainingSizeIsGlobalMajority) {
  const auto train = Points({{{0}, 1}, {{100}, 0}, {{101}, 0}, {{1}, 1}, {{102}, 1}});
  EXPECT_EQ(KnnPredict(train, std::vector<double>{100}, 5), 1u);
}

TEST(Knn, DistanceTieGoesToTrainingOrder) {
  const auto train = Points({{{1}, 1}, {{-1}, 0}});
  EXPECT_EQ(KnnPredict(train, std::vector<double>{0}, 1), 1u);
}

TEST(Knn, VoteTieGoesToSmallerMeanDistance) {
  const auto train = Points({{{-3}, 0}, {{-2.5}, 0}, {{1}, 1}, {{2}, 1}});
  EXPECT_EQ(KnnPredict(train, std::vector<double>{0}, 4), 1u);
}

TEST(Knn, MatchesOracleOnRandomData) {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    TrainingSet train(3);
    const int n = 1 + static_cast<int>(UniformBelow(rng, 15));
    for (int i = 0; i < n; ++i) {
      std::vector<double> x(3);
      for (double& v : x) v = static_cast<double>(UniformBelow(rng, 4));
      train.Add(x, UniformBelow(rng, 3));
    }
    std::vector<double> q(3);
    for (double& v : q) v = static_cast<double>(UniformBelow(rng, 4));
    const int k = 1 + static_cast<int>(UniformBelow(rng, n));
    EXPECT_EQ(KnnPredict(train, q, k), OracleKnn(train, q, k)) << "trial " << trial;
  }
}

TEST(Knn, RejectsBadArguments) {
  const auto train = Points({{{0}, 0}});
  EXPECT_THROW(KnnPredict(train, std::vector<double>{0}, 2), InputError);
  EXPECT_THROW(KnnPredict(TrainingSet(1), std::vector<double>{0}, 1), InputError);
  EXPECT_THROW(KnnPredict(train, std::vector<double>{0, 1}, 1), InputError);
}

TEST(NaiveBayes, SingleClassAlwaysPredicted) {
  const auto train = Points({{{1, 2}, 0}, {{3, 4}, 0}});
  EXPECT_EQ(NaiveBayesFitPredict(train, std::vector<double>{-100, 100}, 1e-9), 0u);
}

TEST(NaiveBayes, ClosedFormPosterior) {
  // Class 0 has mean -1 and class 1 has mean +1, both with variance 1.
  const auto train = Points({{{-2}, 0}, {{0}, 0}, {{0}, 1}, {{2}, 1}});
  const GaussianNaiveBayes model(train, 1e-9);
  const std::vector<double> q = {0.9};
  const auto lp = model.LogPosterior(q);
  auto log_gauss = [](double x, double mu) {
    return -0.5 * std::log(2.0 * std::numbers::pi) - (x - mu) * (x - mu) / 2.0;
  };
  EXPECT_NEAR(lp[0], std::log(0.5) + log_gauss(0.9, -1.0), 1e-12);
  EXPECT_NEAR(lp[1], std::log(0.5) + log_gauss(0.9, 1.0), 1e-12);
  EXPECT_EQ(model.Predict(q), 1u);
}

TEST(NaiveBayes, ConstantFeatureStaysFinite) {
  const auto train = Points({{{1, 0}, 0}, {{1, 1}, 0}, {{5, 3}, 1}, {{6, 4}, 1}});
  const GaussianNaiveBayes model(train, 1e-9);
  for (double v : model.LogPosterior(std::vector<double>{2, 0.5})) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(model.Predict(std::vector<double>{1, 0.5}), 0u);
}

TEST(NaiveBayes, PosteriorTieGoesToSmallerLabel) {
  const auto train = Points({{{-1}, 0}, {{1}, 0}, {{-1}, 1}, {{1}, 1}});
  EXPECT_EQ(NaiveBayesFitPredict(train, std::vector<double>{0.3}, 1e-9), 0u);
}

TEST(StratifiedFolds, BalancedPerLabelAndDeterministic) {
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < 4; ++c) labels.insert(labels.end(), 7 + c * 3, c);
  const auto folds = StratifiedFolds(labels, 5, 9);
  EXPECT_EQ(folds, StratifiedFolds(labels, 5, 9));
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<int> per_fold(5, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) per_fold[folds[i]]++;
    }
    const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
    EXPECT_LE(*hi - *lo, 1);
  }
  std::vector<int> total(5, 0);
  for (int f : folds) total[f]++;
  const auto [lo, hi] = std::minmax_element(total.begin(), total.end());
  EXPECT_LE(*hi - *lo, 1);
}

TEST(CrossValidate, SeparatedClustersGiveDiagonal) {
  const auto data = Clusters({{"a", 0.0}, {"b", 50.0}, {"c", 100.0}}, 12, 1.0, 3);
  ClassifierConfig config;
  const ConfusionMatrix cm = CrossValidate(data, config);
  ASSERT_EQ(cm.labels, (std::vector<std::string>{"a", "b", "c"}));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(cm.counts[i][j], i == j ? 12 : 0);
  }
}

TEST(CrossValidate, IdenticalConstantFeaturesPreserveRowSums) {
  std::vector<FeatureVector> data;
  for (int i = 0; i < 20; ++i) {
    FeatureVector fv;
    fv.trace_id = std::to_string(i);
    fv.avatar.label = i < 12 ? "a" : "b";
    fv.features.fill(1.0);
    data.push_back(fv);
  }
  for (ClassifierKind kind : {ClassifierKind::kKnn, ClassifierKind::kNaiveBayes}) {
    ClassifierConfig config;
    config.kind = kind;
    config.allow_small_classes = true;
    const ConfusionMatrix cm = CrossValidate(data, config);
    EXPECT_EQ(cm.RowSum(0), 12);
    EXPECT_EQ(cm.RowSum(1), 8);
  }
}

TEST(CrossValidate, SiblingFromSameDistributionConfusesOnlyWithItsTwin) {
  auto data = Clusters({{"a", 0.0}, {"c", 60.0}}, 20, 1.0, 5);
  auto twin = Clusters({{"b", 0.0}}, 20, 1.0, 6);
  data.insert(data.end(), twin.begin(), twin.end());
  ClassifierConfig config;
  const ConfusionMatrix cm = CrossValidate(data, config);
  // labels: a, b, c
  EXPECT_GT(cm.counts[0][1], 0);
  EXPECT_GT(cm.counts[1][0], 0);
  EXPECT_EQ(cm.counts[0][2] + cm.counts[1][2], 0);
  EXPECT_EQ(cm.counts[2][2], 20);
}

TEST(CrossValidate, DeterministicAndThreadInvariant) {
  const auto data = Clusters({{"a", 0.0}, {"b", 1.0}, {"c", 2.0}}, 15, 1.5, 8);
  ClassifierConfig config;
  config.seed = 7;
  const ConfusionMatrix serial = CrossValidate(data, config);
  EXPECT_EQ(serial, CrossValidate(data, config));
  config.threads = 4;
  EXPECT_EQ(serial, CrossValidate(data, config));
  std::int64_t total = 0;
  for (std::size_t i = 0; i < serial.size(); ++i) total += serial.RowSum(i);
  EXPECT_EQ(total, 45);
}

TEST(CrossValidate, SmallClassNamesTheAvatar) {
  const auto data = Clusters({{"tiny", 0.0}}, 3, 1.0, 1);
  auto more = Clusters({{"big", 5.0}}, 12, 1.0, 2);
  std::vector<FeatureVector> all = data;
  all.insert(all.end(), more.begin(), more.end());
  ClassifierConfig config;
  try {
    CrossValidate(all, config);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("tiny"), std::string::npos);
  }
  config.allow_small_classes = true;
  EXPECT_EQ(CrossValidate(all, config).RowSum(1), 3);
}

TEST(CrossValidate, ExternalKindNeedsImportedMatrix) {
  ClassifierConfig config;
  config.kind = ClassifierKind::kExternal;
  EXPECT_THROW(CrossValidate(Clusters({{"a", 0.0}}, 10, 1.0, 1), config), ConfigError);
}

TEST(CrossValidate, CustomFactory) {
  struct AlwaysZero : Classifier {
    void Fit(const TrainingSet&) override {}
    std::size_t Predict(std::span<const double>) const override { return 0; }
  };
  const auto data = Clusters({{"a", 0.0}, {"b", 50.0}}, 10, 1.0, 4);
  const ConfusionMatrix cm = CrossValidate(data, ClassifierConfig{}, [] {
    return std::make_unique<AlwaysZero>();
  });
  EXPECT_EQ(cm.counts[0][0], 10);
  EXPECT_EQ(cm.counts[1][0], 10);
}

TEST(Normalize, WorkedExampleRow) {
  ConfusionMatrix cm;
  cm.labels = {"a1", "a2", "a3", "a4", "a5"};
  cm.counts = {{12, 8, 0, 0, 0}, {8, 11, 1, 0, 0}, {0, 0, 16, 3, 1},
               {0, 1, 0, 14, 5}, {0, 0, 0, 10, 10}};
  const auto m = Normalize(cm);
  EXPECT_EQ(m.rows[0], (std::vector<double>{0.6, 0.4, 0, 0, 0}));
  EXPECT_EQ(m.rows[1], (std::vector<double>{0.4, 0.55, 0.05, 0, 0}));
  EXPECT_NO_THROW(m.Validate());
}

TEST(Normalize, IdentityStaysIdentity) {
  ConfusionMatrix cm{{"x", "y"}, {{7, 0}, {0, 3}}};
  const auto m = Normalize(cm);
  EXPECT_EQ(m.rows, (std::vector<std::vector<double>>{{1, 0}, {0, 1}}));
}

TEST(Normalize, StructuralErrors) {
  EXPECT_THROW(Normalize(ConfusionMatrix{{"x"}, {{1, 1}}}), InputError);
  EXPECT_THROW(Normalize(ConfusionMatrix{{"x", "y"}, {{1, 0}, {0, 0}}}), InputError);
  EXPECT_THROW(Normalize(ConfusionMatrix{{"x", "y"}, {{1, -1}, {0, 2}}}), InputError);
  EXPECT_THROW(Normalize(ConfusionMatrix{{"x", "x"}, {{1, 0}, {0, 1}}}), InputError);
}

TEST(Json, ConfusionRoundTrip) {
  ConfusionMatrix cm{{"a", "b\"q"}, {{3, 1}, {0, 4}}};
  EXPECT_EQ(ConfusionFromJson(ConfusionToJson(cm)), cm);
}

TEST(Json, NormalizedRoundTrip) {
  NormalizedConfusionMatrix m{{"a", "b"}, {{0.6, 0.4}, {0.05, 0.95}}};
  const auto back = NormalizedFromJson(NormalizedToJson(m));
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(back.rows, m.rows);
}

TEST(Json, MalformedInputReportsParseError) {
  try {
    ConfusionFromJson("{\"labels\": [\"a\"], \"counts\": [[1]");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("malformed JSON"), std::string::npos);
  }
}

}  // namespace
}  // namespace avatar_alias
