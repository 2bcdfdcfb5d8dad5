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

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "avatar_alias/csv.h"
#include "avatar_alias/errors.h"
#include "avatar_alias/random.h"
#include "json.hpp"

namespace avatar_alias {
namespace {

using json = nlohmann::json;

class KnnClassifier : public Classifier {
 public:
  explicit KnnClassifier(int k) : k_(k) {}
  void Fit(const TrainingSet& train) override { train_ = &train; }
  std::size_t Predict(std::span<const double> query) const override {
    return KnnPredict(*train_, query, std::min<int>(k_, static_cast<int>(train_->size())));
  }

 private:
  int k_;
  const TrainingSet* train_ = nullptr;
};

class NaiveBayesClassifier : public Classifier {
 public:
  explicit NaiveBayesClassifier(double variance_floor) : variance_floor_(variance_floor) {}
  void Fit(const TrainingSet& train) override {
    model_ = std::make_unique<GaussianNaiveBayes>(train, variance_floor_);
  }
  std::size_t Predict(std::span<const double> query) const override {
    return model_->Predict(query);
  }

 private:
  double variance_floor_;
  std::unique_ptr<GaussianNaiveBayes> model_;
};

json ParseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<std::string> ReadLabels(const json& doc) {
  if (!doc.is_object() || !doc.contains("labels") || !doc["labels"].is_array()) {
    throw InputError("matrix JSON needs a \"labels\" array");
  }
  std::vector<std::string> labels;
  for (const auto& l : doc["labels"]) {
    if (!l.is_string()) throw InputError("matrix labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  return labels;
}

const json& ReadRows(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw InputError(std::string("matrix JSON needs a \"") + key + "\" array");
  }
  for (const auto& row : doc[key]) {
    if (!row.is_array()) throw InputError(std::string("\"") + key + "\" rows must be arrays");
    for (const auto& v : row) {
      if (!v.is_number()) throw InputError(std::string("\"") + key + "\" entries must be numbers");
    }
  }
  return doc[key];
}

void WriteLabels(std::ostream& out, const std::vector<std::string>& labels) {
  out << "  \"labels\": [";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << (i ? ", " : "") << json(labels[i]).dump();
  }
  out << "],\n";
}

void CheckSquare(const std::vector<std::string>& labels, std::size_t num_rows,
                 const auto& row_size) {
  if (num_rows != labels.size()) {
    throw InputError("matrix has " + std::to_string(num_rows) + " rows for " +
                     std::to_string(labels.size()) + " labels");
  }
  for (std::size_t i = 0; i < num_rows; ++i) {
    if (row_size(i) != labels.size()) {
      throw InputError("matrix is not square: row " + std::to_string(i) + " has " +
                       std::to_string(row_size(i)) + " entries");
    }
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw InputError("duplicate matrix label '" + l + "'");
  }
}

}  // namespace

std::string_view ClassifierKindName(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kKnn: return "knn";
    case ClassifierKind::kNaiveBayes: return "naive_bayes";
    case ClassifierKind::kExternal: return "external";
  }
  return "knn";
}

ClassifierKind ParseClassifierKind(std::string_view text) {
  if (text == "knn") return ClassifierKind::kKnn;
  if (text == "naive_bayes" || text == "nbayes") return ClassifierKind::kNaiveBayes;
  if (text == "external") return ClassifierKind::kExternal;
  throw ConfigError("unknown classifier '" + std::string(text) +
                    "' (expected knn, naive_bayes or external)");
}

void ClassifierConfig::Validate() const {
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(variance_floor > 0.0)) throw ConfigError("variance_floor must be > 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

void TrainingSet::Add(std::span<const double> features, std::size_t label) {
  if (features.size() != dim_) throw InputError("feature dimension mismatch");
  values_.insert(values_.end(), features.begin(), features.end());
  labels_.push_back(label);
  num_labels_ = std::max(num_labels_, label + 1);
}

std::size_t KnnPredict(const TrainingSet& train, std::span<const double> query, int k) {
  if (train.empty()) throw InputError("knn: empty training set");
  if (k < 1) throw ConfigError("knn: k must be >= 1");
  if (static_cast<std::size_t>(k) > train.size()) {
    throw InputError("knn: k exceeds the training set size");
  }
  if (query.size() != train.dim()) throw InputError("knn: query dimension mismatch");

  std::vector<std::pair<double, std::size_t>> neighbours(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto row = train.row(i);
    double d2 = 0.0;
    for (std::size_t f = 0; f < row.size(); ++f) {
      const double diff = row[f] - query[f];
      d2 += diff * diff;
    }
    neighbours[i] = {d2, i};
  }
  const auto kth = neighbours.begin() + k;
  std::partial_sort(neighbours.begin(), kth, neighbours.end());

  // label -> (votes, summed distance)
  std::map<std::size_t, std::pair<int, double>> votes;
  for (auto it = neighbours.begin(); it != kth; ++it) {
    auto& v = votes[train.label(it->second)];
    v.first += 1;
    v.second += std::sqrt(it->first);
  }
  std::size_t best = votes.begin()->first;
  int best_votes = -1;
  double best_mean = 0.0;
  for (const auto& [label, v] : votes) {  // ascending label: ties keep the first
    const double mean = v.second / v.first;
    if (v.first > best_votes || (v.first == best_votes && mean < best_mean)) {
      best = label;
      best_votes = v.first;
      best_mean = mean;
    }
  }
  return best;
}

GaussianNaiveBayes::GaussianNaiveBayes(const TrainingSet& train, double variance_floor)
    : dim_(train.dim()) {
  if (train.empty()) throw InputError("naive bayes: empty training set");
  if (!(variance_floor > 0.0)) throw ConfigError("variance_floor must be > 0");
  const std::size_t num_labels = train.num_labels();
  std::vector<std::size_t> count(num_labels, 0);
  mean_.assign(num_labels * dim_, 0.0);
  variance_.assign(num_labels * dim_, 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const std::size_t c = train.label(i);
    ++count[c];
    const auto row = train.row(i);
    for (std::size_t f = 0; f < dim_; ++f) mean_[c * dim_ + f] += row[f];
  }
  for (std::size_t c = 0; c < num_labels; ++c) {
    for (std::size_t f = 0; f < dim_ && count[c] > 0; ++f) {
      mean_[c * dim_ + f] /= static_cast<double>(count[c]);
    }
  }
  for (std::size_t i = 0; i < train.size(); ++i) {
    const std::size_t c = train.label(i);
    const auto row = train.row(i);
    for (std::size_t f = 0; f < dim_; ++f) {
      const double diff = row[f] - mean_[c * dim_ + f];
      variance_[c * dim_ + f] += diff * diff;
    }
  }
  log_prior_.assign(num_labels, -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < num_labels; ++c) {
    if (count[c] == 0) continue;
    log_prior_[c] = std::log(static_cast<double>(count[c]) /
                             static_cast<double>(train.size()));
    for (std::size_t f = 0; f < dim_; ++f) {
      double& v = variance_[c * dim_ + f];
      v = std::max(v / static_cast<double>(count[c]), variance_floor);
    }
  }
}

std::vector<double> GaussianNaiveBayes::LogPosterior(std::span<const double> query) const {
  if (query.size() != dim_) throw InputError("naive bayes: query dimension mismatch");
  std::vector<double> out(log_prior_.size());
  for (std::size_t c = 0; c < log_prior_.size(); ++c) {
    double lp = log_prior_[c];
    if (std::isfinite(lp)) {
      for (std::size_t f = 0; f < dim_; ++f) {
        const double var = variance_[c * dim_ + f];
        const double diff = query[f] - mean_[c * dim_ + f];
        lp -= 0.5 * std::log(2.0 * std::numbers::pi * var) + diff * diff / (2.0 * var);
      }
    }
    out[c] = lp;
  }
  return out;
}

std::size_t GaussianNaiveBayes::Predict(std::span<const double> query) const {
  const auto lp = LogPosterior(query);
  std::size_t best = 0;
  bool found = false;
  for (std::size_t c = 0; c < lp.size(); ++c) {
    if (std::isinf(lp[c]) && lp[c] < 0) continue;
    if (!found || lp[c] > lp[best]) {
      best = c;
      found = true;
    }
  }
  return best;
}

std::size_t NaiveBayesFitPredict(const TrainingSet& train, std::span<const double> query,
                                 double variance_floor) {
  return GaussianNaiveBayes(train, variance_floor).Predict(query);
}

std::unique_ptr<Classifier> MakeClassifier(const ClassifierConfig& config) {
  config.Validate();
  switch (config.kind) {
    case ClassifierKind::kKnn: return std::make_unique<KnnClassifier>(config.k);
    case ClassifierKind::kNaiveBayes:
      return std::make_unique<NaiveBayesClassifier>(config.variance_floor);
    case ClassifierKind::kExternal:
      break;
  }
  throw ConfigError(
      "the external classifier has no in-process model; import its confusion "
      "matrix JSON instead");
}

std::int64_t ConfusionMatrix::RowSum(std::size_t i) const {
  std::int64_t sum = 0;
  for (auto v : counts[i]) sum += v;
  return sum;
}

void ConfusionMatrix::Validate() const {
  CheckSquare(labels, counts.size(), [&](std::size_t i) { return counts[i].size(); });
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (auto v : counts[i]) {
      if (v < 0) throw InputError("negative count in row '" + labels[i] + "'");
    }
  }
}

std::size_t NormalizedConfusionMatrix::IndexOf(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw InputError("unknown avatar label '" + std::string(label) + "'");
}

void NormalizedConfusionMatrix::Validate() const {
  CheckSquare(labels, rows.size(), [&](std::size_t i) { return rows[i].size(); });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double sum = 0.0;
    for (double v : rows[i]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError("normalized entry outside [0,1] in row '" + labels[i] + "'");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InputError("normalized row '" + labels[i] + "' does not sum to 1");
    }
  }
}

std::vector<int> StratifiedFolds(std::span<const std::size_t> labels, int folds,
                                 std::uint64_t seed) {
  if (folds < 2) throw ConfigError("folds must be >= 2");
  std::size_t num_labels = 0;
  for (auto l : labels) num_labels = std::max(num_labels, l + 1);
  std::vector<std::vector<std::size_t>> groups(num_labels);
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);

  std::vector<int> fold_of(labels.size(), 0);
  Rng rng(seed);
  std::size_t rotation = 0;
  for (auto& group : groups) {
    Shuffle(std::span<std::size_t>(group), rng);
    for (std::size_t item : group) {
      fold_of[item] = static_cast<int>(rotation % static_cast<std::size_t>(folds));
      ++rotation;
    }
  }
  return fold_of;
}

ConfusionMatrix CrossValidate(std::span<const FeatureVector> dataset,
                              const ClassifierConfig& config) {
  config.Validate();
  if (config.kind == ClassifierKind::kExternal) {
    throw ConfigError(
        "cross-validation needs an in-process classifier; external results are "
        "imported as confusion matrix JSON");
  }
  return CrossValidate(dataset, config, [config] { return MakeClassifier(config); });
}

ConfusionMatrix CrossValidate(std::span<const FeatureVector> dataset,
                              const ClassifierConfig& config,
                              const ClassifierFactory& factory) {
  config.Validate();
  if (dataset.empty()) throw InputError("cross-validation on an empty dataset");

  ConfusionMatrix cm;
  std::map<std::string, std::size_t> label_index;
  for (const auto& fv : dataset) label_index.emplace(fv.avatar.label, 0);
  for (auto& [label, index] : label_index) {
    index = cm.labels.size();
    cm.labels.push_back(label);
  }
  const std::size_t n = cm.labels.size();

  std::vector<std::size_t> item_label(dataset.size());
  std::vector<std::size_t> per_label(n, 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (double v : dataset[i].features) {
      if (!std::isfinite(v)) {
        throw InputError("non-finite feature in trace '" + dataset[i].trace_id + "'");
      }
    }
    item_label[i] = label_index.at(dataset[i].avatar.label);
    ++per_label[item_label[i]];
  }
  if (!config.allow_small_classes) {
    for (std::size_t c = 0; c < n; ++c) {
      if (per_label[c] < static_cast<std::size_t>(config.folds)) {
        throw InputError("avatar '" + cm.labels[c] + "' has " +
                         std::to_string(per_label[c]) + " traces, fewer than " +
                         std::to_string(config.folds) + " folds");
      }
    }
  }

  const std::vector<int> fold_of = StratifiedFolds(item_label, config.folds, config.seed);

  using Counts = std::vector<std::vector<std::int64_t>>;
  auto run_fold = [&](int fold) {
    Counts counts(n, std::vector<std::int64_t>(n, 0));
    TrainingSet train(kNumFeatures);
    bool has_test = false;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (fold_of[i] != fold) {
        train.Add(dataset[i].features, item_label[i]);
      } else {
        has_test = true;
      }
    }
    if (!has_test) return counts;
    if (train.empty()) throw InputError("a fold leaves no training data");
    auto model = factory();
    model->Fit(train);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (fold_of[i] == fold) ++counts[item_label[i]][model->Predict(dataset[i].features)];
    }
    return counts;
  };

  cm.counts.assign(n, std::vector<std::int64_t>(n, 0));
  auto accumulate = [&](const Counts& counts) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) cm.counts[i][j] += counts[i][j];
    }
  };
  if (config.threads == 1) {
    for (int f = 0; f < config.folds; ++f) accumulate(run_fold(f));
  } else {
    for (int start = 0; start < config.folds; start += config.threads) {
      std::vector<std::future<Counts>> pending;
      for (int f = start; f < std::min(config.folds, start + config.threads); ++f) {
        pending.push_back(std::async(std::launch::async, run_fold, f));
      }
      for (auto& p : pending) accumulate(p.get());
    }
  }
  return cm;
}

NormalizedConfusionMatrix Normalize(const ConfusionMatrix& cm) {
  cm.Validate();
  NormalizedConfusionMatrix out;
  out.labels = cm.labels;
  out.rows.resize(cm.size());
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const std::int64_t total = cm.RowSum(i);
    if (total <= 0) {
      throw InputError("avatar '" + cm.labels[i] +
                       "' has no traces; theta-filter the dataset first");
    }
    out.rows[i].resize(cm.size());
    for (std::size_t j = 0; j < cm.size(); ++j) {
      out.rows[i][j] = static_cast<double>(cm.counts[i][j]) / static_cast<double>(total);
    }
  }
  return out;
}

std::string ConfusionToJson(const ConfusionMatrix& cm) {
  cm.Validate();
  std::ostringstream out;
  out << "{\n";
  WriteLabels(out, cm.labels);
  out << "  \"counts\": [";
  for (std::size_t i = 0; i < cm.size(); ++i) {
    out << (i ? ",\n" : "\n") << "    [";
    for (std::size_t j = 0; j < cm.size(); ++j) out << (j ? ", " : "") << cm.counts[i][j];
    out << "]";
  }
  out << (cm.size() ? "\n  ]\n}\n" : "]\n}\n");
  return out.str();
}

ConfusionMatrix ConfusionFromJson(std::string_view text) {
  const json doc = ParseJson(text);
  ConfusionMatrix cm;
  cm.labels = ReadLabels(doc);
  for (const auto& row : ReadRows(doc, "counts")) {
    auto& out = cm.counts.emplace_back();
    for (const auto& v : row) {
      const double d = v.get<double>();
      if (d < 0 || d != std::floor(d)) {
        throw InputError("confusion counts must be non-negative integers");
      }
      out.push_back(v.is_number_integer() ? v.get<std::int64_t>()
                                          : static_cast<std::int64_t>(d));
    }
  }
  cm.Validate();
  return cm;
}

std::string NormalizedToJson(const NormalizedConfusionMatrix& m) {
  std::ostringstream out;
  out << "{\n";
  WriteLabels(out, m.labels);
  out << "  \"rows\": [";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << (i ? ",\n" : "\n") << "    [";
    for (std::size_t j = 0; j < m.size(); ++j) {
      out << (j ? ", " : "") << FormatDouble(m.rows[i][j], 15);
    }
    out << "]";
  }
  out << (m.size() ? "\n  ]\n}\n" : "]\n}\n");
  return out.str();
}

NormalizedConfusionMatrix NormalizedFromJson(std::string_view text) {
  const json doc = ParseJson(text);
  NormalizedConfusionMatrix m;
  m.labels = ReadLabels(doc);
  for (const auto& row : ReadRows(doc, "rows")) {
    auto& out = m.rows.emplace_back();
    for (const auto& v : row) out.push_back(v.get<double>());
  }
  m.Validate();
  return m;
}

}  // namespace avatar_alias
