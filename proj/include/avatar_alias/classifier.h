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

// Deterministic avatar classifiers (k nearest neighbours, Gaussian naive
// Bayes) evaluated by stratified k-fold cross-validation, and the confusion
// matrices they produce.
//
// Tie rules are part of the contract so that a seed fully determines the
// confusion matrix:
//   knn:         neighbours ordered by (distance, training order); the vote
//                goes to the most frequent label, then the smallest mean
//                neighbour distance, then the smallest label index.
//   naive bayes: argmax log-posterior; equal posteriors go to the smallest
//                label index.

#ifndef AVATAR_ALIAS_CLASSIFIER_H_
#define AVATAR_ALIAS_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avatar_alias/trace_dataset.h"

namespace avatar_alias {

enum class ClassifierKind { kKnn, kNaiveBayes, kExternal };

std::string_view ClassifierKindName(ClassifierKind kind);
ClassifierKind ParseClassifierKind(std::string_view text);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::kKnn;
  int k = 1;
  double variance_floor = 1e-9;
  int folds = 10;
  std::uint64_t seed = 0;
  // When false an avatar with fewer traces than folds is an error. Surrogate
  // splits routinely produce such avatars, so the pipeline turns this on.
  bool allow_small_classes = false;
  // Folds evaluated concurrently; the result does not depend on it.
  int threads = 1;

  void Validate() const;
};

// Row-major labelled vectors. Labels are indices into an external label list;
// "label order" everywhere means the order of those indices.
class TrainingSet {
 public:
  explicit TrainingSet(std::size_t dim) : dim_(dim) {}

  void Add(std::span<const double> features, std::size_t label);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  // 1 + largest label index present.
  std::size_t num_labels() const { return num_labels_; }

 private:
  std::size_t dim_;
  std::size_t num_labels_ = 0;
  std::vector<double> values_;
  std::vector<std::size_t> labels_;
};

std::size_t KnnPredict(const TrainingSet& train, std::span<const double> query, int k);

class GaussianNaiveBayes {
 public:
  GaussianNaiveBayes(const TrainingSet& train, double variance_floor);

  std::vector<double> LogPosterior(std::span<const double> query) const;
  std::size_t Predict(std::span<const double> query) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> log_prior_;  // -inf for labels absent from training
  std::vector<double> mean_;       // [label * dim + feature]
  std::vector<double> variance_;
};

std::size_t NaiveBayesFitPredict(const TrainingSet& train, std::span<const double> query,
                                 double variance_floor);

// Plug-in point for other learners.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void Fit(const TrainingSet& train) = 0;
  virtual std::size_t Predict(std::span<const double> query) const = 0;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>()>;

// knn or naive_bayes; `external` has no in-process model and throws.
std::unique_ptr<Classifier> MakeClassifier(const ClassifierConfig& config);

struct ConfusionMatrix {
  std::vector<std::string> labels;
  // counts[i][j]: traces of labels[i] predicted as labels[j].
  std::vector<std::vector<std::int64_t>> counts;

  std::size_t size() const { return labels.size(); }
  std::int64_t RowSum(std::size_t i) const;
  // Square, non-negative, distinct labels.
  void Validate() const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct NormalizedConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;

  std::size_t size() const { return labels.size(); }
  double at(std::size_t i, std::size_t j) const { return rows[i][j]; }
  // Throws InputError for unknown labels.
  std::size_t IndexOf(std::string_view label) const;
  // Square, entries in [0,1], rows summing to 1 within 1e-9.
  void Validate() const;
};

// Fold index per item: items of each label are shuffled with one generator
// seeded by `seed` (labels processed in index order), then dealt
// round-robin, continuing the rotation across labels.
std::vector<int> StratifiedFolds(std::span<const std::size_t> labels, int folds,
                                 std::uint64_t seed);

// Labels of the matrix are the dataset's avatar labels in sorted order.
ConfusionMatrix CrossValidate(std::span<const FeatureVector> dataset,
                              const ClassifierConfig& config);
// Same fold logic with a caller-supplied learner; only folds, seed,
// allow_small_classes and threads of `config` are used.
ConfusionMatrix CrossValidate(std::span<const FeatureVector> dataset,
                              const ClassifierConfig& config,
                              const ClassifierFactory& factory);

NormalizedConfusionMatrix Normalize(const ConfusionMatrix& cm);

// {"labels": [...], "counts": [[...]]}
std::string ConfusionToJson(const ConfusionMatrix& cm);
ConfusionMatrix ConfusionFromJson(std::string_view json);

// {"labels": [...], "rows": [[...]]}, 15 significant digits.
std::string NormalizedToJson(const NormalizedConfusionMatrix& m);
NormalizedConfusionMatrix NormalizedFromJson(std::string_view json);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_CLASSIFIER_H_
