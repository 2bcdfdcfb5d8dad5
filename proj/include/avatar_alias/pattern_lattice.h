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

// A normalized confusion matrix seen as a pattern structure: avatars are
// objects, each described by its matrix row, and descriptions are combined
// with the fuzzy meet. The two derivation operators
//
//   ExtentToIntent(A) = meet of the rows of A
//   IntentToExtent(d) = { a : d ⊑ row(a) }
//
// form a Galois connection; its closed pairs are the pattern concepts.
// EnumerateConcepts builds them all with addIntent (van der Merwe, Obiedkov
// and Kourie, 2004); BruteForceConcepts closes every subset and is kept as
// the reference for tests.
//
// Concepts use ⟨1,…,1⟩ as the intent of the empty extent, so (∅, ⟨1,…,1⟩)
// is reported exactly when no row is all ones.

#ifndef AVATAR_ALIAS_PATTERN_LATTICE_H_
#define AVATAR_ALIAS_PATTERN_LATTICE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "avatar_alias/classifier.h"
#include "avatar_alias/fuzzy_pattern.h"

namespace avatar_alias {

// Sorted, duplicate-free indices into a matrix label list.
using AvatarSet = std::vector<std::size_t>;

struct PatternConcept {
  AvatarSet extent;
  FuzzyPattern intent;
  double score = 0.0;  // Score(intent)

  bool operator==(const PatternConcept&) const = default;
};

struct ConceptSet {
  std::vector<std::string> labels;  // label space of every extent and intent
  // Canonical order: extent size, then extent lexicographically by index.
  std::vector<PatternConcept> concepts;
};

// Throws InputError for an empty set or an index outside the matrix.
FuzzyPattern ExtentToIntent(const AvatarSet& extent, const NormalizedConfusionMatrix& m);
FuzzyPattern ExtentToIntent(const std::vector<std::string>& labels,
                            const NormalizedConfusionMatrix& m);

AvatarSet IntentToExtent(const FuzzyPattern& intent, const NormalizedConfusionMatrix& m);

// All concepts with Score(intent) >= min_score. Low-score intents are pruned
// during construction, not after: every meet scoring below the threshold is
// collapsed into one floor element, which is exact because the score only
// decreases along meets.
ConceptSet EnumerateConcepts(const NormalizedConfusionMatrix& m, double min_score = 0.0);

// Reference enumeration over all 2^n extents (n <= 20).
ConceptSet BruteForceConcepts(const NormalizedConfusionMatrix& m);

std::vector<std::string> ExtentLabels(const AvatarSet& extent,
                                      const std::vector<std::string>& labels);

// [{"extent": [...], "intent": [...], "score": x}, ...]
std::string ConceptsToJson(const ConceptSet& concepts);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_PATTERN_LATTICE_H_
