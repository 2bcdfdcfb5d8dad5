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

#ifndef AVATAR_ALIAS_FUZZY_PATTERN_H_
#define AVATAR_ALIAS_FUZZY_PATTERN_H_

#include <cstddef>
#include <vector>

namespace avatar_alias {

// A fuzzy set over the avatars of one confusion matrix: degrees[j] is the
// membership of the j-th matrix label, in [0,1]. A matrix row is the
// description of its avatar.
struct FuzzyPattern {
  std::vector<double> degrees;

  std::size_t size() const { return degrees.size(); }
  bool operator==(const FuzzyPattern&) const = default;

  static FuzzyPattern Zero(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
  static FuzzyPattern Ones(std::size_t n) { return {std::vector<double>(n, 1.0)}; }
};

// Componentwise minimum (fuzzy intersection). Throws InputError on a length
// mismatch.
FuzzyPattern Meet(const FuzzyPattern& p, const FuzzyPattern& q);

// Subsumption p ⊑ q, i.e. p ⊓ q == p: componentwise p <= q on the stored
// values, no tolerance.
bool Leq(const FuzzyPattern& p, const FuzzyPattern& q);

// Sum of the degrees. Large scores mean the confusion is concentrated on
// the avatars sharing the pattern.
double Score(const FuzzyPattern& pattern);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_FUZZY_PATTERN_H_
