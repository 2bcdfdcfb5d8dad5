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

#include "avatar_alias/fuzzy_pattern.h"

#include <algorithm>
#include <string>

#include "avatar_alias/errors.h"

namespace avatar_alias {
namespace {

void CheckSameSpace(const FuzzyPattern& p, const FuzzyPattern& q) {
  if (p.size() != q.size()) {
    throw InputError("fuzzy patterns over different label spaces (" +
                     std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
}

}  // namespace

FuzzyPattern Meet(const FuzzyPattern& p, const FuzzyPattern& q) {
  CheckSameSpace(p, q);
  FuzzyPattern out;
  out.degrees.resize(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    out.degrees[j] = std::min(p.degrees[j], q.degrees[j]);
  }
  return out;
}

bool Leq(const FuzzyPattern& p, const FuzzyPattern& q) {
  CheckSameSpace(p, q);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p.degrees[j] > q.degrees[j]) return false;
  }
  return true;
}

double Score(const FuzzyPattern& pattern) {
  double sum = 0.0;
  for (double d : pattern.degrees) sum += d;
  return sum;
}

}  // namespace avatar_alias
