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

#include "avatar_alias/pattern_lattice.h"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

#include "avatar_alias/csv.h"
#include "avatar_alias/errors.h"
#include "json.hpp"

namespace avatar_alias {
namespace {

// Intent inside the lattice under construction. `floor` stands for every
// pattern whose score fell below the pruning threshold; it sits below all
// other intents.
struct Intent {
  std::vector<double> degrees;
  bool floor = false;
};

struct Node {
  Intent intent;
  AvatarSet extent;
  std::vector<std::size_t> parents;   // more general concepts (covers above)
  std::vector<std::size_t> children;  // more specific concepts
};

// Incremental lattice construction with addIntent. Parents of a node are
// its upper covers (bigger extent, smaller intent). Construction starts from
// the single concept (∅, ⟨1,…,1⟩) and inserts one avatar row at a time.
class AddIntentBuilder {
 public:
  AddIntentBuilder(const NormalizedConfusionMatrix& m, double min_score)
      : matrix_(m), min_score_(min_score) {}

  const std::vector<Node>& Build() {
    const std::size_t n = matrix_.size();
    nodes_.clear();
    nodes_.push_back(Node{Project(std::vector<double>(n, 1.0)), {}, {}, {}});
    const std::size_t bottom = 0;
    for (std::size_t g = 0; g < n; ++g) {
      const std::size_t object_concept = AddIntent(Project(matrix_.rows[g]), bottom);
      AddToExtentUpwards(object_concept, g);
    }
    return nodes_;
  }

 private:
  Intent Project(std::vector<double> degrees) const {
    double score = 0.0;
    for (double d : degrees) score += d;
    if (score < min_score_) return Intent{{}, true};
    return Intent{std::move(degrees), false};
  }

  static bool Le(const Intent& a, const Intent& b) {
    if (a.floor) return true;
    if (b.floor) return false;
    for (std::size_t j = 0; j < a.degrees.size(); ++j) {
      if (a.degrees[j] > b.degrees[j]) return false;
    }
    return true;
  }

  static bool Equal(const Intent& a, const Intent& b) {
    return a.floor == b.floor && (a.floor || a.degrees == b.degrees);
  }

  Intent MeetOf(const Intent& a, const Intent& b) const {
    if (a.floor || b.floor) return Intent{{}, true};
    std::vector<double> out(a.degrees.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::min(a.degrees[j], b.degrees[j]);
    return Project(std::move(out));
  }

  std::size_t GetMaximalConcept(const Intent& intent, std::size_t generator) const {
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t parent : nodes_[generator].parents) {
        if (Le(intent, nodes_[parent].intent)) {
          generator = parent;
          moved = true;
          break;
        }
      }
    }
    return generator;
  }

  std::size_t AddIntent(const Intent& intent, std::size_t generator) {
    generator = GetMaximalConcept(intent, generator);
    if (Equal(nodes_[generator].intent, intent)) return generator;

    const std::vector<std::size_t> generator_parents = nodes_[generator].parents;
    std::vector<std::size_t> new_parents;
    for (std::size_t candidate : generator_parents) {
      if (!Le(nodes_[candidate].intent, intent)) {
        const Intent met = MeetOf(nodes_[candidate].intent, intent);
        candidate = AddIntent(met, candidate);
      }
      bool add = true;
      for (auto it = new_parents.begin(); it != new_parents.end();) {
        if (Le(nodes_[candidate].intent, nodes_[*it].intent)) {
          add = false;
          break;
        }
        if (Le(nodes_[*it].intent, nodes_[candidate].intent)) {
          it = new_parents.erase(it);
        } else {
          ++it;
        }
      }
      if (add) new_parents.push_back(candidate);
    }

    const std::size_t created = nodes_.size();
    nodes_.push_back(Node{intent, nodes_[generator].extent, {}, {}});
    for (std::size_t parent : new_parents) {
      RemoveLink(parent, generator);
      SetLink(parent, created);
    }
    SetLink(created, generator);
    return created;
  }

  void SetLink(std::size_t parent, std::size_t child) {
    nodes_[child].parents.push_back(parent);
    nodes_[parent].children.push_back(child);
  }

  void RemoveLink(std::size_t parent, std::size_t child) {
    std::erase(nodes_[child].parents, parent);
    std::erase(nodes_[parent].children, child);
  }

  void AddToExtentUpwards(std::size_t start, std::size_t object) {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::size_t> stack = {start};
    seen[start] = true;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      nodes_[c].extent.push_back(object);  // objects arrive in increasing order
      for (std::size_t p : nodes_[c].parents) {
        if (!seen[p]) {
          seen[p] = true;
          stack.push_back(p);
        }
      }
    }
  }

  const NormalizedConfusionMatrix& matrix_;
  double min_score_;
  std::vector<Node> nodes_;
};

void SortCanonical(std::vector<PatternConcept>& concepts) {
  std::sort(concepts.begin(), concepts.end(), [](const auto& a, const auto& b) {
    if (a.extent.size() != b.extent.size()) return a.extent.size() < b.extent.size();
    return a.extent < b.extent;
  });
}

}  // namespace

FuzzyPattern ExtentToIntent(const AvatarSet& extent, const NormalizedConfusionMatrix& m) {
  if (extent.empty()) throw InputError("extent must be non-empty");
  FuzzyPattern out = FuzzyPattern::Ones(m.size());
  for (std::size_t i : extent) {
    if (i >= m.size()) throw InputError("extent index out of range");
    for (std::size_t j = 0; j < m.size(); ++j) {
      out.degrees[j] = std::min(out.degrees[j], m.rows[i][j]);
    }
  }
  return out;
}

FuzzyPattern ExtentToIntent(const std::vector<std::string>& labels,
                            const NormalizedConfusionMatrix& m) {
  AvatarSet extent;
  for (const auto& label : labels) extent.push_back(m.IndexOf(label));
  std::sort(extent.begin(), extent.end());
  extent.erase(std::unique(extent.begin(), extent.end()), extent.end());
  return ExtentToIntent(extent, m);
}

AvatarSet IntentToExtent(const FuzzyPattern& intent, const NormalizedConfusionMatrix& m) {
  if (intent.size() != m.size()) {
    throw InputError("pattern length does not match the matrix");
  }
  AvatarSet out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    bool dominated = true;
    for (std::size_t j = 0; j < m.size() && dominated; ++j) {
      dominated = intent.degrees[j] <= m.rows[i][j];
    }
    if (dominated) out.push_back(i);
  }
  return out;
}

ConceptSet EnumerateConcepts(const NormalizedConfusionMatrix& m, double min_score) {
  m.Validate();
  if (!(min_score >= 0.0)) throw ConfigError("min_score must be >= 0");
  AddIntentBuilder builder(m, min_score);
  ConceptSet out;
  out.labels = m.labels;
  for (const Node& node : builder.Build()) {
    if (node.intent.floor) continue;
    FuzzyPattern intent{node.intent.degrees};
    const double score = Score(intent);
    if (score < min_score) continue;
    out.concepts.push_back(PatternConcept{node.extent, std::move(intent), score});
  }
  SortCanonical(out.concepts);
  return out;
}

ConceptSet BruteForceConcepts(const NormalizedConfusionMatrix& m) {
  m.Validate();
  const std::size_t n = m.size();
  if (n > 20) throw InputError("brute-force enumeration is limited to 20 avatars");
  std::set<AvatarSet> closed;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    FuzzyPattern intent = FuzzyPattern::Ones(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) intent = Meet(intent, FuzzyPattern{m.rows[i]});
    }
    closed.insert(IntentToExtent(intent, m));
  }
  ConceptSet out;
  out.labels = m.labels;
  for (const AvatarSet& extent : closed) {
    FuzzyPattern intent = extent.empty() ? FuzzyPattern::Ones(n) : ExtentToIntent(extent, m);
    const double score = Score(intent);
    out.concepts.push_back(PatternConcept{extent, std::move(intent), score});
  }
  SortCanonical(out.concepts);
  return out;
}

std::vector<std::string> ExtentLabels(const AvatarSet& extent,
                                      const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  out.reserve(extent.size());
  for (std::size_t i : extent) out.push_back(labels.at(i));
  return out;
}

std::string ConceptsToJson(const ConceptSet& concepts) {
  std::ostringstream out;
  out << "[";
  for (std::size_t c = 0; c < concepts.concepts.size(); ++c) {
    const PatternConcept& pc = concepts.concepts[c];
    out << (c ? ",\n" : "\n") << "  {\"extent\": [";
    for (std::size_t i = 0; i < pc.extent.size(); ++i) {
      out << (i ? ", " : "") << nlohmann::json(concepts.labels.at(pc.extent[i])).dump();
    }
    out << "], \"intent\": [";
    for (std::size_t j = 0; j < pc.intent.size(); ++j) {
      out << (j ? ", " : "") << FormatDouble(pc.intent.degrees[j]);
    }
    out << "], \"score\": " << FormatDouble(pc.score) << "}";
  }
  out << (concepts.concepts.empty() ? "]\n" : "\n]\n");
  return out.str();
}

}  // namespace avatar_alias
