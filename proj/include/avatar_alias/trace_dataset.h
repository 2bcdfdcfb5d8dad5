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

// Game traces and their feature vectors: ingestion of pre-parsed event and
// metadata tables, tau-truncated hotkey feature extraction, the theta
// minimum-games filter and surrogate avatar injection.

#ifndef AVATAR_ALIAS_TRACE_DATASET_H_
#define AVATAR_ALIAS_TRACE_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace avatar_alias {

// Who generated a trace. Empty optional fields mean "unknown".
struct AvatarIdentity {
  std::string label;  // classifier class label, unique in a dataset
  std::string account_id;
  std::string server;
  std::string name;

  bool operator==(const AvatarIdentity&) const = default;
};

enum class ActionType { kAssign, kRemove, kSelect, kOther };

std::string_view ActionTypeName(ActionType type);
ActionType ParseActionType(std::string_view text);
bool IsHotkeyAction(ActionType type);

struct TraceEvent {
  std::string trace_id;
  double timestamp = 0.0;  // seconds from game start
  ActionType action = ActionType::kOther;
  std::optional<int> key;  // 0-9, present iff IsHotkeyAction(action)
};

// One row of the trace metadata table.
struct TraceMeta {
  std::string trace_id;
  AvatarIdentity avatar;
  int faction = 0;
  int outcome = 0;  // winner = 1, loser = 0
  double duration_s = 0.0;
};

inline constexpr int kNumHotkeys = 10;
inline constexpr std::size_t kNumHotkeyFeatures = 30;
inline constexpr std::size_t kFactionFeature = 30;
inline constexpr std::size_t kOutcomeFeature = 31;
inline constexpr std::size_t kApmFeature = 32;
inline constexpr std::size_t kNumFeatures = 33;

using FeatureArray = std::array<double, kNumFeatures>;

// Fixed feature order: assign_0, remove_0, select_0, assign_1, ...,
// select_9, faction, outcome, apm.
const std::array<std::string, kNumFeatures>& FeatureNames();
std::size_t HotkeyFeatureIndex(int key, ActionType action);

struct FeatureVector {
  std::string trace_id;
  AvatarIdentity avatar;
  FeatureArray features{};
};

struct DatasetSpec {
  double tau = 90.0;  // truncation horizon in seconds
  int theta = 1;      // minimum traces per avatar

  void Validate() const;
};

struct SurrogateSpec {
  double gamma = 0.2;  // share of the most active avatars to split
  double beta = 0.5;   // share of traces given to the first surrogate
  std::uint64_t seed = 0;

  void Validate() const;
};

// Faction dictionary: protoss=0, terran=1, zerg=2, random=3
// (case-insensitive). Plain non-negative integers are accepted as-is.
int ParseFaction(std::string_view text);
// "winner"/"win"/"1" -> 1, "loser"/"loss"/"0" -> 0.
int ParseOutcome(std::string_view text);

// Counts hotkey events with timestamp <= tau. APM is
// 60 * (events with timestamp <= tau) / min(tau, duration), or 0 when that
// window is empty. Output follows the order of `meta`. Event order inside a
// trace does not matter.
std::vector<FeatureVector> ExtractFeatures(std::span<const TraceEvent> events,
                                           double tau,
                                           std::span<const TraceMeta> meta);

// Trace count per avatar label.
std::map<std::string, std::size_t> CountTraces(std::span<const FeatureVector> dataset);

// Keeps every trace of avatars that have at least `theta` traces.
// Throws InputError when nothing survives.
std::vector<FeatureVector> FilterMinTraces(std::span<const FeatureVector> dataset,
                                           int theta);

struct SurrogatePair {
  std::string first;   // <source>#1
  std::string second;  // <source>#2
  std::string source;
};

struct SurrogateInjection {
  std::vector<FeatureVector> dataset;
  std::vector<SurrogatePair> pairs;
  std::vector<std::string> warnings;
};

// Splits the ceil(gamma * m) most active avatars (m = avatars with at least
// theta traces; ties on count broken by label) into <label>#1 / <label>#2.
// Each split avatar's traces are shuffled with a generator seeded by
// spec.seed, then the first round(beta * n) go to #1 and the rest to #2.
// Avatars whose split would leave #2 empty are skipped with a warning.
SurrogateInjection InjectSurrogates(std::span<const FeatureVector> dataset,
                                    const SurrogateSpec& spec, int theta);

// Event CSV: trace_id,timestamp,action_type,key
std::vector<TraceEvent> ReadEventsCsv(std::istream& in,
                                      std::string_view source = "events.csv");
void WriteEventsCsv(std::ostream& out, std::span<const TraceEvent> events);

// Metadata CSV:
// trace_id,avatar_label,account_id,server,name,faction,outcome,duration_s
std::vector<TraceMeta> ReadMetaCsv(std::istream& in,
                                   std::string_view source = "meta.csv");
void WriteMetaCsv(std::ostream& out, std::span<const TraceMeta> meta);

// Feature CSV: trace_id,avatar_label,<33 feature columns>. Only the avatar
// label of the identity survives the round trip.
std::vector<FeatureVector> ReadFeatureCsv(std::istream& in,
                                          std::string_view source = "features.csv");
void WriteFeatureCsv(std::ostream& out, std::span<const FeatureVector> dataset);

// label -> identity, from metadata rows. Conflicting identities for one
// label are an InputError.
std::map<std::string, AvatarIdentity> BuildIdentityIndex(std::span<const TraceMeta> meta);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_TRACE_DATASET_H_
