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

#include "avatar_alias/trace_dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "avatar_alias/csv.h"
#include "avatar_alias/errors.h"
#include "avatar_alias/random.h"

namespace avatar_alias {
namespace {

std::string Lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return std::string(text);
}

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::string_view ActionTypeName(ActionType type) {
  switch (type) {
    case ActionType::kAssign: return "assign";
    case ActionType::kRemove: return "remove";
    case ActionType::kSelect: return "select";
    case ActionType::kOther: return "other";
  }
  return "other";
}

ActionType ParseActionType(std::string_view text) {
  const std::string lowered = Lower(Trim(text));
  if (lowered == "assign") return ActionType::kAssign;
  if (lowered == "remove") return ActionType::kRemove;
  if (lowered == "select") return ActionType::kSelect;
  if (lowered == "other") return ActionType::kOther;
  throw InputError("unknown action_type '" + std::string(text) + "'");
}

bool IsHotkeyAction(ActionType type) { return type != ActionType::kOther; }

const std::array<std::string, kNumFeatures>& FeatureNames() {
  static const std::array<std::string, kNumFeatures> names = [] {
    std::array<std::string, kNumFeatures> n;
    for (int key = 0; key < kNumHotkeys; ++key) {
      for (ActionType a : {ActionType::kAssign, ActionType::kRemove, ActionType::kSelect}) {
        n[HotkeyFeatureIndex(key, a)] =
            std::string(ActionTypeName(a)) + "_" + std::to_string(key);
      }
    }
    n[kFactionFeature] = "faction";
    n[kOutcomeFeature] = "outcome";
    n[kApmFeature] = "apm";
    return n;
  }();
  return names;
}

std::size_t HotkeyFeatureIndex(int key, ActionType action) {
  if (key < 0 || key >= kNumHotkeys || !IsHotkeyAction(action)) {
    throw InputError("no hotkey feature for key " + std::to_string(key) + " / " +
                     std::string(ActionTypeName(action)));
  }
  return static_cast<std::size_t>(key) * 3 + static_cast<std::size_t>(action);
}

void DatasetSpec::Validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ConfigError("tau must be a positive number of seconds");
  }
  if (theta < 1) throw ConfigError("theta must be >= 1");
}

void SurrogateSpec::Validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in (0, 1]");
  if (!(beta >= 0.5 && beta < 1.0)) throw ConfigError("beta must be in [0.5, 1)");
}

int ParseFaction(std::string_view text) {
  const std::string lowered = Lower(Trim(text));
  if (lowered == "protoss") return 0;
  if (lowered == "terran") return 1;
  if (lowered == "zerg") return 2;
  if (lowered == "random") return 3;
  const std::int64_t value = ParseInt(lowered, "faction");
  if (value < 0 || value > 1000) throw InputError("faction code out of range: " + lowered);
  return static_cast<int>(value);
}

int ParseOutcome(std::string_view text) {
  const std::string lowered = Lower(Trim(text));
  if (lowered == "winner" || lowered == "win" || lowered == "1") return 1;
  if (lowered == "loser" || lowered == "loss" || lowered == "0") return 0;
  throw InputError("unknown outcome '" + std::string(text) + "'");
}

std::vector<FeatureVector> ExtractFeatures(std::span<const TraceEvent> events,
                                           double tau,
                                           std::span<const TraceMeta> meta) {
  DatasetSpec{tau, 1}.Validate();
  std::unordered_map<std::string, std::size_t> index;
  std::vector<FeatureVector> out(meta.size());
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (!index.emplace(meta[i].trace_id, i).second) {
      throw InputError("duplicate trace_id in metadata: " + meta[i].trace_id);
    }
    out[i].trace_id = meta[i].trace_id;
    out[i].avatar = meta[i].avatar;
    out[i].features[kFactionFeature] = meta[i].faction;
    out[i].features[kOutcomeFeature] = meta[i].outcome;
  }

  std::vector<std::size_t> actions(meta.size(), 0);
  for (const TraceEvent& e : events) {
    auto it = index.find(e.trace_id);
    if (it == index.end()) {
      throw InputError("event references unknown trace_id: " + e.trace_id);
    }
    if (!(e.timestamp >= 0.0) || !std::isfinite(e.timestamp)) {
      throw InputError("negative or invalid timestamp in trace " + e.trace_id);
    }
    if (IsHotkeyAction(e.action) != e.key.has_value()) {
      throw InputError("hotkey key must be present exactly for assign/remove/select "
                       "events (trace " + e.trace_id + ")");
    }
    if (e.timestamp > tau) continue;
    ++actions[it->second];
    if (e.key) out[it->second].features[HotkeyFeatureIndex(*e.key, e.action)] += 1.0;
  }

  for (std::size_t i = 0; i < meta.size(); ++i) {
    const double window = std::min(tau, meta[i].duration_s);
    out[i].features[kApmFeature] =
        window > 0.0 ? 60.0 * static_cast<double>(actions[i]) / window : 0.0;
  }
  return out;
}

std::map<std::string, std::size_t> CountTraces(std::span<const FeatureVector> dataset) {
  std::map<std::string, std::size_t> counts;
  for (const auto& fv : dataset) ++counts[fv.avatar.label];
  return counts;
}

std::vector<FeatureVector> FilterMinTraces(std::span<const FeatureVector> dataset,
                                           int theta) {
  if (theta < 1) throw ConfigError("theta must be >= 1");
  const auto counts = CountTraces(dataset);
  std::vector<FeatureVector> kept;
  for (const auto& fv : dataset) {
    if (counts.at(fv.avatar.label) >= static_cast<std::size_t>(theta)) kept.push_back(fv);
  }
  if (kept.empty()) {
    throw InputError("no avatar has at least theta=" + std::to_string(theta) +
                     " traces; the filter is too aggressive");
  }
  return kept;
}

SurrogateInjection InjectSurrogates(std::span<const FeatureVector> dataset,
                                    const SurrogateSpec& spec, int theta) {
  spec.Validate();
  if (theta < 1) throw ConfigError("theta must be >= 1");

  const auto counts = CountTraces(dataset);
  std::vector<std::pair<std::string, std::size_t>> eligible;
  for (const auto& [label, count] : counts) {
    if (count >= static_cast<std::size_t>(theta)) eligible.emplace_back(label, count);
  }
  std::stable_sort(eligible.begin(), eligible.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  // The epsilon absorbs representation error such as 0.1 * 30 = 3.0000000000000004.
  const auto num_split = std::min<std::size_t>(
      eligible.size(),
      static_cast<std::size_t>(std::ceil(spec.gamma * eligible.size() - 1e-9)));

  SurrogateInjection result;
  result.dataset.assign(dataset.begin(), dataset.end());
  Rng rng(spec.seed);
  for (std::size_t s = 0; s < num_split; ++s) {
    const std::string& source = eligible[s].first;
    SurrogatePair pair{source + "#1", source + "#2", source};
    if (counts.contains(pair.first) || counts.contains(pair.second)) {
      throw InputError("surrogate label collides with an existing avatar: " + source);
    }
    std::vector<std::size_t> traces;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (dataset[i].avatar.label == source) traces.push_back(i);
    }
    const auto first_size =
        static_cast<std::size_t>(std::lround(spec.beta * static_cast<double>(traces.size())));
    if (first_size >= traces.size() || first_size == 0) {
      result.warnings.push_back("skipped surrogate split of '" + source + "': " +
                                std::to_string(traces.size()) +
                                " traces leave one surrogate empty");
      continue;
    }
    Shuffle(std::span<std::size_t>(traces), rng);
    for (std::size_t k = 0; k < traces.size(); ++k) {
      result.dataset[traces[k]].avatar.label = k < first_size ? pair.first : pair.second;
    }
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

std::vector<TraceEvent> ReadEventsCsv(std::istream& in, std::string_view source) {
  const CsvTable table = ReadCsv(in, source);
  RequireColumns(table, {"trace_id", "timestamp", "action_type", "key"}, source);
  std::vector<TraceEvent> events;
  events.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    try {
      TraceEvent e;
      e.trace_id = row[0];
      e.timestamp = ParseDouble(row[1], "timestamp");
      e.action = ParseActionType(row[2]);
      const std::string key = Trim(row[3]);
      if (!key.empty()) {
        const std::int64_t k = ParseInt(key, "key");
        if (k < 0 || k >= kNumHotkeys) throw InputError("hotkey key must be 0-9");
        e.key = static_cast<int>(k);
      }
      if (IsHotkeyAction(e.action) != e.key.has_value()) {
        throw InputError("key must be set exactly for assign/remove/select");
      }
      if (e.timestamp < 0.0) throw InputError("negative timestamp");
      events.push_back(std::move(e));
    } catch (const InputError& err) {
      throw InputError(Where(source, table.lines[r]) + err.what());
    }
  }
  // Ingestion sort: stable, by (trace_id, timestamp).
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.trace_id != b.trace_id) return a.trace_id < b.trace_id;
    return a.timestamp < b.timestamp;
  });
  return events;
}

void WriteEventsCsv(std::ostream& out, std::span<const TraceEvent> events) {
  out << "trace_id,timestamp,action_type,key\n";
  for (const auto& e : events) {
    WriteCsvRow(out, {e.trace_id, FormatDouble(e.timestamp),
                      std::string(ActionTypeName(e.action)),
                      e.key ? std::to_string(*e.key) : std::string()});
  }
}

std::vector<TraceMeta> ReadMetaCsv(std::istream& in, std::string_view source) {
  const CsvTable table = ReadCsv(in, source);
  RequireColumns(table,
                 {"trace_id", "avatar_label", "account_id", "server", "name", "faction",
                  "outcome", "duration_s"},
                 source);
  std::vector<TraceMeta> meta;
  meta.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    try {
      TraceMeta m;
      m.trace_id = row[0];
      m.avatar = AvatarIdentity{row[1], Trim(row[2]), Trim(row[3]), row[4]};
      if (m.trace_id.empty() || m.avatar.label.empty()) {
        throw InputError("trace_id and avatar_label must be non-empty");
      }
      m.faction = ParseFaction(row[5]);
      m.outcome = ParseOutcome(row[6]);
      m.duration_s = ParseDouble(row[7], "duration_s");
      if (m.duration_s < 0.0) throw InputError("negative duration_s");
      meta.push_back(std::move(m));
    } catch (const InputError& err) {
      throw InputError(Where(source, table.lines[r]) + err.what());
    }
  }
  return meta;
}

void WriteMetaCsv(std::ostream& out, std::span<const TraceMeta> meta) {
  out << "trace_id,avatar_label,account_id,server,name,faction,outcome,duration_s\n";
  for (const auto& m : meta) {
    WriteCsvRow(out, {m.trace_id, m.avatar.label, m.avatar.account_id, m.avatar.server,
                      m.avatar.name, std::to_string(m.faction), std::to_string(m.outcome),
                      FormatDouble(m.duration_s)});
  }
}

std::vector<FeatureVector> ReadFeatureCsv(std::istream& in, std::string_view source) {
  const CsvTable table = ReadCsv(in, source);
  std::vector<std::string> columns = {"trace_id", "avatar_label"};
  for (const auto& name : FeatureNames()) columns.push_back(name);
  RequireColumns(table, columns, source);
  if (table.header.size() != columns.size()) {
    throw InputError(std::string(source) + ": unexpected extra feature columns");
  }
  std::vector<FeatureVector> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    try {
      FeatureVector fv;
      fv.trace_id = row[0];
      fv.avatar.label = row[1];
      for (std::size_t f = 0; f < kNumFeatures; ++f) {
        fv.features[f] = ParseDouble(row[2 + f], FeatureNames()[f]);
        if (!std::isfinite(fv.features[f])) throw InputError("non-finite feature value");
      }
      for (std::size_t f = 0; f < kNumHotkeyFeatures; ++f) {
        const double v = fv.features[f];
        if (v < 0.0 || v != std::floor(v)) {
          throw InputError("hotkey count must be a non-negative integer: " +
                           FeatureNames()[f]);
        }
      }
      out.push_back(std::move(fv));
    } catch (const InputError& err) {
      throw InputError(Where(source, table.lines[r]) + err.what());
    }
  }
  return out;
}

void WriteFeatureCsv(std::ostream& out, std::span<const FeatureVector> dataset) {
  std::vector<std::string> header = {"trace_id", "avatar_label"};
  for (const auto& name : FeatureNames()) header.push_back(name);
  WriteCsvRow(out, header);
  std::vector<std::string> fields;
  for (const auto& fv : dataset) {
    fields.clear();
    fields.push_back(fv.trace_id);
    fields.push_back(fv.avatar.label);
    for (double v : fv.features) fields.push_back(FormatDouble(v));
    WriteCsvRow(out, fields);
  }
}

std::map<std::string, AvatarIdentity> BuildIdentityIndex(std::span<const TraceMeta> meta) {
  std::map<std::string, AvatarIdentity> index;
  for (const auto& m : meta) {
    auto [it, inserted] = index.emplace(m.avatar.label, m.avatar);
    if (!inserted && it->second != m.avatar) {
      throw InputError("conflicting identity fields for avatar '" + m.avatar.label + "'");
    }
  }
  return index;
}

}  // namespace avatar_alias
