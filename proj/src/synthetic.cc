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

#include "avatar_alias/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "avatar_alias/errors.h"
#include "avatar_alias/random.h"

namespace avatar_alias {
namespace {

constexpr int kMaxProfileAttempts = 10000;
constexpr ActionType kHotkeyActions[] = {ActionType::kAssign, ActionType::kRemove,
                                         ActionType::kSelect};

std::string Numbered(const char* prefix, int value, int width) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%s%0*d", prefix, width, value);
  return buffer;
}

double Uniform(Rng& rng, double low, double high) {
  return low + (high - low) * UniformUnit(rng);
}

int DrawCount(Rng& rng, double mean, double std) {
  return static_cast<int>(std::lround(std::max(0.0, mean + std * StandardNormal(rng))));
}

// Millisecond resolution keeps the CSV short.
double DrawTime(Rng& rng, double low, double high) {
  return std::floor(Uniform(rng, low, high) * 1000.0) / 1000.0;
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (num_avatars < 1) throw ConfigError("num_avatars must be >= 1");
  if (traces_per_avatar < 1) throw ConfigError("traces_per_avatar must be >= 1");
  if (!(tau > 0.0)) throw ConfigError("tau must be > 0");
  if (!(intra_std >= 0.0)) throw ConfigError("intra_std must be >= 0");
  if (!(mean_low >= 0.0 && mean_high > mean_low)) {
    throw ConfigError("need 0 <= mean_low < mean_high");
  }
  if (!(min_separation >= 0.0)) throw ConfigError("min_separation must be >= 0");
  if (late_events_max < 0) throw ConfigError("late_events_max must be >= 0");
  if (!(duration_low > tau && duration_high >= duration_low)) {
    throw ConfigError("need tau < duration_low <= duration_high");
  }
  if (shared_account_pairs < 0 || shared_name_pairs < 0 ||
      2 * (shared_account_pairs + shared_name_pairs) > num_avatars) {
    throw ConfigError("shared account/name pairs exceed the number of avatars");
  }
}

SyntheticData GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  SyntheticData data;

  const double min_distance = spec.min_separation * spec.intra_std;
  for (int a = 0; a < spec.num_avatars; ++a) {
    std::array<double, kNumHotkeyFeatures> profile{};
    int attempts = 0;
    for (;; ++attempts) {
      if (attempts == kMaxProfileAttempts) {
        throw ConfigError("cannot place " + std::to_string(spec.num_avatars) +
                          " profiles with the requested separation");
      }
      for (double& mean : profile) mean = Uniform(rng, spec.mean_low, spec.mean_high);
      const bool separated =
          std::all_of(data.profiles.begin(), data.profiles.end(), [&](const auto& other) {
            double d2 = 0.0;
            for (std::size_t f = 0; f < profile.size(); ++f) {
              d2 += (profile[f] - other[f]) * (profile[f] - other[f]);
            }
            return std::sqrt(d2) >= min_distance;
          });
      if (separated) break;
    }
    data.profiles.push_back(profile);
  }

  std::vector<AvatarIdentity> identities;
  for (int a = 0; a < spec.num_avatars; ++a) {
    identities.push_back({Numbered("avatar_", a, 3), Numbered("acct-", a, 3), "eu",
                          Numbered("player", a, 3)});
  }
  int next = 0;
  for (int p = 0; p < spec.shared_account_pairs; ++p, next += 2) {
    identities[next + 1].account_id = identities[next].account_id;
  }
  for (int p = 0; p < spec.shared_name_pairs; ++p, next += 2) {
    identities[next + 1].name = identities[next].name;
  }

  int trace_number = 0;
  for (int a = 0; a < spec.num_avatars; ++a) {
    const auto& profile = data.profiles[a];
    const int faction = static_cast<int>(UniformBelow(rng, 3));
    const double other_mean = Uniform(rng, 10.0, 40.0);
    for (int t = 0; t < spec.traces_per_avatar; ++t) {
      TraceMeta meta;
      meta.trace_id = Numbered("trace_", trace_number++, 5);
      meta.avatar = identities[a];
      meta.faction = faction;
      meta.outcome = static_cast<int>(UniformBelow(rng, 2));
      meta.duration_s = std::round(Uniform(rng, spec.duration_low, spec.duration_high));

      std::vector<TraceEvent> trace;
      for (int key = 0; key < kNumHotkeys; ++key) {
        for (ActionType action : kHotkeyActions) {
          const int count =
              DrawCount(rng, profile[HotkeyFeatureIndex(key, action)], spec.intra_std);
          for (int c = 0; c < count; ++c) {
            trace.push_back({meta.trace_id, DrawTime(rng, 0.0, spec.tau), action, key});
          }
        }
      }
      const int others = DrawCount(rng, other_mean, spec.intra_std);
      for (int c = 0; c < others; ++c) {
        trace.push_back(
            {meta.trace_id, DrawTime(rng, 0.0, spec.tau), ActionType::kOther, std::nullopt});
      }
      const int late = static_cast<int>(UniformBelow(rng, spec.late_events_max + 1));
      for (int c = 0; c < late; ++c) {
        const double when = DrawTime(rng, spec.tau + 1.0, meta.duration_s);
        const int key = static_cast<int>(UniformBelow(rng, kNumHotkeys));
        trace.push_back({meta.trace_id, when, kHotkeyActions[UniformBelow(rng, 3)], key});
      }
      std::stable_sort(trace.begin(), trace.end(), [](const auto& x, const auto& y) {
        return x.timestamp < y.timestamp;
      });
      data.events.insert(data.events.end(), trace.begin(), trace.end());
      data.meta.push_back(std::move(meta));
    }
  }
  return data;
}

}  // namespace avatar_alias
