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

// Seeded generator of replay-like traces with known structure.
//
// Every avatar gets a Gaussian profile over the 30 hotkey counts (means drawn
// uniformly, kept at least min_separation apart) and an activity level for
// non-hotkey actions. Each trace draws its counts from the profile and
// scatters the events over [0, tau]; a few extra events land after tau so
// that truncation is exercised.

#ifndef AVATAR_ALIAS_SYNTHETIC_H_
#define AVATAR_ALIAS_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "avatar_alias/trace_dataset.h"

namespace avatar_alias {

struct SyntheticSpec {
  int num_avatars = 50;
  int traces_per_avatar = 30;
  double tau = 90.0;
  double intra_std = 1.0;
  double mean_low = 1.0;
  double mean_high = 9.0;
  // Minimum Euclidean distance between hotkey mean vectors, in units of
  // intra_std.
  double min_separation = 4.0;
  int late_events_max = 5;
  double duration_low = 600.0;
  double duration_high = 1200.0;
  // Avatar pairs (2i, 2i+1) sharing an account id, then pairs sharing only a
  // display name.
  int shared_account_pairs = 2;
  int shared_name_pairs = 2;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct SyntheticData {
  std::vector<TraceEvent> events;
  std::vector<TraceMeta> meta;
  // Hotkey mean vector of each avatar, in avatar order.
  std::vector<std::array<double, kNumHotkeyFeatures>> profiles;
};

SyntheticData GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_SYNTHETIC_H_
