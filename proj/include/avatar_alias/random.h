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

// Seeded randomness with a bit-exact definition on every platform.
// std::mt19937_64 is fully specified by the standard, but the std
// distributions and std::shuffle are not, so the draws below are spelled
// out by hand.

#ifndef AVATAR_ALIAS_RANDOM_H_
#define AVATAR_ALIAS_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace avatar_alias {

using Rng = std::mt19937_64;

// Uniform integer in [0, bound). bound must be > 0.
std::uint64_t UniformBelow(Rng& rng, std::uint64_t bound);

// Uniform real in [0, 1) with 53 random bits.
double UniformUnit(Rng& rng);

// Standard normal via Box-Muller (one output per call).
double StandardNormal(Rng& rng);

// Fisher-Yates shuffle.
template <typename T>
void Shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(UniformBelow(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_RANDOM_H_
