// Copyright 2026 The Authors.
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

// Counter-based seed mixing. Every random stream in the library is a pure
// function of (seed, counter), so results never depend on how work is split
// across threads.

#ifndef PTIM_RANDOM_H_
#define PTIM_RANDOM_H_

#include <cstdint>

namespace ptim {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for stream `index` under `seed`. Distinct indices give statistically
// independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Two-level derivation, e.g. (run seed, stream tag, item index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t index) {
  return derive_seed(derive_seed(seed, tag), index);
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit_closed_open(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1].
constexpr double unit_open_closed(std::uint64_t bits) {
  return 1.0 - unit_closed_open(bits);
}

}  // namespace ptim

#endif  // PTIM_RANDOM_H_
