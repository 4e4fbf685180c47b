// Copyright 2026 The telepovm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace telepovm {

/// SplitMix64 finalizer. Used only for seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seeded random source for measurement sampling.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform variates are built from the top 53 bits of one engine
/// draw, so a given seed replays identically across standard libraries.
/// Per-trial streams are seeded with splitmix64(seed ^ splitmix64(trial)).
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
        return Rng(splitmix64(seed ^ splitmix64(trial)));
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

   private:
    std::mt19937_64 engine_;
};

}  // namespace telepovm
