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

#include <string_view>

#include "telepovm/measure.hpp"
#include "telepovm/qcore.hpp"
#include "telepovm/rng.hpp"

namespace telepovm {

/// Inputs whose overlap exceeds 1 - kUsdDegeneracy are refused.
inline constexpr double kUsdDegeneracy = 1e-6;

enum class UsdOutcome { U = 0, V = 1, Inconclusive = 2 };

std::string_view to_string(UsdOutcome outcome);

/// Optimal equal-prior unambiguous discrimination of two qubit states.
/// `v` is stored phase-aligned so that <u|v> = overlap >= 0. POVM element
/// order is u, v, inconclusive.
struct UsdSetup {
    StateVector u;
    StateVector v;
    double overlap = 0.0;
    Povm povm;

    const Operator &element(UsdOutcome o) const { return povm[static_cast<std::size_t>(o)]; }
};

/// Throws ErrorCode::DegenerateStates when |<u|v>| > 1 - 1e-6.
UsdSetup usd_povm(const StateVector &u, const StateVector &v);

/// 1 - (alpha^2 - beta^2) for a Schmidt-ordered channel alpha >= beta >= 0.
double conclusive_probability(double alpha, double beta);

/// Samples one outcome of setup.povm on `state` with a single uniform variate.
UsdOutcome discriminate(const StateVector &state, const UsdSetup &setup, Rng &rng);

}  // namespace telepovm
