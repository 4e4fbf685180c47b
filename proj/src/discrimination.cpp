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

#include "telepovm/discrimination.hpp"

#include <cmath>

namespace telepovm {

namespace {

// The unit vector orthogonal to a normalized qubit state.
std::vector<Complex> orthogonal(const StateVector &x) {
    return {-std::conj(x[1]), std::conj(x[0])};
}

}  // namespace

std::string_view to_string(UsdOutcome outcome) {
    switch (outcome) {
        case UsdOutcome::U:
            return "u";
        case UsdOutcome::V:
            return "v";
        case UsdOutcome::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

UsdSetup usd_povm(const StateVector &u, const StateVector &v) {
    if (u.size() != 2 || v.size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "unambiguous discrimination is defined for qubits");
    }
    const Complex ov = inner(u.amplitudes(), v.amplitudes());
    const double s = std::abs(ov);
    if (s > 1.0 - kUsdDegeneracy) {
        throw Error(ErrorCode::DegenerateStates, "states are identical up to phase");
    }
    std::vector<Complex> aligned = v.amplitudes();
    if (s > 0.0) {
        const Complex phase = std::conj(ov) / s;
        for (auto &z : aligned) {
            z *= phase;
        }
    }
    StateVector v_aligned = StateVector::normalized(std::move(aligned), v.dims(), v.labels());

    const double w = 1.0 / (1.0 + s);
    Operator e_u = w * Operator::projector(orthogonal(v_aligned));
    Operator e_v = w * Operator::projector(orthogonal(u));
    Operator e_none = Operator::identity(2) - e_u - e_v;
    return UsdSetup{u, std::move(v_aligned), s,
                    Povm({std::move(e_u), std::move(e_v), std::move(e_none)},
                         {"u", "v", "inconclusive"})};
}

double conclusive_probability(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) ||
        std::abs(alpha * alpha + beta * beta - 1.0) > 1e-10) {
        throw Error(ErrorCode::NotNormalized, "alpha^2 + beta^2 must equal 1");
    }
    if (beta < 0.0 || alpha < beta) {
        throw Error(ErrorCode::OrderingViolated, "Schmidt coefficients must satisfy alpha >= beta >= 0");
    }
    return 1.0 - (alpha * alpha - beta * beta);
}

UsdOutcome discriminate(const StateVector &state, const UsdSetup &setup, Rng &rng) {
    const auto probs = outcome_distribution(state, setup.povm);
    return static_cast<UsdOutcome>(sample_index(probs, rng));
}

}  // namespace telepovm
