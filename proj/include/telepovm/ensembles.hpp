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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "telepovm/measure.hpp"
#include "telepovm/qcore.hpp"

namespace telepovm {

/// One outcome of a remote preparation. Zero-probability outcomes keep their
/// slot and hold std::monostate.
struct EnsembleMember {
    std::string label;
    double probability = 0.0;
    std::variant<std::monostate, StateVector, DensityMatrix> state;

    bool is_null() const { return std::holds_alternative<std::monostate>(state); }
    bool is_pure() const { return std::holds_alternative<StateVector>(state); }
    const StateVector &pure_state() const { return std::get<StateVector>(state); }
    /// Projector for pure members; throws for null members.
    DensityMatrix density() const;
};

/// Weighted set of conditional states whose mixture is a fixed density
/// matrix. If a target is given, the constructor checks the mixture against
/// it within 1e-10 entrywise.
class RhoEnsemble {
   public:
    explicit RhoEnsemble(std::vector<EnsembleMember> members,
                         std::optional<DensityMatrix> target = std::nullopt);

    const std::vector<EnsembleMember> &members() const { return members_; }
    const std::optional<DensityMatrix> &target() const { return target_; }
    std::size_t size() const { return members_.size(); }
    const EnsembleMember &operator[](std::size_t i) const { return members_[i]; }

   private:
    std::vector<EnsembleMember> members_;
    std::optional<DensityMatrix> target_;
};

/// sum_j p_j rho_j.
DensityMatrix ensemble_density(const RhoEnsemble &ensemble);

/// Bob's conditional states when Alice (first subsystem of `shared`) applies
/// `alice_povm` to her half. The target is Bob's reduced state.
RhoEnsemble generate_at_distance(const StateVector &shared, const Povm &alice_povm);

/// (|01> - |10>)/sqrt2.
StateVector singlet(std::string alice = "A", std::string bob = "B");

/// alpha|+x +x> + beta|-x -x> measured by Alice along z.
RhoEnsemble b92_demo(double alpha, double beta);

/// Singlet with Alice measuring along z ("z") or x ("x").
RhoEnsemble epr_basis_choice_demo(const std::string &basis);

}  // namespace telepovm
