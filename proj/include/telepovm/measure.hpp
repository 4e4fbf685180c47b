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

#include <string>
#include <vector>

#include "telepovm/qcore.hpp"
#include "telepovm/rng.hpp"

namespace telepovm {

inline constexpr double TOL_COMPLETENESS = 1e-10;

/// Ordered, labelled set of effects. Construction checks only shape; use
/// validate_povm for the physical conditions.
class Povm {
   public:
    Povm(std::vector<Operator> elements, std::vector<std::string> labels);
    /// Labels default to "0", "1", ...
    explicit Povm(std::vector<Operator> elements);

    const std::vector<Operator> &elements() const { return elements_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t size() const { return elements_.size(); }
    std::size_t dim() const { return elements_.front().dim(); }
    const Operator &operator[](std::size_t i) const { return elements_[i]; }

   private:
    std::vector<Operator> elements_;
    std::vector<std::string> labels_;
};

/// Complete set of orthogonal projectors. The constructor throws
/// ErrorCode::InvalidMeasurement unless idempotence, orthogonality and
/// completeness hold within 1e-10.
class ProjectiveMeasurement {
   public:
    ProjectiveMeasurement(std::vector<Operator> projectors, std::vector<std::string> labels);

    const std::vector<Operator> &projectors() const { return projectors_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t size() const { return projectors_.size(); }
    std::size_t dim() const { return projectors_.front().dim(); }

    Povm as_povm() const { return Povm(projectors_, labels_); }

   private:
    std::vector<Operator> projectors_;
    std::vector<std::string> labels_;
};

struct PovmValidation {
    double hermiticity_residual = 0.0;  // worst element
    std::vector<double> min_eigenvalues;
    double completeness_residual = 0.0;  // max |sum A_i - I|
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

struct OutcomeRecord {
    std::size_t index = 0;
    std::string label;
    double probability = 0.0;
    StateVector post_state;
};

PovmValidation validate_povm(const Povm &povm);

/// The four-outcome qubit POVM whose Bell-measurement realization with an
/// ancilla in (cos theta, sin theta) underlies teleportation. Order A1..A4.
Povm telepovm_elements(double theta);

/// Projectors onto Phi+, Phi-, Psi+, Psi- (in that order) with
/// Phi+- = (|00> +- |11>)/sqrt2 and Psi+- = (|01> +- |10>)/sqrt2.
ProjectiveMeasurement bell_basis();
/// The Bell vectors themselves, in bell_basis() order.
std::vector<std::vector<Complex>> bell_vectors();

/// Computational-basis measurement of one qubit, labels "0" and "1".
ProjectiveMeasurement z_basis();
/// |+> and |-> projectors, labels "+" and "-".
ProjectiveMeasurement x_basis();

/// POVM on the system induced by a joint projective measurement on
/// system (x) ancilla with the ancilla prepared in rho_aux:
///   A_{mn} = sum_{r,s} P_{(m,r),(n,s)} (rho_aux)_{s r},
/// joint index system-major.
Povm induced_povm(const ProjectiveMeasurement &joint, const DensityMatrix &rho_aux);

/// Born probabilities p_i = <psi|(A_i (x) I)|psi> with the POVM acting on
/// `subsystems` (all subsystems if empty).
std::vector<double> outcome_distribution(const StateVector &state, const Povm &povm,
                                         const std::vector<std::string> &subsystems = {});

/// Inverse-CDF pick over `probabilities` in order from a single uniform
/// variate. Throws ErrorCode::CorruptMeasurement if every entry is below 1e-12.
std::size_t sample_index(const std::vector<double> &probabilities, Rng &rng);

OutcomeRecord measure_projective(const StateVector &state, const ProjectiveMeasurement &m, Rng &rng,
                                 const std::vector<std::string> &subsystems = {});

/// Samples a POVM outcome; the post-state uses the Kraus factor sqrt(A_i).
OutcomeRecord measure_povm(const StateVector &state, const Povm &povm, Rng &rng,
                           const std::vector<std::string> &subsystems = {});

}  // namespace telepovm
