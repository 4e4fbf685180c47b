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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "telepovm/discrimination.hpp"
#include "telepovm/measure.hpp"
#include "telepovm/qcore.hpp"
#include "telepovm/rng.hpp"

namespace telepovm {

/// Schmidt-form channel alpha|00> + beta|11> shared by Alice (particle 2)
/// and Bob (particle 3).
class ChannelSpec {
   public:
    /// Throws NotNormalized or OrderingViolated unless alpha >= beta >= 0
    /// and alpha^2 + beta^2 = 1 within 1e-10.
    ChannelSpec(double alpha, double beta);

    /// Channel with alpha^2 = max(alpha2, 1 - alpha2). alpha2 must lie in [0, 1].
    static ChannelSpec from_alpha2(double alpha2);
    static ChannelSpec maximally_entangled() { return from_alpha2(0.5); }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    bool is_maximally_entangled(double tol = 1e-12) const { return alpha_ - beta_ <= tol; }

    /// Labels "2" and "3".
    StateVector state() const;
    /// diag(alpha^2, beta^2) on particle "3".
    DensityMatrix bob_reduced() const;

   private:
    double alpha_;
    double beta_;
};

/// One of the four fixed Pauli recoveries. "XZ" means X * Z (Z first).
struct Correction {
    std::string label;
    Operator op;

    static Correction named(const std::string &label);
};

struct Transcript {
    std::string protocol;
    StateVector input_state;
    ChannelSpec channel;
    std::vector<std::string> step_outcomes;
    int classical_bits_sent = 0;
    bool conclusive = false;
    std::optional<Correction> correction;
    std::optional<StateVector> bob_final;
    std::optional<double> fidelity_achieved;
};

/// One leaf of a protocol's outcome tree with its exact probability.
/// `bob_received` is Bob's conditional state before any classical message.
struct Branch {
    double probability = 0.0;
    Transcript transcript;
    DensityMatrix bob_received;
};

/// input (x) channel, labels "1", "2", "3".
StateVector three_particle_state(const StateVector &input, const ChannelSpec &channel);

/// Frozen Bell-outcome table: Phi+ -> I, Phi- -> Z, Psi+ -> X, Psi- -> XZ.
Correction correction_for(const std::string &bell_outcome);

/// Finds, for each Bell outcome on a maximally entangled channel, the single
/// Pauli correction restoring every one of `samples` random inputs. Returns
/// correction labels in bell_basis() order; an entry is empty if no Pauli
/// (or more than one) works.
std::array<std::string, 4> derive_bell_correction_table(std::uint64_t seed, int samples = 100);

/// Recovery table for the singlet-shared telepovm chain, in A1..A4 order:
/// XZ, X, Z, I.
Correction telepovm_correction(std::size_t outcome);

// --- Standard teleportation ------------------------------------------------

Transcript standard_teleport(const StateVector &input, const ChannelSpec &channel, Rng &rng);
std::vector<Branch> enumerate_standard(const StateVector &input, const ChannelSpec &channel);

// --- Telepovm equivalence ---------------------------------------------------

struct TelepovmEquivalence {
    double theta = 0.0;
    double max_deviation = 0.0;      // induced vs closed-form POVM
    double a1_00_residual = 0.0;     // |(A1)_00 - c^2/2|
    double completeness_residual = 0.0;
    std::array<double, 4> probabilities{};
    std::array<double, 4> listed_state_fidelities{};  // vs (s,-c), (s,c), (c,-s), (c,s)
    std::array<double, 4> recovery_fidelities{};      // after the fixed correction
    std::array<bool, 4> populated{};

    bool passed(double tol = 1e-12) const;
};

TelepovmEquivalence verify_telepovm_equivalence(double theta);

// --- Conclusive teleportation ----------------------------------------------

struct SubspaceStep {
    std::string branch;  // "parallel" or "antiparallel"
    StateVector post_state;
    double probability = 0.0;
};

/// Projects particles 1,2 onto span{|00>,|11>} or span{|01>,|10>}.
SubspaceStep subspace_projection_step(const StateVector &psi123, Rng &rng);
/// Both branches with exact probabilities; branches below 1e-12 are omitted.
std::vector<SubspaceStep> enumerate_subspace_projection(const StateVector &psi123);

/// Correction applied after a conclusive identification, keyed by branch and
/// USD outcome: (parallel,u) I, (parallel,v) Z, (antiparallel,u) X,
/// (antiparallel,v) XZ.
Correction conclusive_correction(const std::string &branch, UsdOutcome outcome);

/// Same search as derive_bell_correction_table, for the four conclusive
/// leaves in the order listed for conclusive_correction.
std::array<std::string, 4> derive_conclusive_correction_table(const ChannelSpec &channel,
                                                              std::uint64_t seed,
                                                              int samples = 100);

/// A product channel (beta = 0) is always inconclusive. Channels with
/// 0 < beta and overlap above 1 - 1e-6 throw ErrorCode::DegenerateStates.
Transcript conclusive_teleport(const StateVector &input, const ChannelSpec &channel, Rng &rng);
std::vector<Branch> enumerate_conclusive(const StateVector &input, const ChannelSpec &channel);

// --- One-bit variants ------------------------------------------------------

enum class OneBitMode { SingletOnly, ConclusiveSingletOnly };

Transcript one_bit_teleport(const StateVector &input, const ChannelSpec &channel, Rng &rng,
                            OneBitMode mode);
std::vector<Branch> enumerate_one_bit(const StateVector &input, const ChannelSpec &channel,
                                      OneBitMode mode);

// --- Helpers ----------------------------------------------------------------

/// sum_leaves p * bob_received.
Operator bob_average(const std::vector<Branch> &branches);

}  // namespace telepovm
