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

#include "telepovm/protocols.hpp"

#include <cmath>
#include <numbers>

#include "telepovm/ensembles.hpp"
#include "telepovm/random.hpp"

namespace telepovm {

namespace {

constexpr double kBranchFloor = 1e-12;
const std::vector<std::string> kAlice = {"1", "2"};
const std::array<const char *, 4> kPaulis = {"I", "Z", "X", "XZ"};

// Particles (1,2) basis indices spanning each step-one subspace. The
// antiparallel pair is ordered (|10>, |01>) so that the (1,2) factor reads
// (alpha, +-beta) in both branches.
constexpr std::array<std::size_t, 2> kParallel = {0, 3};
constexpr std::array<std::size_t, 2> kAntiparallel = {2, 1};

DensityMatrix bob_density(const Operator &unnormalized) {
    Operator op = unnormalized;
    op *= 1.0 / op.trace().real();
    for (std::size_t r = 0; r < op.dim(); ++r) {
        op(r, r) = op(r, r).real();
        for (std::size_t c = r + 1; c < op.dim(); ++c) {
            const Complex avg = 0.5 * (op(r, c) + std::conj(op(c, r)));
            op(r, c) = avg;
            op(c, r) = std::conj(avg);
        }
    }
    return DensityMatrix(std::move(op), {2}, {"3"});
}

std::optional<StateVector> as_pure(const DensityMatrix &rho) {
    if (rho.purity() < 1.0 - 1e-10) {
        return std::nullopt;
    }
    const auto eig = hermitian_eig(rho.op());
    return StateVector::normalized(eig.vectors.front(), rho.dims(), rho.labels()).phase_fixed();
}

// Builds a leaf transcript. When `correction` is set the leaf counts as a
// delivered state: Bob applies it and the fidelity against the input is
// measured on the corrected density matrix.
Branch make_leaf(std::string protocol, const StateVector &input, const ChannelSpec &channel,
                 std::vector<std::string> steps, int bits, double probability, DensityMatrix bob,
                 std::optional<Correction> correction) {
    Transcript t{std::move(protocol), input, channel, std::move(steps), bits, false, std::nullopt,
                 std::nullopt, std::nullopt};
    if (correction) {
        Operator corrected = correction->op * bob.op() * correction->op.adjoint();
        DensityMatrix delivered = bob_density(corrected);
        t.conclusive = true;
        t.fidelity_achieved = fidelity(input.relabeled({"3"}), delivered);
        // Delivered leaves are pure; the dominant eigenvector is the state.
        const auto eig = hermitian_eig(delivered.op());
        t.bob_final = StateVector::normalized(eig.vectors.front(), {2}, {"3"}).phase_fixed();
        t.correction = std::move(correction);
    }
    return Branch{probability, std::move(t), std::move(bob)};
}

// Bob's conditional state (unnormalized) for Bell outcome k.
std::vector<Complex> bell_conditional(const StateVector &psi123, std::size_t k) {
    return contract_bra(bell_vectors()[k], psi123, kAlice);
}

struct UsdLeaf {
    double probability = 0.0;  // conditional on the step-one branch
    Operator bob;              // unnormalized
};

// Applies sqrt(E_o) to the (1,2) factor of a branch post-state, expressed in
// that branch's two-dimensional basis.
UsdLeaf usd_leaf(const StateVector &post, bool antiparallel, const UsdSetup &usd, UsdOutcome o) {
    const auto &basis = antiparallel ? kAntiparallel : kParallel;
    // factor[j][b]: amplitude of (basis_j of particles 1,2) (x) |b> of particle 3.
    std::array<std::array<Complex, 2>, 2> factor{};
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t b = 0; b < 2; ++b) {
            factor[j][b] = post[basis[j] * 2 + b];
        }
    }
    const Operator kraus = psd_sqrt(usd.element(o));
    std::array<std::array<Complex, 2>, 2> out{};
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t b = 0; b < 2; ++b) {
            out[j][b] = kraus(j, 0) * factor[0][b] + kraus(j, 1) * factor[1][b];
        }
    }
    UsdLeaf leaf{0.0, Operator(2)};
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            leaf.bob(r, c) = out[0][r] * std::conj(out[0][c]) + out[1][r] * std::conj(out[1][c]);
        }
    }
    leaf.probability = leaf.bob.trace().real();
    return leaf;
}

UsdSetup channel_usd(const ChannelSpec &channel) {
    if (channel.beta() <= 0.0) {
        // Product channel: u = v, so the only unambiguous answer is "?".
        const auto u = StateVector::qubit(1.0, 0.0);
        return UsdSetup{u, u, 1.0,
                        Povm({Operator(2), Operator(2), Operator::identity(2)}, {"u", "v", "inconclusive"})};
    }
    return usd_povm(StateVector::qubit(channel.alpha(), channel.beta()),
                    StateVector::qubit(channel.alpha(), -channel.beta()));
}

const ProjectiveMeasurement &subspace_measurement() {
    static const ProjectiveMeasurement m(
        {Operator::diag(std::array{1.0, 0.0, 0.0, 1.0}), Operator::diag(std::array{0.0, 1.0, 1.0, 0.0})},
        {"parallel", "antiparallel"});
    return m;
}

void require_three_qubits(const StateVector &psi123) {
    if (psi123.dims() != std::vector<std::size_t>{2, 2, 2} ||
        psi123.labels() != std::vector<std::string>{"1", "2", "3"}) {
        throw Error(ErrorCode::DimensionMismatch, "expected a three-qubit state labelled 1, 2, 3");
    }
}

struct ConclusivePolicy {
    const char *protocol;
    int bits;
    // Which (branch, outcome) leaves count as delivered.
    bool (*delivered)(bool antiparallel, UsdOutcome o);
};

constexpr ConclusivePolicy kConclusive{
    "conclusive", 3, [](bool, UsdOutcome o) { return o != UsdOutcome::Inconclusive; }};
constexpr ConclusivePolicy kConclusiveOneBit{
    "one-bit-conclusive", 1, [](bool anti, UsdOutcome o) { return anti && o == UsdOutcome::V; }};

Branch conclusive_leaf(const ConclusivePolicy &policy, const StateVector &input,
                       const ChannelSpec &channel, const SubspaceStep &step, UsdOutcome o,
                       const UsdLeaf &leaf) {
    const bool anti = step.branch == "antiparallel";
    std::optional<Correction> corr;
    if (policy.delivered(anti, o)) {
        corr = conclusive_correction(step.branch, o);
    }
    return make_leaf(policy.protocol, input, channel, {step.branch, std::string(to_string(o))},
                     policy.bits, step.probability * leaf.probability, bob_density(leaf.bob),
                     std::move(corr));
}

std::vector<Branch> enumerate_conclusive_with(const ConclusivePolicy &policy,
                                              const StateVector &input,
                                              const ChannelSpec &channel) {
    const UsdSetup usd = channel_usd(channel);
    const auto psi = three_particle_state(input, channel);
    std::vector<Branch> out;
    for (const auto &step : enumerate_subspace_projection(psi)) {
        const bool anti = step.branch == "antiparallel";
        for (auto o : {UsdOutcome::U, UsdOutcome::V, UsdOutcome::Inconclusive}) {
            const auto leaf = usd_leaf(step.post_state, anti, usd, o);
            if (leaf.probability < kBranchFloor) {
                continue;
            }
            out.push_back(conclusive_leaf(policy, input, channel, step, o, leaf));
        }
    }
    return out;
}

Transcript sample_conclusive_with(const ConclusivePolicy &policy, const StateVector &input,
                                  const ChannelSpec &channel, Rng &rng) {
    const UsdSetup usd = channel_usd(channel);
    const auto psi = three_particle_state(input, channel);
    const auto step = subspace_projection_step(psi, rng);
    const bool anti = step.branch == "antiparallel";
    std::vector<UsdLeaf> leaves;
    std::vector<double> probs;
    for (auto o : {UsdOutcome::U, UsdOutcome::V, UsdOutcome::Inconclusive}) {
        leaves.push_back(usd_leaf(step.post_state, anti, usd, o));
        probs.push_back(leaves.back().probability);
    }
    const std::size_t k = sample_index(probs, rng);
    return conclusive_leaf(policy, input, channel, step, static_cast<UsdOutcome>(k), leaves[k])
        .transcript;
}

Branch standard_leaf(const char *protocol, int bits, const StateVector &input,
                     const ChannelSpec &channel, const StateVector &psi, std::size_t k,
                     bool delivered) {
    auto bob = bell_conditional(psi, k);
    const double p = norm_squared(bob);
    const auto bob_state = StateVector::normalized(std::move(bob), {2}, {"3"});
    const std::string label = bell_basis().labels()[k];
    std::optional<Correction> corr;
    if (delivered) {
        corr = correction_for(label);
    }
    return make_leaf(protocol, input, channel, {label}, bits, p, DensityMatrix::pure(bob_state),
                     std::move(corr));
}

bool restores(const Operator &correction, const std::vector<Complex> &bob,
              const StateVector &input) {
    const auto fixed = StateVector::normalized(correction.apply(bob), {2}, {"3"});
    return fidelity(input.relabeled({"3"}), fixed) >= 1.0 - 1e-10;
}

template <class BobStateFn>
std::string unique_restoring_pauli(const std::vector<StateVector> &inputs, BobStateFn bob_for) {
    std::string found;
    int hits = 0;
    for (const char *name : kPaulis) {
        const auto op = Correction::named(name).op;
        bool ok = true;
        for (const auto &in : inputs) {
            if (!restores(op, bob_for(in), in)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            found = name;
            ++hits;
        }
    }
    return hits == 1 ? found : std::string{};
}

std::vector<StateVector> random_inputs(std::uint64_t seed, int samples) {
    std::vector<StateVector> inputs;
    for (int i = 0; i < samples; ++i) {
        Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(i));
        inputs.push_back(random_qubit(rng));
    }
    return inputs;
}

}  // namespace

// ---------------------------------------------------------------------------

ChannelSpec::ChannelSpec(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) ||
        std::abs(alpha * alpha + beta * beta - 1.0) > 1e-10) {
        throw Error(ErrorCode::NotNormalized, "channel requires alpha^2 + beta^2 = 1");
    }
    if (beta < 0.0 || alpha < beta) {
        throw Error(ErrorCode::OrderingViolated, "channel requires alpha >= beta >= 0");
    }
}

ChannelSpec ChannelSpec::from_alpha2(double alpha2) {
    if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha2 must lie in [0, 1]");
    }
    const double hi = std::max(alpha2, 1.0 - alpha2);
    return ChannelSpec(std::sqrt(hi), std::sqrt(1.0 - hi));
}

StateVector ChannelSpec::state() const {
    return StateVector::normalized({alpha_, 0.0, 0.0, beta_}, {2, 2}, {"2", "3"});
}

DensityMatrix ChannelSpec::bob_reduced() const {
    const std::array<double, 2> d{alpha_ * alpha_, beta_ * beta_};
    Operator op = Operator::diag(d);
    op *= 1.0 / op.trace().real();
    return DensityMatrix(std::move(op), {2}, {"3"});
}

Correction Correction::named(const std::string &label) {
    if (label == "I") return {label, gates::I()};
    if (label == "X") return {label, gates::X()};
    if (label == "Z") return {label, gates::Z()};
    if (label == "XZ") return {label, gates::X() * gates::Z()};
    throw Error(ErrorCode::UnknownLabel, "unknown correction '" + label + "'");
}

StateVector three_particle_state(const StateVector &input, const ChannelSpec &channel) {
    if (input.size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "input must be a single qubit");
    }
    return tensor(input.relabeled({"1"}), channel.state());
}

Correction correction_for(const std::string &bell_outcome) {
    if (bell_outcome == "Phi+") return Correction::named("I");
    if (bell_outcome == "Phi-") return Correction::named("Z");
    if (bell_outcome == "Psi+") return Correction::named("X");
    if (bell_outcome == "Psi-") return Correction::named("XZ");
    throw Error(ErrorCode::UnknownLabel, "unknown Bell outcome '" + bell_outcome + "'");
}

std::array<std::string, 4> derive_bell_correction_table(std::uint64_t seed, int samples) {
    const auto inputs = random_inputs(seed, samples);
    const auto channel = ChannelSpec::maximally_entangled();
    std::array<std::string, 4> table;
    for (std::size_t k = 0; k < 4; ++k) {
        table[k] = unique_restoring_pauli(inputs, [&](const StateVector &in) {
            return bell_conditional(three_particle_state(in, channel), k);
        });
    }
    return table;
}

Correction telepovm_correction(std::size_t outcome) {
    static const std::array<const char *, 4> table = {"XZ", "X", "Z", "I"};
    if (outcome >= table.size()) {
        throw Error(ErrorCode::UnknownLabel, "telepovm outcome index out of range");
    }
    return Correction::named(table[outcome]);
}

Transcript standard_teleport(const StateVector &input, const ChannelSpec &channel, Rng &rng) {
    const auto psi = three_particle_state(input, channel);
    const auto rec = measure_projective(psi, bell_basis(), rng, kAlice);
    return standard_leaf("standard", 2, input, channel, psi, rec.index, true).transcript;
}

std::vector<Branch> enumerate_standard(const StateVector &input, const ChannelSpec &channel) {
    const auto psi = three_particle_state(input, channel);
    std::vector<Branch> out;
    for (std::size_t k = 0; k < 4; ++k) {
        if (norm_squared(bell_conditional(psi, k)) < kBranchFloor) {
            continue;
        }
        out.push_back(standard_leaf("standard", 2, input, channel, psi, k, true));
    }
    return out;
}

bool TelepovmEquivalence::passed(double tol) const {
    if (max_deviation > tol || a1_00_residual > tol || completeness_residual > 1e-10) {
        return false;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (populated[i] &&
            (recovery_fidelities[i] < 1.0 - 1e-10 || listed_state_fidelities[i] < 1.0 - 1e-10)) {
            return false;
        }
    }
    return true;
}

TelepovmEquivalence verify_telepovm_equivalence(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const auto ancilla = StateVector::qubit(c, s);

    TelepovmEquivalence report;
    report.theta = theta;
    const Povm induced = induced_povm(bell_basis(), DensityMatrix::pure(ancilla));
    const Povm closed_form = telepovm_elements(theta);
    for (std::size_t i = 0; i < 4; ++i) {
        report.max_deviation =
            std::max(report.max_deviation, max_abs_diff(induced[i], closed_form[i]));
    }
    report.a1_00_residual = std::abs(induced[0](0, 0) - 0.5 * c * c);
    report.completeness_residual = validate_povm(induced).completeness_residual;

    const std::array<StateVector, 4> listed = {
        StateVector::qubit(s, -c, "B"), StateVector::qubit(s, c, "B"),
        StateVector::qubit(c, -s, "B"), StateVector::qubit(c, s, "B")};
    const auto ensemble = generate_at_distance(singlet(), induced);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto &m = ensemble[i];
        report.probabilities[i] = m.probability;
        report.populated[i] = m.is_pure();
        if (!m.is_pure()) {
            continue;
        }
        const auto &bob = m.pure_state();
        report.listed_state_fidelities[i] = fidelity(listed[i], bob);
        const auto recovered = StateVector::normalized(
            telepovm_correction(i).op.apply(bob.amplitudes()), {2}, {"B"});
        report.recovery_fidelities[i] = fidelity(ancilla.relabeled({"B"}), recovered);
    }
    return report;
}

SubspaceStep subspace_projection_step(const StateVector &psi123, Rng &rng) {
    require_three_qubits(psi123);
    const auto rec = measure_projective(psi123, subspace_measurement(), rng, kAlice);
    return {rec.label, rec.post_state, rec.probability};
}

std::vector<SubspaceStep> enumerate_subspace_projection(const StateVector &psi123) {
    require_three_qubits(psi123);
    const auto &m = subspace_measurement();
    const auto probs = outcome_distribution(psi123, m.as_povm(), kAlice);
    if (probs[0] < kBranchFloor && probs[1] < kBranchFloor) {
        throw Error(ErrorCode::CorruptMeasurement, "both subspace branches have vanishing weight");
    }
    std::vector<SubspaceStep> out;
    for (std::size_t k = 0; k < 2; ++k) {
        if (probs[k] < kBranchFloor) {
            continue;
        }
        auto post = apply_local(m.projectors()[k], psi123, kAlice);
        out.push_back({m.labels()[k],
                       StateVector::normalized(std::move(post), psi123.dims(), psi123.labels()),
                       probs[k]});
    }
    return out;
}

Correction conclusive_correction(const std::string &branch, UsdOutcome outcome) {
    if (outcome == UsdOutcome::Inconclusive) {
        throw Error(ErrorCode::UnknownLabel, "no correction exists for an inconclusive outcome");
    }
    const bool v = outcome == UsdOutcome::V;
    if (branch == "parallel") return Correction::named(v ? "Z" : "I");
    if (branch == "antiparallel") return Correction::named(v ? "XZ" : "X");
    throw Error(ErrorCode::UnknownLabel, "unknown branch '" + branch + "'");
}

std::array<std::string, 4> derive_conclusive_correction_table(const ChannelSpec &channel,
                                                              std::uint64_t seed, int samples) {
    const auto inputs = random_inputs(seed, samples);
    const UsdSetup usd = channel_usd(channel);
    const std::array<std::pair<bool, UsdOutcome>, 4> leaves = {
        std::pair{false, UsdOutcome::U}, std::pair{false, UsdOutcome::V},
        std::pair{true, UsdOutcome::U}, std::pair{true, UsdOutcome::V}};
    std::array<std::string, 4> table;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto [anti, o] = leaves[i];
        table[i] = unique_restoring_pauli(inputs, [&](const StateVector &in) {
            const auto psi = three_particle_state(in, channel);
            auto post = apply_local(subspace_measurement().projectors()[anti ? 1 : 0], psi, kAlice);
            const auto leaf = usd_leaf(
                StateVector::normalized(std::move(post), psi.dims(), psi.labels()), anti, usd, o);
            const auto pure = as_pure(bob_density(leaf.bob));
            return pure ? pure->amplitudes() : std::vector<Complex>{0.0, 0.0};
        });
    }
    return table;
}

Transcript conclusive_teleport(const StateVector &input, const ChannelSpec &channel, Rng &rng) {
    return sample_conclusive_with(kConclusive, input, channel, rng);
}

std::vector<Branch> enumerate_conclusive(const StateVector &input, const ChannelSpec &channel) {
    return enumerate_conclusive_with(kConclusive, input, channel);
}

Transcript one_bit_teleport(const StateVector &input, const ChannelSpec &channel, Rng &rng,
                            OneBitMode mode) {
    if (mode == OneBitMode::ConclusiveSingletOnly) {
        return sample_conclusive_with(kConclusiveOneBit, input, channel, rng);
    }
    const auto psi = three_particle_state(input, channel);
    const auto rec = measure_projective(psi, bell_basis(), rng, kAlice);
    return standard_leaf("one-bit-singlet", 1, input, channel, psi, rec.index, rec.index == 3)
        .transcript;
}

std::vector<Branch> enumerate_one_bit(const StateVector &input, const ChannelSpec &channel,
                                      OneBitMode mode) {
    if (mode == OneBitMode::ConclusiveSingletOnly) {
        return enumerate_conclusive_with(kConclusiveOneBit, input, channel);
    }
    const auto psi = three_particle_state(input, channel);
    std::vector<Branch> out;
    for (std::size_t k = 0; k < 4; ++k) {
        if (norm_squared(bell_conditional(psi, k)) < kBranchFloor) {
            continue;
        }
        out.push_back(standard_leaf("one-bit-singlet", 1, input, channel, psi, k, k == 3));
    }
    return out;
}

Operator bob_average(const std::vector<Branch> &branches) {
    Operator avg(2);
    for (const auto &b : branches) {
        avg += b.probability * b.bob_received.op();
    }
    return avg;
}

}  // namespace telepovm
