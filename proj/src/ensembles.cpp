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

#include "telepovm/ensembles.hpp"

#include <cmath>
#include <numbers>

namespace telepovm {

namespace {

constexpr double kNullProbability = 1e-12;
constexpr double kPureThreshold = 1e-10;

// Makes a positive operator with small trace into a valid density matrix.
DensityMatrix normalized_density(Operator op, std::size_t dim, const std::string &label) {
    const double tr = op.trace().real();
    op *= 1.0 / tr;
    for (std::size_t r = 0; r < dim; ++r) {
        op(r, r) = op(r, r).real();
        for (std::size_t c = r + 1; c < dim; ++c) {
            const Complex avg = 0.5 * (op(r, c) + std::conj(op(c, r)));
            op(r, c) = avg;
            op(c, r) = std::conj(avg);
        }
    }
    return DensityMatrix(std::move(op), {dim}, {label});
}

}  // namespace

DensityMatrix EnsembleMember::density() const {
    if (const auto *psi = std::get_if<StateVector>(&state)) {
        return DensityMatrix::pure(*psi);
    }
    if (const auto *rho = std::get_if<DensityMatrix>(&state)) {
        return *rho;
    }
    throw Error(ErrorCode::InvalidMeasurement, "outcome " + label + " has no conditional state");
}

RhoEnsemble::RhoEnsemble(std::vector<EnsembleMember> members, std::optional<DensityMatrix> target)
    : members_(std::move(members)), target_(std::move(target)) {
    if (members_.empty()) {
        throw Error(ErrorCode::InvalidMeasurement, "empty ensemble");
    }
    double total = 0.0;
    for (const auto &m : members_) {
        if (m.probability < -1e-12 || !std::isfinite(m.probability)) {
            throw Error(ErrorCode::InvalidMeasurement, "negative weight for member " + m.label);
        }
        if (m.is_null() && m.probability > kNullProbability) {
            throw Error(ErrorCode::InvalidMeasurement, "member " + m.label + " has weight but no state");
        }
        total += m.probability;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw Error(ErrorCode::NotNormalized, "ensemble weights do not sum to 1");
    }
    if (target_) {
        const double dev = max_abs_diff(ensemble_density(*this).op(), target_->op());
        if (dev > 1e-10) {
            throw Error(ErrorCode::InvalidMeasurement, "ensemble mixture does not match its target");
        }
    }
}

DensityMatrix ensemble_density(const RhoEnsemble &ensemble) {
    std::optional<Operator> sum;
    std::vector<std::size_t> dims;
    std::vector<std::string> labels;
    for (const auto &m : ensemble.members()) {
        if (m.is_null()) {
            continue;
        }
        const auto rho = m.density();
        if (!sum) {
            sum = Operator(rho.dim());
            dims = rho.dims();
            labels = rho.labels();
        }
        *sum += m.probability * rho.op();
    }
    if (!sum) {
        throw Error(ErrorCode::InvalidMeasurement, "ensemble has no populated member");
    }
    const std::size_t dim = sum->dim();
    return normalized_density(std::move(*sum), dim, labels.front());
}

RhoEnsemble generate_at_distance(const StateVector &shared, const Povm &alice_povm) {
    if (shared.dims().size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "shared state must be bipartite");
    }
    const std::size_t da = shared.dims()[0];
    const std::size_t db = shared.dims()[1];
    if (alice_povm.dim() != da) {
        throw Error(ErrorCode::DimensionMismatch, "POVM does not act on Alice's subsystem");
    }
    const std::string &bob_label = shared.labels()[1];
    auto amp = [&](std::size_t i, std::size_t j) { return shared[i * db + j]; };

    std::vector<EnsembleMember> members;
    for (std::size_t k = 0; k < alice_povm.size(); ++k) {
        const Operator &a = alice_povm[k];
        // rho_B[k,l] = sum_{m,n} Psi_{n k} A_{m n} conj(Psi_{m l})
        Operator bob(db);
        for (std::size_t r = 0; r < db; ++r) {
            for (std::size_t c = 0; c < db; ++c) {
                Complex sum = 0.0;
                for (std::size_t m = 0; m < da; ++m) {
                    for (std::size_t n = 0; n < da; ++n) {
                        sum += amp(n, r) * a(m, n) * std::conj(amp(m, c));
                    }
                }
                bob(r, c) = sum;
            }
        }
        const double p = bob.trace().real();
        EnsembleMember member{alice_povm.labels()[k], std::max(p, 0.0), std::monostate{}};
        if (p >= kNullProbability) {
            auto rho = normalized_density(std::move(bob), db, bob_label);
            if (rho.purity() >= 1.0 - kPureThreshold) {
                const auto eig = hermitian_eig(rho.op());
                member.state =
                    StateVector::normalized(eig.vectors.front(), {db}, {bob_label}).phase_fixed();
            } else {
                member.state = std::move(rho);
            }
        } else {
            member.probability = 0.0;
        }
        members.push_back(std::move(member));
    }
    auto target = partial_trace(DensityMatrix::pure(shared), {bob_label});
    return RhoEnsemble(std::move(members), std::move(target));
}

StateVector singlet(std::string alice, std::string bob) {
    const double r = std::numbers::sqrt2 / 2.0;
    return StateVector({0.0, r, -r, 0.0}, {2, 2}, {std::move(alice), std::move(bob)});
}

RhoEnsemble b92_demo(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) ||
        std::abs(alpha * alpha + beta * beta - 1.0) > 1e-10) {
        throw Error(ErrorCode::NotNormalized, "alpha^2 + beta^2 must equal 1");
    }
    const double r = std::numbers::sqrt2 / 2.0;
    const std::vector<Complex> up_x{r, r};
    const std::vector<Complex> down_x{r, -r};
    const auto upup = kron(up_x, up_x);
    const auto downdown = kron(down_x, down_x);
    std::vector<Complex> amps(4);
    for (std::size_t i = 0; i < 4; ++i) {
        amps[i] = alpha * upup[i] + beta * downdown[i];
    }
    const auto shared = StateVector::normalized(std::move(amps), {2, 2}, {"A", "B"});
    return generate_at_distance(shared, z_basis().as_povm());
}

RhoEnsemble epr_basis_choice_demo(const std::string &basis) {
    if (basis == "z") {
        return generate_at_distance(singlet(), z_basis().as_povm());
    }
    if (basis == "x") {
        return generate_at_distance(singlet(), x_basis().as_povm());
    }
    throw Error(ErrorCode::UnknownLabel, "basis must be \"z\" or \"x\", got \"" + basis + "\"");
}

}  // namespace telepovm
