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

#include "telepovm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace telepovm {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
    }
    return labels;
}

void check_shape(const std::vector<Operator> &ops, const std::vector<std::string> &labels,
                 const char *what) {
    if (ops.empty()) {
        throw Error(ErrorCode::InvalidMeasurement, std::string(what) + " needs at least one element");
    }
    if (ops.size() != labels.size()) {
        throw Error(ErrorCode::InvalidMeasurement, std::string(what) + " needs one label per element");
    }
    for (const auto &op : ops) {
        if (op.dim() != ops.front().dim()) {
            throw Error(ErrorCode::DimensionMismatch,
                        std::string(what) + " elements have different dimensions");
        }
    }
}

std::vector<std::string> all_labels_if_empty(const StateVector &state,
                                             const std::vector<std::string> &subsystems) {
    return subsystems.empty() ? state.labels() : subsystems;
}

}  // namespace

Povm::Povm(std::vector<Operator> elements, std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
    check_shape(elements_, labels_, "POVM");
}

Povm::Povm(std::vector<Operator> elements)
    : elements_(std::move(elements)), labels_(default_labels(elements_.size())) {
    check_shape(elements_, labels_, "POVM");
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<Operator> projectors,
                                             std::vector<std::string> labels)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
    check_shape(projectors_, labels_, "projective measurement");
    const std::size_t n = projectors_.front().dim();
    Operator sum(n);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const auto &p = projectors_[i];
        if (!p.is_hermitian(TOL_HERM)) {
            throw Error(ErrorCode::InvalidMeasurement, "projector " + labels_[i] + " is not hermitian");
        }
        if (max_abs_diff(p * p, p) > 1e-10) {
            throw Error(ErrorCode::InvalidMeasurement, "projector " + labels_[i] + " is not idempotent");
        }
        for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
            if (max_abs_diff(p * projectors_[j], Operator::zero(n)) > 1e-10) {
                throw Error(ErrorCode::InvalidMeasurement,
                            "projectors " + labels_[i] + " and " + labels_[j] + " overlap");
            }
        }
        sum += p;
    }
    if (max_abs_diff(sum, Operator::identity(n)) > TOL_COMPLETENESS) {
        throw Error(ErrorCode::InvalidMeasurement, "projectors do not sum to the identity");
    }
}

PovmValidation validate_povm(const Povm &povm) {
    PovmValidation report;
    const std::size_t n = povm.dim();
    Operator sum(n);
    for (std::size_t i = 0; i < povm.size(); ++i) {
        const auto &e = povm[i];
        const double herm = e.hermiticity_residual();
        report.hermiticity_residual = std::max(report.hermiticity_residual, herm);
        if (herm > TOL_HERM) {
            report.failures.push_back("element " + povm.labels()[i] + " not hermitian");
            report.min_eigenvalues.push_back(std::nan(""));
        } else {
            const double min_ev = hermitian_eig(e).values.back();
            report.min_eigenvalues.push_back(min_ev);
            if (min_ev < -TOL_PSD) {
                report.failures.push_back("element " + povm.labels()[i] + " not positive");
            }
        }
        sum += e;
    }
    report.completeness_residual = max_abs_diff(sum, Operator::identity(n));
    if (report.completeness_residual > TOL_COMPLETENESS) {
        std::ostringstream msg;
        msg << "completeness residual " << report.completeness_residual;
        report.failures.push_back(msg.str());
    }
    return report;
}

Povm telepovm_elements(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cc = 0.5 * c * c, ss = 0.5 * s * s, cs = 0.5 * c * s;
    return Povm({Operator{{cc, cs}, {cs, ss}}, Operator{{cc, -cs}, {-cs, ss}},
                 Operator{{ss, cs}, {cs, cc}}, Operator{{ss, -cs}, {-cs, cc}}},
                {"A1", "A2", "A3", "A4"});
}

std::vector<std::vector<Complex>> bell_vectors() {
    const double r = std::numbers::sqrt2 / 2.0;
    return {{r, 0.0, 0.0, r}, {r, 0.0, 0.0, -r}, {0.0, r, r, 0.0}, {0.0, r, -r, 0.0}};
}

ProjectiveMeasurement bell_basis() {
    std::vector<Operator> projectors;
    for (const auto &v : bell_vectors()) {
        projectors.push_back(Operator::projector(v));
    }
    return ProjectiveMeasurement(std::move(projectors), {"Phi+", "Phi-", "Psi+", "Psi-"});
}

ProjectiveMeasurement z_basis() {
    return ProjectiveMeasurement({Operator{{1.0, 0.0}, {0.0, 0.0}}, Operator{{0.0, 0.0}, {0.0, 1.0}}},
                                 {"0", "1"});
}

ProjectiveMeasurement x_basis() {
    return ProjectiveMeasurement(
        {Operator{{0.5, 0.5}, {0.5, 0.5}}, Operator{{0.5, -0.5}, {-0.5, 0.5}}}, {"+", "-"});
}

Povm induced_povm(const ProjectiveMeasurement &joint, const DensityMatrix &rho_aux) {
    const std::size_t na = rho_aux.dim();
    if (na == 0 || joint.dim() % na != 0) {
        throw Error(ErrorCode::DimensionMismatch, "joint dimension is not a multiple of the ancilla's");
    }
    const std::size_t ns = joint.dim() / na;
    const auto &aux = rho_aux.op();
    std::vector<Operator> elements;
    for (const auto &p : joint.projectors()) {
        Operator a(ns);
        for (std::size_t m = 0; m < ns; ++m) {
            for (std::size_t n = 0; n < ns; ++n) {
                Complex sum = 0.0;
                for (std::size_t r = 0; r < na; ++r) {
                    for (std::size_t s = 0; s < na; ++s) {
                        sum += p(m * na + r, n * na + s) * aux(s, r);
                    }
                }
                a(m, n) = sum;
            }
        }
        elements.push_back(std::move(a));
    }
    return Povm(std::move(elements), joint.labels());
}

std::vector<double> outcome_distribution(const StateVector &state, const Povm &povm,
                                         const std::vector<std::string> &subsystems) {
    const auto targets = all_labels_if_empty(state, subsystems);
    std::vector<double> probs;
    probs.reserve(povm.size());
    for (const auto &e : povm.elements()) {
        const auto applied = apply_local(e, state, targets);
        probs.push_back(inner(state.amplitudes(), applied).real());
    }
    return probs;
}

std::size_t sample_index(const std::vector<double> &probabilities, Rng &rng) {
    double total = 0.0;
    std::size_t last_nonzero = probabilities.size();
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = std::max(0.0, probabilities[i]);
        total += p;
        if (p > 1e-12) {
            last_nonzero = i;
        }
    }
    if (last_nonzero == probabilities.size()) {
        throw Error(ErrorCode::CorruptMeasurement, "every outcome has vanishing probability");
    }
    const double u = rng.uniform() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = std::max(0.0, probabilities[i]);
        cumulative += p;
        if (u < cumulative && p > 1e-12) {
            return i;
        }
    }
    return last_nonzero;
}

OutcomeRecord measure_projective(const StateVector &state, const ProjectiveMeasurement &m, Rng &rng,
                                 const std::vector<std::string> &subsystems) {
    const auto targets = all_labels_if_empty(state, subsystems);
    const auto probs = outcome_distribution(state, m.as_povm(), targets);
    const std::size_t k = sample_index(probs, rng);
    auto post = apply_local(m.projectors()[k], state, targets);
    return {k, m.labels()[k], probs[k],
            StateVector::normalized(std::move(post), state.dims(), state.labels())};
}

OutcomeRecord measure_povm(const StateVector &state, const Povm &povm, Rng &rng,
                           const std::vector<std::string> &subsystems) {
    const auto targets = all_labels_if_empty(state, subsystems);
    const auto probs = outcome_distribution(state, povm, targets);
    const std::size_t k = sample_index(probs, rng);
    auto post = apply_local(psd_sqrt(povm[k]), state, targets);
    return {k, povm.labels()[k], probs[k],
            StateVector::normalized(std::move(post), state.dims(), state.labels())};
}

}  // namespace telepovm
