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

#include "telepovm/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace telepovm {

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch:
            return "dimension mismatch";
        case ErrorCode::NotNormalized:
            return "not normalized";
        case ErrorCode::NotHermitian:
            return "not hermitian";
        case ErrorCode::NotPositive:
            return "not positive semidefinite";
        case ErrorCode::NotFinite:
            return "not finite";
        case ErrorCode::UnknownLabel:
            return "unknown label";
        case ErrorCode::KindMismatch:
            return "kind mismatch";
        case ErrorCode::InvalidMeasurement:
            return "invalid measurement";
        case ErrorCode::CorruptMeasurement:
            return "corrupt measurement";
        case ErrorCode::DegenerateStates:
            return "degenerate states";
        case ErrorCode::OrderingViolated:
            return "ordering violated";
        case ErrorCode::InvalidConfig:
            return "invalid config";
        case ErrorCode::Io:
            return "io error";
    }
    return "error";
}

namespace {

std::size_t product(const std::vector<std::size_t> &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

bool all_finite(std::span<const Complex> v) {
    return std::all_of(v.begin(), v.end(),
                       [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

void check_labels(const std::vector<std::size_t> &dims, const std::vector<std::string> &labels) {
    if (dims.size() != labels.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one label is required per subsystem");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            if (labels[i] == labels[j]) {
                throw Error(ErrorCode::UnknownLabel, "duplicate subsystem label '" + labels[i] + "'");
            }
        }
    }
}

// Row-major multi-index of `index` over `dims`, leftmost most significant.
std::vector<std::size_t> digits(std::size_t index, const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

std::size_t compose(const std::vector<std::size_t> &digit, const std::vector<std::size_t> &dims) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        index = index * dims[k] + digit[k];
    }
    return index;
}

std::vector<std::size_t> resolve(const std::vector<std::string> &labels,
                                 const std::vector<std::string> &targets) {
    std::vector<std::size_t> positions;
    positions.reserve(targets.size());
    for (const auto &t : targets) {
        auto it = std::find(labels.begin(), labels.end(), t);
        if (it == labels.end()) {
            throw Error(ErrorCode::UnknownLabel, "no subsystem named '" + t + "'");
        }
        auto pos = static_cast<std::size_t>(it - labels.begin());
        if (std::find(positions.begin(), positions.end(), pos) != positions.end()) {
            throw Error(ErrorCode::UnknownLabel, "subsystem '" + t + "' listed twice");
        }
        positions.push_back(pos);
    }
    return positions;
}

}  // namespace

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(std::size_t dim) : dim_(dim), entries_(dim * dim, Complex{0.0, 0.0}) {}

Operator::Operator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
        throw Error(ErrorCode::DimensionMismatch, "operator entries do not form a square matrix");
    }
    if (!all_finite(entries_)) {
        throw Error(ErrorCode::NotFinite, "operator has a NaN or infinite entry");
    }
}

Operator::Operator(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    entries_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) {
            throw Error(ErrorCode::DimensionMismatch, "operator rows must have equal length");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    if (!all_finite(entries_)) {
        throw Error(ErrorCode::NotFinite, "operator has a NaN or infinite entry");
    }
}

Operator Operator::identity(std::size_t dim) {
    Operator out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out(i, i) = 1.0;
    }
    return out;
}

Operator Operator::diag(std::span<const double> values) {
    Operator out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out(i, i) = values[i];
    }
    return out;
}

Operator Operator::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
    if (ket.size() != bra.size()) {
        throw Error(ErrorCode::DimensionMismatch, "outer product of vectors of different length");
    }
    Operator out(ket.size());
    for (std::size_t r = 0; r < ket.size(); ++r) {
        for (std::size_t c = 0; c < bra.size(); ++c) {
            out(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return out;
}

Operator Operator::adjoint() const {
    Operator out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Operator Operator::transpose() const {
    Operator out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

Operator Operator::conj() const {
    Operator out = *this;
    for (auto &z : out.entries_) {
        z = std::conj(z);
    }
    return out;
}

Complex Operator::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double Operator::hermiticity_residual() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return worst;
}

bool Operator::is_unitary(double tol) const {
    return max_abs_diff(adjoint() * *this, identity(dim_)) <= tol;
}

bool Operator::is_finite() const { return all_finite(entries_); }

std::vector<Complex> Operator::apply(std::span<const Complex> v) const {
    if (v.size() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "operator and vector sizes differ");
    }
    std::vector<Complex> out(dim_, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out[r] += (*this)(r, c) * v[c];
        }
    }
    return out;
}

Complex Operator::sandwich(std::span<const Complex> u, std::span<const Complex> v) const {
    return inner(u, apply(v));
}

Operator &Operator::operator+=(const Operator &o) {
    if (o.dim_ != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "operator sum of different sizes");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += o.entries_[i];
    }
    return *this;
}

Operator &Operator::operator-=(const Operator &o) {
    if (o.dim_ != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "operator difference of different sizes");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= o.entries_[i];
    }
    return *this;
}

Operator &Operator::operator*=(Complex s) {
    for (auto &z : entries_) {
        z *= s;
    }
    return *this;
}

Operator operator*(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operator product of different sizes");
    }
    const std::size_t n = a.dim();
    Operator out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ark = a(r, k);
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

double max_abs_diff(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "cannot compare operators of different sizes");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes, std::vector<std::size_t> dims,
                         std::vector<std::string> labels)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)), labels_(std::move(labels)) {
    check_labels(dims_, labels_);
    if (amplitudes_.size() != product(dims_)) {
        throw Error(ErrorCode::DimensionMismatch, "amplitude count does not match subsystem dims");
    }
    if (!all_finite(amplitudes_)) {
        throw Error(ErrorCode::NotFinite, "state has a NaN or infinite amplitude");
    }
    const double n2 = norm_squared(amplitudes_);
    if (std::abs(n2 - 1.0) > TOL_NORM) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "squared norm " << n2 << " differs from 1";
        throw Error(ErrorCode::NotNormalized, msg.str());
    }
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(std::vector<Complex>(amplitudes), {amplitudes.size()}, {"0"}) {}

StateVector StateVector::normalized(std::vector<Complex> amplitudes, std::vector<std::size_t> dims,
                                    std::vector<std::string> labels) {
    const double n = std::sqrt(norm_squared(amplitudes));
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorCode::NotNormalized, "cannot normalize a zero or non-finite vector");
    }
    for (auto &z : amplitudes) {
        z /= n;
    }
    return StateVector(std::move(amplitudes), std::move(dims), std::move(labels));
}

StateVector StateVector::qubit(Complex a, Complex b, std::string label) {
    return StateVector({a, b}, {2}, {std::move(label)});
}

StateVector StateVector::basis(std::size_t index, std::vector<std::size_t> dims,
                               std::vector<std::string> labels) {
    std::vector<Complex> amps(product(dims), Complex{0.0, 0.0});
    if (index >= amps.size()) {
        throw Error(ErrorCode::DimensionMismatch, "basis index out of range");
    }
    amps[index] = 1.0;
    return StateVector(std::move(amps), std::move(dims), std::move(labels));
}

std::size_t StateVector::subsystem_index(const std::string &label) const {
    return resolve(labels_, {label}).front();
}

StateVector StateVector::relabeled(std::vector<std::string> labels) const {
    return StateVector(amplitudes_, dims_, std::move(labels));
}

StateVector StateVector::phase_fixed() const {
    for (Complex z : amplitudes_) {
        if (std::abs(z) > 1e-12) {
            const Complex phase = std::abs(z) / z;
            std::vector<Complex> amps = amplitudes_;
            for (auto &w : amps) {
                w *= phase;
            }
            return StateVector::normalized(std::move(amps), dims_, labels_);
        }
    }
    return *this;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Operator op, std::vector<std::size_t> dims,
                             std::vector<std::string> labels)
    : op_(std::move(op)), dims_(std::move(dims)), labels_(std::move(labels)) {
    check_labels(dims_, labels_);
    if (op_.dim() != product(dims_)) {
        throw Error(ErrorCode::DimensionMismatch, "density matrix size does not match dims");
    }
    if (!op_.is_finite()) {
        throw Error(ErrorCode::NotFinite, "density matrix has a NaN or infinite entry");
    }
    if (!op_.is_hermitian(TOL_HERM)) {
        throw Error(ErrorCode::NotHermitian, "density matrix is not hermitian");
    }
    const Complex tr = op_.trace();
    if (std::abs(tr - 1.0) > TOL_NORM) {
        throw Error(ErrorCode::NotNormalized, "density matrix trace differs from 1");
    }
    const auto eig = hermitian_eig(op_);
    if (!eig.values.empty() && eig.values.back() < -TOL_PSD) {
        throw Error(ErrorCode::NotPositive, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix::DensityMatrix(Operator op)
    : DensityMatrix(op, {op.dim()}, {"0"}) {}

DensityMatrix DensityMatrix::pure(const StateVector &psi) {
    return DensityMatrix(psi.projector(), psi.dims(), psi.labels());
}

double DensityMatrix::purity() const { return (op_ * op_).trace().real(); }

// ---------------------------------------------------------------------------
// Free functions

double norm_squared(std::span<const Complex> v) {
    double s = 0.0;
    for (Complex z : v) {
        s += std::norm(z);
    }
    return s;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "inner product of vectors of different length");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b) {
    std::vector<Complex> out;
    out.reserve(a.size() * b.size());
    for (Complex x : a) {
        for (Complex y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    std::vector<std::size_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    std::vector<std::string> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return StateVector::normalized(kron(a.amplitudes(), b.amplitudes()), std::move(dims),
                                   std::move(labels));
}

Operator tensor(const Operator &a, const Operator &b) {
    const std::size_t n = a.dim() * b.dim();
    Operator out(n);
    for (std::size_t ar = 0; ar < a.dim(); ++ar) {
        for (std::size_t ac = 0; ac < a.dim(); ++ac) {
            const Complex x = a(ar, ac);
            for (std::size_t br = 0; br < b.dim(); ++br) {
                for (std::size_t bc = 0; bc < b.dim(); ++bc) {
                    out(ar * b.dim() + br, ac * b.dim() + bc) = x * b(br, bc);
                }
            }
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, const std::vector<std::string> &keep) {
    const auto &dims = rho.dims();
    const auto &labels = rho.labels();
    auto kept_positions = resolve(labels, keep);
    std::sort(kept_positions.begin(), kept_positions.end());

    std::vector<bool> is_kept(dims.size(), false);
    for (auto p : kept_positions) {
        is_kept[p] = true;
    }
    std::vector<std::size_t> kept_dims;
    std::vector<std::string> kept_labels;
    for (auto p : kept_positions) {
        kept_dims.push_back(dims[p]);
        kept_labels.push_back(labels[p]);
    }

    Operator out(product(kept_dims));
    const std::size_t n = rho.dim();
    for (std::size_t r = 0; r < n; ++r) {
        const auto rd = digits(r, dims);
        for (std::size_t c = 0; c < n; ++c) {
            const auto cd = digits(c, dims);
            bool diagonal_in_traced = true;
            for (std::size_t k = 0; k < dims.size() && diagonal_in_traced; ++k) {
                if (!is_kept[k] && rd[k] != cd[k]) {
                    diagonal_in_traced = false;
                }
            }
            if (!diagonal_in_traced) {
                continue;
            }
            std::vector<std::size_t> rk, ck;
            for (auto p : kept_positions) {
                rk.push_back(rd[p]);
                ck.push_back(cd[p]);
            }
            out(compose(rk, kept_dims), compose(ck, kept_dims)) += rho.op()(r, c);
        }
    }
    return DensityMatrix(std::move(out), std::move(kept_dims), std::move(kept_labels));
}

SchmidtForm schmidt_decompose(const StateVector &psi) {
    if (psi.dims().size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "Schmidt decomposition needs exactly two subsystems");
    }
    const std::size_t da = psi.dims()[0];
    const std::size_t db = psi.dims()[1];
    const std::size_t rank = std::min(da, db);
    auto m = [&](std::size_t i, std::size_t j) { return psi[i * db + j]; };

    // Alice's reduced operator M M^dagger carries the squared coefficients.
    Operator alice(da);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t k = 0; k < da; ++k) {
            Complex s = 0.0;
            for (std::size_t j = 0; j < db; ++j) {
                s += m(i, j) * std::conj(m(k, j));
            }
            alice(i, k) = s;
        }
    }
    const auto eig = hermitian_eig(alice);

    SchmidtForm form;
    std::vector<std::vector<Complex>> bob_vectors;
    for (std::size_t t = 0; t < rank; ++t) {
        const double c = std::sqrt(std::max(0.0, eig.values[t]));
        form.coefficients.push_back(c);
        form.alice_basis.emplace_back(eig.vectors[t], std::vector<std::size_t>{da},
                                      std::vector<std::string>{psi.labels()[0]});
        if (c > 1e-7) {
            std::vector<Complex> b(db, Complex{0.0, 0.0});
            for (std::size_t j = 0; j < db; ++j) {
                for (std::size_t i = 0; i < da; ++i) {
                    b[j] += std::conj(eig.vectors[t][i]) * m(i, j);
                }
            }
            bob_vectors.push_back(std::move(b));
        } else {
            bob_vectors.emplace_back();  // completed below
        }
    }

    // Normalize the computed Bob vectors, then complete any missing ones by
    // Gram-Schmidt against the standard basis.
    for (auto &b : bob_vectors) {
        if (b.empty()) {
            continue;
        }
        const double n = std::sqrt(norm_squared(b));
        for (auto &z : b) {
            z /= n;
        }
    }
    std::size_t candidate = 0;
    for (auto &b : bob_vectors) {
        if (!b.empty()) {
            continue;
        }
        while (candidate < db) {
            std::vector<Complex> e(db, Complex{0.0, 0.0});
            e[candidate++] = 1.0;
            for (const auto &other : bob_vectors) {
                if (other.empty() || &other == &b) {
                    continue;
                }
                const Complex ov = inner(other, e);
                for (std::size_t j = 0; j < db; ++j) {
                    e[j] -= ov * other[j];
                }
            }
            const double n = std::sqrt(norm_squared(e));
            if (n > 1e-6) {
                for (auto &z : e) {
                    z /= n;
                }
                b = std::move(e);
                break;
            }
        }
    }
    for (auto &b : bob_vectors) {
        form.bob_basis.emplace_back(std::move(b), std::vector<std::size_t>{db},
                                    std::vector<std::string>{psi.labels()[1]});
    }
    return form;
}

StateVector SchmidtForm::reconstruct(std::vector<std::string> labels) const {
    if (coefficients.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "empty Schmidt form");
    }
    const std::size_t da = alice_basis.front().size();
    const std::size_t db = bob_basis.front().size();
    std::vector<Complex> amps(da * db, Complex{0.0, 0.0});
    for (std::size_t t = 0; t < coefficients.size(); ++t) {
        const auto term = kron(alice_basis[t].amplitudes(), bob_basis[t].amplitudes());
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += coefficients[t] * term[i];
        }
    }
    return StateVector::normalized(std::move(amps), {da, db}, std::move(labels));
}

double fidelity(const StateVector &pure, const StateVector &other) {
    if (pure.size() != other.size()) {
        throw Error(ErrorCode::DimensionMismatch, "fidelity of states of different dimension");
    }
    return std::min(1.0, std::norm(inner(pure.amplitudes(), other.amplitudes())));
}

double fidelity(const StateVector &pure, const DensityMatrix &rho) {
    if (pure.size() != rho.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "fidelity of states of different dimension");
    }
    return std::clamp(rho.op().sandwich(pure.amplitudes(), pure.amplitudes()).real(), 0.0, 1.0);
}

bool equal_up_to_global_phase(const StateVector &a, const StateVector &b, double tol) {
    return fidelity(a, b) >= 1.0 - tol;
}

EigenDecomposition hermitian_eig(const Operator &op) {
    if (!op.is_hermitian(TOL_HERM)) {
        throw Error(ErrorCode::NotHermitian, "eigendecomposition requires a hermitian operator");
    }
    const std::size_t n = op.dim();
    Operator a = op;
    // Symmetrize away sub-tolerance asymmetry so the rotations stay exact.
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = a(r, r).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            const Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = avg;
            a(c, r) = std::conj(avg);
        }
    }
    Operator v = Operator::identity(n);

    double scale = 0.0;
    for (Complex z : a.entries()) {
        scale = std::max(scale, std::abs(z));
    }
    const double threshold = 1e-14 * std::max(1.0, scale);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) < threshold) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex g = a(p, q);
                const double mag = std::abs(g);
                if (mag < 1e-300) {
                    continue;
                }
                // Phase out the off-diagonal, then rotate the real 2x2 block.
                const Complex phase = std::conj(g) / mag;  // e^{-i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double t = 0.5 * std::atan2(2.0 * mag, aqq - app);
                const double c = std::cos(t);
                const double s = std::sin(t);
                // Rotation V acting on (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
                const Complex vpp = c, vpq = s, vqp = -s * phase, vqq = c * phase;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * vpp + akq * vqp;
                    a(k, q) = akp * vpq + akq * vqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
                    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * vpp + vkq * vqp;
                    v(k, q) = vkp * vpq + vkq * vqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    EigenDecomposition out;
    for (auto i : order) {
        out.values.push_back(a(i, i).real());
        std::vector<Complex> col(n);
        for (std::size_t k = 0; k < n; ++k) {
            col[k] = v(k, i);
        }
        out.vectors.push_back(std::move(col));
    }
    return out;
}

Operator psd_sqrt(const Operator &op) {
    const auto eig = hermitian_eig(op);
    Operator out(op.dim());
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
        const double lambda = eig.values[i];
        if (lambda < -TOL_PSD) {
            throw Error(ErrorCode::NotPositive, "square root of an operator with a negative eigenvalue");
        }
        if (lambda <= 0.0) {
            continue;
        }
        out += std::sqrt(lambda) * Operator::projector(eig.vectors[i]);
    }
    return out;
}

std::vector<Complex> apply_local(const Operator &op, const StateVector &psi,
                                 const std::vector<std::string> &targets) {
    const auto positions = resolve(psi.labels(), targets);
    const auto &dims = psi.dims();
    std::vector<std::size_t> local_dims;
    for (auto p : positions) {
        local_dims.push_back(dims[p]);
    }
    if (op.dim() != product(local_dims)) {
        throw Error(ErrorCode::DimensionMismatch, "operator does not match the target subsystems");
    }
    std::vector<Complex> out(psi.size(), Complex{0.0, 0.0});
    std::vector<std::size_t> local(positions.size());
    for (std::size_t idx = 0; idx < psi.size(); ++idx) {
        const Complex amp = psi[idx];
        if (amp == Complex{0.0, 0.0}) {
            continue;
        }
        auto d = digits(idx, dims);
        for (std::size_t k = 0; k < positions.size(); ++k) {
            local[k] = d[positions[k]];
        }
        const std::size_t col = compose(local, local_dims);
        for (std::size_t row = 0; row < op.dim(); ++row) {
            const Complex m = op(row, col);
            if (m == Complex{0.0, 0.0}) {
                continue;
            }
            const auto rd = digits(row, local_dims);
            for (std::size_t k = 0; k < positions.size(); ++k) {
                d[positions[k]] = rd[k];
            }
            out[compose(d, dims)] += m * amp;
        }
    }
    return out;
}

std::vector<Complex> contract_bra(std::span<const Complex> bra, const StateVector &psi,
                                  const std::vector<std::string> &targets) {
    const auto positions = resolve(psi.labels(), targets);
    const auto &dims = psi.dims();
    std::vector<bool> is_target(dims.size(), false);
    std::vector<std::size_t> local_dims, rest_dims;
    for (auto p : positions) {
        is_target[p] = true;
        local_dims.push_back(dims[p]);
    }
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!is_target[k]) {
            rest_dims.push_back(dims[k]);
        }
    }
    if (bra.size() != product(local_dims)) {
        throw Error(ErrorCode::DimensionMismatch, "bra does not match the target subsystems");
    }
    std::vector<Complex> out(product(rest_dims), Complex{0.0, 0.0});
    std::vector<std::size_t> local(positions.size());
    std::vector<std::size_t> rest;
    for (std::size_t idx = 0; idx < psi.size(); ++idx) {
        const auto d = digits(idx, dims);
        for (std::size_t k = 0; k < positions.size(); ++k) {
            local[k] = d[positions[k]];
        }
        rest.clear();
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (!is_target[k]) {
                rest.push_back(d[k]);
            }
        }
        out[compose(rest, rest_dims)] += std::conj(bra[compose(local, local_dims)]) * psi[idx];
    }
    return out;
}

namespace gates {
Operator I() { return Operator::identity(2); }
Operator X() { return Operator{{0.0, 1.0}, {1.0, 0.0}}; }
Operator Y() { return Operator{{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
Operator Z() { return Operator{{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace gates

}  // namespace telepovm
