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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "telepovm/error.hpp"

namespace telepovm {

using Complex = std::complex<double>;

inline constexpr double TOL_NORM = 1e-12;
inline constexpr double TOL_HERM = 1e-12;
inline constexpr double TOL_PSD = 1e-10;
inline constexpr double TOL_RECON = 1e-10;

/// Dense square complex matrix, row-major. Sized for the few-qubit regime
/// (side length <= 8) but nothing here depends on that bound.
class Operator {
   public:
    Operator() = default;
    explicit Operator(std::size_t dim);
    Operator(std::size_t dim, std::vector<Complex> entries);
    Operator(std::initializer_list<std::initializer_list<Complex>> rows);

    static Operator identity(std::size_t dim);
    static Operator zero(std::size_t dim) { return Operator(dim); }
    static Operator diag(std::span<const double> values);
    /// |v><v| for an arbitrary (not necessarily normalized) vector.
    static Operator outer(std::span<const Complex> ket, std::span<const Complex> bra);
    static Operator projector(std::span<const Complex> v) { return outer(v, v); }

    std::size_t dim() const { return dim_; }
    const std::vector<Complex> &entries() const { return entries_; }

    Complex operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }

    Operator adjoint() const;
    Operator transpose() const;
    Operator conj() const;
    Complex trace() const;

    /// Largest entrywise |M - M^dagger|.
    double hermiticity_residual() const;
    bool is_hermitian(double tol = TOL_HERM) const { return hermiticity_residual() <= tol; }
    bool is_unitary(double tol = TOL_NORM) const;
    bool is_finite() const;

    std::vector<Complex> apply(std::span<const Complex> v) const;
    /// <u|M|v>.
    Complex sandwich(std::span<const Complex> u, std::span<const Complex> v) const;

    Operator &operator+=(const Operator &o);
    Operator &operator-=(const Operator &o);
    Operator &operator*=(Complex s);

    friend Operator operator+(Operator a, const Operator &b) { return a += b; }
    friend Operator operator-(Operator a, const Operator &b) { return a -= b; }
    friend Operator operator*(Operator a, Complex s) { return a *= s; }
    friend Operator operator*(Complex s, Operator a) { return a *= s; }
    friend Operator operator*(const Operator &a, const Operator &b);

   private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

/// Largest entrywise |a - b|. Throws on dimension mismatch.
double max_abs_diff(const Operator &a, const Operator &b);

/// Normalized amplitude vector over a labeled tensor factorization.
/// Leftmost label is the most significant index.
class StateVector {
   public:
    /// Validates length against dims and the norm against TOL_NORM.
    StateVector(std::vector<Complex> amplitudes, std::vector<std::size_t> dims,
                std::vector<std::string> labels);
    /// Single qubit with label "0".
    StateVector(std::initializer_list<Complex> amplitudes);

    /// Rescales to unit norm before validating. Throws on a zero vector.
    static StateVector normalized(std::vector<Complex> amplitudes, std::vector<std::size_t> dims,
                                  std::vector<std::string> labels);
    static StateVector qubit(Complex a, Complex b, std::string label = "0");
    static StateVector basis(std::size_t index, std::vector<std::size_t> dims,
                             std::vector<std::string> labels);

    const std::vector<Complex> &amplitudes() const { return amplitudes_; }
    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t size() const { return amplitudes_.size(); }
    Complex operator[](std::size_t i) const { return amplitudes_[i]; }

    /// Position of a label in the factorization.
    std::size_t subsystem_index(const std::string &label) const;

    StateVector relabeled(std::vector<std::string> labels) const;
    /// Rotates the global phase so the first amplitude with modulus above
    /// 1e-12 is real and positive.
    StateVector phase_fixed() const;
    Operator projector() const { return Operator::projector(amplitudes_); }

   private:
    std::vector<Complex> amplitudes_;
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
};

/// Hermitian, PSD, unit-trace operator with a labeled factorization.
class DensityMatrix {
   public:
    DensityMatrix(Operator op, std::vector<std::size_t> dims, std::vector<std::string> labels);
    /// Single subsystem labelled "0".
    explicit DensityMatrix(Operator op);

    static DensityMatrix pure(const StateVector &psi);

    const Operator &op() const { return op_; }
    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<std::string> &labels() const { return labels_; }
    std::size_t dim() const { return op_.dim(); }

    /// tr(rho^2).
    double purity() const;

   private:
    Operator op_;
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
};

struct SchmidtForm {
    std::vector<double> coefficients;  // descending, nonnegative
    std::vector<StateVector> alice_basis;
    std::vector<StateVector> bob_basis;

    /// sum_i c_i |a_i>|b_i>, labelled with the supplied pair of labels.
    StateVector reconstruct(std::vector<std::string> labels = {"A", "B"}) const;
};

struct EigenDecomposition {
    std::vector<double> values;          // descending
    std::vector<std::vector<Complex>> vectors;  // vectors[i] pairs with values[i]
};

// Construction.
StateVector tensor(const StateVector &a, const StateVector &b);
Operator tensor(const Operator &a, const Operator &b);
std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b);

/// Reduced state on the kept labels. The result keeps the parent's label order.
DensityMatrix partial_trace(const DensityMatrix &rho, const std::vector<std::string> &keep);

SchmidtForm schmidt_decompose(const StateVector &psi);

/// |<a|b>|^2.
double fidelity(const StateVector &pure, const StateVector &other);
/// <psi|rho|psi>.
double fidelity(const StateVector &pure, const DensityMatrix &rho);
bool equal_up_to_global_phase(const StateVector &a, const StateVector &b, double tol = TOL_RECON);

/// Cyclic complex Jacobi. Throws ErrorCode::NotHermitian unless Hermitian
/// within TOL_HERM.
EigenDecomposition hermitian_eig(const Operator &op);

/// PSD square root; eigenvalues in [-TOL_PSD, 0) are clamped to zero.
Operator psd_sqrt(const Operator &op);

/// Applies `op` to the listed subsystems of a state vector, identity on the
/// rest. The result is not renormalized.
std::vector<Complex> apply_local(const Operator &op, const StateVector &psi,
                                 const std::vector<std::string> &targets);

/// Contracts <bra| on the listed subsystems and returns the (unnormalized)
/// amplitudes of the remaining subsystems in their original order.
std::vector<Complex> contract_bra(std::span<const Complex> bra, const StateVector &psi,
                                  const std::vector<std::string> &targets);

double norm_squared(std::span<const Complex> v);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

/// Pauli and fixed single-qubit operators.
namespace gates {
Operator I();
Operator X();
Operator Y();
Operator Z();
}  // namespace gates

}  // namespace telepovm
