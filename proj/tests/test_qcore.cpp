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


#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "telepovm/qcore.hpp"

using namespace telepovm;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

StateVector singlet_ab() { return StateVector({0, r2, -r2, 0}, {2, 2}, {"A", "B"}); }

StateVector channel_ab(double alpha2) {
    return StateVector({std::sqrt(alpha2), 0, 0, std::sqrt(1 - alpha2)}, {2, 2}, {"A", "B"});
}

}  // namespace

TEST_CASE("tensor of basis states and identities") {
    const auto up = StateVector::qubit(1, 0, "x");
    const auto t = tensor(up, StateVector::qubit(1, 0, "y"));
    CHECK(t.amplitudes() == std::vector<Complex>{1, 0, 0, 0});
    CHECK(t.labels() == std::vector<std::string>{"x", "y"});

    const auto three = tensor(StateVector::qubit(1, 0, "1"), channel_ab(0.5));
    const std::vector<Complex> expect{r2, 0, 0, r2, 0, 0, 0, 0};
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(three[i] - expect[i]) < 1e-15);

    CHECK(max_abs_diff(tensor(Operator::identity(2), Operator::identity(2)), Operator::identity(4)) == 0.0);
}

TEST_CASE("tensor rejects clashing labels") {
    CHECK_THROWS_CODE(tensor(StateVector::qubit(1, 0, "a"), StateVector::qubit(0, 1, "a")),
                      ErrorCode::UnknownLabel);
}

TEST_CASE("state vector validation") {
    CHECK_THROWS_CODE(StateVector({1, 1}, {2}, {"q"}), ErrorCode::NotNormalized);
    CHECK_THROWS_CODE(StateVector({1, 0, 0}, {2}, {"q"}), ErrorCode::DimensionMismatch);
    CHECK_THROWS_CODE(StateVector({std::nan(""), 0}, {2}, {"q"}), ErrorCode::NotFinite);
    CHECK_THROWS_CODE(StateVector::normalized({0, 0}, {2}, {"q"}), ErrorCode::NotNormalized);
    CHECK_NOTHROW(StateVector({1.0 + 2e-13, 0}, {2}, {"q"}));
}

TEST_CASE("density matrix validation") {
    CHECK_THROWS_CODE(DensityMatrix(Operator{{0.5, 0.1}, {0.2, 0.5}}), ErrorCode::NotHermitian);
    CHECK_THROWS_CODE(DensityMatrix(Operator{{0.6, 0}, {0, 0.6}}), ErrorCode::NotNormalized);
    CHECK_THROWS_CODE(DensityMatrix(Operator{{1.5, 0}, {0, -0.5}}), ErrorCode::NotPositive);
    CHECK(DensityMatrix(Operator{{0.5, 0}, {0, 0.5}}).purity() == doctest::Approx(0.5));
}

TEST_CASE("partial trace of a singlet is maximally mixed") {
    const auto bob = partial_trace(DensityMatrix::pure(singlet_ab()), {"B"});
    CHECK(max_abs_diff(bob.op(), 0.5 * Operator::identity(2)) < 1e-15);
    CHECK(bob.labels() == std::vector<std::string>{"B"});
}

TEST_CASE("partial trace of a product state keeps each factor") {
    const auto psi = StateVector::qubit(0.6, Complex(0, 0.8), "A");
    const auto phi = StateVector::qubit(r2, -r2, "B");
    const auto rho = DensityMatrix::pure(tensor(psi, phi));
    CHECK(max_abs_diff(partial_trace(rho, {"A"}).op(), psi.projector()) < 1e-15);
    CHECK(max_abs_diff(partial_trace(rho, {"B"}).op(), phi.projector()) < 1e-15);
}

TEST_CASE("partial trace of the alpha2 = 0.8 channel against index contraction") {
    const auto psi = channel_ab(0.8);
    const auto ref = oracle::reduce_second(psi.amplitudes());
    const auto bob = partial_trace(DensityMatrix::pure(psi), {"B"});
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(std::abs(bob.op()(k, l) - ref[k][l]) < 1e-15);
    CHECK(bob.op()(0, 0).real() == doctest::Approx(0.8));
    CHECK(bob.op()(1, 1).real() == doctest::Approx(0.2));
}

TEST_CASE("partial trace on three subsystems, random state") {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> n;
    std::vector<Complex> amps(8);
    for (auto &z : amps) z = {n(gen), n(gen)};
    const auto psi = StateVector::normalized(amps, {2, 2, 2}, {"1", "2", "3"});
    const auto kept = partial_trace(DensityMatrix::pure(psi), {"1", "3"});
    // rho_{(a c),(a' c')} = sum_b psi[a b c] conj(psi[a' b c'])
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            for (int a2 = 0; a2 < 2; ++a2)
                for (int c2 = 0; c2 < 2; ++c2) {
                    Complex s = 0;
                    for (int b = 0; b < 2; ++b) s += psi[a * 4 + b * 2 + c] * std::conj(psi[a2 * 4 + b * 2 + c2]);
                    CHECK(std::abs(kept.op()(a * 2 + c, a2 * 2 + c2) - s) < 1e-14);
                }
    CHECK_THROWS_CODE(partial_trace(DensityMatrix::pure(psi), {"9"}), ErrorCode::UnknownLabel);
}

TEST_CASE("schmidt decomposition") {
    SUBCASE("product") {
        const auto f = schmidt_decompose(tensor(StateVector::qubit(0.6, 0.8, "A"), StateVector::qubit(1, 0, "B")));
        CHECK(f.coefficients[0] == doctest::Approx(1.0));
        CHECK(f.coefficients[1] == doctest::Approx(0.0));
    }
    SUBCASE("singlet") {
        const auto f = schmidt_decompose(singlet_ab());
        CHECK(f.coefficients[0] == doctest::Approx(r2));
        CHECK(f.coefficients[1] == doctest::Approx(r2));
        CHECK(equal_up_to_global_phase(f.reconstruct(), singlet_ab()));
    }
    SUBCASE("channel already in Schmidt form") {
        const auto f = schmidt_decompose(channel_ab(0.8));
        CHECK(f.coefficients[0] == doctest::Approx(std::sqrt(0.8)));
        CHECK(f.coefficients[1] == doctest::Approx(std::sqrt(0.2)));
    }
    SUBCASE("random states reconstruct") {
        std::mt19937_64 gen(11);
        std::normal_distribution<double> n;
        for (int t = 0; t < 200; ++t) {
            std::vector<Complex> amps(4);
            for (auto &z : amps) z = {n(gen), n(gen)};
            const auto psi = StateVector::normalized(amps, {2, 2}, {"A", "B"});
            const auto f = schmidt_decompose(psi);
            CHECK(f.coefficients[0] >= f.coefficients[1]);
            CHECK(f.coefficients[0] * f.coefficients[0] + f.coefficients[1] * f.coefficients[1] ==
                  doctest::Approx(1.0).epsilon(1e-12));
            const auto back = f.reconstruct();
            for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(back[i] - psi[i]) < 1e-10);
        }
    }
    CHECK_THROWS_CODE(schmidt_decompose(StateVector::qubit(1, 0)), ErrorCode::DimensionMismatch);
}

TEST_CASE("fidelity and global phase") {
    const auto up = StateVector::qubit(1, 0);
    const auto down = StateVector::qubit(0, 1);
    const auto psi = StateVector::qubit(0.6, Complex(0, 0.8));
    CHECK(fidelity(psi, psi) == doctest::Approx(1.0));
    CHECK(fidelity(up, down) == doctest::Approx(0.0));
    for (double phi : {0.1, 1.0, 2.5, -3.0}) {
        CHECK(fidelity(up, StateVector::qubit(std::polar(1.0, phi), 0)) == doctest::Approx(1.0));
    }
    CHECK(equal_up_to_global_phase(psi, StateVector::qubit(-0.6, Complex(0, -0.8))));
    CHECK_FALSE(equal_up_to_global_phase(up, down));
    CHECK(fidelity(up, DensityMatrix(0.5 * Operator::identity(2))) == doctest::Approx(0.5));
    CHECK_THROWS_CODE(fidelity(up, singlet_ab()), ErrorCode::DimensionMismatch);
}

TEST_CASE("hermitian eigendecomposition") {
    auto e = hermitian_eig(Operator::identity(2));
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(1.0));

    const double c = std::cos(0.7), s = std::sin(0.7);
    e = hermitian_eig(Operator{{0.5 * c * c, 0.5 * c * s}, {0.5 * c * s, 0.5 * s * s}});
    CHECK(e.values[0] == doctest::Approx(0.5));
    CHECK(std::abs(e.values[1]) < 1e-15);

    e = hermitian_eig(Operator{{0.2, 0}, {0, 0.8}});
    CHECK(e.values[0] == doctest::Approx(0.8));
    CHECK(e.values[1] == doctest::Approx(0.2));

    CHECK_THROWS_CODE(hermitian_eig(Operator{{0, 1}, {0, 0}}), ErrorCode::NotHermitian);
}

TEST_CASE("hermitian eigendecomposition reconstructs random 8x8 matrices") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
        Operator g(8);
        for (std::size_t r = 0; r < 8; ++r)
            for (std::size_t col = 0; col < 8; ++col) g(r, col) = {n(gen), n(gen)};
        const Operator h = g + g.adjoint();
        const auto e = hermitian_eig(h);
        Operator back(8);
        for (std::size_t k = 0; k < 8; ++k) {
            back += e.values[k] * Operator::projector(e.vectors[k]);
            if (k) CHECK(e.values[k - 1] >= e.values[k]);
            for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(inner(e.vectors[j], e.vectors[k])) < 1e-12);
        }
        CHECK(max_abs_diff(back, h) < 1e-11);
    }
}

TEST_CASE("psd square root") {
    CHECK(max_abs_diff(psd_sqrt(Operator::identity(2)), Operator::identity(2)) < 1e-15);
    CHECK(max_abs_diff(psd_sqrt(Operator{{4, 0}, {0, 0}}), Operator{{2, 0}, {0, 0}}) < 1e-15);
    // (1/4)(1 1; 1 1) is half a rank-one projector, so its root is sqrt(2) times itself.
    const Operator a1{{0.25, 0.25}, {0.25, 0.25}};
    const auto root = psd_sqrt(a1);
    CHECK(max_abs_diff(root, std::sqrt(2.0) * a1) < 1e-15);
    CHECK(max_abs_diff(root * root, a1) < 1e-15);
    CHECK_THROWS_CODE(psd_sqrt(Operator{{1, 0}, {0, -0.1}}), ErrorCode::NotPositive);
}

TEST_CASE("local operators on a labelled subsystem") {
    const auto psi = tensor(StateVector::qubit(1, 0, "a"), StateVector::qubit(0.6, 0.8, "b"));
    const auto out = apply_local(gates::X(), psi, {"b"});
    const std::vector<Complex> expect{0.8, 0.6, 0, 0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out[i] - expect[i]) < 1e-15);
    const auto rest = contract_bra(std::vector<Complex>{0, 1}, psi, {"b"});
    CHECK(std::abs(rest[0] - 0.8) < 1e-15);
    CHECK(std::abs(rest[1]) < 1e-15);
}

TEST_CASE("pauli gates") {
    for (const auto &g : {gates::I(), gates::X(), gates::Y(), gates::Z()}) {
        CHECK(g.is_unitary());
        CHECK(g.is_hermitian());
    }
    CHECK(max_abs_diff(gates::X() * gates::Z(), Operator{{0, -1}, {1, 0}}) == 0.0);
}
