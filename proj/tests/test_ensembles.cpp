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
#include "telepovm/ensembles.hpp"
#include "telepovm/random.hpp"

using namespace telepovm;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

// rho_i[k][l] = sum_{m,n} A[m][n] psi[n,k] conj(psi[m,l]), unnormalized.
oracle::Mat conditional(const Operator &a, const StateVector &psi) {
    oracle::Mat out(2, std::vector<oracle::C>(2));
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n) out[k][l] += a(m, n) * psi[n * 2 + k] * std::conj(psi[m * 2 + l]);
    return out;
}

}  // namespace

TEST_CASE("ensemble density of simple ensembles") {
    const auto psi = StateVector::qubit(0.6, Complex(0, 0.8), "B");
    const RhoEnsemble one({{"only", 1.0, psi}});
    CHECK(max_abs_diff(ensemble_density(one).op(), psi.projector()) < 1e-15);

    const RhoEnsemble mix({{"up", 0.5, StateVector::qubit(1, 0)}, {"down", 0.5, StateVector::qubit(0, 1)}});
    CHECK(max_abs_diff(ensemble_density(mix).op(), 0.5 * Operator::identity(2)) < 1e-15);
}

TEST_CASE("ensemble validation") {
    CHECK_THROWS_CODE(RhoEnsemble({{"a", 0.7, StateVector::qubit(1, 0)}}), ErrorCode::NotNormalized);
    CHECK_THROWS_CODE(RhoEnsemble({{"a", 1.2, StateVector::qubit(1, 0)}, {"b", -0.2, StateVector::qubit(0, 1)}}),
                      ErrorCode::InvalidMeasurement);
    CHECK_THROWS_CODE(RhoEnsemble({{"a", 1.0, StateVector::qubit(1, 0)}},
                                  DensityMatrix(0.5 * Operator::identity(2))),
                      ErrorCode::InvalidMeasurement);
    CHECK_THROWS_CODE(RhoEnsemble({}), ErrorCode::InvalidMeasurement);
}

TEST_CASE("singlet and the four-outcome POVM give psi1..psi4") {
    for (double theta : {0.0, 0.3, std::numbers::pi / 7, std::numbers::pi / 4, 1.9, 4.0}) {
        const double c = std::cos(theta), s = std::sin(theta);
        const auto e = generate_at_distance(singlet(), telepovm_elements(theta));
        const std::array<oracle::Vec, 4> listed{oracle::Vec{s, -c}, oracle::Vec{s, c}, oracle::Vec{c, -s},
                                                oracle::Vec{c, s}};
        REQUIRE(e.members().size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(e[i].probability - 0.25) < 1e-12);
            REQUIRE(e[i].is_pure());
            CHECK(oracle::fid(listed[i], e[i].pure_state().amplitudes()) > 1 - 1e-10);
            CHECK(equal_up_to_global_phase(e[i].pure_state(), StateVector::qubit(listed[i][0], listed[i][1], "B")));
        }
        CHECK(max_abs_diff(ensemble_density(e).op(), 0.5 * Operator::identity(2)) < 1e-12);
    }
}

TEST_CASE("singlet with a z measurement is anticorrelated") {
    const auto e = epr_basis_choice_demo("z");
    CHECK(e[0].probability == doctest::Approx(0.5));
    CHECK(fidelity(StateVector::qubit(0, 1), e[0].pure_state().relabeled({"0"})) == doctest::Approx(1.0));
    CHECK(fidelity(StateVector::qubit(1, 0), e[1].pure_state().relabeled({"0"})) == doctest::Approx(1.0));
    CHECK(max_abs_diff(ensemble_density(e).op(), 0.5 * Operator::identity(2)) < 1e-15);

    const auto x = epr_basis_choice_demo("x");
    CHECK(max_abs_diff(ensemble_density(x).op(), 0.5 * Operator::identity(2)) < 1e-15);
    CHECK(fidelity(StateVector::qubit(r2, -r2), x[0].pure_state().relabeled({"0"})) == doctest::Approx(1.0));
    CHECK_THROWS_CODE(epr_basis_choice_demo("y"), ErrorCode::UnknownLabel);
}

TEST_CASE("b92 ensemble") {
    SUBCASE("beta = 0 gives the same state twice") {
        const auto e = b92_demo(1.0, 0.0);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(oracle::fid({r2, r2}, e[i].pure_state().amplitudes()) > 1 - 1e-12);
            CHECK(e[i].probability == doctest::Approx(0.5));
        }
    }
    SUBCASE("equal amplitudes give basis states") {
        const auto e = b92_demo(r2, r2);
        CHECK(oracle::fid({1, 0}, e[0].pure_state().amplitudes()) > 1 - 1e-12);
        CHECK(oracle::fid({0, 1}, e[1].pure_state().amplitudes()) > 1 - 1e-12);
    }
    SUBCASE("alpha^2 = 0.8 member overlap") {
        const auto e = b92_demo(std::sqrt(0.8), std::sqrt(0.2));
        CHECK(std::abs(inner(e[0].pure_state().amplitudes(), e[1].pure_state().amplitudes())) ==
              doctest::Approx(0.6));
    }
    SUBCASE("mixture equals Bob's marginal of the shared state") {
        std::mt19937_64 gen(17);
        std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
        for (int t = 0; t < 100; ++t) {
            const double phi = u(gen);
            const double a = std::cos(phi), b = std::sin(phi);
            const oracle::Vec px{r2, r2}, mx{r2, -r2};
            const auto pp = oracle::kron(px, px), mm = oracle::kron(mx, mx);
            oracle::Vec shared(4);
            for (int i = 0; i < 4; ++i) shared[i] = a * pp[i] + b * mm[i];
            const auto bob = oracle::reduce_second(shared);
            const auto e = b92_demo(a, b);
            const auto rho = ensemble_density(e);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) CHECK(std::abs(rho.op()(k, l) - bob[k][l]) < 1e-12);
            CHECK(oracle::fid({(a + b) * r2, (a - b) * r2}, e[0].pure_state().amplitudes()) > 1 - 1e-10);
            CHECK(oracle::fid({(a - b) * r2, (a + b) * r2}, e[1].pure_state().amplitudes()) > 1 - 1e-10);
            CHECK(std::abs(e[0].probability - 0.5) < 1e-12);
        }
    }
    CHECK_THROWS_CODE(b92_demo(0.5, 0.5), ErrorCode::NotNormalized);
}

TEST_CASE("zero-probability outcomes keep a null slot") {
    const auto up_up = StateVector({1, 0, 0, 0}, {2, 2}, {"A", "B"});
    const auto e = generate_at_distance(up_up, z_basis().as_povm());
    REQUIRE(e.members().size() == 2);
    CHECK(e[1].is_null());
    CHECK(e[1].probability == 0.0);
    CHECK_THROWS_CODE(e[1].density(), ErrorCode::InvalidMeasurement);
}

TEST_CASE("generate_at_distance rejects mismatched POVMs") {
    CHECK_THROWS_CODE(generate_at_distance(singlet(), bell_basis().as_povm()), ErrorCode::DimensionMismatch);
    CHECK_THROWS_CODE(generate_at_distance(StateVector::qubit(1, 0), z_basis().as_povm()),
                      ErrorCode::DimensionMismatch);
}

TEST_CASE("random states and POVMs: mixture, weights and members agree with index sums") {
    Rng rng(2024);
    int mixed = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto psi = random_state(rng, {2, 2}, {"A", "B"});
        const std::size_t outcomes = 2 + t % 5;
        const auto povm = random_povm(rng, 2, outcomes);
        REQUIRE(validate_povm(povm).passed());
        const auto e = generate_at_distance(psi, povm);
        const auto bob = oracle::reduce_second(psi.amplitudes());
        const auto rho = ensemble_density(e);
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) CHECK(std::abs(rho.op()(k, l) - bob[k][l]) < 1e-10);
        for (std::size_t i = 0; i < outcomes; ++i) {
            const auto ref = conditional(povm[i], psi);
            const double p = (ref[0][0] + ref[1][1]).real();
            CHECK(std::abs(e[i].probability - p) < 1e-12);
            if (p < 1e-12) continue;
            const auto d = e[i].density();
            mixed += !e[i].is_pure();
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) CHECK(std::abs(d.op()(k, l) - ref[k][l] / p) < 1e-10);
        }
    }
    // Full-rank elements on entangled states give mixed members; make sure
    // that path was exercised.
    CHECK(mixed > 100);
}
