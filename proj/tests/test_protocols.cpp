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
#include <map>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "telepovm/protocols.hpp"
#include "telepovm/random.hpp"

using namespace telepovm;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

StateVector as_input(const oracle::Vec &v) { return StateVector::qubit(v[0], v[1], "1"); }

const Branch *find_leaf(const std::vector<Branch> &branches, const std::vector<std::string> &steps) {
    for (const auto &b : branches)
        if (b.transcript.step_outcomes == steps) return &b;
    return nullptr;
}

// Bob's unnormalized state when the (1,2) factor in `basis` is projected
// onto the bra <w| (the rank-one USD element for outcome u uses w = v-perp).
oracle::Vec bob_after_factor_bra(const oracle::Vec &input, double alpha, double beta,
                                 std::array<int, 2> basis, const oracle::Vec &w) {
    const auto psi = oracle::kron(input, oracle::Vec{alpha, 0, 0, beta});
    oracle::Vec out(2);
    for (int j = 0; j < 2; ++j)
        for (int b = 0; b < 2; ++b) out[b] += std::conj(w[j]) * psi[basis[j] * 2 + b];
    return out;
}

}  // namespace

TEST_CASE("channel spec") {
    const auto ch = ChannelSpec::from_alpha2(0.2);
    CHECK(ch.alpha() == doctest::Approx(std::sqrt(0.8)));
    CHECK(ch.beta() == doctest::Approx(std::sqrt(0.2)));
    const auto bob = ch.bob_reduced();
    CHECK(bob.op()(0, 0).real() == doctest::Approx(0.8));
    CHECK(bob.op()(1, 1).real() == doctest::Approx(0.2));
    CHECK(ChannelSpec::maximally_entangled().is_maximally_entangled());
    CHECK_THROWS_CODE(ChannelSpec(std::sqrt(0.2), std::sqrt(0.8)), ErrorCode::OrderingViolated);
    CHECK_THROWS_CODE(ChannelSpec(0.5, 0.5), ErrorCode::NotNormalized);
    CHECK_THROWS_CODE(ChannelSpec::from_alpha2(1.5), ErrorCode::InvalidConfig);
    CHECK(ch.state().labels() == std::vector<std::string>{"2", "3"});
}

TEST_CASE("three particle state is input tensor channel") {
    const oracle::Vec in{0.6, oracle::C(0, 0.8)};
    const auto ch = ChannelSpec::from_alpha2(0.7);
    const auto psi = three_particle_state(as_input(in), ch);
    const auto ref = oracle::kron(in, {ch.alpha(), 0, 0, ch.beta()});
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(psi[i] - ref[i]) < 1e-15);
}

TEST_CASE("Bell correction table from brute-force conditional states") {
    std::mt19937_64 gen(1);
    const std::array<std::string, 4> table{"I", "Z", "X", "XZ"};
    for (int t = 0; t < 200; ++t) {
        const auto in = oracle::haar_qubit(gen);
        for (int k = 0; k < 4; ++k) {
            const auto bob = oracle::normalize(oracle::bob_after_bell(in, r2, r2, k));
            CHECK(oracle::fid(in, oracle::apply(oracle::pauli(table[k]), bob)) > 1 - 1e-12);
        }
    }
    const auto labels = bell_basis().labels();
    for (int k = 0; k < 4; ++k) CHECK(correction_for(labels[k]).label == table[k]);
    CHECK(derive_bell_correction_table(5, 50) == table);
    CHECK_THROWS_CODE(correction_for("Omega"), ErrorCode::UnknownLabel);
    CHECK(max_abs_diff(Correction::named("XZ").op, gates::X() * gates::Z()) == 0.0);
}

TEST_CASE("standard teleportation over a maximally entangled channel") {
    const auto ch = ChannelSpec::maximally_entangled();
    Rng rng(77);
    for (int t = 0; t < 200; ++t) {
        const auto in = random_qubit(rng);
        const auto branches = enumerate_standard(in, ch);
        REQUIRE(branches.size() == 4);
        for (const auto &b : branches) {
            CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-12));
            CHECK(*b.transcript.fidelity_achieved > 1 - 1e-10);
            CHECK(b.transcript.classical_bits_sent == 2);
            CHECK(equal_up_to_global_phase(*b.transcript.bob_final, in.relabeled({"3"})));
        }
        const auto sampled = standard_teleport(in, ch, rng);
        CHECK(*sampled.fidelity_achieved > 1 - 1e-10);
        CHECK(sampled.protocol == "standard");
    }
}

TEST_CASE("standard teleportation over a partially entangled channel") {
    SUBCASE("fidelity of the Phi+ branch matches a hand-built state") {
        const oracle::Vec in{r2, r2};
        const double a = std::sqrt(0.8), b = std::sqrt(0.2);
        const auto bob = oracle::normalize(oracle::bob_after_bell(in, a, b, 0));
        const double ref = oracle::fid(in, bob);
        CHECK(ref == doctest::Approx((a + b) * (a + b) / 2));
        CHECK(ref == doctest::Approx(0.9));
        const auto leaf = find_leaf(enumerate_standard(as_input(in), ChannelSpec::from_alpha2(0.8)), {"Phi+"});
        REQUIRE(leaf);
        CHECK(*leaf->transcript.fidelity_achieved == doctest::Approx(ref).epsilon(1e-12));
    }
    SUBCASE("basis input passes undistorted on Phi outcomes") {
        for (double a2 : {0.55, 0.8, 0.99}) {
            const auto branches = enumerate_standard(StateVector::qubit(1, 0, "1"), ChannelSpec::from_alpha2(a2));
            for (const char *label : {"Phi+", "Phi-"}) {
                const auto leaf = find_leaf(branches, {label});
                REQUIRE(leaf);
                CHECK(*leaf->transcript.fidelity_achieved > 1 - 1e-12);
            }
        }
    }
    SUBCASE("every branch agrees with the brute-force conditional state") {
        std::mt19937_64 gen(8);
        const auto ch = ChannelSpec::from_alpha2(0.8);
        const std::array<std::string, 4> table{"I", "Z", "X", "XZ"};
        for (int t = 0; t < 100; ++t) {
            const auto in = oracle::haar_qubit(gen);
            const auto branches = enumerate_standard(as_input(in), ch);
            double total = 0;
            for (int k = 0; k < 4; ++k) {
                const auto raw = oracle::bob_after_bell(in, ch.alpha(), ch.beta(), k);
                const auto &b = branches[k];
                CHECK(b.probability == doctest::Approx(oracle::norm2(raw)).epsilon(1e-12));
                const auto fixed = oracle::normalize(oracle::apply(oracle::pauli(table[k]), raw));
                CHECK(*b.transcript.fidelity_achieved == doctest::Approx(oracle::fid(in, fixed)).epsilon(1e-12));
                total += b.probability;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean fidelity of standard teleportation drops below one off maximal entanglement") {
    Rng rng(3);
    const auto ch = ChannelSpec::from_alpha2(0.8);
    double sum = 0;
    for (int t = 0; t < 1000; ++t) {
        for (const auto &b : enumerate_standard(random_qubit(rng), ch)) sum += b.probability * *b.transcript.fidelity_achieved;
    }
    CHECK(sum / 1000 < 1 - 1e-3);
}

TEST_CASE("telepovm equivalence") {
    const auto eq = verify_telepovm_equivalence(std::numbers::pi / 7);
    CHECK(eq.passed());
    CHECK(eq.max_deviation < 1e-12);
    for (int i = 0; i < 4; ++i) CHECK(eq.recovery_fidelities[i] > 1 - 1e-10);

    const auto zero = verify_telepovm_equivalence(0.0);
    CHECK(zero.passed());
    int populated = 0;
    for (int i = 0; i < 4; ++i) {
        if (!zero.populated[i]) continue;
        ++populated;
        CHECK(zero.recovery_fidelities[i] > 1 - 1e-10);
    }
    CHECK(populated == 4);

    const auto quarter = verify_telepovm_equivalence(std::numbers::pi / 4);
    for (double p : quarter.probabilities) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("telepovm correction table restores the ancilla from the singlet members") {
    const std::array<std::string, 4> table{"XZ", "X", "Z", "I"};
    for (double theta : {0.2, 1.0, 2.2, 5.0}) {
        const double c = std::cos(theta), s = std::sin(theta);
        const std::array<oracle::Vec, 4> members{oracle::Vec{s, -c}, oracle::Vec{s, c}, oracle::Vec{c, -s},
                                                 oracle::Vec{c, s}};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(oracle::fid({c, s}, oracle::apply(oracle::pauli(table[i]), members[i])) > 1 - 1e-12);
            CHECK(telepovm_correction(i).label == table[i]);
        }
    }
}

TEST_CASE("subspace projection probabilities") {
    std::mt19937_64 gen(21);
    for (double a2 : {0.5, 0.6, 0.8, 0.95}) {
        const auto ch = ChannelSpec::from_alpha2(a2);
        for (int t = 0; t < 50; ++t) {
            const auto in = oracle::haar_qubit(gen);
            const auto steps = enumerate_subspace_projection(three_particle_state(as_input(in), ch));
            REQUIRE(steps.size() == 2);
            const double parallel = a2 * std::norm(in[0]) + (1 - a2) * std::norm(in[1]);
            CHECK(steps[0].branch == "parallel");
            CHECK(steps[0].probability == doctest::Approx(parallel).epsilon(1e-12));
            CHECK(steps[1].probability == doctest::Approx(1 - parallel).epsilon(1e-12));
        }
    }
    // Equal split whenever the channel is maximally entangled or |a| = |b|.
    const auto eq = enumerate_subspace_projection(
        three_particle_state(StateVector::qubit(0.6, 0.8, "1"), ChannelSpec::maximally_entangled()));
    CHECK(eq[0].probability == doctest::Approx(0.5));
    const auto flat = enumerate_subspace_projection(
        three_particle_state(StateVector::qubit(r2, Complex(0, r2), "1"), ChannelSpec::from_alpha2(0.9)));
    CHECK(flat[0].probability == doctest::Approx(0.5));

    // Product channel with input |0>: only the parallel branch survives.
    const auto prod = enumerate_subspace_projection(
        three_particle_state(StateVector::qubit(1, 0, "1"), ChannelSpec::from_alpha2(1.0)));
    REQUIRE(prod.size() == 1);
    CHECK(prod[0].branch == "parallel");
    CHECK(prod[0].probability == doctest::Approx(1.0));

    Rng rng(4);
    CHECK(subspace_projection_step(three_particle_state(StateVector::qubit(1, 0, "1"), ChannelSpec::from_alpha2(1.0)),
                                   rng)
              .branch == "parallel");
    CHECK_THROWS_CODE(enumerate_subspace_projection(StateVector::qubit(1, 0)), ErrorCode::DimensionMismatch);
}

TEST_CASE("conclusive correction table from hand-built leaves") {
    std::mt19937_64 gen(13);
    const auto ch = ChannelSpec::from_alpha2(0.8);
    const double a = ch.alpha(), b = ch.beta();
    // E_u is proportional to |v-perp><v-perp| with v = (a, -b); E_v to |u-perp><u-perp|.
    const oracle::Vec v_perp{b, a}, u_perp{-b, a};
    const std::array<int, 2> parallel{0, 3}, antiparallel{2, 1};
    struct Case {
        std::array<int, 2> basis;
        oracle::Vec bra;
        std::string corr;
        std::string branch;
        UsdOutcome o;
    };
    const std::array<Case, 4> cases{Case{parallel, v_perp, "I", "parallel", UsdOutcome::U},
                                    Case{parallel, u_perp, "Z", "parallel", UsdOutcome::V},
                                    Case{antiparallel, v_perp, "X", "antiparallel", UsdOutcome::U},
                                    Case{antiparallel, u_perp, "XZ", "antiparallel", UsdOutcome::V}};
    for (int t = 0; t < 100; ++t) {
        const auto in = oracle::haar_qubit(gen);
        for (const auto &c : cases) {
            const auto bob = bob_after_factor_bra(in, a, b, c.basis, c.bra);
            CHECK(oracle::fid(in, oracle::normalize(oracle::apply(oracle::pauli(c.corr), bob))) > 1 - 1e-12);
        }
    }
    for (const auto &c : cases) CHECK(conclusive_correction(c.branch, c.o).label == c.corr);
    const std::array<std::string, 4> table{"I", "Z", "X", "XZ"};
    CHECK(derive_conclusive_correction_table(ch, 9, 50) == table);
}

TEST_CASE("conclusive teleportation, exact enumeration") {
    Rng rng(31);
    for (double a2 : {0.5, 0.6, 0.75, 0.8, 0.9, 0.99}) {
        const auto ch = ChannelSpec::from_alpha2(a2);
        const double expected = 1 - (a2 - (1 - a2));
        for (int t = 0; t < 100; ++t) {
            const auto in = random_qubit(rng);
            const auto branches = enumerate_conclusive(in, ch);
            double total = 0, success = 0;
            for (const auto &b : branches) {
                total += b.probability;
                CHECK(b.transcript.classical_bits_sent == 3);
                if (b.transcript.conclusive) {
                    success += b.probability;
                    CHECK(*b.transcript.fidelity_achieved > 1 - 1e-9);
                    CHECK(b.transcript.step_outcomes[1] != "inconclusive");
                } else {
                    CHECK_FALSE(b.transcript.fidelity_achieved.has_value());
                }
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(success == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("conclusive teleportation reduces to standard teleportation on a maximally entangled channel") {
    Rng rng(12);
    const auto ch = ChannelSpec::maximally_entangled();
    for (int t = 0; t < 500; ++t) {
        const auto tr = conclusive_teleport(random_qubit(rng), ch, rng);
        CHECK(tr.conclusive);
        CHECK(*tr.fidelity_achieved > 1 - 1e-9);
    }
}

TEST_CASE("conclusive teleportation Monte Carlo rate") {
    const auto ch = ChannelSpec::from_alpha2(0.8);
    const int n = 100000;
    int success = 0;
    double worst = 1.0;
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::for_trial(42, i);
        const auto tr = conclusive_teleport(random_qubit(rng), ch, rng);
        if (tr.conclusive) {
            ++success;
            worst = std::min(worst, *tr.fidelity_achieved);
        }
    }
    CHECK(std::abs(success / double(n) - 0.4) < 4 * std::sqrt(0.4 * 0.6 / n));
    CHECK(worst > 1 - 1e-9);
}

TEST_CASE("product channel never succeeds conclusively") {
    Rng rng(1);
    const auto ch = ChannelSpec::from_alpha2(1.0);
    for (int t = 0; t < 50; ++t) {
        const auto in = random_qubit(rng);
        for (const auto &b : enumerate_conclusive(in, ch)) CHECK_FALSE(b.transcript.conclusive);
        for (const auto &b : enumerate_one_bit(in, ch, OneBitMode::ConclusiveSingletOnly))
            CHECK_FALSE(b.transcript.conclusive);
        CHECK_FALSE(one_bit_teleport(in, ch, rng, OneBitMode::ConclusiveSingletOnly).conclusive);
    }
}

TEST_CASE("one-bit variants") {
    Rng rng(8);
    SUBCASE("singlet-only on a maximally entangled channel") {
        const auto ch = ChannelSpec::maximally_entangled();
        for (int t = 0; t < 100; ++t) {
            const auto branches = enumerate_one_bit(random_qubit(rng), ch, OneBitMode::SingletOnly);
            double success = 0;
            for (const auto &b : branches) {
                CHECK(b.transcript.classical_bits_sent == 1);
                if (!b.transcript.conclusive) continue;
                CHECK(b.transcript.step_outcomes[0] == "Psi-");
                CHECK(*b.transcript.fidelity_achieved > 1 - 1e-10);
                success += b.probability;
            }
            CHECK(success == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
    SUBCASE("conclusive singlet-only at alpha^2 = 0.8") {
        const auto ch = ChannelSpec::from_alpha2(0.8);
        for (int t = 0; t < 100; ++t) {
            double success = 0;
            for (const auto &b : enumerate_one_bit(random_qubit(rng), ch, OneBitMode::ConclusiveSingletOnly)) {
                if (!b.transcript.conclusive) continue;
                CHECK(b.transcript.step_outcomes == std::vector<std::string>{"antiparallel", "v"});
                CHECK(*b.transcript.fidelity_achieved > 1 - 1e-9);
                success += b.probability;
            }
            CHECK(success == doctest::Approx(0.1).epsilon(1e-12));
        }
    }
}

TEST_CASE("no signaling: Bob's average state ignores the input") {
    Rng rng(55);
    for (double a2 : {0.5, 0.7, 0.9}) {
        const auto ch = ChannelSpec::from_alpha2(a2);
        const Operator ref{{a2, 0}, {0, 1 - a2}};
        for (int t = 0; t < 100; ++t) {
            const auto in = random_qubit(rng);
            CHECK(max_abs_diff(bob_average(enumerate_standard(in, ch)), ref) < 1e-10);
            CHECK(max_abs_diff(bob_average(enumerate_conclusive(in, ch)), ref) < 1e-10);
            CHECK(max_abs_diff(bob_average(enumerate_one_bit(in, ch, OneBitMode::SingletOnly)), ref) < 1e-10);
            CHECK(max_abs_diff(bob_average(enumerate_one_bit(in, ch, OneBitMode::ConclusiveSingletOnly)), ref) <
                  1e-10);
        }
    }
}

TEST_CASE("sampling agrees with enumeration") {
    const auto ch = ChannelSpec::from_alpha2(0.75);
    const auto in = StateVector::qubit(0.6, Complex(0, 0.8), "1");
    std::map<std::vector<std::string>, double> exact;
    for (const auto &b : enumerate_conclusive(in, ch)) exact[b.transcript.step_outcomes] += b.probability;
    std::map<std::vector<std::string>, int> counts;
    const int n = 100000;
    Rng rng(6);
    for (int i = 0; i < n; ++i) ++counts[conclusive_teleport(in, ch, rng).step_outcomes];
    for (const auto &[steps, count] : counts) {
        REQUIRE(exact.count(steps));
        const double p = exact[steps];
        CHECK(std::abs(count / double(n) - p) < 4 * std::sqrt(p * (1 - p) / n) + 1e-12);
    }
}
