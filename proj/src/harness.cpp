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

#include "telepovm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "telepovm/discrimination.hpp"
#include "telepovm/ensembles.hpp"
#include "telepovm/measure.hpp"
#include "telepovm/protocols.hpp"
#include "telepovm/random.hpp"

namespace telepovm {

using json = nlohmann::ordered_json;

namespace {

constexpr double kSuccessFidelityTol = 1e-9;
constexpr double kSigmas = 4.0;
constexpr int kThetaGrid = 100;

const std::vector<std::string> kTeleportProtocols = {"standard", "one-bit-singlet", "conclusive",
                                                     "one-bit-conclusive"};
const std::vector<std::string> kDemos = {"b92", "epr-z", "epr-x", "telepovm"};

bool contains(const std::vector<std::string> &list, const std::string &s) {
    return std::find(list.begin(), list.end(), s) != list.end();
}

bool is_conclusive_protocol(const std::string &p) {
    return p == "conclusive" || p == "one-bit-conclusive";
}

[[noreturn]] void config_error(const std::string &field, const std::string &msg) {
    throw Error(ErrorCode::InvalidConfig, field + ": " + msg);
}

const char *to_string(InputMode m) {
    switch (m) {
        case InputMode::Random:
            return "random";
        case InputMode::Fixed:
            return "fixed";
        case InputMode::EnumerateBranches:
            return "enumerate-branches";
    }
    return "?";
}

std::string fmt_complex(Complex z) {
    std::ostringstream out;
    out << std::setprecision(17) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag())
        << "I";
    return out.str();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json state_json(const StateVector &psi) {
    json amps = json::array();
    for (Complex z : psi.amplitudes()) {
        amps.push_back(complex_json(z));
    }
    return amps;
}

json operator_json(const Operator &op) {
    json rows = json::array();
    for (std::size_t r = 0; r < op.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < op.dim(); ++c) {
            row.push_back(complex_json(op(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json ensemble_json(const RhoEnsemble &e) {
    json members = json::array();
    for (const auto &m : e.members()) {
        json entry = {{"label", m.label}, {"probability", m.probability}};
        if (m.is_pure()) {
            entry["state"] = state_json(m.pure_state());
        } else if (!m.is_null()) {
            entry["density"] = operator_json(m.density().op());
        } else {
            entry["state"] = nullptr;
        }
        members.push_back(std::move(entry));
    }
    return {{"members", members}, {"density", operator_json(ensemble_density(e).op())}};
}

CheckLine check_at_most(std::string name, double value, double tol, std::string detail = {}) {
    return {std::move(name), value <= tol, value, 0.0, tol, false, std::move(detail)};
}

CheckLine check_at_least(std::string name, double value, double floor, std::string detail = {}) {
    // reference carries the floor; tolerance left at zero.
    return {std::move(name), value >= floor, value, floor, 0.0, false, std::move(detail)};
}

// |observed - expected| <= 4 sigma, sigma from the expected rate. A rate of
// exactly 0 or 1 has zero spread and must be hit exactly.
CheckLine check_rate(std::string name, double observed, double expected, std::uint64_t n) {
    const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    const double tol = kSigmas * sigma + 1e-12;
    CheckLine line{std::move(name), std::abs(observed - expected) <= tol, observed, expected, tol, true,
                   "4 binomial sigma"};
    return line;
}

void parallel_for(std::uint64_t n, unsigned threads, const std::function<void(std::uint64_t)> &fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n, 1)));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::uint64_t lo = w * chunk;
                const std::uint64_t hi = std::min(n, lo + chunk);
                for (std::uint64_t i = lo; i < hi; ++i) {
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

// --- Teleportation experiments ---------------------------------------------

using Sampler = std::function<Transcript(const StateVector &, const ChannelSpec &, Rng &)>;
using Enumerator = std::function<std::vector<Branch>(const StateVector &, const ChannelSpec &)>;

std::pair<Sampler, Enumerator> protocol_fns(const std::string &name) {
    if (name == "standard") {
        return {standard_teleport, enumerate_standard};
    }
    if (name == "conclusive") {
        return {conclusive_teleport, enumerate_conclusive};
    }
    const OneBitMode mode =
        name == "one-bit-singlet" ? OneBitMode::SingletOnly : OneBitMode::ConclusiveSingletOnly;
    return {[mode](const StateVector &in, const ChannelSpec &ch, Rng &rng) {
                return one_bit_teleport(in, ch, rng, mode);
            },
            [mode](const StateVector &in, const ChannelSpec &ch) {
                return enumerate_one_bit(in, ch, mode);
            }};
}

// Exact success probability of a protocol for one input.
double success_probability(const std::string &protocol, const ChannelSpec &ch, const StateVector &in) {
    const double a2 = ch.alpha() * ch.alpha();
    const double b2 = ch.beta() * ch.beta();
    if (protocol == "standard") return 1.0;
    if (protocol == "conclusive") return 1.0 - (a2 - b2);
    if (protocol == "one-bit-conclusive") return (1.0 - (a2 - b2)) / 4.0;
    // Psi- outcome weight: |alpha b|^2/2 + |beta a|^2/2.
    return 0.5 * (a2 * std::norm(in[1]) + b2 * std::norm(in[0]));
}

StateVector input_for(const RunConfig &config, Rng &rng) {
    if (config.input_mode != InputMode::Random && config.fixed_input) {
        return StateVector::qubit(config.fixed_input->first, config.fixed_input->second, "1");
    }
    return random_qubit(rng, "1");
}

Report run_teleport(const RunConfig &config) {
    const ChannelSpec channel = ChannelSpec::from_alpha2(config.alpha2);
    const auto [sample, enumerate] = protocol_fns(config.protocol);
    const bool conclusive_kind = is_conclusive_protocol(config.protocol);
    const std::uint64_t n = config.trials;

    Report report;
    report.config = config;
    Aggregate agg;
    agg.protocol = config.protocol;
    agg.trials = n;

    // Schmidt-ordered, taken from the config rather than squared back.
    const double a2 = std::max(config.alpha2, 1.0 - config.alpha2);
    const double b2 = 1.0 - a2;
    report.theory.emplace_back("alpha2", a2);
    report.theory.emplace_back("beta2", b2);
    if (conclusive_kind) {
        report.theory.emplace_back("conclusive_probability", 1.0 - (a2 - b2));
    }
    if (config.protocol == "standard" && config.input_mode != InputMode::Fixed && !config.fixed_input) {
        // Haar average of the post-correction fidelity.
        report.theory.emplace_back("mean_fidelity", 2.0 / 3.0 * (1.0 + channel.alpha() * channel.beta()));
    }

    if (config.input_mode == InputMode::EnumerateBranches) {
        agg.exact = true;
        struct PerInput {
            double success = 0.0, fid_weight = 0.0, fid_sum = 0.0, succ_fid_sum = 0.0,
                   min_succ_fid = 1.0, total_p = 0.0, theory = 0.0;
            std::uint64_t wrong = 0;
            std::vector<TrialRecord> leaves;
        };
        std::vector<PerInput> per(n);
        parallel_for(n, config.threads, [&](std::uint64_t i) {
            Rng rng = Rng::for_trial(config.seed, i);
            const auto input = input_for(config, rng);
            PerInput &r = per[i];
            r.theory = success_probability(config.protocol, channel, input);
            for (const auto &b : enumerate(input, channel)) {
                const auto &t = b.transcript;
                r.total_p += b.probability;
                if (t.fidelity_achieved) {
                    r.fid_weight += b.probability;
                    r.fid_sum += b.probability * *t.fidelity_achieved;
                }
                if (t.conclusive) {
                    r.success += b.probability;
                    r.succ_fid_sum += b.probability * *t.fidelity_achieved;
                    r.min_succ_fid = std::min(r.min_succ_fid, *t.fidelity_achieved);
                    if (conclusive_kind && *t.fidelity_achieved < 1.0 - kSuccessFidelityTol) {
                        ++r.wrong;
                    }
                }
                r.leaves.push_back({i, t.step_outcomes, t.conclusive, t.fidelity_achieved,
                                    t.classical_bits_sent});
            }
        });
        double success = 0.0, fid_w = 0.0, fid = 0.0, succ_fid = 0.0, theory = 0.0, worst_total = 0.0;
        for (auto &r : per) {
            success += r.success;
            fid_w += r.fid_weight;
            fid += r.fid_sum;
            succ_fid += r.succ_fid_sum;
            theory += r.theory;
            worst_total = std::max(worst_total, std::abs(r.total_p - 1.0));
            agg.min_success_fidelity = std::min(agg.min_success_fidelity, r.min_succ_fid);
            agg.wrong_identifications += r.wrong;
            for (auto &leaf : r.leaves) {
                agg.classical_bits_total += static_cast<std::uint64_t>(leaf.bits_sent);
                report.trials.push_back(std::move(leaf));
            }
        }
        const double nd = static_cast<double>(n);
        agg.conclusive_count = success;
        agg.success_rate = success / nd;
        agg.success_rate_stderr = 0.0;
        agg.mean_fidelity = fid_w > 0 ? fid / fid_w : std::nan("");
        agg.mean_fidelity_success = success > 0 ? succ_fid / success : std::nan("");
        report.theory.emplace_back("expected_success_rate", theory / nd);
        report.checks.push_back(check_at_most("probability-bookkeeping", worst_total, 1e-10,
                                              "max |sum of leaf probabilities - 1|"));
        report.checks.push_back(check_at_most("success-rate-exact",
                                              std::abs(agg.success_rate - theory / nd), 1e-10));
    } else {
        std::vector<TrialRecord> records(n);
        parallel_for(n, config.threads, [&](std::uint64_t i) {
            Rng rng = Rng::for_trial(config.seed, i);
            const auto input = input_for(config, rng);
            const auto t = sample(input, channel, rng);
            records[i] = {i, t.step_outcomes, t.conclusive, t.fidelity_achieved, t.classical_bits_sent};
        });
        double fid_sum = 0.0, succ_fid_sum = 0.0;
        std::uint64_t fid_count = 0, successes = 0;
        for (const auto &r : records) {
            agg.classical_bits_total += static_cast<std::uint64_t>(r.bits_sent);
            if (r.fidelity) {
                fid_sum += *r.fidelity;
                ++fid_count;
            }
            if (r.conclusive) {
                ++successes;
                succ_fid_sum += *r.fidelity;
                agg.min_success_fidelity = std::min(agg.min_success_fidelity, *r.fidelity);
                if (conclusive_kind && *r.fidelity < 1.0 - kSuccessFidelityTol) {
                    ++agg.wrong_identifications;
                }
            }
        }
        const double nd = static_cast<double>(n);
        agg.conclusive_count = static_cast<double>(successes);
        agg.success_rate = agg.conclusive_count / nd;
        agg.success_rate_stderr = std::sqrt(agg.success_rate * (1.0 - agg.success_rate) / nd);
        agg.mean_fidelity = fid_count ? fid_sum / static_cast<double>(fid_count) : std::nan("");
        agg.mean_fidelity_success = successes ? succ_fid_sum / agg.conclusive_count : std::nan("");

        double expected;
        if (config.protocol == "one-bit-singlet" && config.input_mode == InputMode::Random) {
            expected = 0.25;  // Haar average of (alpha^2 |b|^2 + beta^2 |a|^2) / 2
        } else {
            const auto probe = config.fixed_input
                                   ? StateVector::qubit(config.fixed_input->first,
                                                        config.fixed_input->second, "1")
                                   : StateVector::qubit(1.0, 0.0, "1");
            expected = success_probability(config.protocol, channel, probe);
        }
        report.theory.emplace_back("expected_success_rate", expected);
        report.checks.push_back(check_rate("success-rate", agg.success_rate, expected, n));
        report.trials = std::move(records);
    }

    const bool exact_on_success = conclusive_kind || channel.is_maximally_entangled();
    if (exact_on_success && agg.conclusive_count > 0) {
        report.checks.push_back(check_at_least("success-fidelity", agg.min_success_fidelity,
                                               1.0 - kSuccessFidelityTol,
                                               "minimum fidelity over successful trials"));
    }
    if (conclusive_kind) {
        report.checks.push_back(check_at_most("zero-misidentification",
                                              static_cast<double>(agg.wrong_identifications), 0.0));
    }
    report.aggregates.push_back(agg);
    return report;
}

// --- Telepovm equivalence sweep --------------------------------------------

std::vector<double> theta_grid(const std::optional<double> &theta) {
    if (theta) {
        return {*theta};
    }
    std::vector<double> grid;
    for (int k = 0; k < kThetaGrid; ++k) {
        grid.push_back(2.0 * std::numbers::pi * k / kThetaGrid);
    }
    return grid;
}

void telepovm_sweep(Report &report, const std::vector<double> &thetas, bool inject_fault) {
    double worst_min_eig = 0.0, worst_completeness = 0.0, worst_dev = 0.0, worst_a1 = 0.0,
           worst_prob = 0.0, worst_listed = 1.0, worst_recovery = 1.0;
    json sweep = json::array();
    for (double theta : thetas) {
        Povm povm = telepovm_elements(theta);
        if (inject_fault) {
            auto elements = povm.elements();
            elements[0] *= 1.01;
            povm = Povm(std::move(elements), povm.labels());
        }
        const auto validation = validate_povm(povm);
        for (double ev : validation.min_eigenvalues) {
            worst_min_eig = std::min(worst_min_eig, ev);
        }
        worst_completeness = std::max(worst_completeness, validation.completeness_residual);

        const auto eq = verify_telepovm_equivalence(theta);
        worst_dev = std::max(worst_dev, eq.max_deviation);
        worst_a1 = std::max(worst_a1, eq.a1_00_residual);
        for (std::size_t i = 0; i < 4; ++i) {
            worst_prob = std::max(worst_prob, std::abs(eq.probabilities[i] - 0.25));
            if (eq.populated[i]) {
                worst_listed = std::min(worst_listed, eq.listed_state_fidelities[i]);
                worst_recovery = std::min(worst_recovery, eq.recovery_fidelities[i]);
            }
        }
        sweep.push_back({{"theta", theta},
                         {"max_deviation", eq.max_deviation},
                         {"a1_00_residual", eq.a1_00_residual},
                         {"completeness_residual", validation.completeness_residual},
                         {"probabilities", eq.probabilities},
                         {"recovery_fidelities", eq.recovery_fidelities}});
    }
    report.checks.push_back(check_at_least("povm-psd", worst_min_eig, -TOL_PSD,
                                           "minimum eigenvalue over the theta grid"));
    report.checks.push_back(check_at_most("povm-completeness", worst_completeness, 1e-12,
                                          "max |sum A_i - I|"));
    report.checks.push_back(check_at_most("induced-povm-equals-closed-form", worst_dev, 1e-12));
    report.checks.push_back(check_at_most("induced-a1-00", worst_a1, 1e-12, "|(A1)_00 - c^2/2|"));
    report.checks.push_back(check_at_most("singlet-outcome-probabilities", worst_prob, 1e-12));
    report.checks.push_back(check_at_least("singlet-conditional-states", worst_listed, 1.0 - 1e-10));
    report.checks.push_back(check_at_least("telepovm-recovery", worst_recovery, 1.0 - 1e-10));
    report.details_json = json{{"theta_sweep", sweep}}.dump();
}

Report run_telepovm(const RunConfig &config) {
    Report report;
    report.config = config;
    telepovm_sweep(report, theta_grid(config.theta), false);
    return report;
}

// --- Ensemble demos ------------------------------------------------------------

Report run_ensemble_demo(const RunConfig &config) {
    Report report;
    report.config = config;
    json details;
    const std::string &demo = config.demo;
    if (demo == "b92") {
        const double alpha = std::sqrt(config.alpha2);
        const double beta = std::sqrt(1.0 - config.alpha2);
        const auto e = b92_demo(alpha, beta);
        const double r = std::numbers::sqrt2 / 2.0;
        const std::array<StateVector, 2> expected = {
            StateVector::qubit((alpha + beta) * r, (alpha - beta) * r, "B"),
            StateVector::qubit((alpha - beta) * r, (alpha + beta) * r, "B")};
        double worst_fid = 1.0, worst_weight = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            worst_fid = std::min(worst_fid, fidelity(expected[i], e[i].pure_state()));
            worst_weight = std::max(worst_weight, std::abs(e[i].probability - 0.5));
        }
        report.checks.push_back(check_at_least("b92-members", worst_fid, 1.0 - 1e-10));
        report.checks.push_back(check_at_most("b92-equal-weights", worst_weight, 1e-12));
        report.theory.emplace_back("member_overlap", std::abs(alpha * alpha - beta * beta));
        details = ensemble_json(e);
    } else if (demo == "epr-z" || demo == "epr-x") {
        const auto e = epr_basis_choice_demo(demo == "epr-z" ? "z" : "x");
        const double dev =
            max_abs_diff(ensemble_density(e).op(), 0.5 * Operator::identity(2));
        report.checks.push_back(check_at_most("maximally-mixed-density", dev, 1e-12));
        details = ensemble_json(e);
    } else {
        const double theta = config.theta.value_or(std::numbers::pi / 4.0);
        const auto e = generate_at_distance(singlet(), telepovm_elements(theta));
        const double c = std::cos(theta), s = std::sin(theta);
        const std::array<StateVector, 4> listed = {
            StateVector::qubit(s, -c, "B"), StateVector::qubit(s, c, "B"),
            StateVector::qubit(c, -s, "B"), StateVector::qubit(c, s, "B")};
        double worst_fid = 1.0, worst_p = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            worst_p = std::max(worst_p, std::abs(e[i].probability - 0.25));
            worst_fid = std::min(worst_fid, fidelity(listed[i], e[i].pure_state()));
        }
        report.checks.push_back(check_at_most("telepovm-probabilities", worst_p, 1e-12));
        report.checks.push_back(check_at_least("telepovm-members", worst_fid, 1.0 - 1e-10));
        details = ensemble_json(e);
    }
    details["demo"] = demo;
    report.details_json = details.dump();
    return report;
}

// --- Verification suite ----------------------------------------------------

void suite_hjw(Report &report, std::uint64_t seed) {
    double worst = 0.0, worst_prob = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Rng rng = Rng::for_trial(seed ^ 0x484A57ULL, i);
        const auto shared = random_state(rng, {2, 2}, {"A", "B"});
        const std::size_t outcomes = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
        const auto povm = random_povm(rng, 2, outcomes);
        const auto e = generate_at_distance(shared, povm);
        const auto bob = partial_trace(DensityMatrix::pure(shared), {"B"});
        worst = std::max(worst, max_abs_diff(ensemble_density(e).op(), bob.op()));
        const auto probs = outcome_distribution(shared, povm, {"A"});
        for (std::size_t k = 0; k < probs.size(); ++k) {
            worst_prob = std::max(worst_prob, std::abs(probs[k] - e[k].probability));
        }
    }
    report.checks.push_back(check_at_most("hjw-consistency", worst, 1e-10,
                                          "1000 random (state, POVM) pairs"));
    report.checks.push_back(check_at_most("hjw-probabilities", worst_prob, 1e-12));
}

void suite_usd(Report &report, std::uint64_t seed) {
    constexpr std::uint64_t kSamples = 100000;
    for (double s : {0.0, 0.3, 0.6, 0.9}) {
        // u = (a, b), v = (a, -b) with overlap a^2 - b^2 = s.
        const double a = std::sqrt((1.0 + s) / 2.0);
        const double b = std::sqrt((1.0 - s) / 2.0);
        const auto setup = usd_povm(StateVector::qubit(a, b), StateVector::qubit(a, -b));
        std::uint64_t wrong = 0, conclusive = 0;
        for (int side = 0; side < 2; ++side) {
            const StateVector &input = side == 0 ? setup.u : setup.v;
            const UsdOutcome truth = side == 0 ? UsdOutcome::U : UsdOutcome::V;
            Rng rng(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(s * 1000) + 7 * side));
            const auto probs = outcome_distribution(input, setup.povm);
            for (std::uint64_t i = 0; i < kSamples; ++i) {
                const auto o = static_cast<UsdOutcome>(sample_index(probs, rng));
                if (o == UsdOutcome::Inconclusive) {
                    continue;
                }
                ++conclusive;
                if (o != truth) {
                    ++wrong;
                }
            }
        }
        std::ostringstream name;
        name << "usd-s=" << s;
        auto zero = check_at_most(name.str() + "-misidentifications", static_cast<double>(wrong), 0.0);
        zero.monte_carlo = true;
        report.checks.push_back(zero);
        report.checks.push_back(check_rate(name.str() + "-conclusive-rate",
                                           static_cast<double>(conclusive) / (2.0 * kSamples), 1.0 - s,
                                           2 * kSamples));
    }
}

void suite_corrections(Report &report, std::uint64_t seed) {
    const auto bell = derive_bell_correction_table(seed, 100);
    const std::array<std::string, 4> frozen = {"I", "Z", "X", "XZ"};
    report.checks.push_back({"bell-correction-table", bell == frozen, bell == frozen ? 0.0 : 1.0,
                             0.0, 0.0, false, bell[0] + "," + bell[1] + "," + bell[2] + "," + bell[3]});
    const auto concl = derive_conclusive_correction_table(ChannelSpec::from_alpha2(0.8), seed, 100);
    report.checks.push_back({"conclusive-correction-table", concl == frozen,
                             concl == frozen ? 0.0 : 1.0, 0.0, 0.0, false,
                             concl[0] + "," + concl[1] + "," + concl[2] + "," + concl[3]});

    double worst = 1.0;
    const auto channel = ChannelSpec::maximally_entangled();
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Rng rng = Rng::for_trial(seed ^ 0xC0AAEC7ULL, i);
        const auto input = random_qubit(rng);
        for (const auto &b : enumerate_standard(input, channel)) {
            worst = std::min(worst, *b.transcript.fidelity_achieved);
        }
    }
    report.checks.push_back(check_at_least("correction-universality", worst, 1.0 - 1e-10,
                                           "1000 random inputs, every Bell outcome"));
}

void suite_no_signaling(Report &report, std::uint64_t seed) {
    double worst = 0.0, worst_total = 0.0;
    for (double a2 : {0.5, 0.8}) {
        const auto channel = ChannelSpec::from_alpha2(a2);
        const auto reference = channel.bob_reduced().op();
        for (std::uint64_t i = 0; i < 100; ++i) {
            Rng rng = Rng::for_trial(seed ^ 0x5167ULL, i);
            const auto input = random_qubit(rng);
            for (const auto &branches :
                 {enumerate_standard(input, channel), enumerate_conclusive(input, channel),
                  enumerate_one_bit(input, channel, OneBitMode::SingletOnly),
                  enumerate_one_bit(input, channel, OneBitMode::ConclusiveSingletOnly)}) {
                worst = std::max(worst, max_abs_diff(bob_average(branches), reference));
                double total = 0.0;
                for (const auto &b : branches) {
                    total += b.probability;
                }
                worst_total = std::max(worst_total, std::abs(total - 1.0));
            }
        }
    }
    report.checks.push_back(check_at_most("no-signaling", worst, 1e-10,
                                          "Bob's outcome-averaged state vs channel marginal"));
    report.checks.push_back(check_at_most("probability-bookkeeping", worst_total, 1e-10));
}

void suite_b92(Report &report, std::uint64_t seed) {
    double worst = 1.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng = Rng::for_trial(seed ^ 0xB92ULL, i);
        const double phi = rng.uniform() * 2.0 * std::numbers::pi;
        const double alpha = std::cos(phi), beta = std::sin(phi);
        const auto e = b92_demo(alpha, beta);
        const double r = std::numbers::sqrt2 / 2.0;
        const StateVector first = StateVector::qubit((alpha + beta) * r, (alpha - beta) * r, "B");
        const StateVector second = StateVector::qubit((alpha - beta) * r, (alpha + beta) * r, "B");
        worst = std::min({worst, fidelity(first, e[0].pure_state()),
                          fidelity(second, e[1].pure_state())});
    }
    report.checks.push_back(check_at_least("b92-ensemble", worst, 1.0 - 1e-10));
}

}  // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
    if (!contains(kTeleportProtocols, protocol) && protocol != "verify-telepovm" &&
        protocol != "ensemble-demo") {
        config_error("protocol", "unknown protocol '" + protocol + "'");
    }
    if (!std::isfinite(alpha2) || !(alpha2 > 0.0) || alpha2 > 1.0) {
        config_error("alpha2", "must lie in (0, 1]");
    }
    if (theta && !std::isfinite(*theta)) {
        config_error("theta", "must be finite");
    }
    if (trials < 1) {
        config_error("trials", "must be at least 1");
    }
    if (input_mode == InputMode::Fixed && !fixed_input) {
        config_error("input", "fixed input mode needs an input state");
    }
    if (fixed_input) {
        const double n2 = std::norm(fixed_input->first) + std::norm(fixed_input->second);
        if (std::abs(n2 - 1.0) > TOL_NORM) {
            config_error("input", "|a|^2 + |b|^2 must equal 1");
        }
    }
    if (protocol == "ensemble-demo" && !contains(kDemos, demo)) {
        config_error("demo", "unknown demo '" + demo + "'");
    }
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine &c) { return c.passed; });
}

std::string Report::to_json(bool with_timestamp) const {
    json cfg = {{"protocol", config.protocol},
                {"alpha2", config.alpha2},
                {"theta", config.theta ? json(*config.theta) : json(nullptr)},
                {"trials", config.trials},
                {"seed", config.seed},
                {"input_mode", to_string(config.input_mode)},
                {"input", config.fixed_input ? json::array({fmt_complex(config.fixed_input->first),
                                                            fmt_complex(config.fixed_input->second)})
                                             : json(nullptr)},
                {"output_format", config.output_format == OutputFormat::Json ? "json" : "csv"},
                {"demo", config.demo}};
    json doc;
    doc["schema"] = kReportSchema;
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::ostringstream ts;
        ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        doc["timestamp"] = ts.str();
    }
    doc["config"] = cfg;
    doc["seed"] = config.seed;
    json aggs = json::array();
    for (const auto &a : aggregates) {
        aggs.push_back({{"protocol", a.protocol},
                        {"trials", a.trials},
                        {"exact", a.exact},
                        {"conclusive_count", a.conclusive_count},
                        {"success_rate", a.success_rate},
                        {"success_rate_stderr", a.success_rate_stderr},
                        {"mean_fidelity", a.mean_fidelity},
                        {"mean_fidelity_success", a.mean_fidelity_success},
                        {"min_success_fidelity", a.min_success_fidelity},
                        {"wrong_identifications", a.wrong_identifications},
                        {"classical_bits_total", a.classical_bits_total}});
    }
    doc["aggregates"] = aggs;
    json th = json::object();
    for (const auto &[k, v] : theory) {
        th[k] = v;
    }
    doc["theory"] = th;
    json checks_json = json::array();
    for (const auto &c : checks) {
        checks_json.push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"reference", c.reference},
                               {"tolerance", c.tolerance},
                               {"monte_carlo", c.monte_carlo},
                               {"detail", c.detail}});
    }
    doc["checks"] = checks_json;
    doc["passed"] = passed();
    doc["details"] = json::parse(details_json);
    return doc.dump(2);
}

std::string Report::to_csv() const {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "trial,steps,conclusive,fidelity,bits_sent\n";
    for (const auto &t : trials) {
        out << t.trial << ',';
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            out << (i ? "|" : "") << t.steps[i];
        }
        out << ',' << (t.conclusive ? 1 : 0) << ',';
        if (t.fidelity) {
            out << *t.fidelity;
        }
        out << ',' << t.bits_sent << '\n';
    }
    return out.str();
}

std::string Report::summary() const {
    std::ostringstream out;
    out << std::setprecision(15);
    out << "protocol=" << config.protocol << " seed=" << config.seed << '\n';
    for (const auto &a : aggregates) {
        out << "  trials=" << a.trials << (a.exact ? " (exact enumeration)" : "")
            << " success_rate=" << a.success_rate << " +- " << a.success_rate_stderr
            << " mean_fidelity=" << a.mean_fidelity
            << " success_fidelity=" << a.mean_fidelity_success
            << " min_success_fidelity=" << a.min_success_fidelity << '\n';
    }
    for (const auto &[k, v] : theory) {
        out << "  theory " << k << " = " << v << '\n';
    }
    for (const auto &c : checks) {
        out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " value=" << c.value;
        if (c.reference != 0.0) {
            out << " reference=" << c.reference;
        }
        if (c.tolerance != 0.0) {
            out << " tol=" << c.tolerance;
        }
        if (c.monte_carlo) {
            out << " (monte carlo)";
        }
        if (!c.detail.empty()) {
            out << "  # " << c.detail;
        }
        out << '\n';
    }
    out << (passed() ? "all checks passed" : "CHECKS FAILED") << '\n';
    return out.str();
}

std::string resolve_output_path(const std::string &path) {
    const std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char *dir = std::getenv("TELEPOVM_OUTPUT_DIR"); dir && *dir) {
            return (std::filesystem::path(dir) / p).string();
        }
    }
    return path;
}

void write_report(const Report &report, const std::string &path, OutputFormat format) {
    const std::string resolved = resolve_output_path(path);
    std::ofstream out(resolved, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot open '" + resolved + "' for writing");
    }
    out << (format == OutputFormat::Json ? report.to_json() + "\n" : report.to_csv());
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing '" + resolved + "'");
    }
}

Report run_experiment(const RunConfig &config) {
    config.validate();
    Report report;
    if (contains(kTeleportProtocols, config.protocol)) {
        report = run_teleport(config);
    } else if (config.protocol == "verify-telepovm") {
        report = run_telepovm(config);
    } else {
        report = run_ensemble_demo(config);
    }
    if (!config.output_path.empty()) {
        write_report(report, config.output_path, config.output_format);
    }
    return report;
}

Report run_verification_suite(const SuiteOptions &options) {
    Report report;
    report.config.protocol = "verify";
    report.config.seed = options.seed;
    telepovm_sweep(report, theta_grid(std::nullopt), options.inject_fault);
    suite_hjw(report, options.seed);
    suite_b92(report, options.seed);
    suite_usd(report, options.seed);
    suite_corrections(report, options.seed);
    suite_no_signaling(report, options.seed);
    return report;
}

Complex parse_complex(const std::string &raw) {
    std::string s;
    for (char ch : raw) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            s.push_back(ch);
        }
    }
    if (s.empty()) {
        config_error("input", "empty complex component");
    }
    auto number = [&](const std::string &t, double unit_default) -> double {
        if (t.empty() || t == "+") return unit_default;
        if (t == "-") return -unit_default;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception &) {
            config_error("input", "cannot parse '" + raw + "'");
        }
        if (used != t.size() || !std::isfinite(v)) {
            config_error("input", "cannot parse '" + raw + "'");
        }
        return v;
    };
    const char last = s.back();
    if (last != 'I' && last != 'i') {
        return {number(s, 0.0), 0.0};
    }
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        return {0.0, number(body, 1.0)};
    }
    return {number(body.substr(0, split), 0.0), number(body.substr(split), 1.0)};
}

std::pair<Complex, Complex> parse_input_pair(const std::string &text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
        config_error("input", "expected two comma-separated components 'a,b'");
    }
    return {parse_complex(text.substr(0, comma)), parse_complex(text.substr(comma + 1))};
}

}  // namespace telepovm
