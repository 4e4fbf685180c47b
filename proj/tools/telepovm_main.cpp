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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "telepovm/error.hpp"
#include "telepovm/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

struct Flags {
    double alpha2 = 0.5;
    double theta = 0.0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string input;
    bool enumerate = false;
    std::string format = "json";
    std::string out;
    unsigned threads = 1;
    bool one_bit = false;
    bool inject_fault = false;
    std::string demo = "b92";
};

void add_common(CLI::App *cmd, Flags &f, bool sampling) {
    cmd->add_option("--alpha2", f.alpha2, "Channel alpha^2 in (0, 1]; Schmidt-ordered");
    cmd->add_option("--seed", f.seed, "64-bit RNG seed");
    cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", f.out, "Report path ('-' prints the report instead of the summary)");
    if (sampling) {
        cmd->add_option("--trials", f.trials, "Number of trials")->check(CLI::PositiveNumber);
        cmd->add_option("--input", f.input, "Fixed input 'a,b', components as re+imI");
        cmd->add_flag("--enumerate", f.enumerate, "Enumerate outcome branches exactly");
        cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    }
}

int emit(const telepovm::Report &report, const Flags &f) {
    const auto format = f.format == "csv" ? telepovm::OutputFormat::Csv : telepovm::OutputFormat::Json;
    if (f.out == "-") {
        std::cout << (format == telepovm::OutputFormat::Csv ? report.to_csv() : report.to_json() + "\n");
    } else {
        if (!f.out.empty()) {
            telepovm::write_report(report, f.out, format);
        }
        std::cout << report.summary();
    }
    return report.passed() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Few-qubit teleportation, POVM and conclusive-teleportation simulator"};
    app.require_subcommand(1);
    Flags f;

    auto *verify = app.add_subcommand("verify", "Run the full verification suite");
    add_common(verify, f, false);
    verify->add_flag("--inject-fault", f.inject_fault, "Negative control: perturb one POVM element");

    auto *teleport = app.add_subcommand("teleport", "Standard Bell-measurement teleportation");
    add_common(teleport, f, true);
    teleport->add_flag("--one-bit", f.one_bit, "Singlet-only variant with a one-bit message");

    auto *conclusive = app.add_subcommand("conclusive", "Conclusive teleportation");
    add_common(conclusive, f, true);
    conclusive->add_flag("--one-bit", f.one_bit, "Accept only the (antiparallel, v) outcome");

    auto *telepovm_cmd = app.add_subcommand("telepovm", "Telepovm equivalence check");
    add_common(telepovm_cmd, f, false);
    auto *theta_opt = telepovm_cmd->add_option("--theta", f.theta, "Single angle instead of a sweep");

    auto *demo = app.add_subcommand("ensemble-demo", "Generate an ensemble at a distance");
    add_common(demo, f, false);
    demo->add_option("--demo", f.demo, "b92, epr-z, epr-x or telepovm");
    auto *demo_theta = demo->add_option("--theta", f.theta, "Angle for the telepovm demo");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (verify->parsed()) {
            auto report = telepovm::run_verification_suite({f.seed, f.inject_fault});
            return emit(report, f);
        }
        telepovm::RunConfig config;
        config.alpha2 = f.alpha2;
        config.trials = f.trials;
        config.seed = f.seed;
        config.threads = f.threads;
        config.demo = f.demo;
        if (teleport->parsed()) {
            config.protocol = f.one_bit ? "one-bit-singlet" : "standard";
        } else if (conclusive->parsed()) {
            config.protocol = f.one_bit ? "one-bit-conclusive" : "conclusive";
        } else if (telepovm_cmd->parsed()) {
            config.protocol = "verify-telepovm";
            if (theta_opt->count() > 0) config.theta = f.theta;
        } else {
            config.protocol = "ensemble-demo";
            if (demo_theta->count() > 0) config.theta = f.theta;
        }
        if (!f.input.empty()) {
            config.fixed_input = telepovm::parse_input_pair(f.input);
            config.input_mode = telepovm::InputMode::Fixed;
        }
        if (f.enumerate) {
            config.input_mode = telepovm::InputMode::EnumerateBranches;
        }
        config.validate();
        return emit(telepovm::run_experiment(config), f);
    } catch (const telepovm::Error &e) {
        std::cerr << "telepovm: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
