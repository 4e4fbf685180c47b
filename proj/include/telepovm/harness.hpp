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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telepovm/qcore.hpp"

namespace telepovm {

inline constexpr int kReportSchema = 1;

enum class InputMode { Random, Fixed, EnumerateBranches };
enum class OutputFormat { Json, Csv };

/// Protocol names accepted by run_experiment.
///   standard, one-bit-singlet, conclusive, one-bit-conclusive,
///   verify-telepovm, ensemble-demo
struct RunConfig {
    std::string protocol = "standard";
    double alpha2 = 0.5;
    /// Unset: the telepovm protocol sweeps 100 evenly spaced angles.
    std::optional<double> theta;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    InputMode input_mode = InputMode::Random;
    std::optional<std::pair<Complex, Complex>> fixed_input;
    OutputFormat output_format = OutputFormat::Json;
    std::string output_path;  // empty: no file
    /// ensemble-demo selector: b92, epr-z, epr-x, telepovm.
    std::string demo = "b92";
    /// Worker threads for Monte Carlo trials; 0 picks hardware concurrency.
    unsigned threads = 1;

    /// Throws Error(InvalidConfig) naming the offending field.
    void validate() const;
};

struct Aggregate {
    std::string protocol;
    std::uint64_t trials = 0;
    bool exact = false;  // branch enumeration rather than sampling
    double conclusive_count = 0.0;  // weighted when exact
    double success_rate = 0.0;
    double success_rate_stderr = 0.0;
    double mean_fidelity = 0.0;          // over every trial that delivered a state
    double mean_fidelity_success = 0.0;  // over trials flagged conclusive
    double min_success_fidelity = 1.0;
    std::uint64_t wrong_identifications = 0;
    std::uint64_t classical_bits_total = 0;
};

struct CheckLine {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool monte_carlo = false;
    std::string detail;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    std::vector<std::string> steps;
    bool conclusive = false;
    std::optional<double> fidelity;
    int bits_sent = 0;
};

struct Report {
    RunConfig config;
    std::vector<Aggregate> aggregates;
    std::vector<std::pair<std::string, double>> theory;
    std::vector<CheckLine> checks;
    std::vector<TrialRecord> trials;
    /// Extra structured payload (ensembles, sweeps) as a JSON fragment.
    std::string details_json = "null";

    bool passed() const;
    /// Schema v1. The timestamp is the only field that varies between replays.
    std::string to_json(bool with_timestamp = true) const;
    /// trial,steps,conclusive,fidelity,bits_sent
    std::string to_csv() const;
    /// Human-readable lines for standard output.
    std::string summary() const;
};

/// Runs one configured experiment. Writes the report to config.output_path
/// when set (relative paths resolve against $TELEPOVM_OUTPUT_DIR if defined).
Report run_experiment(const RunConfig &config);

struct SuiteOptions {
    std::uint64_t seed = 1;
    /// Negative control: scales A1 of the POVM sweep by 1.01.
    bool inject_fault = false;
};

Report run_verification_suite(const SuiteOptions &options = {});

/// Writes the report in the configured format. Throws Error(Io).
void write_report(const Report &report, const std::string &path, OutputFormat format);

/// Applies the output-directory override to a relative path.
std::string resolve_output_path(const std::string &path);

/// Parses "a,b" where each component is re+imI, e.g. "0.6,0.8I" or
/// "0.6+0.1I,-0.2I". Throws Error(InvalidConfig).
std::pair<Complex, Complex> parse_input_pair(const std::string &text);
Complex parse_complex(const std::string &text);

}  // namespace telepovm
