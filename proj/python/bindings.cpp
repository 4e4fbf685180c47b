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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "telepovm/discrimination.hpp"
#include "telepovm/ensembles.hpp"
#include "telepovm/harness.hpp"
#include "telepovm/measure.hpp"
#include "telepovm/protocols.hpp"
#include "telepovm/qcore.hpp"

namespace py = pybind11;
using namespace telepovm;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Operator to_operator(const CArray &a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
        throw Error(ErrorCode::DimensionMismatch, "expected a square matrix");
    }
    const auto n = static_cast<std::size_t>(a.shape(0));
    Operator op(n);
    auto r = a.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            op(i, j) = r(i, j);
        }
    }
    return op;
}

CArray to_array(const Operator &op) {
    const auto n = static_cast<py::ssize_t>(op.dim());
    CArray out({n, n});
    auto w = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i) {
        for (py::ssize_t j = 0; j < n; ++j) {
            w(i, j) = op(i, j);
        }
    }
    return out;
}

CArray to_array(const std::vector<Complex> &v) {
    CArray out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<Complex> to_vector(const CArray &a) {
    if (a.ndim() != 1) {
        throw Error(ErrorCode::DimensionMismatch, "expected a 1-d amplitude array");
    }
    return {a.data(), a.data() + a.size()};
}

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

StateVector to_state(const CArray &amps, std::vector<std::size_t> dims) {
    auto v = to_vector(amps);
    if (dims.empty()) dims = {v.size()};
    auto labels = default_labels(dims.size());
    return StateVector(std::move(v), std::move(dims), std::move(labels));
}

Povm to_povm(const std::vector<CArray> &elements) {
    std::vector<Operator> ops;
    for (const auto &e : elements) ops.push_back(to_operator(e));
    return Povm(std::move(ops));
}

py::list povm_list(const Povm &p) {
    py::list out;
    for (const auto &e : p.elements()) out.append(to_array(e));
    return out;
}

py::list ensemble_list(const RhoEnsemble &e) {
    py::list out;
    for (const auto &m : e.members()) {
        py::dict d;
        d["label"] = m.label;
        d["probability"] = m.probability;
        d["pure"] = m.is_pure();
        d["state"] = m.is_pure() ? py::object(to_array(m.pure_state().amplitudes())) : py::none();
        d["density"] = m.is_null() ? py::none() : py::object(to_array(m.density().op()));
        out.append(d);
    }
    return out;
}

py::list branch_list(const std::vector<Branch> &branches) {
    py::list out;
    for (const auto &b : branches) {
        const auto &t = b.transcript;
        py::dict d;
        d["probability"] = b.probability;
        d["steps"] = t.step_outcomes;
        d["conclusive"] = t.conclusive;
        d["bits_sent"] = t.classical_bits_sent;
        d["correction"] = t.correction ? py::object(py::str(t.correction->label)) : py::none();
        d["fidelity"] = t.fidelity_achieved ? py::object(py::float_(*t.fidelity_achieved)) : py::none();
        d["bob_received"] = to_array(b.bob_received.op());
        out.append(d);
    }
    return out;
}

std::vector<Branch> enumerate_named(const std::string &protocol, Complex a, Complex b, double alpha2) {
    const auto input = StateVector::qubit(a, b, "1");
    const auto channel = ChannelSpec::from_alpha2(alpha2);
    if (protocol == "standard") return enumerate_standard(input, channel);
    if (protocol == "conclusive") return enumerate_conclusive(input, channel);
    if (protocol == "one-bit-singlet") return enumerate_one_bit(input, channel, OneBitMode::SingletOnly);
    if (protocol == "one-bit-conclusive")
        return enumerate_one_bit(input, channel, OneBitMode::ConclusiveSingletOnly);
    throw Error(ErrorCode::InvalidConfig, "protocol: unknown protocol '" + protocol + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Few-qubit POVM, ensemble and teleportation routines";

    // Messages carry the error-code name as a prefix.
    py::register_exception<Error>(m, "TelepovmError", PyExc_ValueError);

    m.def("telepovm_elements", [](double theta) { return povm_list(telepovm_elements(theta)); },
          py::arg("theta"));

    m.def("bell_projectors", [] { return povm_list(bell_basis().as_povm()); });

    m.def(
        "induced_povm",
        [](const std::vector<CArray> &projectors, const CArray &ancilla) {
            std::vector<Operator> ops;
            for (const auto &p : projectors) ops.push_back(to_operator(p));
            auto labels = default_labels(ops.size());
            ProjectiveMeasurement joint(std::move(ops), std::move(labels));
            const auto aux = DensityMatrix::pure(to_state(ancilla, {}));
            return povm_list(induced_povm(joint, aux));
        },
        py::arg("projectors"), py::arg("ancilla"));

    m.def(
        "validate_povm",
        [](const std::vector<CArray> &elements) {
            const auto v = validate_povm(to_povm(elements));
            py::dict d;
            d["passed"] = v.passed();
            d["hermiticity_residual"] = v.hermiticity_residual;
            d["min_eigenvalues"] = v.min_eigenvalues;
            d["completeness_residual"] = v.completeness_residual;
            d["failures"] = v.failures;
            return d;
        },
        py::arg("elements"));

    m.def(
        "partial_trace",
        [](const CArray &rho, std::vector<std::size_t> dims, std::vector<std::size_t> keep) {
            const auto labels = default_labels(dims.size());
            std::vector<std::string> keep_labels;
            for (auto k : keep) keep_labels.push_back(std::to_string(k));
            DensityMatrix dm(to_operator(rho), dims, labels);
            return to_array(partial_trace(dm, keep_labels).op());
        },
        py::arg("rho"), py::arg("dims"), py::arg("keep"));

    m.def(
        "schmidt_decompose",
        [](const CArray &amps, std::vector<std::size_t> dims) {
            const auto form = schmidt_decompose(to_state(amps, std::move(dims)));
            py::list alice, bob;
            for (const auto &v : form.alice_basis) alice.append(to_array(v.amplitudes()));
            for (const auto &v : form.bob_basis) bob.append(to_array(v.amplitudes()));
            return py::make_tuple(form.coefficients, alice, bob);
        },
        py::arg("amplitudes"), py::arg("dims"));

    m.def(
        "generate_at_distance",
        [](const CArray &shared, const std::vector<CArray> &povm) {
            auto st = to_state(shared, {2, 2}).relabeled({"A", "B"});
            return ensemble_list(generate_at_distance(st, to_povm(povm)));
        },
        py::arg("shared"), py::arg("povm"));

    m.def("b92_demo", [](double alpha, double beta) { return ensemble_list(b92_demo(alpha, beta)); },
          py::arg("alpha"), py::arg("beta"));

    m.def(
        "usd_povm",
        [](const CArray &u, const CArray &v) {
            const auto s = usd_povm(to_state(u, {}), to_state(v, {}));
            py::dict d;
            d["overlap"] = s.overlap;
            d["labels"] = s.povm.labels();
            d["elements"] = povm_list(s.povm);
            return d;
        },
        py::arg("u"), py::arg("v"));

    m.def("conclusive_probability", &conclusive_probability, py::arg("alpha"), py::arg("beta"));

    m.def(
        "enumerate_branches",
        [](const std::string &protocol, Complex a, Complex b, double alpha2) {
            return branch_list(enumerate_named(protocol, a, b, alpha2));
        },
        py::arg("protocol"), py::arg("a"), py::arg("b"), py::arg("alpha2") = 0.5);

    m.def(
        "run_experiment_json",
        [](const std::string &protocol, double alpha2, std::optional<double> theta, std::uint64_t trials,
           std::uint64_t seed, std::optional<std::pair<Complex, Complex>> input, bool enumerate,
           std::string demo, unsigned threads) {
            RunConfig c;
            c.protocol = protocol;
            c.alpha2 = alpha2;
            c.theta = theta;
            c.trials = trials;
            c.seed = seed;
            c.fixed_input = input;
            c.input_mode = enumerate ? InputMode::EnumerateBranches
                                     : (input ? InputMode::Fixed : InputMode::Random);
            c.demo = std::move(demo);
            c.threads = threads;
            py::gil_scoped_release release;
            return run_experiment(c).to_json(false);
        },
        py::arg("protocol"), py::arg("alpha2") = 0.5, py::arg("theta") = py::none(),
        py::arg("trials") = 100000, py::arg("seed") = 1, py::arg("input") = py::none(),
        py::arg("enumerate") = false, py::arg("demo") = "b92", py::arg("threads") = 1);

    m.def(
        "run_verification_suite_json",
        [](std::uint64_t seed, bool inject_fault) {
            py::gil_scoped_release release;
            return run_verification_suite({seed, inject_fault}).to_json(false);
        },
        py::arg("seed") = 1, py::arg("inject_fault") = false);
}
