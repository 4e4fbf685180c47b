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

#include "telepovm/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace telepovm {

Complex gaussian_complex(Rng &rng) {
    // Explicit variates rather than std::normal_distribution so draws replay
    // identically across standard libraries.
    const double u1 = 1.0 - rng.uniform();  // (0, 1]
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

StateVector random_state(Rng &rng, std::vector<std::size_t> dims, std::vector<std::string> labels) {
    const std::size_t n =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    std::vector<Complex> amps(n);
    for (auto &z : amps) {
        z = gaussian_complex(rng);
    }
    return StateVector::normalized(std::move(amps), std::move(dims), std::move(labels));
}

StateVector random_qubit(Rng &rng, std::string label) {
    return random_state(rng, {2}, {std::move(label)});
}

Operator random_psd(Rng &rng, std::size_t dim) {
    Operator g(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            g(r, c) = gaussian_complex(rng);
        }
    }
    return g.adjoint() * g;
}

Povm random_povm(Rng &rng, std::size_t dim, std::size_t outcomes) {
    std::vector<Operator> raw;
    Operator sum(dim);
    for (std::size_t i = 0; i < outcomes; ++i) {
        if (rng.uniform() < 0.5) {
            std::vector<Complex> g(dim);
            for (auto &z : g) {
                z = gaussian_complex(rng);
            }
            raw.push_back(Operator::projector(g));
        } else {
            raw.push_back(random_psd(rng, dim));
        }
        sum += raw.back();
    }
    // S^{-1/2}; S is full rank with probability one once outcomes >= dim or
    // any element is full rank.
    const auto eig = hermitian_eig(sum);
    Operator inv_sqrt(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        if (eig.values[k] <= 1e-12) {
            throw Error(ErrorCode::InvalidMeasurement, "random POVM draw is rank deficient");
        }
        inv_sqrt += (1.0 / std::sqrt(eig.values[k])) * Operator::projector(eig.vectors[k]);
    }
    std::vector<Operator> elements;
    for (const auto &g : raw) {
        Operator e = inv_sqrt * g * inv_sqrt;
        // Exact hermiticity.
        for (std::size_t r = 0; r < dim; ++r) {
            e(r, r) = e(r, r).real();
            for (std::size_t c = r + 1; c < dim; ++c) {
                const Complex avg = 0.5 * (e(r, c) + std::conj(e(c, r)));
                e(r, c) = avg;
                e(c, r) = std::conj(avg);
            }
        }
        elements.push_back(std::move(e));
    }
    return Povm(std::move(elements));
}

}  // namespace telepovm
