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

#include <string>
#include <vector>

#include "telepovm/measure.hpp"
#include "telepovm/qcore.hpp"
#include "telepovm/rng.hpp"

namespace telepovm {

/// Standard complex Gaussian (unit variance per real component), Box-Muller.
Complex gaussian_complex(Rng &rng);

/// Haar-random pure state over the given factorization.
StateVector random_state(Rng &rng, std::vector<std::size_t> dims, std::vector<std::string> labels);

/// Haar-random qubit.
StateVector random_qubit(Rng &rng, std::string label = "1");

/// Random complete POVM on C^dim with `outcomes` elements. Roughly half the
/// elements are rank one. Built as S^{-1/2} G_i S^{-1/2} with S = sum G_i.
Povm random_povm(Rng &rng, std::size_t dim, std::size_t outcomes);

/// G^dagger G for a Gaussian G; PSD with probability one.
Operator random_psd(Rng &rng, std::size_t dim);

}  // namespace telepovm
