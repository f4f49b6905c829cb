// Copyright 2026 qvar developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QVAR_ISING_HPP
#define QVAR_ISING_HPP

#include <span>
#include <vector>

#include "qvar/qubo.hpp"

namespace qvar {

/// Spin model H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i over s in {-1,+1}.
/// The coupling matrix is stored symmetric with a zero diagonal.
struct IsingInstance {
  int n = 0;
  SymMatrix j;
  std::vector<double> h;
};

/// Energy of a spin configuration (spins are -1 or +1).
double ising_energy(const IsingInstance& instance, std::span<const int> spins);

/// Result of a model conversion. Both directions satisfy, for every
/// configuration under the bijection s = 2x - 1:
///   ising_energy(ising, s) + offset == evaluate(qubo, x)
/// where evaluate includes the QUBO instance's stored offset.
struct IsingConversion {
  IsingInstance ising;
  double offset = 0.0;
};

struct QuboConversion {
  QuboInstance qubo;
  double offset = 0.0;
};

/// Maps a QUBO to the spin model under s = 2x - 1. The returned offset folds
/// in the QUBO instance's stored offset, so the identity above is exact for
/// any instance.
IsingConversion qubo_to_ising(const QuboInstance& instance);

/// Inverse mapping. The produced QUBO stores offset 0; converting a QUBO to
/// Ising and back therefore reproduces both the matrix and the energies
/// exactly for instances with stored offset 0.
QuboConversion ising_to_qubo(const IsingInstance& instance);

}  // namespace qvar

#endif  // QVAR_ISING_HPP
