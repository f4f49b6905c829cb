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

#include "qvar/ising.hpp"

#include "qvar/error.hpp"

namespace qvar {

double ising_energy(const IsingInstance& instance, std::span<const int> spins) {
  const int n = instance.n;
  if (static_cast<int>(spins.size()) != n) {
    throw_invalid("spin configuration length does not match instance size");
  }
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    energy -= instance.h[i] * spins[i];
    for (int j = i + 1; j < n; ++j) {
      energy -= instance.j.at(i, j) * spins[i] * spins[j];
    }
  }
  return energy;
}

IsingConversion qubo_to_ising(const QuboInstance& instance) {
  const int n = instance.n();
  const SymMatrix& q = instance.q();
  IsingConversion out;
  out.ising.n = n;
  out.ising.j = SymMatrix(n);
  out.ising.h.assign(n, 0.0);

  // Substituting x = (s + 1) / 2 into x^T Q x and matching the spin model
  // term by term:
  //   J_ij = -q_ij / 2        (i != j, q_ij the symmetric half-coupling)
  //   h_i  = -q_ii / 2 - (1/2) sum_{j != i} q_ij
  //   offset = sum_i q_ii / 2 + sum_{i<j} q_ij / 2
  double offset = 0.0;
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double qij = q.at(i, j);
      row_sum += qij;
      if (j > i) {
        out.ising.j.set(i, j, -qij / 2.0);
        offset += qij / 2.0;
      }
    }
    out.ising.h[i] = -q.at(i, i) / 2.0 - row_sum / 2.0;
    offset += q.at(i, i) / 2.0;
  }
  out.offset = offset + instance.offset();
  return out;
}

QuboConversion ising_to_qubo(const IsingInstance& instance) {
  const int n = instance.n;
  if (n < 1 || instance.j.n() != n || static_cast<int>(instance.h.size()) != n) {
    throw_invalid("ising instance shape mismatch");
  }
  QuboConversion out;
  out.qubo = QuboInstance(n);
  SymMatrix& q = out.qubo.q();

  // Substituting s = 2x - 1 into the spin Hamiltonian:
  //   linear    a_i  = 2 sum_{j != i} J_ij - 2 h_i
  //   coupling  b_ij = -4 J_ij  (stored as the symmetric half, -2 J_ij)
  //   x^T Q x == H(s) + sum_{i<j} J_ij - sum_i h_i
  double offset = 0.0;
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double jij = instance.j.at(i, j);
      row_sum += jij;
      if (j > i) {
        q.set(i, j, -2.0 * jij);
        offset += jij;
      }
    }
    q.set(i, i, 2.0 * row_sum - 2.0 * instance.h[i]);
    offset -= instance.h[i];
  }
  out.offset = offset;
  return out;
}

}  // namespace qvar
