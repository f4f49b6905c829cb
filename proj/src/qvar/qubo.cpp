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

#include "qvar/qubo.hpp"

#include <cmath>
#include <cstdio>

#include "qvar/error.hpp"

namespace qvar {

QuboInstance::QuboInstance(int n, std::string label, std::optional<std::uint64_t> seed)
    : n_(n), q_(n), label_(std::move(label)), seed_(seed) {
  if (n < 1) throw_invalid("instance must have at least one variable");
}

QuboInstance QuboInstance::from_entries(int n, std::span<const Entry> entries,
                                        std::string label,
                                        std::optional<std::uint64_t> seed) {
  QuboInstance instance(n, std::move(label), seed);
  for (const Entry& e : entries) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw_invalid("entry index out of range");
    }
    if (e.i > e.j) throw_invalid("entries must be upper-triangular (i <= j)");
    if (e.i == e.j) {
      instance.q_.add(e.i, e.i, e.coeff);
    } else {
      // Full coupling split evenly across the two symmetric cells.
      instance.q_.add(e.i, e.j, e.coeff / 2.0);
    }
  }
  return instance;
}

std::vector<Entry> QuboInstance::entries() const {
  std::vector<Entry> out;
  for (int i = 0; i < n_; ++i) {
    double d = q_.at(i, i);
    if (d != 0.0) out.push_back({i, i, d});
    for (int j = i + 1; j < n_; ++j) {
      double c = q_.at(i, j);
      if (c != 0.0) out.push_back({i, j, 2.0 * c});
    }
  }
  return out;
}

void QuboInstance::validate() const {
  if (n_ < 1 || q_.n() != n_) throw_internal("instance matrix shape mismatch");
  if (split_) {
    if (split_->objective.n() != n_ || split_->constraint.n() != n_) {
      throw_internal("constraint split shape mismatch");
    }
    for (std::size_t k = 0; k < q_.data().size(); ++k) {
      double sum = split_->objective.data()[k] + split_->constraint.data()[k];
      if (sum != q_.data()[k] && std::abs(sum - q_.data()[k]) > 1e-9 * (1.0 + std::abs(q_.data()[k]))) {
        throw_internal("constraint split does not sum to the instance matrix");
      }
    }
    double off = split_->objective_offset + split_->constraint_offset;
    if (std::abs(off - offset_) > 1e-9 * (1.0 + std::abs(offset_))) {
      throw_internal("constraint split offsets do not sum to the instance offset");
    }
  }
  for (const AuxVar& a : aux_vars_) {
    if (a.z < 0 || a.z >= n_ || a.parent_a < 0 || a.parent_a >= n_ ||
        a.parent_b < 0 || a.parent_b >= n_) {
      throw_internal("aux annotation out of range");
    }
  }
}

double evaluate(const QuboInstance& instance, std::span<const std::uint8_t> bits) {
  const int n = instance.n();
  if (static_cast<int>(bits.size()) != n) {
    throw_invalid("assignment length does not match instance size");
  }
  const SymMatrix& q = instance.q();
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!bits[i]) continue;
    const double* row = q.row(i);
    double acc = row[i];
    for (int j = i + 1; j < n; ++j) {
      if (bits[j]) acc += 2.0 * row[j];
    }
    energy += acc;
  }
  return energy + instance.offset();
}

double flip_delta(const QuboInstance& instance, std::span<const std::uint8_t> bits, int index) {
  const int n = instance.n();
  if (static_cast<int>(bits.size()) != n) {
    throw_invalid("assignment length does not match instance size");
  }
  if (index < 0 || index >= n) throw_invalid("flip index out of range");
  const double* row = instance.q().row(index);
  double field = row[index];
  for (int j = 0; j < n; ++j) {
    if (j != index && bits[j]) field += 2.0 * row[j];
  }
  return (1.0 - 2.0 * static_cast<double>(bits[index])) * field;
}

void local_fields(const QuboInstance& instance, std::span<const std::uint8_t> bits,
                  std::span<double> out) {
  const int n = instance.n();
  const SymMatrix& q = instance.q();
  for (int i = 0; i < n; ++i) {
    const double* row = q.row(i);
    double field = row[i];
    for (int j = 0; j < n; ++j) {
      if (j != i && bits[j]) field += 2.0 * row[j];
    }
    out[i] = field;
  }
}

void update_fields_after_flip(const QuboInstance& instance,
                              std::span<const std::uint8_t> bits, int index,
                              std::span<double> fields) {
  const int n = instance.n();
  const double* row = instance.q().row(index);
  // bits[index] already holds the new value; +1 transitions add the coupling
  // into every other field, -1 transitions remove it.
  const double sign = bits[index] ? 2.0 : -2.0;
  for (int j = 0; j < n; ++j) {
    if (j != index) fields[j] += sign * row[j];
  }
}

}  // namespace qvar
