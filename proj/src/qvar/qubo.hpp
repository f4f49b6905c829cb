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

#ifndef QVAR_QUBO_HPP
#define QVAR_QUBO_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qvar {

/// Dense symmetric coefficient matrix, stored row-major.
///
/// The energy model is E(x) = x^T Q x + offset over binary x. Off-diagonal
/// storage is split symmetrically: a pairwise coupling c on (i, j) is stored
/// as q[i][j] = q[j][i] = c / 2, so the diagonal holds the linear
/// coefficients and x^T Q x reproduces sum_i a_i x_i + sum_{i<j} c_ij x_i x_j.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

  int n() const { return n_; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, double value) {
    data_[static_cast<std::size_t>(i) * n_ + j] = value;
    data_[static_cast<std::size_t>(j) * n_ + i] = value;
  }
  void add(int i, int j, double value) {
    if (i == j) {
      data_[static_cast<std::size_t>(i) * n_ + i] += value;
    } else {
      data_[static_cast<std::size_t>(i) * n_ + j] += value;
      data_[static_cast<std::size_t>(j) * n_ + i] += value;
    }
  }
  const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * n_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const SymMatrix& other) const = default;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// One coefficient in the upper-triangular exchange convention: the diagonal
/// carries linear terms, an off-diagonal (i < j) entry carries the full
/// pairwise coupling (not the halved symmetric share).
struct Entry {
  int i = 0;
  int j = 0;
  double coeff = 0.0;
};

/// Objective/constraint decomposition of the coefficient matrix, attached by
/// generators of constrained problems. Invariant: objective + constraint
/// equals the instance matrix entry-wise, and the two offsets sum to the
/// instance offset. Reformulation strategies that rescale penalties require
/// this tagging and are skipped for untagged instances.
struct ConstraintSplit {
  SymMatrix objective;
  SymMatrix constraint;
  double objective_offset = 0.0;
  double constraint_offset = 0.0;
};

/// Declares that the constraint block is a quadratic cardinality penalty
/// gamma * (sum_i x_i - k)^2 (up to a constant), in the generator's variable
/// frame. `k` is descriptive; `gamma` tracks the current penalty weight.
struct CardinalityConstraint {
  double k = 0.0;
  double gamma = 0.0;
};

/// Records that variable `z` was introduced to stand for the product of two
/// earlier variables, with its consistency enforced by a quadratic penalty.
struct AuxVar {
  int z = 0;
  int parent_a = 0;
  int parent_b = 0;
};

class QuboInstance {
 public:
  QuboInstance() = default;
  explicit QuboInstance(int n, std::string label = "", std::optional<std::uint64_t> seed = {});

  /// Builds an instance from upper-triangular entries (see Entry). Entries
  /// for the same cell accumulate. Indices out of range or with i > j are
  /// rejected.
  static QuboInstance from_entries(int n, std::span<const Entry> entries,
                                   std::string label = "",
                                   std::optional<std::uint64_t> seed = {});

  int n() const { return n_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  const std::optional<std::uint64_t>& seed() const { return seed_; }
  void set_seed(std::optional<std::uint64_t> seed) { seed_ = seed; }
  const std::string& family() const { return family_; }
  void set_family(std::string family) { family_ = std::move(family); }

  const SymMatrix& q() const { return q_; }
  SymMatrix& q() { return q_; }
  double offset() const { return offset_; }
  void set_offset(double offset) { offset_ = offset; }

  const std::optional<ConstraintSplit>& split() const { return split_; }
  std::optional<ConstraintSplit>& split() { return split_; }
  const std::optional<CardinalityConstraint>& cardinality() const { return cardinality_; }
  std::optional<CardinalityConstraint>& cardinality() { return cardinality_; }
  const std::vector<AuxVar>& aux_vars() const { return aux_vars_; }
  std::vector<AuxVar>& aux_vars() { return aux_vars_; }

  /// Optional serialized description of the source object (graph, value
  /// list, set system) the instance was generated from. Opaque to the core;
  /// written back out on save so instances stay reproducible.
  const std::string& source_json() const { return source_json_; }
  void set_source_json(std::string source) { source_json_ = std::move(source); }

  /// Upper-triangular entries reproducing the matrix: diagonal as-is,
  /// off-diagonal cells doubled back into full couplings. Exact zeros are
  /// skipped.
  std::vector<Entry> entries() const;

  /// Checks internal consistency (split sums back to the matrix, aux
  /// annotations in range). Throws an internal error on violation.
  void validate() const;

 private:
  int n_ = 0;
  SymMatrix q_;
  double offset_ = 0.0;
  std::string label_;
  std::string family_;
  std::optional<std::uint64_t> seed_;
  std::optional<ConstraintSplit> split_;
  std::optional<CardinalityConstraint> cardinality_;
  std::vector<AuxVar> aux_vars_;
  std::string source_json_;
};

/// A configuration with its cached energy.
struct Assignment {
  std::vector<std::uint8_t> bits;
  double energy = 0.0;
};

/// Energy of a configuration: x^T Q x + offset. Length must match n.
double evaluate(const QuboInstance& instance, std::span<const std::uint8_t> bits);

/// Energy change from flipping bit `index`:
///   (1 - 2 x_i) * (q_ii + 2 * sum_{j != i} q_ij x_j).
/// The single-flip delta doubles as the discrete gradient component used by
/// the landscape module.
double flip_delta(const QuboInstance& instance, std::span<const std::uint8_t> bits, int index);

/// Local fields f_i = q_ii + 2 * sum_{j != i} q_ij x_j for every i. The flip
/// delta for i is then (1 - 2 x_i) * f_i; solvers keep this vector updated
/// incrementally instead of recomputing it per move.
void local_fields(const QuboInstance& instance, std::span<const std::uint8_t> bits,
                  std::span<double> out);

/// Updates `fields` after bit `index` of `bits` was flipped (bits already
/// holds the new value).
void update_fields_after_flip(const QuboInstance& instance,
                              std::span<const std::uint8_t> bits, int index,
                              std::span<double> fields);

}  // namespace qvar

#endif  // QVAR_QUBO_HPP
