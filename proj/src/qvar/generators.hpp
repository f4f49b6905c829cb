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

#ifndef QVAR_GENERATORS_HPP
#define QVAR_GENERATORS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qvar/graph.hpp"
#include "qvar/qubo.hpp"

namespace qvar {

/// Dense random instance: diagonal and upper-triangle coefficients drawn
/// i.i.d. from N(mu, sigma2) in lexicographic (i, j) order, then stored in
/// the symmetric convention (off-diagonal coefficients halved per side).
QuboInstance gen_synthetic(int n, double mu, double sigma2, std::uint64_t seed);

/// Max Cut encoding: per edge (u, v, w) the energy contributes
/// w * (-x_u - x_v + 2 x_u x_v), so the energy of any labeling equals minus
/// the cut weight and minimizers are maximum cuts.
QuboInstance gen_maxcut(const Graph& graph);

/// Balanced two-way partition: cut weight plus a quadratic balance penalty.
/// The penalty expands gamma * ((1 - |V|) sum_i x_i + 2 sum_{i<j} x_i x_j),
/// which is gamma * ((sum_i x_i - |V|/2)^2 - |V|^2/4); for even |V| it is
/// minimized exactly on balanced labelings. The instance carries an
/// objective/constraint split and a cardinality tag for reformulation.
QuboInstance gen_graph_partition(const Graph& graph, double gamma);

/// Two-way number partitioning of positive integers. With S the total sum,
/// coefficients are Q_ii = a_i (a_i - S) and Q_ij = a_i a_j on the full
/// symmetric matrix, so 4 * energy + S^2 == (sum_i a_i (2 x_i - 1))^2, the
/// squared subset-sum difference.
QuboInstance gen_number_partition(std::span<const std::int64_t> values);

/// Increments the last value when the total is odd, so an exact equal-sum
/// split is not ruled out by parity. Returns whether a value was changed.
bool make_sum_even(std::vector<std::int64_t>& values);

struct SetCoverInput {
  int num_elements = 0;
  /// sets[j] lists the elements covered by set j, sorted ascending.
  std::vector<std::vector<int>> sets;
};

void validate_set_cover(const SetCoverInput& input);

/// Random set system: each (set, element) membership is Bernoulli(p),
/// resampled (deterministically) until every element is covered.
SetCoverInput random_set_cover(int num_elements, int num_sets, double p, std::uint64_t seed);

/// Pure-penalty set cover QUBO. Variables are the m set selectors followed by
/// per-element binary slack counters; each element contributes
/// penalty * (coverage - 1 - slack)^2, so at the slack-minimizing completion
/// the energy is (#selected sets) + penalty * (#uncovered elements). The
/// expansion constant penalty * num_elements is kept in the instance offset
/// so those energies are literal. Requires penalty > m (otherwise an
/// infeasible selection could beat a feasible one).
QuboInstance gen_set_cover(const SetCoverInput& input, double penalty);

/// First variable index holding set-cover slack bits (== number of sets).
/// Selections project onto the first `num_sets` variables.
int set_cover_num_selector_vars(const SetCoverInput& input);

/// Builds an instance from a JSON generator spec, e.g.
///   {"family":"synthetic","n":32,"mu":0,"sigma2":2,"seed":7}
///   {"family":"maxcut","n":16,"p":0.2,"weight_lo":1,"weight_hi":10,"seed":3}
///   {"family":"graph_partition","n":16,"p":0.3,"gamma":5.0,"seed":3}
///   {"family":"number_partition","n":12,"value_lo":1,"value_hi":100,"seed":3}
///   {"family":"set_cover","num_elements":4,"num_sets":6,"coverage_p":0.3,"seed":3}
/// Unknown families or malformed fields raise invalid-argument. The source
/// graph / value list / set system is embedded in the instance for
/// reproducibility.
QuboInstance generate_from_spec_json(const std::string& spec_json);

}  // namespace qvar

#endif  // QVAR_GENERATORS_HPP
