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

#include "qvar/graph.hpp"

#include <set>
#include <utility>

#include "qvar/error.hpp"
#include "qvar/rng.hpp"

namespace qvar {

double cut_weight(const Graph& graph, const std::vector<std::uint8_t>& side) {
  if (static_cast<int>(side.size()) != graph.num_vertices) {
    throw_invalid("labeling length does not match vertex count");
  }
  double w = 0.0;
  for (const Edge& e : graph.edges) {
    if (side[e.u] != side[e.v]) w += e.weight;
  }
  return w;
}

Graph erdos_renyi(int n, double p, double weight_lo, double weight_hi, std::uint64_t seed) {
  if (n < 1) throw_invalid("graph must have at least one vertex");
  if (p < 0.0 || p > 1.0) throw_invalid("edge probability must lie in [0, 1]");
  if (weight_lo > weight_hi) throw_invalid("weight range is inverted");
  Graph g;
  g.num_vertices = n;
  RngStream rng(derive_seed(seed, 0x67726170));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      // Draw the weight unconditionally so the stream position for a given
      // (u, v) never depends on earlier coin flips.
      double coin = rng.real01();
      double w = rng.uniform(weight_lo, weight_hi);
      if (coin < p) g.edges.push_back({u, v, w});
    }
  }
  return g;
}

void validate_graph(const Graph& graph) {
  if (graph.num_vertices < 1) throw_invalid("graph must have at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : graph.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= graph.num_vertices || e.v >= graph.num_vertices) {
      throw_invalid("edge endpoint out of range");
    }
    if (e.u == e.v) throw_invalid("self loops are not allowed");
    if (e.u > e.v) throw_invalid("edges must be stored with u < v");
    if (!seen.insert({e.u, e.v}).second) throw_invalid("duplicate edge");
  }
}

}  // namespace qvar
