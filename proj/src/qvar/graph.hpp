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

#ifndef QVAR_GRAPH_HPP
#define QVAR_GRAPH_HPP

#include <cstdint>
#include <vector>

namespace qvar {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

/// Simple undirected weighted graph. Edges keep u < v; no self loops or
/// duplicates.
struct Graph {
  int num_vertices = 0;
  std::vector<Edge> edges;

  double total_weight() const {
    double w = 0.0;
    for (const Edge& e : edges) w += e.weight;
    return w;
  }
};

/// Weight of the cut induced by a binary labeling (bit i = side of vertex i).
double cut_weight(const Graph& graph, const std::vector<std::uint8_t>& side);

/// G(n, p) random graph with edge weights drawn uniformly from
/// [weight_lo, weight_hi]. Deterministic per seed; each potential edge and
/// weight is drawn in the fixed (u, v) lexicographic order.
Graph erdos_renyi(int n, double p, double weight_lo, double weight_hi, std::uint64_t seed);

void validate_graph(const Graph& graph);

}  // namespace qvar

#endif  // QVAR_GRAPH_HPP
