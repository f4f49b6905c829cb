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

#include "qvar/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "qvar/error.hpp"
#include "qvar/rng.hpp"
#include "qvar/serialize.hpp"

namespace qvar {

namespace {

std::string dims_label(const std::string& family, int n, std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s-n%d-s%llu", family.c_str(), n,
                static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace

QuboInstance gen_synthetic(int n, double mu, double sigma2, std::uint64_t seed) {
  if (n < 1) throw_invalid("synthetic generator requires n >= 1");
  if (!(sigma2 > 0.0)) throw_invalid("synthetic generator requires sigma2 > 0");
  QuboInstance instance(n, dims_label("synthetic", n, seed), seed);
  instance.set_family("synthetic");
  RngStream rng(derive_seed(seed, 0x73796e74));
  const double sigma = std::sqrt(sigma2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double coeff = rng.normal(mu, sigma);
      if (i == j) {
        instance.q().set(i, i, coeff);
      } else {
        instance.q().set(i, j, coeff / 2.0);
      }
    }
  }
  return instance;
}

QuboInstance gen_maxcut(const Graph& graph) {
  validate_graph(graph);
  QuboInstance instance(graph.num_vertices);
  instance.set_family("maxcut");
  instance.set_label("maxcut-n" + std::to_string(graph.num_vertices));
  for (const Edge& e : graph.edges) {
    instance.q().add(e.u, e.u, -e.weight);
    instance.q().add(e.v, e.v, -e.weight);
    instance.q().add(e.u, e.v, e.weight);  // half of the +2w coupling per side
  }
  return instance;
}

QuboInstance gen_graph_partition(const Graph& graph, double gamma) {
  validate_graph(graph);
  if (!(gamma > 0.0)) throw_invalid("graph partition requires gamma > 0");
  const int n = graph.num_vertices;
  QuboInstance instance(n);
  instance.set_family("graph_partition");
  instance.set_label("graph_partition-n" + std::to_string(n));

  ConstraintSplit split;
  split.objective = SymMatrix(n);
  split.constraint = SymMatrix(n);

  // Cut objective: w * (x_u + x_v - 2 x_u x_v) per edge.
  for (const Edge& e : graph.edges) {
    split.objective.add(e.u, e.u, e.weight);
    split.objective.add(e.v, e.v, e.weight);
    split.objective.add(e.u, e.v, -e.weight);
  }
  // Balance penalty: gamma * ((1 - n) sum_i x_i + 2 sum_{i<j} x_i x_j).
  for (int i = 0; i < n; ++i) {
    split.constraint.add(i, i, gamma * (1.0 - n));
    for (int j = i + 1; j < n; ++j) {
      split.constraint.add(i, j, gamma);
    }
  }

  for (std::size_t k = 0; k < instance.q().data().size(); ++k) {
    instance.q().data()[k] = split.objective.data()[k] + split.constraint.data()[k];
  }
  instance.split() = std::move(split);
  instance.cardinality() = CardinalityConstraint{n / 2.0, gamma};
  return instance;
}

QuboInstance gen_number_partition(std::span<const std::int64_t> values) {
  if (values.empty()) throw_invalid("number partition requires at least one value");
  double total = 0.0;
  for (std::int64_t v : values) {
    if (v <= 0) throw_invalid("number partition values must be positive");
    total += static_cast<double>(v);
  }
  const int n = static_cast<int>(values.size());
  QuboInstance instance(n);
  instance.set_family("number_partition");
  instance.set_label("number_partition-n" + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    const double ai = static_cast<double>(values[i]);
    instance.q().set(i, i, ai * (ai - total));
    for (int j = i + 1; j < n; ++j) {
      // Full-matrix convention: both (i, j) and (j, i) hold a_i * a_j, so
      // the effective pairwise coupling is 2 a_i a_j.
      instance.q().set(i, j, ai * static_cast<double>(values[j]));
    }
  }
  return instance;
}

bool make_sum_even(std::vector<std::int64_t>& values) {
  if (values.empty()) throw_invalid("number partition requires at least one value");
  std::int64_t total = 0;
  for (std::int64_t v : values) total += v;
  if (total % 2 == 0) return false;
  values.back() += 1;
  return true;
}

void validate_set_cover(const SetCoverInput& input) {
  if (input.num_elements < 1) throw_invalid("set cover requires at least one element");
  if (input.sets.empty()) throw_invalid("set cover requires at least one set");
  std::vector<char> covered(input.num_elements, 0);
  for (const auto& s : input.sets) {
    int prev = -1;
    for (int e : s) {
      if (e < 0 || e >= input.num_elements) throw_invalid("set cover element out of range");
      if (e <= prev) throw_invalid("set members must be sorted and unique");
      prev = e;
      covered[e] = 1;
    }
  }
  for (int e = 0; e < input.num_elements; ++e) {
    if (!covered[e]) {
      throw_invalid("element " + std::to_string(e) + " is not covered by any set");
    }
  }
}

SetCoverInput random_set_cover(int num_elements, int num_sets, double p, std::uint64_t seed) {
  if (num_elements < 1) throw_invalid("set cover requires at least one element");
  if (num_sets < 1) throw_invalid("set cover requires at least one set");
  if (p <= 0.0 || p > 1.0) throw_invalid("coverage probability must lie in (0, 1]");
  for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
    RngStream rng(derive_seed(seed, 0x73657463 + attempt));
    SetCoverInput input;
    input.num_elements = num_elements;
    input.sets.resize(num_sets);
    for (int j = 0; j < num_sets; ++j) {
      for (int e = 0; e < num_elements; ++e) {
        if (rng.bernoulli(p)) input.sets[j].push_back(e);
      }
    }
    bool all_covered = true;
    std::vector<char> covered(num_elements, 0);
    for (const auto& s : input.sets)
      for (int e : s) covered[e] = 1;
    for (int e = 0; e < num_elements; ++e) all_covered = all_covered && covered[e];
    if (all_covered) return input;
  }
  throw_internal("could not sample a covering set system");
}

int set_cover_num_selector_vars(const SetCoverInput& input) {
  return static_cast<int>(input.sets.size());
}

QuboInstance gen_set_cover(const SetCoverInput& input, double penalty) {
  validate_set_cover(input);
  const int m = static_cast<int>(input.sets.size());
  if (!(penalty > static_cast<double>(m))) {
    throw_invalid("set cover penalty must exceed the number of sets (" +
                  std::to_string(m) + ")");
  }

  // Covering sets per element, then slack widths.
  std::vector<std::vector<int>> covers(input.num_elements);
  for (int j = 0; j < m; ++j) {
    for (int e : input.sets[j]) covers[e].push_back(j);
  }
  std::vector<int> slack_bits(input.num_elements, 0);
  int total_slack = 0;
  for (int e = 0; e < input.num_elements; ++e) {
    int d = static_cast<int>(covers[e].size());
    int bits = 0;
    while ((1 << bits) < d) ++bits;  // ceil(log2(d)); 0 when d == 1
    slack_bits[e] = bits;
    total_slack += bits;
  }

  const int n = m + total_slack;
  QuboInstance instance(n);
  instance.set_family("set_cover");
  instance.set_label("set_cover-m" + std::to_string(m) + "-e" +
                     std::to_string(input.num_elements));

  ConstraintSplit split;
  split.objective = SymMatrix(n);
  split.constraint = SymMatrix(n);
  for (int j = 0; j < m; ++j) split.objective.add(j, j, 1.0);

  // Element e contributes penalty * (sum_{j covering e} x_j - slack_e - 1)^2.
  // With L = sum_k alpha_k v_k - 1 the expansion is
  //   sum_k (alpha_k^2 - 2 alpha_k) v_k + 2 sum_{k<l} alpha_k alpha_l v_k v_l + 1.
  int slack_base = m;
  for (int e = 0; e < input.num_elements; ++e) {
    std::vector<std::pair<int, double>> terms;
    for (int j : covers[e]) terms.push_back({j, 1.0});
    for (int b = 0; b < slack_bits[e]; ++b) {
      terms.push_back({slack_base + b, -static_cast<double>(1 << b)});
    }
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const auto [vk, ak] = terms[k];
      split.constraint.add(vk, vk, penalty * (ak * ak - 2.0 * ak));
      for (std::size_t l = k + 1; l < terms.size(); ++l) {
        const auto [vl, al] = terms[l];
        // Full coupling 2 * ak * al, stored as the symmetric half.
        split.constraint.add(vk, vl, penalty * ak * al);
      }
    }
    slack_base += slack_bits[e];
  }
  split.constraint_offset = penalty * input.num_elements;

  for (std::size_t k = 0; k < instance.q().data().size(); ++k) {
    instance.q().data()[k] = split.objective.data()[k] + split.constraint.data()[k];
  }
  instance.set_offset(split.objective_offset + split.constraint_offset);
  instance.split() = std::move(split);
  return instance;
}

QuboInstance generate_from_spec_json(const std::string& spec_json) {
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(spec_json);
  } catch (const nlohmann::json::exception& e) {
    throw_invalid(std::string("malformed generator spec: ") + e.what());
  }
  if (!spec.is_object() || !spec.contains("family")) {
    throw_invalid("generator spec must be an object with a \"family\" field");
  }

  auto get_u64 = [&](const char* key, std::optional<std::uint64_t> fallback =
                                          std::nullopt) -> std::uint64_t {
    if (!spec.contains(key)) {
      if (fallback) return *fallback;
      throw_invalid(std::string("generator spec missing \"") + key + "\"");
    }
    if (!spec[key].is_number_unsigned() && !spec[key].is_number_integer()) {
      throw_invalid(std::string("generator spec field \"") + key + "\" must be an integer");
    }
    return spec[key].get<std::uint64_t>();
  };
  auto get_int = [&](const char* key, std::optional<int> fallback = std::nullopt) -> int {
    if (!spec.contains(key)) {
      if (fallback) return *fallback;
      throw_invalid(std::string("generator spec missing \"") + key + "\"");
    }
    if (!spec[key].is_number_integer() && !spec[key].is_number_unsigned()) {
      throw_invalid(std::string("generator spec field \"") + key + "\" must be an integer");
    }
    return spec[key].get<int>();
  };
  auto get_real = [&](const char* key, std::optional<double> fallback = std::nullopt) -> double {
    if (!spec.contains(key)) {
      if (fallback) return *fallback;
      throw_invalid(std::string("generator spec missing \"") + key + "\"");
    }
    if (!spec[key].is_number()) {
      throw_invalid(std::string("generator spec field \"") + key + "\" must be a number");
    }
    return spec[key].get<double>();
  };

  const std::string family = spec["family"].get<std::string>();
  if (family == "synthetic") {
    int n = get_int("n");
    std::uint64_t seed = get_u64("seed");
    QuboInstance instance =
        gen_synthetic(n, get_real("mu", 0.0), get_real("sigma2", 2.0), seed);
    return instance;
  }
  if (family == "maxcut" || family == "graph_partition") {
    int n = get_int("n");
    std::uint64_t seed = get_u64("seed");
    Graph graph = erdos_renyi(n, get_real("p", 0.2), get_real("weight_lo", 1.0),
                              get_real("weight_hi", 10.0), seed);
    QuboInstance instance = family == "maxcut"
                                ? gen_maxcut(graph)
                                : gen_graph_partition(graph, get_real("gamma", 5.0));
    instance.set_seed(seed);
    instance.set_label(dims_label(family, n, seed));
    instance.set_source_json(graph_to_json(graph).dump());
    return instance;
  }
  if (family == "number_partition") {
    std::vector<std::int64_t> values;
    std::uint64_t seed = 0;
    if (spec.contains("values")) {
      for (const auto& v : spec["values"]) values.push_back(v.get<std::int64_t>());
      seed = get_u64("seed", 0);
    } else {
      int n = get_int("n");
      seed = get_u64("seed");
      int lo = get_int("value_lo", 1);
      int hi = get_int("value_hi", 100);
      if (lo < 1 || hi < lo) throw_invalid("number partition value range is invalid");
      RngStream rng(derive_seed(seed, 0x6e756d70));
      for (int i = 0; i < n; ++i) values.push_back(rng.int_in(lo, hi));
    }
    if (spec.value("make_even_sum", false)) make_sum_even(values);
    QuboInstance instance = gen_number_partition(values);
    instance.set_seed(seed);
    instance.set_label(dims_label("number_partition", static_cast<int>(values.size()), seed));
    instance.set_source_json(nlohmann::json{{"values", values}}.dump());
    return instance;
  }
  if (family == "set_cover") {
    std::uint64_t seed = get_u64("seed");
    SetCoverInput input;
    if (spec.contains("sets")) {
      input.num_elements = get_int("num_elements");
      for (const auto& s : spec["sets"]) {
        input.sets.push_back(s.get<std::vector<int>>());
      }
    } else {
      int num_elements = get_int("num_elements");
      int num_sets = get_int("num_sets", 2 * num_elements);
      input = random_set_cover(num_elements, num_sets, get_real("coverage_p", 0.3), seed);
    }
    double penalty = get_real("penalty", static_cast<double>(input.sets.size()) + 1.0);
    QuboInstance instance = gen_set_cover(input, penalty);
    instance.set_seed(seed);
    instance.set_label(dims_label("set_cover", instance.n(), seed));
    instance.set_source_json(set_cover_to_json(input).dump());
    return instance;
  }
  throw_invalid("unknown generator family \"" + family + "\"");
}

}  // namespace qvar
