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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "qvar/error.hpp"
#include "qvar/generators.hpp"
#include "qvar/graph.hpp"
#include "qvar/qubo.hpp"
#include "qvar/serialize.hpp"
#include "support/oracles.hpp"

using namespace qvar;
using namespace qvar::testing;

TEST_CASE("maxcut energy is minus the cut weight") {
  std::mt19937_64 rng(31);
  Graph graph = erdos_renyi(9, 0.4, 1.0, 10.0, 5);
  auto instance = gen_maxcut(graph);
  for (int rep = 0; rep < 40; ++rep) {
    auto side = random_bits(rng, 9);
    CHECK(evaluate(instance, side) == doctest::Approx(-naive_cut(graph, side)).epsilon(1e-12));
    CHECK(cut_weight(graph, side) == doctest::Approx(naive_cut(graph, side)).epsilon(1e-12));
  }
}

TEST_CASE("number partition energy encodes the squared imbalance") {
  std::vector<std::int64_t> values{3, 1, 4, 1, 5, 9, 2, 6};
  auto instance = gen_number_partition(values);
  std::int64_t total = 0;
  for (auto v : values) total += v;
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 40; ++rep) {
    auto bits = random_bits(rng, static_cast<int>(values.size()));
    double diff = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      diff += static_cast<double>(values[i]) * (2.0 * bits[i] - 1.0);
    }
    const double lhs = 4.0 * evaluate(instance, bits) +
                       static_cast<double>(total) * static_cast<double>(total);
    CHECK(lhs == doctest::Approx(diff * diff).epsilon(1e-9));
  }
}

TEST_CASE("make_sum_even fixes odd totals only") {
  std::vector<std::int64_t> odd{1, 2, 4};
  CHECK(make_sum_even(odd));
  CHECK(odd.back() == 5);
  std::vector<std::int64_t> even{1, 3, 4};
  CHECK_FALSE(make_sum_even(even));
  CHECK(even.back() == 4);
}

TEST_CASE("graph partition minimizers are balanced for a dominant penalty") {
  Graph graph = erdos_renyi(8, 0.5, 1.0, 4.0, 11);
  const double gamma = graph.total_weight() + 1.0;
  auto instance = gen_graph_partition(graph, gamma);
  REQUIRE(instance.split().has_value());
  REQUIRE(instance.cardinality().has_value());
  CHECK(instance.cardinality()->k == doctest::Approx(4.0));
  auto best = enumerate_min(instance);
  REQUIRE(!best.minimizers.empty());
  for (const auto& bits : best.minimizers) {
    int ones = 0;
    for (auto b : bits) ones += b;
    CHECK(ones == 4);
  }
}

TEST_CASE("graph partition split sums back to the matrix") {
  Graph graph = erdos_renyi(6, 0.5, 1.0, 3.0, 13);
  auto instance = gen_graph_partition(graph, 2.5);
  REQUIRE(instance.split().has_value());
  const auto& split = *instance.split();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      CHECK(split.objective.at(i, j) + split.constraint.at(i, j) ==
            doctest::Approx(instance.q().at(i, j)).epsilon(1e-12));
    }
  }
  CHECK(split.objective_offset + split.constraint_offset ==
        doctest::Approx(instance.offset()).epsilon(1e-12));
}

TEST_CASE("set cover minimizers select covering families") {
  SetCoverInput input;
  input.num_elements = 4;
  input.sets = {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {1}};
  validate_set_cover(input);
  auto instance = gen_set_cover(input, static_cast<double>(input.sets.size()) + 1.0);
  const int num_sets = static_cast<int>(input.sets.size());
  CHECK(set_cover_num_selector_vars(input) == num_sets);
  auto best = enumerate_min(instance);
  REQUIRE(!best.minimizers.empty());
  for (const auto& bits : best.minimizers) {
    std::vector<int> covered(input.num_elements, 0);
    for (int s = 0; s < num_sets; ++s) {
      if (bits[s]) {
        for (int e : input.sets[s]) covered[e] = 1;
      }
    }
    for (int e = 0; e < input.num_elements; ++e) {
      CHECK(covered[e] == 1);
    }
  }
  // This system needs two sets; the optimum energy equals that count.
  CHECK(best.min_energy == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("random set cover always covers every element") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto input = random_set_cover(6, 9, 0.25, seed);
    CHECK(input.num_elements == 6);
    CHECK(input.sets.size() == std::size_t{9});
    std::vector<int> covered(6, 0);
    for (const auto& s : input.sets) {
      for (int e : s) covered[e] = 1;
    }
    for (int e = 0; e < 6; ++e) {
      CHECK(covered[e] == 1);
    }
  }
}

TEST_CASE("set cover validation rejects malformed systems") {
  SetCoverInput bad;
  bad.num_elements = 3;
  bad.sets = {{0, 7}};
  CHECK_THROWS_AS(validate_set_cover(bad), Error);
  SetCoverInput uncovered;
  uncovered.num_elements = 3;
  uncovered.sets = {{0, 1}};
  CHECK_THROWS_AS(validate_set_cover(uncovered), Error);
}

TEST_CASE("synthetic generator is deterministic per seed") {
  auto a = gen_synthetic(10, 0.0, 2.0, 77);
  auto b = gen_synthetic(10, 0.0, 2.0, 77);
  auto c = gen_synthetic(10, 0.0, 2.0, 78);
  CHECK(a.q() == b.q());
  CHECK(!(a.q() == c.q()));
  CHECK(a.label() == "synthetic-n10-s77");
  CHECK(a.family() == "synthetic");
}

TEST_CASE("erdos_renyi graphs are simple and deterministic") {
  Graph g = erdos_renyi(12, 0.3, 1.0, 5.0, 21);
  validate_graph(g);
  Graph g2 = erdos_renyi(12, 0.3, 1.0, 5.0, 21);
  CHECK(g.edges.size() == g2.edges.size());
  for (const Edge& e : g.edges) {
    CHECK(e.u < e.v);
    CHECK(e.weight >= 1.0);
    CHECK(e.weight <= 5.0);
  }
}

TEST_CASE("spec json covers every family and rejects unknown ones") {
  auto syn = generate_from_spec_json(R"({"family":"synthetic","n":6,"seed":1})");
  CHECK(syn.n() == 6);
  auto mc = generate_from_spec_json(R"({"family":"maxcut","n":8,"p":0.4,"seed":2})");
  CHECK(mc.n() == 8);
  CHECK(mc.family() == "maxcut");
  auto gp = generate_from_spec_json(R"({"family":"graph_partition","n":8,"gamma":3.0,"seed":2})");
  CHECK(gp.cardinality().has_value());
  auto np = generate_from_spec_json(R"({"family":"number_partition","n":6,"seed":4})");
  CHECK(np.n() == 6);
  auto np2 = generate_from_spec_json(R"({"family":"number_partition","values":[3,5,8]})");
  CHECK(np2.n() == 3);
  auto sc = generate_from_spec_json(
      R"({"family":"set_cover","num_elements":4,"num_sets":6,"seed":5})");
  CHECK(sc.n() >= 6);

  CHECK_THROWS_AS(generate_from_spec_json(R"({"family":"nope","n":4,"seed":1})"), Error);
  CHECK_THROWS_AS(generate_from_spec_json("not json"), Error);
  CHECK_THROWS_AS(generate_from_spec_json(R"({"family":"synthetic","n":6})"), Error);
}

TEST_CASE("instance json round trip preserves everything") {
  auto instance = generate_from_spec_json(
      R"({"family":"graph_partition","n":7,"p":0.5,"gamma":2.0,"seed":9})");
  auto j = instance_to_json(instance);
  auto back = instance_from_json(j);
  CHECK(back.n() == instance.n());
  CHECK(back.label() == instance.label());
  CHECK(back.family() == instance.family());
  CHECK(back.q() == instance.q());
  CHECK(back.offset() == instance.offset());
  REQUIRE(back.split().has_value());
  CHECK(back.split()->constraint == instance.split()->constraint);
  CHECK(back.cardinality().has_value());
  CHECK(back.source_json() == instance.source_json());

  // Off-diagonal JSON entries carry the full coupling (matrix value doubled).
  bool checked = false;
  for (const auto& entry : j.at("entries")) {
    int i = entry.at(0).get<int>();
    int jj = entry.at(1).get<int>();
    if (i != jj) {
      CHECK(entry.at(2).get<double>() ==
            doctest::Approx(2.0 * instance.q().at(i, jj)).epsilon(1e-12));
      checked = true;
      break;
    }
  }
  CHECK(checked);
}

TEST_CASE("minimal instance json loads without optional keys") {
  auto instance = instance_from_json(
      nlohmann::json::parse(R"({"n":2,"label":"tiny","entries":[[0,0,-1.0],[0,1,2.0]]})"));
  CHECK(instance.n() == 2);
  CHECK(instance.label() == "tiny");
  std::vector<std::uint8_t> ones{1, 1};
  CHECK(evaluate(instance, ones) == doctest::Approx(1.0));
  CHECK_FALSE(instance.split().has_value());
}

TEST_CASE("save and load work through the filesystem") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "qvar_test_io";
  fs::create_directories(dir);
  auto path = (dir / "instance.json").string();
  auto instance = gen_synthetic(5, 0.0, 1.0, 123);
  save_instance(instance, path);
  auto back = load_instance(path);
  CHECK(back.q() == instance.q());
  CHECK(back.label() == instance.label());
  fs::remove_all(dir);

  CHECK_THROWS_AS(load_instance((dir / "missing.json").string()), Error);
}

TEST_CASE("graph and set system json round trips") {
  Graph g = erdos_renyi(6, 0.5, 1.0, 2.0, 3);
  auto back = graph_from_json(graph_to_json(g));
  CHECK(back.num_vertices == g.num_vertices);
  REQUIRE(back.edges.size() == g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(back.edges[i].u == g.edges[i].u);
    CHECK(back.edges[i].v == g.edges[i].v);
    CHECK(back.edges[i].weight == g.edges[i].weight);
  }

  auto sc = random_set_cover(5, 7, 0.3, 2);
  auto sc_back = set_cover_from_json(set_cover_to_json(sc));
  CHECK(sc_back.num_elements == sc.num_elements);
  CHECK(sc_back.sets == sc.sets);
}
