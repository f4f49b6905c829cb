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
#include <random>
#include <vector>

#include "qvar/error.hpp"
#include "qvar/generators.hpp"
#include "qvar/landscape.hpp"
#include "qvar/qubo.hpp"
#include "qvar/reformulate.hpp"
#include "qvar/solvers.hpp"
#include "support/oracles.hpp"

using namespace qvar;
using namespace qvar::testing;

TEST_CASE("variable map lifts and projects consistently") {
  VariableMap map(3);
  map.push_flip(1);
  map.push_aux(0, 2);
  CHECK(map.original_n() == 3);
  CHECK(map.current_n() == 4);

  for (std::size_t mask = 0; mask < 8; ++mask) {
    auto original = bits_of_mask(mask, 3);
    auto lifted = map.forward(original);
    REQUIRE(lifted.size() == std::size_t{4});
    CHECK(lifted[0] == original[0]);
    CHECK(lifted[1] == (original[1] ^ 1u));
    CHECK(lifted[2] == original[2]);
    // Aux parents are read in current coordinates at push time; position 0
    // and 2 were unflipped then, so the product is over the original values.
    CHECK(lifted[3] == (original[0] & original[2]));
    CHECK(map.project(lifted) == original);
  }
}

TEST_CASE("flip parity accumulates per position") {
  VariableMap map(2);
  map.push_flip(0);
  map.push_aux(0, 1);
  map.push_flip(0);
  map.push_flip(1);
  // After op 0 (the first flip): position 0 sees one more flip later.
  CHECK(map.flip_parity_after(0, 1) == 1);
  CHECK(map.flip_parity_after(1, 1) == 1);
  // After the last op nothing changes any more.
  CHECK(map.flip_parity_after(0, 4) == 0);
  CHECK(map.flip_parity_after(1, 4) == 0);
}

TEST_CASE("identity reformulation reports identity semantics") {
  auto instance = gen_synthetic(6, 0.0, 2.0, 71);
  ReformulateParams params;
  params.max_rounds = 0;
  auto result = reformulate(instance, params);
  CHECK(result.trace.empty());
  CHECK(result.instance.q() == instance.q());
  CHECK(result.semantics.preserved);
  CHECK(result.semantics.mode == "identity");
  CHECK(result.sigma_final == doctest::Approx(result.sigma_initial));
}

TEST_CASE("every adopted step raises the shared-seed ruggedness estimate") {
  auto instance = generate_from_spec_json(R"({"family":"maxcut","n":8,"p":0.5,"seed":33})");
  ReformulateParams params;
  params.num_samples = 400;
  params.seed = 5;
  params.max_rounds = 4;
  auto result = reformulate(instance, params);
  for (const auto& step : result.trace) {
    CHECK(step.sigma_after > step.sigma_before);
  }
  if (!result.trace.empty()) {
    CHECK(result.sigma_final > result.sigma_initial);
    CHECK(result.semantics.preserved);
  }
}

TEST_CASE("reformulated optima project back onto original optima") {
  auto instance = generate_from_spec_json(R"({"family":"maxcut","n":9,"p":0.5,"seed":12})");
  auto original_best = solve_brute_force(instance);
  ReformulateParams params;
  params.num_samples = 300;
  params.seed = 2;
  params.max_rounds = 6;
  auto result = reformulate(instance, params);
  REQUIRE(result.instance.n() <= kBruteForceCapacity);
  auto transformed_best = solve_brute_force(result.instance);
  auto projected = result.map.project(transformed_best.best_bits);
  CHECK(evaluate(instance, projected) ==
        doctest::Approx(original_best.best_energy).epsilon(1e-9));
}

TEST_CASE("aux decomposition grows the instance and records parents") {
  auto instance = generate_from_spec_json(R"({"family":"number_partition","n":7,"seed":8})");
  ReformulateParams params;
  params.strategies = {Strategy::kAuxDecomposition};
  params.num_samples = 300;
  params.seed = 1;
  params.max_rounds = 3;
  auto result = reformulate(instance, params);
  if (!result.trace.empty()) {
    CHECK(result.instance.n() == instance.n() + static_cast<int>(result.trace.size()));
    CHECK(result.instance.aux_vars().size() == result.trace.size());
    CHECK(result.map.current_n() == result.instance.n());
    for (const auto& aux : result.instance.aux_vars()) {
      CHECK(aux.z >= instance.n());
      CHECK(aux.parent_a < instance.n());
      CHECK(aux.parent_b < instance.n());
    }
    CHECK(result.semantics.preserved);
  }
}

TEST_CASE("penalty scaling multiplies the constraint block exactly") {
  auto instance =
      generate_from_spec_json(R"({"family":"graph_partition","n":8,"gamma":2.0,"seed":14})");
  REQUIRE(instance.split().has_value());
  ReformulateParams params;
  params.strategies = {Strategy::kPenaltyScaling};
  params.num_samples = 300;
  params.seed = 3;
  params.max_rounds = 1;
  auto result = reformulate(instance, params);
  if (!result.trace.empty()) {
    REQUIRE(result.instance.split().has_value());
    const auto& before = instance.split()->constraint;
    const auto& after = result.instance.split()->constraint;
    for (int i = 0; i < instance.n(); ++i) {
      for (int j = 0; j < instance.n(); ++j) {
        CHECK(after.at(i, j) == doctest::Approx(params.penalty_scale * before.at(i, j))
                                    .epsilon(1e-12));
        // The objective block is untouched.
        CHECK(result.instance.split()->objective.at(i, j) ==
              doctest::Approx(instance.split()->objective.at(i, j)).epsilon(1e-12));
      }
    }
    REQUIRE(result.instance.cardinality().has_value());
    CHECK(result.instance.cardinality()->gamma ==
          doctest::Approx(params.penalty_scale * instance.cardinality()->gamma).epsilon(1e-12));
    CHECK(result.semantics.preserved);
    // Scaling never moves the feasible optimum: both minimize to balanced
    // cuts of the same objective value.
    auto before_best = solve_brute_force(instance);
    auto after_best = solve_brute_force(result.instance);
    auto projected = result.map.project(after_best.best_bits);
    CHECK(evaluate(instance, projected) ==
          doctest::Approx(before_best.best_energy).epsilon(1e-9));
  }
}

TEST_CASE("substitution keeps the variable count and flips coordinates") {
  auto instance = gen_synthetic(7, -0.5, 2.0, 19);
  ReformulateParams params;
  params.strategies = {Strategy::kSubstitution};
  params.num_samples = 300;
  params.seed = 4;
  params.max_rounds = 2;
  auto result = reformulate(instance, params);
  CHECK(result.instance.n() == instance.n());
  if (!result.trace.empty()) {
    bool has_flip = false;
    for (const auto& op : result.map.ops()) {
      if (op.kind == MapOp::Kind::kFlip) has_flip = true;
    }
    CHECK(has_flip);
    CHECK(result.semantics.preserved);
    // Energies correspond configuration by configuration.
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 20; ++rep) {
      auto bits = random_bits(rng, instance.n());
      auto lifted = result.map.forward(bits);
      CHECK(evaluate(result.instance, lifted) ==
            doctest::Approx(evaluate(instance, bits)).epsilon(1e-9));
    }
  }
}

TEST_CASE("relaxation needs a cardinality tag") {
  auto untagged = gen_synthetic(6, 0.0, 2.0, 25);
  ReformulateParams params;
  params.strategies = {Strategy::kRelaxation};
  params.num_samples = 200;
  params.seed = 5;
  params.max_rounds = 2;
  auto result = reformulate(untagged, params);
  CHECK(result.trace.empty());  // nothing applicable, clean no-op

  auto tagged =
      generate_from_spec_json(R"({"family":"graph_partition","n":8,"gamma":3.0,"seed":6})");
  auto tagged_result = reformulate(tagged, params);
  for (const auto& step : tagged_result.trace) {
    CHECK(step.strategy == "relaxation");
    CHECK(step.sigma_after > step.sigma_before);
  }
}

TEST_CASE("semantics check accepts the identity and rejects a tampered copy") {
  auto instance = gen_synthetic(5, 0.0, 2.0, 91);
  VariableMap identity(5);
  auto ok = preserves_semantics(instance, instance, identity, SemanticsMode::kExhaustive, 100, 1);
  CHECK(ok.preserved);

  auto tampered = instance;
  tampered.q().add(0, 0, 3.0);
  auto bad =
      preserves_semantics(instance, tampered, identity, SemanticsMode::kExhaustive, 100, 1);
  CHECK_FALSE(bad.preserved);
  CHECK(!bad.detail.empty());
}

TEST_CASE("semantics check rejects an unpinned product variable") {
  // Original: E = x0 x1. Fake transform replaces the coupling with a free
  // variable z and no consistency penalty, so z = 0 undercuts every
  // configuration with x0 x1 = 1.
  QuboInstance original(2);
  original.q().set(0, 1, 0.5);  // stored half per side -> coupling 1

  QuboInstance fake(3);
  fake.q().set(2, 2, 1.0);  // energy z instead of x0 x1
  VariableMap map(2);
  map.push_aux(0, 1);
  auto report = preserves_semantics(original, fake, map, SemanticsMode::kExhaustive, 100, 1);
  CHECK_FALSE(report.preserved);
}

TEST_CASE("sampled semantics mode works on larger instances") {
  auto instance = generate_from_spec_json(R"({"family":"maxcut","n":24,"p":0.3,"seed":44})");
  ReformulateParams params;
  params.num_samples = 200;
  params.seed = 7;
  params.max_rounds = 2;
  params.semantics = SemanticsMode::kSampled;
  params.semantic_samples = 300;
  auto result = reformulate(instance, params);
  if (!result.trace.empty()) {
    CHECK(result.semantics.preserved);
    CHECK(result.semantics.mode == "sampled");
  }
}

TEST_CASE("exhaustive mode refuses oversized originals") {
  auto instance = generate_from_spec_json(R"({"family":"maxcut","n":18,"p":0.3,"seed":3})");
  VariableMap identity(18);
  CHECK_THROWS_AS(
      preserves_semantics(instance, instance, identity, SemanticsMode::kExhaustive, 10, 1),
      Error);
}

TEST_CASE("parameter validation rejects out-of-range settings") {
  auto instance = gen_synthetic(5, 0.0, 1.0, 2);
  ReformulateParams params;
  params.penalty_scale = 3.0;
  CHECK_THROWS_AS(reformulate(instance, params), Error);
  params = ReformulateParams{};
  params.max_rounds = -1;
  CHECK_THROWS_AS(reformulate(instance, params), Error);
  params = ReformulateParams{};
  params.relaxation_grid = {0.0};
  CHECK_THROWS_AS(reformulate(instance, params), Error);
  params = ReformulateParams{};
  params.num_samples = 1;
  CHECK_THROWS_AS(reformulate(instance, params), Error);
  params = ReformulateParams{};
  params.aux_lambda = 0.0;
  CHECK_THROWS_AS(reformulate(instance, params), Error);
}

TEST_CASE("strategy names are stable identifiers") {
  CHECK(std::string(strategy_name(Strategy::kPenaltyScaling)) == "penalty_scaling");
  CHECK(std::string(strategy_name(Strategy::kSubstitution)) == "substitution");
  CHECK(std::string(strategy_name(Strategy::kAuxDecomposition)) == "aux_decomposition");
  CHECK(std::string(strategy_name(Strategy::kRelaxation)) == "relaxation");
}
