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
#include "qvar/ising.hpp"
#include "qvar/qubo.hpp"
#include "qvar/rng.hpp"
#include "support/oracles.hpp"

using namespace qvar;
using namespace qvar::testing;

namespace {

QuboInstance random_instance(int n, std::mt19937_64& rng) {
  QuboInstance instance(n);
  std::normal_distribution<double> coeff(0.0, 2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      instance.q().add(i, j, coeff(rng));
    }
  }
  instance.set_offset(coeff(rng));
  return instance;
}

}  // namespace

TEST_CASE("symmetric matrix stores couplings half per side") {
  SymMatrix m(3);
  m.add(0, 1, 4.0);
  CHECK(m.at(0, 1) == doctest::Approx(4.0));
  CHECK(m.at(1, 0) == doctest::Approx(4.0));
  m.add(1, 1, 2.5);
  CHECK(m.at(1, 1) == doctest::Approx(2.5));
  m.set(0, 2, -1.0);
  CHECK(m.at(2, 0) == doctest::Approx(-1.0));
}

TEST_CASE("from_entries applies the exchange convention") {
  std::vector<Entry> entries = {{0, 0, 1.5}, {0, 1, 4.0}, {1, 1, -2.0}};
  auto instance = QuboInstance::from_entries(2, entries);
  // Diagonal as given, off-diagonal halved per side.
  CHECK(instance.q().at(0, 0) == doctest::Approx(1.5));
  CHECK(instance.q().at(1, 1) == doctest::Approx(-2.0));
  CHECK(instance.q().at(0, 1) == doctest::Approx(2.0));
  // x = (1, 1): E = 1.5 - 2.0 + 4.0
  std::vector<std::uint8_t> ones{1, 1};
  CHECK(evaluate(instance, ones) == doctest::Approx(3.5));
}

TEST_CASE("from_entries accumulates duplicates and rejects bad indices") {
  std::vector<Entry> dup = {{0, 1, 1.0}, {0, 1, 2.0}};
  auto instance = QuboInstance::from_entries(2, dup);
  CHECK(instance.q().at(0, 1) == doctest::Approx(1.5));

  std::vector<Entry> lower = {{1, 0, 1.0}};
  CHECK_THROWS_AS(QuboInstance::from_entries(2, lower), Error);
  std::vector<Entry> range = {{0, 5, 1.0}};
  CHECK_THROWS_AS(QuboInstance::from_entries(2, range), Error);
}

TEST_CASE("entries round-trips the matrix") {
  std::mt19937_64 rng(7);
  auto instance = random_instance(5, rng);
  auto entries = instance.entries();
  auto rebuilt = QuboInstance::from_entries(5, entries);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(rebuilt.q().at(i, j) == instance.q().at(i, j));
    }
  }
}

TEST_CASE("evaluate matches the quadratic form oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    auto instance = random_instance(6, rng);
    for (int rep = 0; rep < 8; ++rep) {
      auto bits = random_bits(rng, 6);
      CHECK(evaluate(instance, bits) == doctest::Approx(naive_energy(instance, bits)).epsilon(1e-12));
    }
  }
}

TEST_CASE("evaluate rejects wrong lengths") {
  std::mt19937_64 rng(3);
  auto instance = random_instance(4, rng);
  std::vector<std::uint8_t> bits{0, 1};
  CHECK_THROWS_AS(evaluate(instance, bits), Error);
}

TEST_CASE("flip_delta matches the two-evaluation oracle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    auto instance = random_instance(7, rng);
    auto bits = random_bits(rng, 7);
    for (int i = 0; i < 7; ++i) {
      CHECK(flip_delta(instance, bits, i) ==
            doctest::Approx(naive_flip_delta(instance, bits, i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("incremental field updates track a flip sequence") {
  std::mt19937_64 rng(17);
  auto instance = random_instance(8, rng);
  auto bits = random_bits(rng, 8);
  std::vector<double> fields(8);
  local_fields(instance, bits, fields);
  for (int step = 0; step < 50; ++step) {
    int target = static_cast<int>(rng() % 8);
    bits[target] ^= 1u;
    update_fields_after_flip(instance, bits, target, fields);
    std::vector<double> fresh(8);
    local_fields(instance, bits, fresh);
    for (int i = 0; i < 8; ++i) {
      CHECK(fields[i] == doctest::Approx(fresh[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("ising round trip preserves energies") {
  std::mt19937_64 rng(19);
  auto instance = random_instance(6, rng);
  auto conv = qubo_to_ising(instance);
  for (int rep = 0; rep < 20; ++rep) {
    auto bits = random_bits(rng, 6);
    std::vector<int> spins(6);
    for (int i = 0; i < 6; ++i) {
      spins[i] = bits[i] ? 1 : -1;
    }
    CHECK(ising_energy(conv.ising, spins) + conv.offset ==
          doctest::Approx(evaluate(instance, bits)).epsilon(1e-10));
  }
  auto back = ising_to_qubo(conv.ising);
  for (int rep = 0; rep < 20; ++rep) {
    auto bits = random_bits(rng, 6);
    std::vector<int> spins(6);
    for (int i = 0; i < 6; ++i) {
      spins[i] = bits[i] ? 1 : -1;
    }
    CHECK(evaluate(back.qubo, bits) ==
          doctest::Approx(ising_energy(conv.ising, spins) + back.offset).epsilon(1e-10));
  }
}

TEST_CASE("validate catches a broken split") {
  std::mt19937_64 rng(23);
  auto instance = random_instance(4, rng);
  ConstraintSplit split;
  split.objective = instance.q();
  split.constraint = SymMatrix(4);
  split.objective_offset = instance.offset();
  instance.split() = split;
  CHECK_NOTHROW(instance.validate());
  instance.split()->constraint.add(0, 1, 1.0);  // no longer sums to q
  CHECK_THROWS_AS(instance.validate(), Error);
}

TEST_CASE("error codes carry their numeric values") {
  CHECK(static_cast<int>(ErrorCode::kInvalidArgument) == 2);
  CHECK(static_cast<int>(ErrorCode::kCapacityExceeded) == 3);
  CHECK(static_cast<int>(ErrorCode::kIo) == 4);
  CHECK(static_cast<int>(ErrorCode::kInsufficientData) == 5);
  CHECK(static_cast<int>(ErrorCode::kInternal) == 6);
  try {
    throw_capacity("too big");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCapacityExceeded);
    CHECK(std::string(e.what()) == "too big");
  }
}

TEST_CASE("rng streams are deterministic and decorrelated") {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.u64() == b.u64());
  }
  // Derived streams differ from the parent and from each other.
  RngStream c(derive_seed(42, 0));
  RngStream d(derive_seed(42, 1));
  CHECK(c.u64() != d.u64());

  RngStream e(7);
  for (int i = 0; i < 1000; ++i) {
    double x = e.real01();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("rng helper draws stay in range") {
  RngStream rng(99);
  for (int i = 0; i < 500; ++i) {
    auto idx = rng.index(7);
    CHECK(idx < std::size_t{7});
    int v = rng.int_in(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
  auto bits = rng.bits(130);
  CHECK(bits.size() == 130);
  for (auto b : bits) {
    CHECK((b == 0 || b == 1));
  }
}

TEST_CASE("mix_seed_with_string separates labels") {
  auto a = mix_seed_with_string(5, "alpha");
  auto b = mix_seed_with_string(5, "beta");
  auto a2 = mix_seed_with_string(5, "alpha");
  CHECK(a == a2);
  CHECK(a != b);
}
