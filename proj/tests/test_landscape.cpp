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
#include "support/oracles.hpp"

using namespace qvar;
using namespace qvar::testing;

TEST_CASE("gradient equals the signed flip delta") {
  std::mt19937_64 rng(41);
  auto instance = gen_synthetic(8, 0.0, 2.0, 41);
  for (int rep = 0; rep < 20; ++rep) {
    auto bits = random_bits(rng, 8);
    for (int i = 0; i < 8; ++i) {
      CHECK(gradient_at(instance, bits, i) ==
            doctest::Approx(naive_flip_delta(instance, bits, i)).epsilon(1e-10));
      // Closed form: the delta is (1 - 2 x_i) times the local field.
      const double field = analytic_gradient_at(instance, bits, i);
      CHECK(gradient_at(instance, bits, i) ==
            doctest::Approx((1.0 - 2.0 * static_cast<double>(bits[i])) * field).epsilon(1e-10));
    }
  }
}

TEST_CASE("variance of a diagonal-only instance is zero") {
  // With no couplings every gradient component has constant magnitude
  // |a_i|, and its sign never varies with the other bits, so the sampled
  // variance per variable is exactly... not zero: the sign flips with
  // x_i itself. Pin the analytic value instead: component i takes values
  // +a_i and -a_i with equal probability, so Var = a_i^2.
  QuboInstance instance(3);
  instance.q().set(0, 0, 1.0);
  instance.q().set(1, 1, -2.0);
  instance.q().set(2, 2, 0.5);
  LandscapeOptions options;
  options.num_samples = 4000;
  options.seed = 9;
  auto report = gradient_variance(instance, options);
  // E[g_i] = 0, E[g_i^2] = a_i^2 -> per-variable variance a_i^2.
  CHECK(report.per_var[0] == doctest::Approx(1.0).epsilon(0.08));
  CHECK(report.per_var[1] == doctest::Approx(4.0).epsilon(0.08));
  CHECK(report.per_var[2] == doctest::Approx(0.25).epsilon(0.08));
  const double mean = (report.per_var[0] + report.per_var[1] + report.per_var[2]) / 3.0;
  CHECK(report.sigma2_grad == doctest::Approx(mean).epsilon(1e-12));
  CHECK(report.sigma_grad == doctest::Approx(std::sqrt(report.sigma2_grad)).epsilon(1e-12));
}

TEST_CASE("per-variable and raw normalizations differ by the size factor") {
  auto instance = gen_synthetic(6, 0.0, 2.0, 17);
  LandscapeOptions options;
  options.num_samples = 500;
  options.seed = 3;
  auto per_var = gradient_variance(instance, options);
  options.normalization = Normalization::kRaw;
  auto raw = gradient_variance(instance, options);
  CHECK(raw.sigma2_grad == doctest::Approx(6.0 * per_var.sigma2_grad).epsilon(1e-9));
}

TEST_CASE("estimate matches a direct two-pass variance") {
  auto instance = gen_synthetic(5, 0.0, 2.0, 23);
  std::mt19937_64 rng(23);
  std::vector<std::vector<std::uint8_t>> samples;
  for (int s = 0; s < 300; ++s) {
    samples.push_back(random_bits(rng, 5));
  }
  auto report = gradient_variance_from_samples(instance, samples, Normalization::kPerVariable);
  // Two-pass oracle per variable.
  for (int i = 0; i < 5; ++i) {
    double mean = 0.0;
    for (const auto& bits : samples) {
      mean += naive_flip_delta(instance, bits, i);
    }
    mean /= static_cast<double>(samples.size());
    double m2 = 0.0;
    for (const auto& bits : samples) {
      const double g = naive_flip_delta(instance, bits, i);
      m2 += (g - mean) * (g - mean);
    }
    const double var = m2 / static_cast<double>(samples.size() - 1);
    CHECK(report.per_var[i] == doctest::Approx(var).epsilon(1e-9));
  }
}

TEST_CASE("estimate is independent of the thread count") {
  auto instance = gen_synthetic(12, 0.0, 3.0, 51);
  LandscapeOptions options;
  options.num_samples = 700;
  options.seed = 8;
  options.threads = 1;
  auto one = gradient_variance(instance, options);
  options.threads = 4;
  auto four = gradient_variance(instance, options);
  CHECK(one.sigma2_grad == four.sigma2_grad);  // bitwise, not approximate
  for (int i = 0; i < 12; ++i) {
    CHECK(one.per_var[i] == four.per_var[i]);
  }
}

TEST_CASE("estimate is deterministic per seed and sensitive to it") {
  auto instance = gen_synthetic(7, 0.0, 2.0, 5);
  LandscapeOptions options;
  options.num_samples = 200;
  options.seed = 1;
  auto a = gradient_variance(instance, options);
  auto b = gradient_variance(instance, options);
  CHECK(a.sigma_grad == b.sigma_grad);
  options.seed = 2;
  auto c = gradient_variance(instance, options);
  CHECK(a.sigma_grad != c.sigma_grad);
}

TEST_CASE("sample count below two is rejected") {
  auto instance = gen_synthetic(4, 0.0, 1.0, 1);
  LandscapeOptions options;
  options.num_samples = 1;
  CHECK_THROWS_AS(gradient_variance(instance, options), Error);
}

TEST_CASE("landscape scan agrees with full enumeration") {
  std::mt19937_64 seed_rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    auto instance = gen_synthetic(8, 0.0, 2.0, 100 + trial);
    auto scan = landscape_scan(instance);
    auto oracle = enumerate_min(instance);
    CHECK(scan.min_energy == doctest::Approx(oracle.min_energy).epsilon(1e-10));
    REQUIRE(scan.minimizers.size() == oracle.minimizers.size());
    CHECK(scan.minimizers == oracle.minimizers);
    // Energy table spot checks against the oracle.
    for (int rep = 0; rep < 10; ++rep) {
      std::size_t mask = seed_rng() & ((std::size_t{1} << 8) - 1);
      CHECK(scan.energies[mask] ==
            doctest::Approx(naive_energy(instance, bits_of_mask(mask, 8))).epsilon(1e-9));
    }
  }
}

TEST_CASE("scan counts local minima like the definition says") {
  // Count configurations where no single flip lowers the energy, using the
  // oracle delta directly.
  auto instance = gen_synthetic(6, 0.0, 2.0, 202);
  auto scan = landscape_scan(instance);
  long long expected = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << 6); ++mask) {
    auto bits = bits_of_mask(mask, 6);
    bool local_min = true;
    for (int i = 0; i < 6; ++i) {
      if (naive_flip_delta(instance, bits, i) < 0.0) {
        local_min = false;
        break;
      }
    }
    if (local_min) ++expected;
  }
  CHECK(scan.local_minima == expected);
}

TEST_CASE("scan rejects oversized instances") {
  QuboInstance big(21);
  CHECK_THROWS_AS(landscape_scan(big), Error);
  try {
    landscape_scan(big);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCapacityExceeded);
  }
}
