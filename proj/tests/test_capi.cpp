// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qvar developers
//
// Exercises the C API through the shared library exactly as an external
// consumer would: opaque handles, status codes, JSON strings, and the
// thread-local error message. No internal C++ symbols are visible here; the
// version script hides everything but qv_*.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qvar/qvar.h"

namespace {

using nlohmann::json;

// Owners so early CHECK failures do not leak API allocations.
struct StrOut {
  char* p = nullptr;
  ~StrOut() { qv_string_free(p); }
  json parsed() const { return json::parse(std::string(p ? p : "null")); }
};

struct InstOut {
  qv_instance* p = nullptr;
  ~InstOut() { qv_instance_free(p); }
};

constexpr const char* kSpec =
    R"({"family": "synthetic", "n": 6, "sigma2": 2.0, "seed": 3})";

std::filesystem::path temp_file(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "qvar-capi-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("version and error strings") {
  CHECK(std::string(qv_version()) == "0.1.0");
  CHECK(qv_last_error() != nullptr);
  qv_string_free(nullptr);
  qv_instance_free(nullptr);
}

TEST_CASE("generate, inspect, serialize round trip") {
  InstOut inst;
  REQUIRE(qv_generate(kSpec, &inst.p) == QV_OK);
  CHECK(std::string(qv_last_error()).empty());

  int n = 0;
  REQUIRE(qv_instance_num_vars(inst.p, &n) == QV_OK);
  CHECK(n == 6);

  StrOut text;
  REQUIRE(qv_instance_to_json(inst.p, &text.p) == QV_OK);
  json doc = text.parsed();
  CHECK(doc["n"] == 6);
  CHECK(doc.contains("entries"));

  InstOut again;
  REQUIRE(qv_instance_from_json(text.p, &again.p) == QV_OK);
  std::vector<std::uint8_t> bits = {1, 0, 1, 1, 0, 0};
  double e1 = 0.0;
  double e2 = 0.0;
  REQUIRE(qv_evaluate(inst.p, bits.data(), bits.size(), &e1) == QV_OK);
  REQUIRE(qv_evaluate(again.p, bits.data(), bits.size(), &e2) == QV_OK);
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-12));
}

TEST_CASE("flip delta matches an explicit double evaluation") {
  InstOut inst;
  REQUIRE(qv_generate(kSpec, &inst.p) == QV_OK);
  std::vector<std::uint8_t> bits = {0, 1, 1, 0, 1, 0};
  for (int i = 0; i < 6; ++i) {
    double before = 0.0;
    double after = 0.0;
    double delta = 0.0;
    REQUIRE(qv_evaluate(inst.p, bits.data(), bits.size(), &before) == QV_OK);
    REQUIRE(qv_flip_delta(inst.p, bits.data(), bits.size(), i, &delta) == QV_OK);
    bits[i] ^= 1u;
    REQUIRE(qv_evaluate(inst.p, bits.data(), bits.size(), &after) == QV_OK);
    bits[i] ^= 1u;
    CHECK(delta == doctest::Approx(after - before).epsilon(1e-12));
  }
}

TEST_CASE("invalid arguments set a message and the right status") {
  CHECK(qv_generate(nullptr, nullptr) == QV_ERROR_INVALID_ARGUMENT);
  CHECK(!std::string(qv_last_error()).empty());

  InstOut inst;
  CHECK(qv_generate("not json at all", &inst.p) == QV_ERROR_INVALID_ARGUMENT);
  CHECK(inst.p == nullptr);

  double out = 0.0;
  CHECK(qv_evaluate(nullptr, nullptr, 0, &out) == QV_ERROR_INVALID_ARGUMENT);

  REQUIRE(qv_generate(kSpec, &inst.p) == QV_OK);
  std::vector<std::uint8_t> short_bits = {1, 0};
  CHECK(qv_evaluate(inst.p, short_bits.data(), short_bits.size(), &out) ==
        QV_ERROR_INVALID_ARGUMENT);
  CHECK(qv_flip_delta(inst.p, short_bits.data(), short_bits.size(), 0, &out) ==
        QV_ERROR_INVALID_ARGUMENT);

  StrOut text;
  CHECK(qv_solve(inst.p, "warp_drive", nullptr, &text.p) == QV_ERROR_INVALID_ARGUMENT);
  CHECK(qv_solve(inst.p, "sa", "{\"mystery_knob\": 1}", &text.p) ==
        QV_ERROR_INVALID_ARGUMENT);
  CHECK(qv_instance_num_vars(inst.p, nullptr) == QV_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("solver and landscape entry points return structured JSON") {
  InstOut inst;
  REQUIRE(qv_generate(kSpec, &inst.p) == QV_OK);

  StrOut solved;
  REQUIRE(qv_solve(inst.p, "brute_force", nullptr, &solved.p) == QV_OK);
  json outcome = solved.parsed();
  CHECK(outcome["solver"] == "brute_force");
  CHECK(outcome["best_bits"].size() == 6);
  CHECK(outcome["success_prob"] == 1.0);

  StrOut landscape;
  REQUIRE(qv_gradient_variance(inst.p, 400, 7, 1, nullptr, &landscape.p) == QV_OK);
  json report = landscape.parsed();
  CHECK(report["sigma_grad"].get<double>() > 0.0);
  CHECK(report["per_var"].size() == 6);

  StrOut raw;
  REQUIRE(qv_gradient_variance(inst.p, 400, 7, 1, "raw", &raw.p) == QV_OK);
  CHECK(raw.parsed()["sigma2_grad"].get<double>() ==
        doctest::Approx(6.0 * report["sigma2_grad"].get<double>()).epsilon(1e-12));
  CHECK(qv_gradient_variance(inst.p, 400, 7, 1, "sideways", &raw.p) ==
        QV_ERROR_INVALID_ARGUMENT);

  StrOut scan;
  REQUIRE(qv_landscape_scan(inst.p, &scan.p) == QV_OK);
  json scanned = scan.parsed();
  CHECK(scanned["min_energy"].get<double>() ==
        doctest::Approx(outcome["best_energy"].get<double>()).epsilon(1e-12));
}

TEST_CASE("capacity errors surface through the status code") {
  InstOut big;
  REQUIRE(qv_generate(
              R"({"family": "synthetic", "n": 25, "sigma2": 1.0, "seed": 1})",
              &big.p) == QV_OK);
  StrOut out;
  CHECK(qv_landscape_scan(big.p, &out.p) == QV_ERROR_CAPACITY_EXCEEDED);
  CHECK(qv_solve(big.p, "brute_force", nullptr, &out.p) == QV_ERROR_CAPACITY_EXCEEDED);
  CHECK(!std::string(qv_last_error()).empty());
}

TEST_CASE("reformulate returns the transformed instance and trace") {
  InstOut inst;
  REQUIRE(qv_generate(
              R"({"family": "maxcut", "n": 8, "p": 0.5, "seed": 4})",
              &inst.p) == QV_OK);
  StrOut out;
  REQUIRE(qv_reformulate(inst.p, R"({"max_rounds": 2, "num_samples": 200, "seed": 5})",
                         &out.p) == QV_OK);
  json result = out.parsed();
  CHECK(result.contains("instance"));
  CHECK(result.contains("steps"));
  CHECK(result["semantics"]["preserved"] == true);
  CHECK(qv_reformulate(inst.p, R"({"rounds": 2})", &out.p) ==
        QV_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("advisor scalars and fit statuses") {
  double out = 0.0;
  REQUIRE(qv_tunneling_probability(1.0, 2.1, &out) == QV_OK);
  CHECK(out == doctest::Approx(std::exp(-2.1)).epsilon(1e-12));
  REQUIRE(qv_thermal_probability(7.0, 1.0, &out) == QV_OK);
  CHECK(out == doctest::Approx(std::exp(-7.0)).epsilon(1e-12));
  REQUIRE(qv_critical_sigma(2.1, 1.0, 7.0, &out) == QV_OK);
  CHECK(out == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(qv_tunneling_probability(-1.0, 2.1, &out) == QV_ERROR_INVALID_ARGUMENT);

  double sigmas[] = {0.5, 1.0};
  double probs[] = {0.1, 0.2};
  StrOut fit;
  CHECK(qv_fit_wkb(sigmas, probs, 2, &fit.p) == QV_ERROR_INSUFFICIENT_DATA);

  double more_sigmas[] = {0.2, 0.3, 0.5, 0.8};
  double more_probs[4];
  for (int i = 0; i < 4; ++i) more_probs[i] = std::exp(-2.1 / more_sigmas[i]);
  REQUIRE(qv_fit_wkb(more_sigmas, more_probs, 4, &fit.p) == QV_OK);
  CHECK(fit.parsed()["slope"].get<double>() == doctest::Approx(-2.1).epsilon(1e-9));

  StrOut rec;
  REQUIRE(qv_recommend(0.42, 100, &rec.p) == QV_OK);
  CHECK(rec.parsed()["verdict"] == "quantum_recommended");
}

TEST_CASE("file round trip and io errors") {
  InstOut inst;
  REQUIRE(qv_generate(kSpec, &inst.p) == QV_OK);
  auto path = temp_file("roundtrip.json");
  REQUIRE(qv_instance_save(inst.p, path.string().c_str()) == QV_OK);

  InstOut loaded;
  REQUIRE(qv_instance_load(path.string().c_str(), &loaded.p) == QV_OK);
  std::vector<std::uint8_t> bits = {1, 1, 0, 0, 1, 0};
  double a = 0.0;
  double b = 0.0;
  REQUIRE(qv_evaluate(inst.p, bits.data(), bits.size(), &a) == QV_OK);
  REQUIRE(qv_evaluate(loaded.p, bits.data(), bits.size(), &b) == QV_OK);
  CHECK(a == b);
  std::filesystem::remove(path);

  InstOut missing;
  CHECK(qv_instance_load("/nonexistent/q.json", &missing.p) == QV_ERROR_IO);
  CHECK(!std::string(qv_last_error()).empty());
}

TEST_CASE("a small benchmark plan runs through the C API") {
  json plan = {
      {"landscape", {{"num_samples", 64}, {"seed", 2}}},
      {"generators",
       {{{"family", "synthetic"}, {"sizes", {6}}, {"seeds", {1, 2}},
         {"params", {{"sigma2", 2.0}}}}}},
      {"solvers",
       {{{"id", "sgd"},
         {"config", {{"max_steps", 30}, {"no_improve_stop", 10}, {"trajectories", 3}}}}}},
      {"reports", json::array()},
  };
  auto dir = std::filesystem::temp_directory_path() / "qvar-capi-bench";
  std::filesystem::remove_all(dir);

  StrOut out;
  REQUIRE(qv_bench_run(plan.dump().c_str(), dir.string().c_str(), 1, &out.p) == QV_OK);
  json result = out.parsed();
  CHECK(result["rows"] == 2);
  CHECK(result["errors"].empty());
  CHECK(std::filesystem::exists(dir / "results.csv"));

  StrOut rebuilt;
  REQUIRE(qv_bench_report(dir.string().c_str(), &rebuilt.p) == QV_OK);
  CHECK(std::filesystem::exists(dir / "variance_curve.csv"));
  CHECK(qv_bench_run("{", dir.string().c_str(), 1, &out.p) ==
        QV_ERROR_INVALID_ARGUMENT);
}
