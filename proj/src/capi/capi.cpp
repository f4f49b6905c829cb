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

// C boundary for the shared library. Every entry point runs its body under
// a catch-all wrapper that records the message thread-locally and maps the
// exception to a status code; no exception ever crosses extern "C".

#include "qvar/qvar.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qvar/advisor.hpp"
#include "qvar/bench.hpp"
#include "qvar/error.hpp"
#include "qvar/generators.hpp"
#include "qvar/landscape.hpp"
#include "qvar/qubo.hpp"
#include "qvar/reformulate.hpp"
#include "qvar/serialize.hpp"
#include "qvar/solvers.hpp"

struct qv_instance {
  qvar::QuboInstance impl;
};

namespace {

thread_local std::string g_last_error;

qv_status status_from(qvar::ErrorCode code) {
  switch (code) {
    case qvar::ErrorCode::kInvalidArgument:
      return QV_ERROR_INVALID_ARGUMENT;
    case qvar::ErrorCode::kCapacityExceeded:
      return QV_ERROR_CAPACITY_EXCEEDED;
    case qvar::ErrorCode::kIo:
      return QV_ERROR_IO;
    case qvar::ErrorCode::kInsufficientData:
      return QV_ERROR_INSUFFICIENT_DATA;
    case qvar::ErrorCode::kInternal:
      return QV_ERROR_INTERNAL;
  }
  return QV_ERROR_INTERNAL;
}

template <typename Fn>
qv_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return QV_OK;
  } catch (const qvar::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QV_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QV_ERROR_INTERNAL;
  }
}

// Copies a std::string into a malloc'd buffer owned by the caller.
char* dup_string(const std::string& text) {
  char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
  if (buffer == nullptr) {
    qvar::throw_internal("out of memory");
  }
  std::memcpy(buffer, text.data(), text.size() + 1);
  return buffer;
}

void require(bool ok, const char* message) {
  if (!ok) {
    qvar::throw_invalid(message);
  }
}

std::vector<std::uint8_t> copy_bits(const qv_instance* instance, const std::uint8_t* bits,
                                    size_t num_bits) {
  require(instance != nullptr, "instance must not be NULL");
  require(bits != nullptr, "bits must not be NULL");
  if (static_cast<size_t>(instance->impl.n()) != num_bits) {
    qvar::throw_invalid("bit vector length " + std::to_string(num_bits) +
                        " does not match the variable count " +
                        std::to_string(instance->impl.n()));
  }
  return std::vector<std::uint8_t>(bits, bits + num_bits);
}

std::string text_or_empty(const char* text) { return text == nullptr ? std::string() : text; }

}  // namespace

extern "C" {

const char* qv_version(void) { return "0.1.0"; }

const char* qv_last_error(void) { return g_last_error.c_str(); }

void qv_string_free(char* text) { std::free(text); }

void qv_instance_free(qv_instance* instance) { delete instance; }

qv_status qv_instance_from_json(const char* json_text, qv_instance** out_instance) {
  return guarded([&] {
    require(json_text != nullptr, "json_text must not be NULL");
    require(out_instance != nullptr, "out_instance must not be NULL");
    auto parsed = qvar::parse_json_text(json_text, "instance");
    *out_instance = new qv_instance{qvar::instance_from_json(parsed)};
  });
}

qv_status qv_instance_to_json(const qv_instance* instance, char** out_json) {
  return guarded([&] {
    require(instance != nullptr, "instance must not be NULL");
    require(out_json != nullptr, "out_json must not be NULL");
    *out_json = dup_string(qvar::instance_to_json(instance->impl).dump(2));
  });
}

qv_status qv_instance_load(const char* path, qv_instance** out_instance) {
  return guarded([&] {
    require(path != nullptr, "path must not be NULL");
    require(out_instance != nullptr, "out_instance must not be NULL");
    *out_instance = new qv_instance{qvar::load_instance(path)};
  });
}

qv_status qv_instance_save(const qv_instance* instance, const char* path) {
  return guarded([&] {
    require(instance != nullptr, "instance must not be NULL");
    require(path != nullptr, "path must not be NULL");
    qvar::save_instance(instance->impl, path);
  });
}

qv_status qv_instance_num_vars(const qv_instance* instance, int* out_n) {
  return guarded([&] {
    require(instance != nullptr, "instance must not be NULL");
    require(out_n != nullptr, "out_n must not be NULL");
    *out_n = instance->impl.n();
  });
}

qv_status qv_generate(const char* spec_json, qv_instance** out_instance) {
  return guarded([&] {
    require(spec_json != nullptr, "spec_json must not be NULL");
    require(out_instance != nullptr, "out_instance must not be NULL");
    *out_instance = new qv_instance{qvar::generate_from_spec_json(spec_json)};
  });
}

qv_status qv_evaluate(const qv_instance* instance, const uint8_t* bits, size_t num_bits,
                      double* out_energy) {
  return guarded([&] {
    require(out_energy != nullptr, "out_energy must not be NULL");
    const auto assignment = copy_bits(instance, bits, num_bits);
    *out_energy = qvar::evaluate(instance->impl, assignment);
  });
}

qv_status qv_flip_delta(const qv_instance* instance, const uint8_t* bits, size_t num_bits,
                        int index, double* out_delta) {
  return guarded([&] {
    require(out_delta != nullptr, "out_delta must not be NULL");
    const auto assignment = copy_bits(instance, bits, num_bits);
    *out_delta = qvar::flip_delta(instance->impl, assignment, index);
  });
}

qv_status qv_gradient_variance(const qv_instance* instance, int num_samples, uint64_t seed,
                               int threads, const char* normalization, char** out_report_json) {
  return guarded([&] {
    require(instance != nullptr, "instance must not be NULL");
    require(out_report_json != nullptr, "out_report_json must not be NULL");
    qvar::LandscapeOptions options;
    options.num_samples = num_samples;
    options.seed = seed;
    options.threads = threads;
    const std::string mode = text_or_empty(normalization);
    if (mode.empty() || mode == "per_variable") {
      options.normalization = qvar::Normalization::kPerVariable;
    } else if (mode == "raw") {
      options.normalization = qvar::Normalization::kRaw;
    } else {
      qvar::throw_invalid("normalization must be \"per_variable\" or \"raw\", got \"" + mode +
                          "\"");
    }
    const auto report = qvar::gradient_variance(instance->impl, options);
    *out_report_json = dup_string(qvar::landscape_report_to_json(report).dump(2));
  });
}

qv_status qv_landscape_scan(const qv_instance* instance, char** out_report_json) {
  return guarded([&] {
    require(instance != nullptr, "instance must not be NULL");
    require(out_report_json != nullptr, "out_report_json must not be NULL");
    const auto scan = qvar::landscape_scan(instance->impl);
    *out_report_json = dup_string(qvar::scan_result_to_json(scan).dump(2));
  });
}

qv_status qv_solve(const qv_instance* instance, const char* solver_id, const char* config_json,
                   char** out_result_json) {
  return guarded([&] {
    require(instance != nullptr, "instance must not be NULL");
    require(solver_id != nullptr, "solver_id must not be NULL");
    require(out_result_json != nullptr, "out_result_json must not be NULL");
    std::string config = text_or_empty(config_json);
    if (config.empty()) {
      config = "{}";
    }
    const auto outcome = qvar::solve_by_id(instance->impl, solver_id, config);
    *out_result_json = dup_string(qvar::outcome_to_json(outcome).dump(2));
  });
}

qv_status qv_reformulate(const qv_instance* instance, const char* params_json,
                         char** out_result_json) {
  return guarded([&] {
    require(instance != nullptr, "instance must not be NULL");
    require(out_result_json != nullptr, "out_result_json must not be NULL");
    std::string params_text = text_or_empty(params_json);
    if (params_text.empty()) {
      params_text = "{}";
    }
    const auto parsed = qvar::parse_json_text(params_text, "reformulation parameters");
    const auto params = qvar::reformulate_params_from_json(parsed);
    const auto result = qvar::reformulate(instance->impl, params);
    *out_result_json = dup_string(qvar::reformulation_to_json(result).dump(2));
  });
}

qv_status qv_tunneling_probability(double sigma, double alpha, double* out_probability) {
  return guarded([&] {
    require(out_probability != nullptr, "out_probability must not be NULL");
    qvar::WkbParams params;
    params.alpha = alpha;
    *out_probability = qvar::tunneling_probability(sigma, params);
  });
}

qv_status qv_thermal_probability(double delta_e, double kt, double* out_probability) {
  return guarded([&] {
    require(out_probability != nullptr, "out_probability must not be NULL");
    *out_probability = qvar::thermal_probability(delta_e, kt);
  });
}

qv_status qv_critical_sigma(double alpha, double kt, double delta_e, double* out_sigma) {
  return guarded([&] {
    require(out_sigma != nullptr, "out_sigma must not be NULL");
    qvar::WkbParams params;
    params.alpha = alpha;
    params.kt = kt;
    params.delta_e = delta_e;
    *out_sigma = qvar::critical_sigma(params);
  });
}

qv_status qv_fit_wkb(const double* sigmas, const double* success_probs, size_t num_points,
                     char** out_fit_json) {
  return guarded([&] {
    require(sigmas != nullptr, "sigmas must not be NULL");
    require(success_probs != nullptr, "success_probs must not be NULL");
    require(out_fit_json != nullptr, "out_fit_json must not be NULL");
    std::vector<std::pair<double, double>> points;
    points.reserve(num_points);
    for (size_t i = 0; i < num_points; ++i) {
      points.emplace_back(sigmas[i], success_probs[i]);
    }
    const auto fit = qvar::fit_wkb(points);
    *out_fit_json = dup_string(qvar::fit_result_to_json(fit).dump(2));
  });
}

qv_status qv_recommend(double sigma_grad, int num_vars, char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "out_json must not be NULL");
    qvar::LandscapeReport report;
    report.sigma_grad = sigma_grad;
    report.sigma2_grad = sigma_grad * sigma_grad;
    const auto rec = qvar::recommend(report, num_vars);
    *out_json = dup_string(qvar::recommendation_to_json(rec).dump(2));
  });
}

qv_status qv_bench_run(const char* plan_json, const char* output_dir, int threads,
                       char** out_summary_json) {
  return guarded([&] {
    require(plan_json != nullptr, "plan_json must not be NULL");
    require(out_summary_json != nullptr, "out_summary_json must not be NULL");
    const auto result = qvar::bench_run(plan_json, text_or_empty(output_dir), threads);
    *out_summary_json = dup_string(qvar::bench_result_to_json(result).dump(2));
  });
}

qv_status qv_bench_report(const char* results_dir, char** out_summary_json) {
  return guarded([&] {
    require(results_dir != nullptr, "results_dir must not be NULL");
    require(out_summary_json != nullptr, "out_summary_json must not be NULL");
    const auto result = qvar::bench_report(results_dir);
    *out_summary_json = dup_string(qvar::bench_result_to_json(result).dump(2));
  });
}

}  // extern "C"
