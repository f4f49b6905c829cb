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

// Command line front end. Talks to the library exclusively through the C
// API in qvar/qvar.h, which keeps this binary an honest external consumer
// of the shared library.
//
// Exit codes: 0 success, 2 invalid input, 3 capacity exceeded, 4 I/O
// failure, 1 internal error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qvar/qvar.h"

namespace {

// Owns a char* handed out by the library.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { qv_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr); }
};

struct OwnedInstance {
  qv_instance* ptr = nullptr;
  ~OwnedInstance() { qv_instance_free(ptr); }
};

int exit_code_for(qv_status status) {
  switch (status) {
    case QV_OK:
      return 0;
    case QV_ERROR_INVALID_ARGUMENT:
      return 2;
    case QV_ERROR_CAPACITY_EXCEEDED:
      return 3;
    case QV_ERROR_IO:
      return 4;
    case QV_ERROR_INSUFFICIENT_DATA:
      return 2;  // bad or too-small input data, caller's to fix
    case QV_ERROR_INTERNAL:
      return 1;
  }
  return 1;
}

int fail(qv_status status) {
  std::cerr << "error: " << qv_last_error() << "\n";
  return exit_code_for(status);
}

// Reads a whole file; empty optional means the stream failed.
std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    return std::nullopt;
  }
  return buffer.str();
}

int write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text << "\n";
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 4;
  }
  return 0;
}

// Resolves an inline-JSON / file-path option pair into the JSON text.
int resolve_text(const std::string& inline_text, const std::string& file_path,
                 const std::string& what, std::string* out) {
  if (!inline_text.empty() && !file_path.empty()) {
    std::cerr << "error: give " << what << " either inline or as a file, not both\n";
    return 2;
  }
  if (!file_path.empty()) {
    auto content = slurp(file_path);
    if (!content) {
      std::cerr << "error: cannot read " << file_path << "\n";
      return 4;
    }
    *out = *content;
    return 0;
  }
  *out = inline_text;
  return 0;
}

int load_instance_arg(const std::string& path, OwnedInstance* instance) {
  const qv_status status = qv_instance_load(path.c_str(), &instance->ptr);
  if (status != QV_OK) {
    return fail(status);
  }
  return 0;
}

struct GenerateArgs {
  std::string spec;
  std::string spec_file;
  std::string out;
};

int run_generate(const GenerateArgs& args) {
  std::string spec_text;
  if (int rc = resolve_text(args.spec, args.spec_file, "the generator spec", &spec_text); rc != 0) {
    return rc;
  }
  if (spec_text.empty()) {
    std::cerr << "error: a generator spec is required (--spec or --spec-file)\n";
    return 2;
  }
  OwnedInstance instance;
  if (qv_status status = qv_generate(spec_text.c_str(), &instance.ptr); status != QV_OK) {
    return fail(status);
  }
  if (!args.out.empty()) {
    if (qv_status status = qv_instance_save(instance.ptr, args.out.c_str()); status != QV_OK) {
      return fail(status);
    }
    return 0;
  }
  OwnedString json;
  if (qv_status status = qv_instance_to_json(instance.ptr, &json.ptr); status != QV_OK) {
    return fail(status);
  }
  std::cout << json.str() << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string instance_path;
  int samples = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string normalization = "per_variable";
  bool scan = false;
  std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
  OwnedInstance instance;
  if (int rc = load_instance_arg(args.instance_path, &instance); rc != 0) {
    return rc;
  }
  OwnedString report;
  if (qv_status status =
          qv_gradient_variance(instance.ptr, args.samples, args.seed, args.threads,
                               args.normalization.c_str(), &report.ptr);
      status != QV_OK) {
    return fail(status);
  }
  nlohmann::json payload = nlohmann::json::parse(report.str());
  if (args.scan) {
    OwnedString scan_report;
    if (qv_status status = qv_landscape_scan(instance.ptr, &scan_report.ptr); status != QV_OK) {
      return fail(status);
    }
    payload["scan"] = nlohmann::json::parse(scan_report.str());
  }
  return write_or_print(payload.dump(2), args.out);
}

struct SolveArgs {
  std::string instance_path;
  std::string solver = "sa";
  std::string config;
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_solve(const SolveArgs& args) {
  OwnedInstance instance;
  if (int rc = load_instance_arg(args.instance_path, &instance); rc != 0) {
    return rc;
  }
  std::string config_text;
  if (int rc = resolve_text(args.config, args.config_file, "the solver config", &config_text);
      rc != 0) {
    return rc;
  }
  if (config_text.empty()) {
    config_text = "{}";
  }
  if (args.seed.has_value()) {
    nlohmann::json config = nlohmann::json::parse(config_text, nullptr, false);
    if (config.is_discarded() || !config.is_object()) {
      std::cerr << "error: the solver config must be a JSON object\n";
      return 2;
    }
    config["seed"] = *args.seed;
    config_text = config.dump();
  }
  OwnedString result;
  if (qv_status status =
          qv_solve(instance.ptr, args.solver.c_str(), config_text.c_str(), &result.ptr);
      status != QV_OK) {
    return fail(status);
  }
  return write_or_print(result.str(), args.out);
}

struct ReformulateArgs {
  std::string instance_path;
  std::string params;
  std::string params_file;
  std::optional<int> rounds;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string save_instance;
};

int run_reformulate(const ReformulateArgs& args) {
  OwnedInstance instance;
  if (int rc = load_instance_arg(args.instance_path, &instance); rc != 0) {
    return rc;
  }
  std::string params_text;
  if (int rc = resolve_text(args.params, args.params_file, "the parameters", &params_text);
      rc != 0) {
    return rc;
  }
  if (params_text.empty()) {
    params_text = "{}";
  }
  if (args.rounds.has_value() || args.seed.has_value()) {
    nlohmann::json params = nlohmann::json::parse(params_text, nullptr, false);
    if (params.is_discarded() || !params.is_object()) {
      std::cerr << "error: the parameters must be a JSON object\n";
      return 2;
    }
    if (args.rounds.has_value()) {
      params["max_rounds"] = *args.rounds;
    }
    if (args.seed.has_value()) {
      params["seed"] = *args.seed;
    }
    params_text = params.dump();
  }
  OwnedString result;
  if (qv_status status = qv_reformulate(instance.ptr, params_text.c_str(), &result.ptr);
      status != QV_OK) {
    return fail(status);
  }
  if (!args.save_instance.empty()) {
    nlohmann::json payload = nlohmann::json::parse(result.str());
    if (int rc = write_or_print(payload.at("instance").dump(2), args.save_instance); rc != 0) {
      return rc;
    }
  }
  return write_or_print(result.str(), args.out);
}

struct AdviseArgs {
  std::string instance_path;
  std::optional<double> sigma;
  int n = 0;
  int samples = 1000;
  std::uint64_t seed = 0;
  double alpha = 2.1;
  double kt = 1.0;
  double delta_e = 7.0;
  bool as_json = false;
};

int run_advise(const AdviseArgs& args) {
  double sigma = 0.0;
  int num_vars = args.n;
  nlohmann::json landscape;
  if (args.sigma.has_value()) {
    sigma = *args.sigma;
  } else {
    if (args.instance_path.empty()) {
      std::cerr << "error: give an instance file to measure, or pass --sigma directly\n";
      return 2;
    }
    OwnedInstance instance;
    if (int rc = load_instance_arg(args.instance_path, &instance); rc != 0) {
      return rc;
    }
    if (qv_status status = qv_instance_num_vars(instance.ptr, &num_vars); status != QV_OK) {
      return fail(status);
    }
    OwnedString report;
    if (qv_status status = qv_gradient_variance(instance.ptr, args.samples, args.seed, 1, nullptr,
                                                &report.ptr);
        status != QV_OK) {
      return fail(status);
    }
    landscape = nlohmann::json::parse(report.str());
    sigma = landscape.at("sigma_grad").get<double>();
  }

  OwnedString recommendation;
  if (qv_status status = qv_recommend(sigma, num_vars, &recommendation.ptr); status != QV_OK) {
    return fail(status);
  }
  const nlohmann::json rec = nlohmann::json::parse(recommendation.str());

  double tunneling = 0.0;
  double thermal = 0.0;
  double critical = 0.0;
  bool have_tunneling = sigma > 0.0 &&
                        qv_tunneling_probability(sigma, args.alpha, &tunneling) == QV_OK;
  if (qv_status status = qv_thermal_probability(args.delta_e, args.kt, &thermal);
      status != QV_OK) {
    return fail(status);
  }
  if (qv_status status = qv_critical_sigma(args.alpha, args.kt, args.delta_e, &critical);
      status != QV_OK) {
    return fail(status);
  }

  if (args.as_json) {
    nlohmann::json payload;
    payload["sigma_source"] = args.sigma.has_value() ? "given" : "measured";
    if (!landscape.is_null()) {
      payload["landscape"] = landscape;
    }
    payload["recommendation"] = rec;
    nlohmann::json model;
    model["alpha"] = args.alpha;
    model["kt"] = args.kt;
    model["delta_e"] = args.delta_e;
    if (have_tunneling) {
      model["tunneling_probability"] = tunneling;
    }
    model["thermal_probability"] = thermal;
    model["critical_sigma"] = critical;
    payload["model"] = model;
    std::cout << payload.dump(2) << "\n";
    return 0;
  }

  char line[160];
  std::cout << "advisory";
  if (!args.instance_path.empty()) {
    std::cout << " for " << args.instance_path;
  }
  std::cout << "\n";
  std::snprintf(line, sizeof(line), "  sigma_grad       %.4f (%s)", sigma,
                args.sigma.has_value() ? "given" : "measured");
  std::cout << line << "\n";
  if (num_vars > 0) {
    std::snprintf(line, sizeof(line), "  variables        %d", num_vars);
    std::cout << line << "\n";
  }
  std::cout << "  verdict          " << rec.at("verdict").get<std::string>() << "\n";
  std::snprintf(line, sizeof(line), "  thresholds       quantum >= %.2f, classical <= %.2f",
                0.3, 0.2);
  std::cout << line << "\n";
  if (have_tunneling) {
    std::snprintf(line, sizeof(line), "  tunneling p      %.3e  (alpha=%.2f)", tunneling,
                  args.alpha);
    std::cout << line << "\n";
  }
  std::snprintf(line, sizeof(line), "  thermal p        %.3e  (delta_e=%.2f, kT=%.2f)", thermal,
                args.delta_e, args.kt);
  std::cout << line << "\n";
  std::snprintf(line, sizeof(line), "  critical sigma   %.4f", critical);
  std::cout << line << "\n";
  std::cout << "  " << rec.at("rationale").get<std::string>() << "\n";
  return 0;
}

struct BenchRunArgs {
  std::string plan_path;
  std::string out;
  int threads = 0;
};

int run_bench_run(const BenchRunArgs& args) {
  auto plan_text = slurp(args.plan_path);
  if (!plan_text) {
    std::cerr << "error: cannot read " << args.plan_path << "\n";
    return 4;
  }
  OwnedString summary;
  if (qv_status status = qv_bench_run(plan_text->c_str(), args.out.empty() ? nullptr : args.out.c_str(),
                                      args.threads, &summary.ptr);
      status != QV_OK) {
    return fail(status);
  }
  const nlohmann::json payload = nlohmann::json::parse(summary.str());
  for (const auto& warning : payload.value("warnings", nlohmann::json::array())) {
    std::cerr << "warning: " << warning.get<std::string>() << "\n";
  }
  for (const auto& error : payload.value("errors", nlohmann::json::array())) {
    std::cerr << "error record: " << error.get<std::string>() << "\n";
  }
  std::cout << summary.str() << "\n";
  return 0;
}

int run_bench_report(const std::string& dir) {
  OwnedString summary;
  if (qv_status status = qv_bench_report(dir.c_str(), &summary.ptr); status != QV_OK) {
    return fail(status);
  }
  const nlohmann::json payload = nlohmann::json::parse(summary.str());
  for (const auto& warning : payload.value("warnings", nlohmann::json::array())) {
    std::cerr << "warning: " << warning.get<std::string>() << "\n";
  }
  std::cout << summary.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO landscape toolkit: generators, solvers, gradient-variance "
               "analysis, reformulation and solver-choice advice"};
  app.set_version_flag("--version", qv_version());
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Build an instance from a generator spec");
  gen->add_option("--spec", gen_args.spec, "Generator spec as inline JSON");
  gen->add_option("--spec-file", gen_args.spec_file, "Generator spec file");
  gen->add_option("-o,--out", gen_args.out, "Write the instance here instead of stdout");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Measure the energy landscape of an instance");
  analyze->add_option("instance", analyze_args.instance_path, "Instance JSON file")->required();
  analyze->add_option("--samples", analyze_args.samples, "Random assignments to draw");
  analyze->add_option("--seed", analyze_args.seed, "Sampling seed");
  analyze->add_option("--threads", analyze_args.threads, "Worker threads");
  analyze->add_option("--normalization", analyze_args.normalization,
                      "per_variable (default) or raw");
  analyze->add_flag("--scan", analyze_args.scan,
                    "Also enumerate every configuration (small instances only)");
  analyze->add_option("-o,--out", analyze_args.out, "Write the report here instead of stdout");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Run a solver on an instance");
  solve->add_option("instance", solve_args.instance_path, "Instance JSON file")->required();
  solve->add_option("--solver", solve_args.solver, "brute_force, sa, sgd or sqa");
  solve->add_option("--config", solve_args.config, "Solver config as inline JSON");
  solve->add_option("--config-file", solve_args.config_file, "Solver config file");
  std::uint64_t solve_seed = 0;
  auto* solve_seed_opt = solve->add_option("--seed", solve_seed, "Override the config seed");
  solve->add_option("-o,--out", solve_args.out, "Write the result here instead of stdout");

  ReformulateArgs reform_args;
  auto* reform = app.add_subcommand("reformulate",
                                    "Rewrite an instance to raise its gradient variance");
  reform->add_option("instance", reform_args.instance_path, "Instance JSON file")->required();
  reform->add_option("--params", reform_args.params, "Parameters as inline JSON");
  reform->add_option("--params-file", reform_args.params_file, "Parameters file");
  int reform_rounds = 0;
  auto* reform_rounds_opt =
      reform->add_option("--rounds", reform_rounds, "Greedy rounds (overrides max_rounds)");
  std::uint64_t reform_seed = 0;
  auto* reform_seed_opt = reform->add_option("--seed", reform_seed, "Sampling seed override");
  reform->add_option("-o,--out", reform_args.out, "Write the full result here instead of stdout");
  reform->add_option("--save-instance", reform_args.save_instance,
                     "Also write just the transformed instance to this file");

  AdviseArgs advise_args;
  auto* advise = app.add_subcommand("advise", "Recommend a solver class for an instance");
  advise->add_option("instance", advise_args.instance_path,
                     "Instance JSON file (omit when giving --sigma)");
  double advise_sigma = 0.0;
  auto* advise_sigma_opt =
      advise->add_option("--sigma", advise_sigma, "Use this sigma_grad instead of measuring");
  advise->add_option("--n", advise_args.n, "Problem size when no instance file is given");
  advise->add_option("--samples", advise_args.samples, "Random assignments to draw");
  advise->add_option("--seed", advise_args.seed, "Sampling seed");
  advise->add_option("--alpha", advise_args.alpha, "Tunneling constant");
  advise->add_option("--kt", advise_args.kt, "Thermal energy scale");
  advise->add_option("--delta-e", advise_args.delta_e, "Representative barrier height");
  advise->add_flag("--json", advise_args.as_json, "Emit a JSON payload instead of the summary");

  auto* bench = app.add_subcommand("bench", "Batch benchmarking");
  bench->require_subcommand(1);

  BenchRunArgs bench_run_args;
  auto* bench_run_cmd = bench->add_subcommand("run", "Execute an experiment plan");
  bench_run_cmd->add_option("plan", bench_run_args.plan_path, "Plan JSON file")->required();
  bench_run_cmd->add_option("-o,--out", bench_run_args.out, "Override the plan's output_dir");
  bench_run_cmd->add_option("--threads", bench_run_args.threads,
                            "Override the plan's worker count");

  std::string bench_report_dir;
  auto* bench_report_cmd =
      bench->add_subcommand("report", "Rebuild report files from results.csv");
  bench_report_cmd->add_option("dir", bench_report_dir, "Results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (solve_seed_opt->count() > 0) {
    solve_args.seed = solve_seed;
  }
  if (reform_rounds_opt->count() > 0) {
    reform_args.rounds = reform_rounds;
  }
  if (reform_seed_opt->count() > 0) {
    reform_args.seed = reform_seed;
  }
  if (advise_sigma_opt->count() > 0) {
    advise_args.sigma = advise_sigma;
  }

  try {
    if (gen->parsed()) {
      return run_generate(gen_args);
    }
    if (analyze->parsed()) {
      return run_analyze(analyze_args);
    }
    if (solve->parsed()) {
      return run_solve(solve_args);
    }
    if (reform->parsed()) {
      return run_reformulate(reform_args);
    }
    if (advise->parsed()) {
      return run_advise(advise_args);
    }
    if (bench->parsed()) {
      if (bench_run_cmd->parsed()) {
        return run_bench_run(bench_run_args);
      }
      if (bench_report_cmd->parsed()) {
        return run_bench_report(bench_report_dir);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand given\n";
  return 2;
}
