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

#include "qvar/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <tuple>
#include <utility>

#include "json.hpp"
#include "qvar/error.hpp"
#include "qvar/generators.hpp"
#include "qvar/landscape.hpp"
#include "qvar/qubo.hpp"
#include "qvar/rng.hpp"
#include "qvar/serialize.hpp"
#include "qvar/solvers.hpp"

namespace qvar {
namespace {

using nlohmann::json;

/// Synthetic sizes beyond this are accepted but flagged as long-running.
constexpr int kDeskScaleCap = 512;
constexpr int kGapBuckets = 8;

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

struct SolverSpec {
  std::string id;
  std::string name;
  std::string config_json;
};

struct Plan {
  std::string output_dir = "bench-out";
  int threads = 1;
  int repetitions = 1;
  int landscape_samples = 500;
  std::uint64_t landscape_seed = 1;
  std::vector<std::string> instance_specs;
  std::vector<SolverSpec> solvers;
  std::vector<std::string> reports;
  json echo;  ///< normalized plan without execution details (dir, threads)
};

int default_trajectories(const std::string& solver_id) {
  if (solver_id == "sa") return SaConfig{}.trajectories;
  if (solver_id == "sgd") return SgdConfig{}.trajectories;
  if (solver_id == "sqa") return SqaConfig{}.trajectories;
  return 1;
}

Plan parse_plan(const std::string& text) {
  json root = parse_json_text(text, "experiment plan");
  if (!root.is_object()) {
    throw_invalid("experiment plan must be a JSON object");
  }
  static const std::set<std::string> known = {"output_dir", "threads",    "repetitions",
                                             "landscape",  "generators", "solvers",
                                             "reports"};
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (known.find(key) == known.end()) {
      throw_invalid("unknown plan key: " + key);
    }
  }

  Plan plan;
  plan.output_dir = root.value("output_dir", plan.output_dir);
  plan.threads = root.value("threads", 1);
  plan.repetitions = root.value("repetitions", 1);
  if (plan.threads < 1) {
    throw_invalid("threads must be at least 1");
  }
  if (plan.repetitions < 1) {
    throw_invalid("repetitions must be at least 1");
  }
  if (root.contains("landscape")) {
    const json& ls = root["landscape"];
    if (!ls.is_object()) {
      throw_invalid("landscape must be an object");
    }
    plan.landscape_samples = ls.value("num_samples", plan.landscape_samples);
    plan.landscape_seed = ls.value("seed", plan.landscape_seed);
    if (plan.landscape_samples < 2) {
      throw_invalid("landscape.num_samples must be at least 2");
    }
  }

  if (!root.contains("generators") || !root["generators"].is_array() ||
      root["generators"].empty()) {
    throw_invalid("plan needs a non-empty generators array");
  }
  json norm_generators = json::array();
  for (const json& gen : root["generators"]) {
    if (!gen.is_object() || !gen.contains("family")) {
      throw_invalid("each generator entry needs a family");
    }
    const std::string family = gen["family"].get<std::string>();
    std::vector<std::int64_t> sizes;
    if (gen.contains("sizes")) {
      for (const json& s : gen["sizes"]) {
        sizes.push_back(s.get<std::int64_t>());
      }
    } else if (gen.contains("n")) {
      sizes.push_back(gen["n"].get<std::int64_t>());
    }
    std::vector<std::uint64_t> seeds;
    if (gen.contains("seeds")) {
      for (const json& s : gen["seeds"]) {
        seeds.push_back(s.get<std::uint64_t>());
      }
    } else if (gen.contains("seed")) {
      seeds.push_back(gen["seed"].get<std::uint64_t>());
    }
    if (seeds.empty()) {
      throw_invalid("generator entry for " + family +
                    " lists no seeds; every instance must be seeded explicitly");
    }
    json params = gen.value("params", json::object());
    if (!params.is_object()) {
      throw_invalid("generator params must be an object");
    }

    // Sizes map onto the family's natural size knob. Families that define
    // their size through params (explicit value lists or set systems) may
    // omit sizes entirely.
    const char* size_key = family == "set_cover" ? "num_elements" : "n";
    if (sizes.empty()) {
      sizes.push_back(-1);
    }
    for (std::int64_t size : sizes) {
      for (std::uint64_t seed : seeds) {
        json spec = params;
        spec["family"] = family;
        spec["seed"] = seed;
        if (size >= 0) {
          spec[size_key] = size;
        }
        plan.instance_specs.push_back(spec.dump());
      }
    }
    json norm = gen;
    norm_generators.push_back(std::move(norm));
  }

  if (!root.contains("solvers") || !root["solvers"].is_array() || root["solvers"].empty()) {
    throw_invalid("plan needs a non-empty solvers array");
  }
  std::set<std::string> names;
  json norm_solvers = json::array();
  for (const json& entry : root["solvers"]) {
    if (!entry.is_object() || !entry.contains("id")) {
      throw_invalid("each solver entry needs an id");
    }
    SolverSpec spec;
    spec.id = entry["id"].get<std::string>();
    spec.name = entry.value("name", spec.id);
    json config = entry.value("config", json::object());
    if (!config.is_object()) {
      throw_invalid("solver config must be an object");
    }
    if (plan.repetitions > 1 && spec.id != "brute_force") {
      int base = config.value("trajectories", default_trajectories(spec.id));
      config["trajectories"] = base * plan.repetitions;
    }
    spec.config_json = config.dump();
    if (!names.insert(spec.name).second) {
      throw_invalid("duplicate solver name: " + spec.name);
    }
    plan.solvers.push_back(spec);
    json norm;
    norm["id"] = spec.id;
    norm["name"] = spec.name;
    norm["config"] = config;
    norm_solvers.push_back(std::move(norm));
  }

  if (root.contains("reports")) {
    for (const json& r : root["reports"]) {
      std::string name = r.get<std::string>();
      if (name != "variance_curve" && name != "gap_vs_variance") {
        throw_invalid("unknown report: " + name);
      }
      plan.reports.push_back(std::move(name));
    }
  }

  plan.echo["repetitions"] = plan.repetitions;
  plan.echo["landscape"] = {{"num_samples", plan.landscape_samples},
                            {"seed", plan.landscape_seed}};
  plan.echo["generators"] = std::move(norm_generators);
  plan.echo["solvers"] = std::move(norm_solvers);
  plan.echo["reports"] = plan.reports;
  return plan;
}

/// Runs tasks [0, count) on up to `threads` workers pulling from a shared
/// counter. Each task writes only to its own preassigned slot, so the
/// partitioning cannot influence any result.
template <typename Fn>
void run_indexed(std::size_t count, int threads, Fn&& task) {
  if (count == 0) {
    return;
  }
  int workers = std::min<int>(threads, static_cast<int>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      task(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) {
          return;
        }
        task(i);
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
}

struct InstanceSlot {
  bool failed = false;
  std::string error;
  QuboInstance instance;
  double sigma_grad = 0.0;
  std::optional<SolverOutcome> brute;
  std::string serialized;
};

struct CellSlot {
  bool ran = false;
  std::string skip;
  SolverOutcome outcome;
};

bool row_before(const ResultRow& lhs, const ResultRow& rhs) {
  return std::tie(lhs.family, lhs.n, lhs.seed, lhs.solver, lhs.instance_id) <
         std::tie(rhs.family, rhs.n, rhs.seed, rhs.solver, rhs.instance_id);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string results_to_csv(std::vector<ResultRow> rows) {
  std::sort(rows.begin(), rows.end(), row_before);
  std::string out = kResultsCsvHeader;
  out += '\n';
  for (const ResultRow& row : rows) {
    out += row.instance_id;
    out += ',';
    out += row.family;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += fmt(row.sigma_grad);
    out += ',';
    out += row.solver;
    out += ',';
    out += fmt(row.best_energy);
    out += ',';
    out += fmt(row.residual);
    out += ',';
    out += fmt(row.success_prob);
    out += ',';
    out += fmt(row.wall_time_s);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::vector<ResultRow> rows;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      eol = text.size();
    }
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) {
      continue;
    }
    if (first) {
      if (line != kResultsCsvHeader) {
        throw_invalid("results CSV header mismatch");
      }
      first = false;
      continue;
    }
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 10) {
      throw_invalid("results CSV row has " + std::to_string(f.size()) + " fields, expected 10");
    }
    ResultRow row;
    try {
      row.instance_id = f[0];
      row.family = f[1];
      row.n = std::stoi(f[2]);
      row.seed = std::stoull(f[3]);
      row.sigma_grad = std::stod(f[4]);
      row.solver = f[5];
      row.best_energy = std::stod(f[6]);
      row.residual = std::stod(f[7]);
      row.success_prob = std::stod(f[8]);
      row.wall_time_s = std::stod(f[9]);
    } catch (const std::exception&) {
      throw_invalid("results CSV row has a malformed numeric field: " + line);
    }
    rows.push_back(std::move(row));
  }
  if (first) {
    throw_invalid("results CSV is empty");
  }
  return rows;
}

std::string emit_variance_curve(const std::vector<ResultRow>& rows) {
  if (rows.empty()) {
    throw_insufficient("variance curve needs at least one result row");
  }
  std::set<std::string> seen;
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const ResultRow& row : rows) {
    if (!seen.insert(row.instance_id).second) {
      continue;
    }
    groups[{row.family, row.n}].push_back(row.sigma_grad);
  }
  std::string out = "family,n,mean_sigma,std_sigma,count\n";
  for (const auto& [key, sigmas] : groups) {
    double mean = 0.0;
    for (double s : sigmas) {
      mean += s;
    }
    mean /= static_cast<double>(sigmas.size());
    double var = 0.0;
    for (double s : sigmas) {
      var += (s - mean) * (s - mean);
    }
    double stddev =
        sigmas.size() > 1 ? std::sqrt(var / static_cast<double>(sigmas.size() - 1)) : 0.0;
    out += key.first;
    out += ',';
    out += std::to_string(key.second);
    out += ',';
    out += fmt(mean);
    out += ',';
    out += fmt(stddev);
    out += ',';
    out += std::to_string(sigmas.size());
    out += '\n';
  }
  return out;
}

std::string emit_gap_vs_variance(const std::vector<ResultRow>& rows) {
  struct Point {
    double sigma;
    double gap;
  };
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> per_instance;
  std::map<std::string, double> sigma_of;
  for (const ResultRow& row : rows) {
    sigma_of[row.instance_id] = row.sigma_grad;
    if (row.solver == "sa") {
      per_instance[row.instance_id].first = row.residual;
    } else if (row.solver == "sqa") {
      per_instance[row.instance_id].second = row.residual;
    }
  }
  std::vector<Point> points;
  for (const auto& [id, pair] : per_instance) {
    if (pair.first && pair.second) {
      points.push_back(Point{sigma_of[id], *pair.first - *pair.second});
    }
  }
  if (points.empty()) {
    throw_insufficient("gap report needs instances carrying both an sa and an sqa row");
  }

  double lo = points[0].sigma;
  double hi = points[0].sigma;
  for (const Point& p : points) {
    lo = std::min(lo, p.sigma);
    hi = std::max(hi, p.sigma);
  }
  const int buckets = hi > lo ? kGapBuckets : 1;
  const double width = hi > lo ? (hi - lo) / buckets : 0.0;
  std::vector<double> sums(static_cast<std::size_t>(buckets), 0.0);
  std::vector<int> counts(static_cast<std::size_t>(buckets), 0);
  for (const Point& p : points) {
    int idx = 0;
    if (width > 0.0) {
      idx = std::min(buckets - 1, static_cast<int>((p.sigma - lo) / width));
    }
    sums[static_cast<std::size_t>(idx)] += p.gap;
    counts[static_cast<std::size_t>(idx)] += 1;
  }

  std::string out = "bucket_lo,bucket_hi,mean_gap,count,flagged\n";
  for (int b = 0; b < buckets; ++b) {
    double blo = width > 0.0 ? lo + b * width : lo;
    double bhi = width > 0.0 ? lo + (b + 1) * width : hi;
    int count = counts[static_cast<std::size_t>(b)];
    out += fmt(blo);
    out += ',';
    out += fmt(bhi);
    out += ',';
    if (count > 0) {
      out += fmt(sums[static_cast<std::size_t>(b)] / count);
    }
    out += ',';
    out += std::to_string(count);
    out += ',';
    out += count < 3 ? "1" : "0";
    out += '\n';
  }
  return out;
}

BenchResult bench_run(const std::string& plan_text, const std::string& output_dir_override,
                      int threads_override) {
  Plan plan = parse_plan(plan_text);
  if (!output_dir_override.empty()) {
    plan.output_dir = output_dir_override;
  }
  if (threads_override > 0) {
    plan.threads = threads_override;
  }

  BenchResult result;
  result.output_dir = plan.output_dir;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(plan.output_dir) / "instances", ec);
  if (ec) {
    throw_io("cannot create output directory " + plan.output_dir + ": " + ec.message());
  }

  const std::size_t num_instances = plan.instance_specs.size();
  const std::size_t num_solvers = plan.solvers.size();
  std::vector<InstanceSlot> instances(num_instances);

  run_indexed(num_instances, plan.threads, [&](std::size_t i) {
    InstanceSlot& slot = instances[i];
    try {
      slot.instance = generate_from_spec_json(plan.instance_specs[i]);
      LandscapeOptions opts;
      opts.num_samples = plan.landscape_samples;
      opts.seed = mix_seed_with_string(plan.landscape_seed, slot.instance.label());
      slot.sigma_grad = gradient_variance(slot.instance, opts).sigma_grad;
      slot.serialized = instance_to_json(slot.instance).dump(2);
      if (slot.instance.n() <= kBruteForceCapacity) {
        slot.brute = solve_brute_force(slot.instance);
      }
    } catch (const Error& e) {
      slot.failed = true;
      slot.error = std::string("instance generation failed: ") + e.what() +
                   " (spec: " + plan.instance_specs[i] + ")";
    }
  });

  // Duplicate ids would silently overwrite each other's artifacts.
  {
    std::set<std::string> ids;
    for (const InstanceSlot& slot : instances) {
      if (!slot.failed && !ids.insert(slot.instance.label()).second) {
        throw_invalid("plan expands to duplicate instance id " + slot.instance.label());
      }
    }
  }

  std::vector<CellSlot> cells(num_instances * num_solvers);
  run_indexed(cells.size(), plan.threads, [&](std::size_t c) {
    const std::size_t i = c / num_solvers;
    const std::size_t s = c % num_solvers;
    InstanceSlot& inst = instances[i];
    CellSlot& cell = cells[c];
    if (inst.failed) {
      return;
    }
    const SolverSpec& solver = plan.solvers[s];
    if (solver.id == "brute_force" && inst.instance.n() > kBruteForceCapacity) {
      cell.skip = inst.instance.label() + "/" + solver.name + ": brute force skipped (n=" +
                  std::to_string(inst.instance.n()) + " exceeds capacity " +
                  std::to_string(kBruteForceCapacity) + ")";
      return;
    }
    if (solver.id == "brute_force" && inst.brute) {
      cell.outcome = *inst.brute;
      cell.ran = true;
      return;
    }
    std::uint64_t cell_seed = mix_seed_with_string(
        inst.instance.seed().value_or(0), inst.instance.label() + "/" + solver.name);
    cell.outcome = solve_by_id(inst.instance, solver.id, solver.config_json, cell_seed);
    cell.ran = true;
  });

  // References and rows are assembled sequentially; everything here is a
  // pure function of the slots above.
  std::vector<ResultRow> rows;
  json summary_instances = json::array();
  for (std::size_t i = 0; i < num_instances; ++i) {
    InstanceSlot& inst = instances[i];
    if (inst.failed) {
      result.errors.push_back(inst.error);
      continue;
    }
    double reference = 0.0;
    std::string reference_source;
    if (inst.brute) {
      reference = inst.brute->best_energy;
      reference_source = "brute_force";
    } else {
      bool have = false;
      for (std::size_t s = 0; s < num_solvers; ++s) {
        const CellSlot& cell = cells[i * num_solvers + s];
        if (cell.ran && (!have || cell.outcome.best_energy < reference)) {
          reference = cell.outcome.best_energy;
          have = true;
        }
      }
      if (!have) {
        result.errors.push_back(inst.instance.label() +
                                ": no solver produced a result; instance dropped");
        continue;
      }
      reference_source = "batch_best";
    }

    if (inst.instance.n() > kDeskScaleCap) {
      result.warnings.push_back(inst.instance.label() + ": n=" +
                                std::to_string(inst.instance.n()) +
                                " is beyond desk scale (" + std::to_string(kDeskScaleCap) +
                                "); expect a long run");
    }

    for (std::size_t s = 0; s < num_solvers; ++s) {
      const CellSlot& cell = cells[i * num_solvers + s];
      if (!cell.skip.empty()) {
        result.skips.push_back(cell.skip);
        continue;
      }
      if (!cell.ran) {
        continue;
      }
      ResultRow row;
      row.instance_id = inst.instance.label();
      row.family = inst.instance.family();
      row.n = inst.instance.n();
      row.seed = inst.instance.seed().value_or(0);
      row.sigma_grad = inst.sigma_grad;
      row.solver = plan.solvers[s].name;
      row.best_energy = cell.outcome.best_energy;
      // Residuals are relative to the reference; a zero reference falls
      // back to the absolute difference (still non-negative vs batch best).
      row.residual = reference == 0.0 ? std::abs(cell.outcome.best_energy - reference)
                                      : residual_energy(cell.outcome.best_energy, reference);
      int hits = 0;
      for (double e : cell.outcome.trajectory_bests) {
        if (energies_match(e, reference)) {
          ++hits;
        }
      }
      row.success_prob = cell.outcome.trajectory_bests.empty()
                             ? 0.0
                             : static_cast<double>(hits) /
                                   static_cast<double>(cell.outcome.trajectory_bests.size());
      row.wall_time_s = cell.outcome.wall_time_s;
      rows.push_back(std::move(row));
    }

    json entry;
    entry["id"] = inst.instance.label();
    entry["family"] = inst.instance.family();
    entry["n"] = inst.instance.n();
    entry["seed"] = inst.instance.seed().value_or(0);
    entry["sigma_grad"] = inst.sigma_grad;
    entry["reference_energy"] = reference;
    entry["reference_source"] = reference_source;
    summary_instances.push_back(std::move(entry));
  }

  auto write_output = [&](const std::string& name, const std::string& content) {
    try {
      write_text_file((std::filesystem::path(plan.output_dir) / name).string(), content);
      result.written.push_back(name);
    } catch (const Error&) {
      // Leave a partial manifest behind so the aborted run is inspectable.
      json manifest;
      manifest["status"] = "aborted";
      manifest["failed_writing"] = name;
      manifest["written"] = result.written;
      try {
        write_text_file((std::filesystem::path(plan.output_dir) / "manifest.json").string(),
                        manifest.dump(2));
      } catch (const Error&) {
      }
      throw;
    }
  };

  for (const InstanceSlot& inst : instances) {
    if (!inst.failed) {
      write_output("instances/" + inst.instance.label() + ".json", inst.serialized);
    }
  }
  write_output("results.csv", results_to_csv(rows));
  result.rows = static_cast<int>(rows.size());

  for (const std::string& report : plan.reports) {
    // A report that cannot be computed from this batch (say, the gap report
    // without both solvers present) is a warning, not a failed run.
    try {
      if (report == "variance_curve") {
        write_output("variance_curve.csv", emit_variance_curve(rows));
      } else {
        write_output("gap_vs_variance.csv", emit_gap_vs_variance(rows));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientData) {
        throw;
      }
      result.warnings.push_back(report + " skipped: " + e.what());
    }
  }

  json summary;
  summary["plan"] = plan.echo;
  summary["instances"] = std::move(summary_instances);
  summary["rows"] = result.rows;
  summary["skips"] = result.skips;
  summary["errors"] = result.errors;
  summary["warnings"] = result.warnings;
  write_output("summary.json", summary.dump(2));
  return result;
}

BenchResult bench_report(const std::string& results_dir) {
  namespace fs = std::filesystem;
  BenchResult result;
  result.output_dir = results_dir;
  std::string csv = read_text_file((fs::path(results_dir) / "results.csv").string());
  std::vector<ResultRow> rows = parse_results_csv(csv);

  write_text_file((fs::path(results_dir) / "variance_curve.csv").string(),
                  emit_variance_curve(rows));
  result.written.push_back("variance_curve.csv");
  try {
    write_text_file((fs::path(results_dir) / "gap_vs_variance.csv").string(),
                    emit_gap_vs_variance(rows));
    result.written.push_back("gap_vs_variance.csv");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientData) {
      throw;
    }
    result.warnings.push_back(std::string("gap report skipped: ") + e.what());
  }
  result.rows = static_cast<int>(rows.size());
  return result;
}

}  // namespace qvar
