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

#ifndef QVAR_BENCH_HPP
#define QVAR_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qvar {

/// One (instance, solver) measurement. Field order mirrors the CSV schema.
struct ResultRow {
  std::string instance_id;
  std::string family;
  int n = 0;
  std::uint64_t seed = 0;
  double sigma_grad = 0.0;
  std::string solver;
  double best_energy = 0.0;
  double residual = 0.0;
  double success_prob = 0.0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kResultsCsvHeader =
    "instance_id,family,n,seed,sigma_grad,solver,best_energy,residual,success_prob,wall_time_s";

/// Serializes rows in the canonical order (family, n, seed, solver).
/// Numeric fields print with %.17g so identical runs emit identical bytes.
std::string results_to_csv(std::vector<ResultRow> rows);

std::vector<ResultRow> parse_results_csv(const std::string& text);

/// Aggregates sigma_grad per (family, n): CSV of family,n,mean_sigma,
/// std_sigma,count with one row per group. Solver rows of one instance share
/// their sigma, so instances are deduplicated by id first. Empty input
/// raises insufficient-data.
std::string emit_variance_curve(const std::vector<ResultRow>& rows);

/// Buckets the per-instance residual gap (sa minus sqa) over sigma_grad into
/// 8 equal-width bins: CSV of bucket_lo,bucket_hi,mean_gap,count,flagged.
/// Buckets holding fewer than 3 points are flagged; empty ones leave
/// mean_gap blank. Requires at least one instance with both an "sa" and an
/// "sqa" row, else insufficient-data.
std::string emit_gap_vs_variance(const std::vector<ResultRow>& rows);

struct BenchResult {
  std::string output_dir;
  int rows = 0;
  std::vector<std::string> skips;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<std::string> written;  ///< file names relative to output_dir
};

/// Runs an experiment plan (JSON text; see README for the schema): generates
/// every (family, size, seed) instance, measures its landscape, runs every
/// solver cell, resolves reference optima (brute force up to 24 variables,
/// batch best beyond), and writes instances/, results.csv, summary.json and
/// any requested report files under the output directory. Per-cell seeds
/// derive from the instance and solver names, so results are identical for
/// any thread count. Instance generation failures become error records and
/// the run continues; I/O failures abort after writing a partial manifest.
BenchResult bench_run(const std::string& plan_text, const std::string& output_dir_override = "",
                      int threads_override = 0);

/// Recomputes the report files from an existing results.csv.
BenchResult bench_report(const std::string& results_dir);

}  // namespace qvar

#endif  // QVAR_BENCH_HPP
