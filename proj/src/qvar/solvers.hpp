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

#ifndef QVAR_SOLVERS_HPP
#define QVAR_SOLVERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qvar/qubo.hpp"

namespace qvar {

/// Result of one solver run. best_energy is always re-evaluated from
/// best_bits at the end, so it is exact rather than incrementally tracked.
/// success_prob is the fraction of trajectories whose best energy reaches
/// the reference within 1e-9 relative tolerance; solvers fill it against
/// their own best (reference "self"), and the bench harness recomputes it
/// against brute force (n <= 24) or the batch best using trajectory_bests.
struct SolverOutcome {
  std::string solver_id;
  double best_energy = 0.0;
  std::vector<std::uint8_t> best_bits;
  double mean_energy = 0.0;
  double success_prob = 0.0;
  double wall_time_s = 0.0;
  int trajectories = 0;
  std::vector<double> trajectory_bests;
  std::string reference = "self";
};

/// Optional instrumentation; off by default because recording is per-move.
struct SolverDiagnostics {
  /// Energy after every step of the first trajectory (SGD).
  std::vector<double> first_trajectory_energies;
  /// Uphill proposals and acceptances per temperature level (SA).
  std::vector<long long> uphill_proposed;
  std::vector<long long> uphill_accepted;
};

struct SaConfig {
  double t0 = 10.0;
  double cooling = 0.95;
  int iters_per_temp = 1000;
  int num_levels = 200;
  int trajectories = 100;
  std::uint64_t seed = 0;
  SolverDiagnostics* diagnostics = nullptr;
};

struct SgdConfig {
  int max_steps = 500;
  int no_improve_stop = 50;
  int trajectories = 100;
  std::uint64_t seed = 0;
  SolverDiagnostics* diagnostics = nullptr;
};

struct SqaConfig {
  int trotter_slices = 32;
  double gamma_start = 3.0;
  double gamma_end = 0.01;
  double temperature = 0.05;
  int sweeps = 300;
  int trajectories = 50;
  std::uint64_t seed = 0;
};

/// Relative success tolerance shared by success counting and reference
/// comparison throughout the library.
inline constexpr double kSuccessRelTol = 1e-9;

/// Largest instance solve_brute_force will enumerate (2^24 configurations).
inline constexpr int kBruteForceCapacity = 24;

inline bool energies_match(double a, double b) {
  double scale = std::max(1.0, std::max(std::abs(a), std::abs(b)));
  return std::abs(a - b) <= kSuccessRelTol * scale;
}

/// Metropolis acceptance rule min(1, exp(-delta / temperature)) given a
/// uniform draw u in [0, 1). Exposed so the rule itself is testable.
bool metropolis_accept(double delta, double temperature, double u);

/// Exact minimum by Gray-code enumeration. Capacity-limited to n <= 24.
/// Ties resolve to the lexicographically smallest bit vector.
SolverOutcome solve_brute_force(const QuboInstance& instance);

/// Metropolis single-flip annealing on a geometric temperature ladder
/// T_l = t0 * cooling^l. Each trajectory starts from its own uniform random
/// configuration on a stream derived from (seed, trajectory).
SolverOutcome solve_sa(const QuboInstance& instance, const SaConfig& config);

/// Steepest-descent bit flips: always the largest energy reduction, ties to
/// the lowest index, random restart when no flip improves. A trajectory
/// stops early when its best has not improved for no_improve_stop steps.
SolverOutcome solve_sgd(const QuboInstance& instance, const SgdConfig& config);

/// Path-integral surrogate annealer: trotter_slices replica configurations
/// coupled along the imaginary-time ring with strength
/// J_perp = -(T/2) ln tanh(Gamma / (slices * T)), Gamma annealed linearly
/// from gamma_start to gamma_end over the sweeps. Reports the best true
/// energy seen by any replica.
SolverOutcome solve_sqa(const QuboInstance& instance, const SqaConfig& config);

/// (found - best) / |best|. Degenerate when best == 0; callers needing a
/// gap for a zero reference must fall back to the absolute difference.
double residual_energy(double found, double best);

/// Dispatches on solver_id ("brute_force", "sa", "sgd", "sqa"), overriding
/// defaults from a JSON object. Unknown keys are rejected. seed_override, if
/// given, wins over any seed in the JSON; the benchmark harness uses it to
/// give every (instance, solver) cell its own derived stream.
SolverOutcome solve_by_id(const QuboInstance& instance, const std::string& solver_id,
                          const std::string& config_json,
                          std::optional<std::uint64_t> seed_override = {});

}  // namespace qvar

#endif  // QVAR_SOLVERS_HPP
