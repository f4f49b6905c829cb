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

#include "qvar/solvers.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "json.hpp"
#include "qvar/error.hpp"
#include "qvar/rng.hpp"

namespace qvar {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Keeps the running winner across trajectories. Exact energy ties resolve to
// the lexicographically smallest bit vector so reruns and reorderings cannot
// change the reported configuration.
void merge_best(SolverOutcome& outcome, double energy, const std::vector<std::uint8_t>& bits) {
  if (outcome.best_bits.empty() && outcome.trajectory_bests.empty()) {
    outcome.best_energy = energy;
    outcome.best_bits = bits;
    return;
  }
  if (energy < outcome.best_energy ||
      (energy == outcome.best_energy && bits < outcome.best_bits)) {
    outcome.best_energy = energy;
    outcome.best_bits = bits;
  }
}

void finalize_stats(SolverOutcome& outcome) {
  if (outcome.trajectory_bests.empty()) {
    return;
  }
  double sum = 0.0;
  int hits = 0;
  for (double e : outcome.trajectory_bests) {
    sum += e;
    if (energies_match(e, outcome.best_energy)) {
      ++hits;
    }
  }
  outcome.mean_energy = sum / static_cast<double>(outcome.trajectory_bests.size());
  outcome.success_prob =
      static_cast<double>(hits) / static_cast<double>(outcome.trajectory_bests.size());
}

// Degenerate instances with no variables still evaluate to the offset.
SolverOutcome empty_instance_outcome(const QuboInstance& instance, std::string solver_id,
                                     int trajectories) {
  SolverOutcome outcome;
  outcome.solver_id = std::move(solver_id);
  outcome.best_energy = instance.offset();
  outcome.trajectories = trajectories;
  outcome.trajectory_bests.assign(static_cast<std::size_t>(trajectories), instance.offset());
  finalize_stats(outcome);
  return outcome;
}

double tie_band(double reference) { return 1e-7 * (1.0 + std::abs(reference)); }

}  // namespace

bool metropolis_accept(double delta, double temperature, double u) {
  if (delta <= 0.0) {
    return true;
  }
  if (temperature <= 0.0) {
    return false;
  }
  return u < std::exp(-delta / temperature);
}

double residual_energy(double found, double best) {
  if (best == 0.0) {
    throw_invalid("residual is undefined for a zero reference energy");
  }
  return (found - best) / std::abs(best);
}

SolverOutcome solve_brute_force(const QuboInstance& instance) {
  const int n = instance.n();
  if (n > kBruteForceCapacity) {
    throw_capacity("brute force enumeration is limited to " +
                   std::to_string(kBruteForceCapacity) + " variables, got " + std::to_string(n));
  }
  auto start = Clock::now();
  SolverOutcome outcome;
  outcome.solver_id = "brute_force";
  outcome.reference = "exact";
  if (n == 0) {
    outcome.best_energy = instance.offset();
    outcome.trajectories = 1;
    outcome.trajectory_bests = {instance.offset()};
    finalize_stats(outcome);
    outcome.wall_time_s = elapsed_seconds(start);
    return outcome;
  }

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
  std::vector<double> fields(static_cast<std::size_t>(n), 0.0);
  local_fields(instance, bits, fields);
  double energy = evaluate(instance, bits);

  // The walk tracks energy incrementally; candidates near the running best
  // are re-evaluated from scratch so accumulated rounding cannot pick the
  // wrong minimizer or mis-handle exact ties.
  double best_exact = energy;
  std::vector<std::uint8_t> best_bits = bits;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k + 1 < total; ++k) {
    int flip = std::countr_zero(k + 1);
    double delta = (1.0 - 2.0 * bits[static_cast<std::size_t>(flip)]) *
                   fields[static_cast<std::size_t>(flip)];
    bits[static_cast<std::size_t>(flip)] ^= 1u;
    energy += delta;
    update_fields_after_flip(instance, bits, flip, fields);
    if (energy <= best_exact + tie_band(best_exact)) {
      double exact = evaluate(instance, bits);
      // Ties are decided with the shared relative tolerance, not exact
      // equality, so the winner does not depend on summation order.
      if (energies_match(exact, best_exact)) {
        if (exact < best_exact) best_exact = exact;
        if (bits < best_bits) best_bits = bits;
      } else if (exact < best_exact) {
        best_exact = exact;
        best_bits = bits;
      }
    }
  }

  outcome.best_energy = best_exact;
  outcome.best_bits = std::move(best_bits);
  outcome.trajectories = 1;
  outcome.trajectory_bests = {outcome.best_energy};
  finalize_stats(outcome);
  outcome.wall_time_s = elapsed_seconds(start);
  return outcome;
}

SolverOutcome solve_sa(const QuboInstance& instance, const SaConfig& config) {
  if (config.t0 <= 0.0) {
    throw_invalid("sa: initial temperature must be positive");
  }
  if (config.cooling <= 0.0 || config.cooling >= 1.0) {
    throw_invalid("sa: cooling factor must lie in (0, 1)");
  }
  if (config.iters_per_temp < 1 || config.num_levels < 1 || config.trajectories < 1) {
    throw_invalid("sa: iteration, level and trajectory counts must be at least 1");
  }
  const int n = instance.n();
  if (n == 0) {
    return empty_instance_outcome(instance, "sa", config.trajectories);
  }

  auto start = Clock::now();
  SolverOutcome outcome;
  outcome.solver_id = "sa";
  outcome.trajectories = config.trajectories;
  outcome.trajectory_bests.reserve(static_cast<std::size_t>(config.trajectories));
  if (config.diagnostics != nullptr) {
    config.diagnostics->uphill_proposed.assign(static_cast<std::size_t>(config.num_levels), 0);
    config.diagnostics->uphill_accepted.assign(static_cast<std::size_t>(config.num_levels), 0);
  }

  std::vector<double> fields(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < config.trajectories; ++t) {
    RngStream rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::uint8_t> bits = rng.bits(static_cast<std::size_t>(n));
    local_fields(instance, bits, fields);
    double energy = evaluate(instance, bits);
    double traj_best = energy;
    std::vector<std::uint8_t> traj_bits = bits;

    const bool record = config.diagnostics != nullptr && t == 0;
    double temperature = config.t0;
    for (int level = 0; level < config.num_levels; ++level) {
      for (int it = 0; it < config.iters_per_temp; ++it) {
        int i = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
        double delta = (1.0 - 2.0 * bits[static_cast<std::size_t>(i)]) *
                       fields[static_cast<std::size_t>(i)];
        double u = rng.real01();
        bool uphill = delta > 0.0;
        if (record && uphill) {
          ++config.diagnostics->uphill_proposed[static_cast<std::size_t>(level)];
        }
        if (metropolis_accept(delta, temperature, u)) {
          if (record && uphill) {
            ++config.diagnostics->uphill_accepted[static_cast<std::size_t>(level)];
          }
          bits[static_cast<std::size_t>(i)] ^= 1u;
          energy += delta;
          update_fields_after_flip(instance, bits, i, fields);
          if (energy < traj_best) {
            traj_best = energy;
            traj_bits = bits;
          }
        }
      }
      temperature *= config.cooling;
    }

    double canonical = evaluate(instance, traj_bits);
    outcome.trajectory_bests.push_back(canonical);
    merge_best(outcome, canonical, traj_bits);
  }

  finalize_stats(outcome);
  outcome.wall_time_s = elapsed_seconds(start);
  return outcome;
}

SolverOutcome solve_sgd(const QuboInstance& instance, const SgdConfig& config) {
  if (config.max_steps < 1 || config.trajectories < 1) {
    throw_invalid("sgd: step and trajectory counts must be at least 1");
  }
  if (config.no_improve_stop < 1) {
    throw_invalid("sgd: no-improve window must be at least 1");
  }
  const int n = instance.n();
  if (n == 0) {
    return empty_instance_outcome(instance, "sgd", config.trajectories);
  }

  auto start = Clock::now();
  SolverOutcome outcome;
  outcome.solver_id = "sgd";
  outcome.trajectories = config.trajectories;
  outcome.trajectory_bests.reserve(static_cast<std::size_t>(config.trajectories));
  if (config.diagnostics != nullptr) {
    config.diagnostics->first_trajectory_energies.clear();
  }

  std::vector<double> fields(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < config.trajectories; ++t) {
    RngStream rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::uint8_t> bits = rng.bits(static_cast<std::size_t>(n));
    local_fields(instance, bits, fields);
    double energy = evaluate(instance, bits);
    double traj_best = energy;
    std::vector<std::uint8_t> traj_bits = bits;
    int since_improve = 0;

    const bool record = config.diagnostics != nullptr && t == 0;
    if (record) {
      config.diagnostics->first_trajectory_energies.push_back(energy);
    }

    for (int step = 0; step < config.max_steps; ++step) {
      // Steepest descent: most negative flip delta, ties to the lowest index.
      int pick = -1;
      double pick_delta = 0.0;
      for (int i = 0; i < n; ++i) {
        double delta = (1.0 - 2.0 * bits[static_cast<std::size_t>(i)]) *
                       fields[static_cast<std::size_t>(i)];
        if (delta < pick_delta) {
          pick = i;
          pick_delta = delta;
        }
      }
      if (pick >= 0) {
        bits[static_cast<std::size_t>(pick)] ^= 1u;
        energy += pick_delta;
        update_fields_after_flip(instance, bits, pick, fields);
      } else {
        // Local minimum (or plateau): restart from a fresh random point.
        bits = rng.bits(static_cast<std::size_t>(n));
        local_fields(instance, bits, fields);
        energy = evaluate(instance, bits);
      }
      if (record) {
        config.diagnostics->first_trajectory_energies.push_back(energy);
      }
      if (energy < traj_best) {
        traj_best = energy;
        traj_bits = bits;
        since_improve = 0;
      } else if (++since_improve >= config.no_improve_stop) {
        break;
      }
    }

    double canonical = evaluate(instance, traj_bits);
    outcome.trajectory_bests.push_back(canonical);
    merge_best(outcome, canonical, traj_bits);
  }

  finalize_stats(outcome);
  outcome.wall_time_s = elapsed_seconds(start);
  return outcome;
}

SolverOutcome solve_sqa(const QuboInstance& instance, const SqaConfig& config) {
  if (config.trotter_slices < 2) {
    throw_invalid("sqa: at least 2 trotter slices are required");
  }
  if (config.temperature <= 0.0) {
    throw_invalid("sqa: temperature must be positive");
  }
  if (config.gamma_end <= 0.0 || config.gamma_start < config.gamma_end) {
    throw_invalid("sqa: transverse field must satisfy gamma_start >= gamma_end > 0");
  }
  if (config.sweeps < 1 || config.trajectories < 1) {
    throw_invalid("sqa: sweep and trajectory counts must be at least 1");
  }
  const int n = instance.n();
  if (n == 0) {
    return empty_instance_outcome(instance, "sqa", config.trajectories);
  }

  auto start = Clock::now();
  SolverOutcome outcome;
  outcome.solver_id = "sqa";
  outcome.trajectories = config.trajectories;
  outcome.trajectory_bests.reserve(static_cast<std::size_t>(config.trajectories));

  const int slices = config.trotter_slices;
  const double temp = config.temperature;
  std::vector<std::vector<std::uint8_t>> replicas(static_cast<std::size_t>(slices));
  std::vector<std::vector<double>> fields(
      static_cast<std::size_t>(slices),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<double> energies(static_cast<std::size_t>(slices), 0.0);

  for (int t = 0; t < config.trajectories; ++t) {
    RngStream rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    double traj_best = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> traj_bits;
    for (int k = 0; k < slices; ++k) {
      auto& replica = replicas[static_cast<std::size_t>(k)];
      replica = rng.bits(static_cast<std::size_t>(n));
      local_fields(instance, replica, fields[static_cast<std::size_t>(k)]);
      energies[static_cast<std::size_t>(k)] = evaluate(instance, replica);
      if (energies[static_cast<std::size_t>(k)] < traj_best) {
        traj_best = energies[static_cast<std::size_t>(k)];
        traj_bits = replica;
      }
    }

    for (int sweep = 0; sweep < config.sweeps; ++sweep) {
      double gamma = config.sweeps > 1
                         ? config.gamma_start + (config.gamma_end - config.gamma_start) *
                                                    static_cast<double>(sweep) /
                                                    static_cast<double>(config.sweeps - 1)
                         : config.gamma_end;
      // Ferromagnetic coupling along the imaginary-time ring. It diverges as
      // gamma approaches 0, which is why gamma_end must stay positive.
      double jperp = -0.5 * temp *
                     std::log(std::tanh(gamma / (static_cast<double>(slices) * temp)));

      for (int k = 0; k < slices; ++k) {
        auto& replica = replicas[static_cast<std::size_t>(k)];
        auto& field = fields[static_cast<std::size_t>(k)];
        const auto& prev = replicas[static_cast<std::size_t>((k + slices - 1) % slices)];
        const auto& next = replicas[static_cast<std::size_t>((k + 1) % slices)];
        for (int i = 0; i < n; ++i) {
          double spin = 2.0 * replica[static_cast<std::size_t>(i)] - 1.0;
          double spin_prev = 2.0 * prev[static_cast<std::size_t>(i)] - 1.0;
          double spin_next = 2.0 * next[static_cast<std::size_t>(i)] - 1.0;
          double intra = (1.0 - 2.0 * replica[static_cast<std::size_t>(i)]) *
                         field[static_cast<std::size_t>(i)];
          double delta = intra / static_cast<double>(slices) +
                         2.0 * jperp * spin * (spin_prev + spin_next);
          double u = rng.real01();
          if (metropolis_accept(delta, temp, u)) {
            replica[static_cast<std::size_t>(i)] ^= 1u;
            energies[static_cast<std::size_t>(k)] += intra;
            update_fields_after_flip(instance, replica, i, field);
            if (energies[static_cast<std::size_t>(k)] < traj_best) {
              traj_best = energies[static_cast<std::size_t>(k)];
              traj_bits = replica;
            }
          }
        }
      }

      // Global moves flip one variable across every slice at once. The ring
      // couplings are unchanged by a uniform flip, so only the weighted true
      // energy differences enter the acceptance test.
      for (int i = 0; i < n; ++i) {
        double total = 0.0;
        for (int k = 0; k < slices; ++k) {
          total += (1.0 - 2.0 * replicas[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) *
                   fields[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        }
        double u = rng.real01();
        if (metropolis_accept(total / static_cast<double>(slices), temp, u)) {
          for (int k = 0; k < slices; ++k) {
            auto& replica = replicas[static_cast<std::size_t>(k)];
            double intra = (1.0 - 2.0 * replica[static_cast<std::size_t>(i)]) *
                           fields[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            replica[static_cast<std::size_t>(i)] ^= 1u;
            energies[static_cast<std::size_t>(k)] += intra;
            update_fields_after_flip(instance, replica, i, fields[static_cast<std::size_t>(k)]);
            if (energies[static_cast<std::size_t>(k)] < traj_best) {
              traj_best = energies[static_cast<std::size_t>(k)];
              traj_bits = replica;
            }
          }
        }
      }
    }

    double canonical = evaluate(instance, traj_bits);
    outcome.trajectory_bests.push_back(canonical);
    merge_best(outcome, canonical, traj_bits);
  }

  finalize_stats(outcome);
  outcome.wall_time_s = elapsed_seconds(start);
  return outcome;
}

namespace {

// Applies JSON overrides onto defaulted config structs. Unknown keys are
// rejected so typos in benchmark plans fail loudly instead of silently
// running with defaults.
template <typename Fn>
void apply_config(const std::string& config_json, Fn&& set_field) {
  if (config_json.empty()) {
    return;
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw_invalid(std::string("solver config is not valid JSON: ") + e.what());
  }
  if (parsed.is_null()) {
    return;
  }
  if (!parsed.is_object()) {
    throw_invalid("solver config must be a JSON object");
  }
  for (const auto& [key, value] : parsed.items()) {
    if (!set_field(key, value)) {
      throw_invalid("unknown solver config key: " + key);
    }
  }
}

double as_number(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number()) {
    throw_invalid("solver config key '" + key + "' must be a number");
  }
  return value.get<double>();
}

int as_int(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw_invalid("solver config key '" + key + "' must be an integer");
  }
  return value.get<int>();
}

std::uint64_t as_seed(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_unsigned() && !value.is_number_integer()) {
    throw_invalid("solver config key '" + key + "' must be an integer seed");
  }
  return value.get<std::uint64_t>();
}

}  // namespace

SolverOutcome solve_by_id(const QuboInstance& instance, const std::string& solver_id,
                          const std::string& config_json,
                          std::optional<std::uint64_t> seed_override) {
  if (solver_id == "brute_force") {
    apply_config(config_json, [](const std::string&, const nlohmann::json&) { return false; });
    return solve_brute_force(instance);
  }
  if (solver_id == "sa") {
    SaConfig config;
    apply_config(config_json, [&](const std::string& key, const nlohmann::json& value) {
      if (key == "t0") config.t0 = as_number(value, key);
      else if (key == "cooling") config.cooling = as_number(value, key);
      else if (key == "iters_per_temp") config.iters_per_temp = as_int(value, key);
      else if (key == "num_levels") config.num_levels = as_int(value, key);
      else if (key == "trajectories") config.trajectories = as_int(value, key);
      else if (key == "seed") config.seed = as_seed(value, key);
      else return false;
      return true;
    });
    if (seed_override) {
      config.seed = *seed_override;
    }
    return solve_sa(instance, config);
  }
  if (solver_id == "sgd") {
    SgdConfig config;
    apply_config(config_json, [&](const std::string& key, const nlohmann::json& value) {
      if (key == "max_steps") config.max_steps = as_int(value, key);
      else if (key == "no_improve_stop") config.no_improve_stop = as_int(value, key);
      else if (key == "trajectories") config.trajectories = as_int(value, key);
      else if (key == "seed") config.seed = as_seed(value, key);
      else return false;
      return true;
    });
    if (seed_override) {
      config.seed = *seed_override;
    }
    return solve_sgd(instance, config);
  }
  if (solver_id == "sqa") {
    SqaConfig config;
    apply_config(config_json, [&](const std::string& key, const nlohmann::json& value) {
      if (key == "trotter_slices") config.trotter_slices = as_int(value, key);
      else if (key == "gamma_start") config.gamma_start = as_number(value, key);
      else if (key == "gamma_end") config.gamma_end = as_number(value, key);
      else if (key == "temperature") config.temperature = as_number(value, key);
      else if (key == "sweeps") config.sweeps = as_int(value, key);
      else if (key == "trajectories") config.trajectories = as_int(value, key);
      else if (key == "seed") config.seed = as_seed(value, key);
      else return false;
      return true;
    });
    if (seed_override) {
      config.seed = *seed_override;
    }
    return solve_sqa(instance, config);
  }
  throw_invalid("unknown solver id: " + solver_id +
                " (expected brute_force, sa, sgd or sqa)");
}

}  // namespace qvar
