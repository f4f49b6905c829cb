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

#ifndef QVAR_REFORMULATE_HPP
#define QVAR_REFORMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qvar/landscape.hpp"
#include "qvar/qubo.hpp"

namespace qvar {

/// One step of the variable transform connecting original to reformulated
/// coordinates. Ops replay in order; flips target original positions and
/// aux ops append one product variable computed from the values its parents
/// held at that point in the program.
struct MapOp {
  enum class Kind { kFlip, kAux };
  Kind kind = Kind::kFlip;
  int var = 0;       ///< flipped position, or the appended aux position
  int parent_a = 0;  ///< aux only, original position
  int parent_b = 0;  ///< aux only, original position
};

/// Straight-line variable transform. forward lifts an original configuration
/// to reformulated coordinates (the unique aux-consistent lift); project
/// drops aux positions and undoes the flips.
class VariableMap {
 public:
  VariableMap() = default;
  explicit VariableMap(int original_n) : original_n_(original_n), current_n_(original_n) {}

  int original_n() const { return original_n_; }
  int current_n() const { return current_n_; }
  const std::vector<MapOp>& ops() const { return ops_; }

  void push_flip(int var);
  void push_aux(int parent_a, int parent_b);

  std::vector<std::uint8_t> forward(std::span<const std::uint8_t> original) const;
  std::vector<std::uint8_t> project(std::span<const std::uint8_t> current) const;

  /// Parity of flips applied to an original position after program point
  /// `from_op` (used to relate an aux variable's defining parent values to
  /// the final coordinates).
  int flip_parity_after(int var, std::size_t from_op) const;

 private:
  int original_n_ = 0;
  int current_n_ = 0;
  std::vector<MapOp> ops_;
};

enum class Strategy {
  kPenaltyScaling = 0,
  kSubstitution = 1,
  kAuxDecomposition = 2,
  kRelaxation = 3,
};

const char* strategy_name(Strategy strategy);

enum class SemanticsMode {
  /// Exhaustive when the original instance is small enough, else sampled.
  kAuto,
  kExhaustive,
  kSampled,
};

struct SemanticsReport {
  bool preserved = false;
  std::string mode;    ///< "exhaustive" or "sampled"
  std::string detail;  ///< reason when rejected, empty otherwise
};

struct ReformulateParams {
  /// Upper bound on adopted transformation steps.
  int max_rounds = 8;
  /// Sample count for the ruggedness estimates that drive acceptance. Every
  /// estimate in one call shares `seed`, so comparisons are not skewed by
  /// resampling noise.
  int num_samples = 1000;
  std::uint64_t seed = 0;
  /// Penalty inflation factor for the scaling strategy. Valid in [1.2, 2].
  double penalty_scale = 1.5;
  /// Multiplier grid examined by the relaxation strategy.
  std::vector<double> relaxation_grid = {0.8, 1.2, 1.5, 2.0};
  /// Floor for the product-variable consistency penalty. The effective
  /// weight is max(aux_lambda, 2 |absorbed coupling|).
  double aux_lambda = 1.0;
  /// Which variables the substitution strategy complements.
  enum class SubstitutionMask { kFull, kNegativeLinear };
  SubstitutionMask substitution_mask = SubstitutionMask::kFull;
  /// Enabled strategies in preference order. Empty means all four.
  std::vector<Strategy> strategies;
  SemanticsMode semantics = SemanticsMode::kAuto;
  /// Random pair count for the sampled semantics check.
  int semantic_samples = 1000;
};

struct ReformulationStep {
  std::string strategy;
  double sigma_before = 0.0;
  double sigma_after = 0.0;
  std::string note;
};

struct ReformulationResult {
  QuboInstance instance;
  VariableMap map;
  std::vector<ReformulationStep> trace;
  double sigma_initial = 0.0;
  double sigma_final = 0.0;
  SemanticsReport semantics;
};

/// Checks that `transformed` is a faithful replacement for `original` under
/// `map`: the energy order of original configurations is preserved by the
/// consistent lift (exact ties may reorder freely), minimizers correspond,
/// and no aux-inconsistent configuration can undercut them. The exhaustive
/// mode enumerates every original configuration; the sampled mode checks
/// random configuration pairs plus agreement between independent local
/// searches in both frames.
SemanticsReport preserves_semantics(const QuboInstance& original,
                                    const QuboInstance& transformed, const VariableMap& map,
                                    SemanticsMode mode, int samples, std::uint64_t seed);

/// Greedy ruggedness ascent: each round builds every applicable candidate
/// transformation, estimates its gradient variance with the shared seed, and
/// adopts the candidate that most strictly raises the current estimate while
/// passing the semantics check against the untouched input. Rugged
/// landscapes are the ones where barrier-width-limited search pays off, so
/// higher variance is the goal. Stops when no candidate qualifies or
/// max_rounds is reached.
ReformulationResult reformulate(const QuboInstance& instance, const ReformulateParams& params);

}  // namespace qvar

#endif  // QVAR_REFORMULATE_HPP
