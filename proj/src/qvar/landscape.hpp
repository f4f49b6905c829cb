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

#ifndef QVAR_LANDSCAPE_HPP
#define QVAR_LANDSCAPE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qvar/qubo.hpp"

namespace qvar {

/// The discrete gradient component used throughout: the single-flip energy
/// delta for variable `index` (see flip_delta).
double gradient_at(const QuboInstance& instance, std::span<const std::uint8_t> bits, int index);

/// The analytic linear-coefficient form a_i + sum_{j != i} b_ij x_j, exposed
/// for comparison. It equals the flip delta up to the (1 - 2 x_i) sign
/// factor, so the two have identical magnitude at every configuration.
double analytic_gradient_at(const QuboInstance& instance, std::span<const std::uint8_t> bits,
                            int index);

enum class Normalization {
  /// sigma2 = mean over variables of Var(gradient_i). Default.
  kPerVariable,
  /// sigma2 = sum over variables of Var(gradient_i).
  kRaw,
};

struct LandscapeOptions {
  int num_samples = 1000;
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::kPerVariable;
  /// Worker threads for the sampling loop. Sample configurations are drawn
  /// from per-sample streams and partial statistics merge in fixed chunk
  /// order, so results do not depend on this value.
  int threads = 1;
};

struct LandscapeReport {
  double sigma_grad = 0.0;   ///< sqrt of sigma2_grad
  double sigma2_grad = 0.0;  ///< aggregated gradient variance
  std::vector<double> per_var;  ///< unbiased per-variable variances
  int samples = 0;
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::kPerVariable;
};

/// Ruggedness estimate: per-variable variances of the single-flip gradient
/// over uniform random configurations (unbiased N-1 estimator), aggregated
/// per `normalization`. Requires num_samples >= 2.
LandscapeReport gradient_variance(const QuboInstance& instance, const LandscapeOptions& options);

/// Same estimator over caller-provided configurations (each of length n).
/// Used by property tests; the report's seed field is left at 0.
LandscapeReport gradient_variance_from_samples(
    const QuboInstance& instance, const std::vector<std::vector<std::uint8_t>>& samples,
    Normalization normalization = Normalization::kPerVariable);

struct ScanResult {
  double min_energy = 0.0;
  std::vector<std::vector<std::uint8_t>> minimizers;  ///< all argmin configurations
  long long local_minima = 0;  ///< configs with no strictly improving flip
  std::vector<double> energies;  ///< energy of every configuration, index = bitmask
};

/// Exhaustive enumeration of all 2^n configurations via Gray-code updates.
/// Capacity-limited to n <= 20. The energies vector is indexed by the
/// configuration's bitmask (bit i of the index = variable i).
ScanResult landscape_scan(const QuboInstance& instance);

}  // namespace qvar

#endif  // QVAR_LANDSCAPE_HPP
