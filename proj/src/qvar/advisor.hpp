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

#ifndef QVAR_ADVISOR_HPP
#define QVAR_ADVISOR_HPP

#include <string>
#include <utility>
#include <vector>

#include "qvar/landscape.hpp"

namespace qvar {

/// Model constants for the barrier-crossing comparison. Defaults are picked
/// so the critical ruggedness alpha * kt / delta_e lands exactly on the 0.3
/// decision threshold.
struct WkbParams {
  double alpha = 2.1;    ///< problem-dependent tunneling constant
  double kt = 1.0;       ///< thermal energy scale
  double delta_e = 7.0;  ///< representative barrier height
};

/// Tunneling-style transition probability proxy exp(-alpha / sigma).
/// Normalized so the prefactor is 1; only ratios and comparisons of these
/// values are meaningful. Strictly increasing in sigma. sigma must be
/// positive.
double tunneling_probability(double sigma, const WkbParams& params = {});

/// Thermal activation probability exp(-delta_e / kt). Requires kt > 0 and
/// delta_e >= 0.
double thermal_probability(double delta_e, double kt);

/// Ruggedness level where tunneling and thermal rates break even:
/// alpha * kt / delta_e. All parameters must be positive.
double critical_sigma(const WkbParams& params = {});

struct FitPoint {
  double inv_sigma = 0.0;
  double log_p = 0.0;
};

struct FitResult {
  double slope = 0.0;      ///< of log(p) on 1/sigma; -slope estimates alpha
  double intercept = 0.0;
  double r_squared = 0.0;  ///< clamped to [0, 1]; 0 for a constant response
  std::vector<FitPoint> points;  ///< transformed points used by the fit
  std::vector<std::pair<double, double>> excluded;  ///< dropped (sigma, p) inputs
};

/// Ordinary least squares of log(p_success) on 1/sigma over (sigma, p)
/// observations. Points with p <= 0 (log undefined) or sigma <= 0 are
/// excluded and reported. Fewer than 3 usable points, or no spread in
/// sigma, raises insufficient-data.
FitResult fit_wkb(const std::vector<std::pair<double, double>>& points);

enum class Verdict {
  kQuantumRecommended,
  kClassicalRecommended,
  kMarginal,
};

const char* verdict_name(Verdict verdict);

/// Thresholds on the gradient STANDARD DEVIATION sigma_grad, not the
/// variance. Reports carry both; the decision rule reads sigma_grad.
/// Boundaries are closed: sigma >= 0.3 is quantum territory, sigma <= 0.2
/// classical, between them marginal.
inline constexpr double kQuantumSigmaThreshold = 0.3;
inline constexpr double kClassicalSigmaThreshold = 0.2;
/// Sizes above this get a hardware-capacity caveat in the rationale.
inline constexpr int kAnnealerSizeLimit = 5000;

struct Recommendation {
  Verdict verdict = Verdict::kMarginal;
  double sigma_measured = 0.0;
  double threshold_used = kQuantumSigmaThreshold;
  std::string rationale;
};

/// Pure decision rule on (report.sigma_grad, n): same inputs always yield
/// the same verdict and rationale text.
Recommendation recommend(const LandscapeReport& report, int n);

}  // namespace qvar

#endif  // QVAR_ADVISOR_HPP
