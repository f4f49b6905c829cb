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

#include "qvar/advisor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qvar/error.hpp"

namespace qvar {
namespace {

void check_params(const WkbParams& params) {
  if (params.alpha <= 0.0 || params.kt <= 0.0 || params.delta_e <= 0.0) {
    throw_invalid("model parameters alpha, kt and delta_e must all be positive");
  }
}

std::string format_sigma(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

}  // namespace

double tunneling_probability(double sigma, const WkbParams& params) {
  check_params(params);
  if (sigma <= 0.0) {
    throw_invalid("tunneling probability requires sigma > 0");
  }
  return std::exp(-params.alpha / sigma);
}

double thermal_probability(double delta_e, double kt) {
  if (kt <= 0.0) {
    throw_invalid("thermal probability requires kt > 0");
  }
  if (delta_e < 0.0) {
    throw_invalid("thermal probability requires delta_e >= 0");
  }
  return std::exp(-delta_e / kt);
}

double critical_sigma(const WkbParams& params) {
  check_params(params);
  return params.alpha * params.kt / params.delta_e;
}

FitResult fit_wkb(const std::vector<std::pair<double, double>>& points) {
  FitResult result;
  for (const auto& [sigma, p] : points) {
    if (sigma <= 0.0 || p <= 0.0) {
      result.excluded.emplace_back(sigma, p);
      continue;
    }
    result.points.push_back(FitPoint{1.0 / sigma, std::log(p)});
  }
  const std::size_t n = result.points.size();
  if (n < 3) {
    throw_insufficient("linear fit needs at least 3 points with sigma > 0 and p > 0, got " +
                       std::to_string(n));
  }

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const FitPoint& pt : result.points) {
    mean_x += pt.inv_sigma;
    mean_y += pt.log_p;
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  for (const FitPoint& pt : result.points) {
    const double dx = pt.inv_sigma - mean_x;
    sxx += dx * dx;
    sxy += dx * (pt.log_p - mean_y);
  }
  if (sxx == 0.0) {
    throw_insufficient("all usable points share one sigma value; slope is undetermined");
  }
  result.slope = sxy / sxx;
  result.intercept = mean_y - result.slope * mean_x;

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const FitPoint& pt : result.points) {
    const double fitted = result.intercept + result.slope * pt.inv_sigma;
    ss_res += (pt.log_p - fitted) * (pt.log_p - fitted);
    ss_tot += (pt.log_p - mean_y) * (pt.log_p - mean_y);
  }
  // A constant response carries no explainable variance; report 0 rather
  // than the 0/0 form.
  result.r_squared = ss_tot == 0.0 ? 0.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return result;
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kQuantumRecommended:
      return "quantum_recommended";
    case Verdict::kClassicalRecommended:
      return "classical_recommended";
    case Verdict::kMarginal:
      return "marginal";
  }
  return "unknown";
}

Recommendation recommend(const LandscapeReport& report, int n) {
  Recommendation rec;
  rec.sigma_measured = report.sigma_grad;
  rec.threshold_used = kQuantumSigmaThreshold;

  const double sigma = report.sigma_grad;
  if (sigma >= kQuantumSigmaThreshold) {
    rec.verdict = Verdict::kQuantumRecommended;
    rec.rationale = "gradient std " + format_sigma(sigma) + " is at or above the " +
                    format_sigma(kQuantumSigmaThreshold) +
                    " threshold: the landscape is rugged enough that barrier-width-limited "
                    "(tunneling-capable) search is favored over thermal hill climbing.";
  } else if (sigma <= kClassicalSigmaThreshold) {
    rec.verdict = Verdict::kClassicalRecommended;
    rec.rationale = "gradient std " + format_sigma(sigma) + " is at or below " +
                    format_sigma(kClassicalSigmaThreshold) +
                    ": the landscape is smooth, thermal search crosses its barriers "
                    "efficiently and classical solvers are the economical choice.";
  } else {
    rec.verdict = Verdict::kMarginal;
    rec.rationale = "gradient std " + format_sigma(sigma) + " falls between " +
                    format_sigma(kClassicalSigmaThreshold) + " and " +
                    format_sigma(kQuantumSigmaThreshold) +
                    ": neither regime dominates; benchmark both solver classes on a sample.";
  }
  if (n > kAnnealerSizeLimit) {
    rec.rationale += " Caveat: " + std::to_string(n) +
                     " variables exceeds the ~" + std::to_string(kAnnealerSizeLimit) +
                     "-variable capacity typical of current annealing hardware; expect "
                     "decomposition overhead regardless of the verdict.";
  }
  return rec;
}

}  // namespace qvar
