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

#include "qvar/reformulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <utility>

#include "qvar/error.hpp"
#include "qvar/rng.hpp"
#include "qvar/solvers.hpp"

namespace qvar {
namespace {

/// Largest original instance the exhaustive semantics check will enumerate.
constexpr int kExhaustiveCap = 16;
/// Largest transformed instance worth a full enumeration cross-check.
constexpr int kScanCrossCheckCap = 20;

double tie_band(double reference) { return 1e-7 * (1.0 + std::abs(reference)); }

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

}  // namespace

void VariableMap::push_flip(int var) {
  if (var < 0 || var >= original_n_) {
    throw_invalid("flip target must be an original variable position");
  }
  ops_.push_back(MapOp{MapOp::Kind::kFlip, var, 0, 0});
}

void VariableMap::push_aux(int parent_a, int parent_b) {
  if (parent_a < 0 || parent_a >= original_n_ || parent_b < 0 || parent_b >= original_n_ ||
      parent_a == parent_b) {
    throw_invalid("aux parents must be two distinct original variable positions");
  }
  ops_.push_back(MapOp{MapOp::Kind::kAux, current_n_, parent_a, parent_b});
  ++current_n_;
}

std::vector<std::uint8_t> VariableMap::forward(std::span<const std::uint8_t> original) const {
  if (static_cast<int>(original.size()) != original_n_) {
    throw_invalid("forward expects a configuration of original length");
  }
  std::vector<std::uint8_t> out(original.begin(), original.end());
  out.reserve(static_cast<std::size_t>(current_n_));
  for (const MapOp& op : ops_) {
    if (op.kind == MapOp::Kind::kFlip) {
      out[static_cast<std::size_t>(op.var)] ^= 1u;
    } else {
      out.push_back(out[static_cast<std::size_t>(op.parent_a)] &
                    out[static_cast<std::size_t>(op.parent_b)]);
    }
  }
  return out;
}

std::vector<std::uint8_t> VariableMap::project(std::span<const std::uint8_t> current) const {
  if (static_cast<int>(current.size()) != current_n_) {
    throw_invalid("project expects a configuration of transformed length");
  }
  std::vector<std::uint8_t> out(current.begin(),
                                current.begin() + static_cast<std::ptrdiff_t>(original_n_));
  // Flips are involutions on disjoint state, so undo order does not matter.
  for (const MapOp& op : ops_) {
    if (op.kind == MapOp::Kind::kFlip) {
      out[static_cast<std::size_t>(op.var)] ^= 1u;
    }
  }
  return out;
}

int VariableMap::flip_parity_after(int var, std::size_t from_op) const {
  int parity = 0;
  for (std::size_t p = from_op + 1; p < ops_.size(); ++p) {
    if (ops_[p].kind == MapOp::Kind::kFlip && ops_[p].var == var) {
      parity ^= 1;
    }
  }
  return parity;
}

const char* strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kPenaltyScaling:
      return "penalty_scaling";
    case Strategy::kSubstitution:
      return "substitution";
    case Strategy::kAuxDecomposition:
      return "aux_decomposition";
    case Strategy::kRelaxation:
      return "relaxation";
  }
  return "unknown";
}

namespace {

struct Candidate {
  QuboInstance instance;
  std::vector<MapOp> new_ops;
  Strategy strategy = Strategy::kPenaltyScaling;
  std::string note;
  double sigma = 0.0;
};

// x_i -> 1 - x_i for every flagged variable, applied to one quadratic form.
// Linear in the coefficients, so applying it to the objective and constraint
// parts separately matches applying it to their sum.
std::pair<SymMatrix, double> flip_form(const SymMatrix& m, double offset,
                                       const std::vector<char>& flagged) {
  const int n = m.n();
  SymMatrix out(n);
  double extra = 0.0;
  for (int i = 0; i < n; ++i) {
    double sign_i = flagged[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    double coupled = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      if (flagged[static_cast<std::size_t>(j)]) {
        coupled += 2.0 * m.at(i, j);
      }
    }
    out.set(i, i, sign_i * (m.at(i, i) + coupled));
    if (flagged[static_cast<std::size_t>(i)]) {
      extra += m.at(i, i);
    }
    for (int j = i + 1; j < n; ++j) {
      double sign_j = flagged[static_cast<std::size_t>(j)] ? -1.0 : 1.0;
      out.set(i, j, m.at(i, j) * sign_i * sign_j);
      if (flagged[static_cast<std::size_t>(i)] && flagged[static_cast<std::size_t>(j)]) {
        extra += 2.0 * m.at(i, j);
      }
    }
  }
  return {std::move(out), offset + extra};
}

QuboInstance apply_flips(const QuboInstance& in, const std::vector<int>& positions,
                         int original_n) {
  std::vector<char> flagged(static_cast<std::size_t>(in.n()), 0);
  for (int p : positions) {
    flagged[static_cast<std::size_t>(p)] = 1;
  }
  QuboInstance out = in;
  auto [q, offset] = flip_form(in.q(), in.offset(), flagged);
  out.q() = std::move(q);
  out.set_offset(offset);
  if (in.split()) {
    ConstraintSplit split;
    auto [obj, obj_off] = flip_form(in.split()->objective, in.split()->objective_offset, flagged);
    auto [con, con_off] = flip_form(in.split()->constraint, in.split()->constraint_offset, flagged);
    split.objective = std::move(obj);
    split.objective_offset = obj_off;
    split.constraint = std::move(con);
    split.constraint_offset = con_off;
    out.split() = std::move(split);
  }
  if (in.cardinality()) {
    if (static_cast<int>(positions.size()) == original_n) {
      // Complementing every original variable turns "pick k" into
      // "pick n - k" with the same penalty weight.
      out.cardinality() = CardinalityConstraint{static_cast<double>(original_n) -
                                                    in.cardinality()->k,
                                                in.cardinality()->gamma};
    } else {
      out.cardinality().reset();
    }
  }
  return out;
}

SymMatrix grow_matrix(const SymMatrix& m, int new_n) {
  SymMatrix out(new_n);
  for (int i = 0; i < m.n(); ++i) {
    for (int j = i; j < m.n(); ++j) {
      out.set(i, j, m.at(i, j));
    }
  }
  return out;
}

std::optional<Candidate> make_penalty_scaling(const QuboInstance& in, double factor,
                                              Strategy strategy, const char* what) {
  if (!in.split()) {
    return std::nullopt;
  }
  const ConstraintSplit& split = *in.split();
  bool has_constraint = split.constraint_offset != 0.0;
  for (double v : split.constraint.data()) {
    if (v != 0.0) {
      has_constraint = true;
      break;
    }
  }
  if (!has_constraint) {
    return std::nullopt;
  }
  Candidate cand;
  cand.strategy = strategy;
  cand.note = std::string(what) + " " + format_double(factor);
  cand.instance = in;
  QuboInstance& out = cand.instance;
  const int n = in.n();
  SymMatrix q(n);
  SymMatrix scaled(n);
  for (std::size_t idx = 0; idx < q.data().size(); ++idx) {
    scaled.data()[idx] = factor * split.constraint.data()[idx];
    q.data()[idx] = split.objective.data()[idx] + scaled.data()[idx];
  }
  out.q() = std::move(q);
  out.set_offset(split.objective_offset + factor * split.constraint_offset);
  out.split() = ConstraintSplit{split.objective, std::move(scaled), split.objective_offset,
                                factor * split.constraint_offset};
  if (in.cardinality()) {
    out.cardinality() = CardinalityConstraint{in.cardinality()->k,
                                              factor * in.cardinality()->gamma};
  }
  return cand;
}

std::optional<Candidate> make_substitution(const QuboInstance& in, int original_n,
                                           ReformulateParams::SubstitutionMask mask) {
  std::vector<int> positions;
  for (int i = 0; i < original_n; ++i) {
    if (mask == ReformulateParams::SubstitutionMask::kFull || in.q().at(i, i) < 0.0) {
      positions.push_back(i);
    }
  }
  if (positions.empty()) {
    return std::nullopt;
  }
  Candidate cand;
  cand.strategy = Strategy::kSubstitution;
  cand.note = "complemented " + std::to_string(positions.size()) + " of " +
              std::to_string(original_n) + " variables";
  cand.instance = apply_flips(in, positions, original_n);
  for (int p : positions) {
    cand.new_ops.push_back(MapOp{MapOp::Kind::kFlip, p, 0, 0});
  }
  return cand;
}

std::optional<Candidate> make_aux(const QuboInstance& in, int original_n, double lambda_floor) {
  // Largest remaining coupling between two original variables whose product
  // has not been absorbed yet. The gadget re-introduces a +lambda coupling
  // on the pair, so absorbed pairs must stay off-limits.
  int best_a = -1;
  int best_b = -1;
  double best_mag = 0.0;
  for (int a = 0; a < original_n; ++a) {
    for (int b = a + 1; b < original_n; ++b) {
      bool taken = false;
      for (const AuxVar& aux : in.aux_vars()) {
        if ((aux.parent_a == a && aux.parent_b == b) ||
            (aux.parent_a == b && aux.parent_b == a)) {
          taken = true;
          break;
        }
      }
      if (taken) {
        continue;
      }
      double mag = std::abs(in.q().at(a, b));
      if (mag > best_mag) {
        best_mag = mag;
        best_a = a;
        best_b = b;
      }
    }
  }
  if (best_a < 0 || best_mag == 0.0) {
    return std::nullopt;
  }

  const int n = in.n();
  const int z = n;
  const double coupling = 2.0 * in.q().at(best_a, best_b);
  const double lambda = std::max(lambda_floor, 2.0 * std::abs(coupling));

  QuboInstance out(n + 1, in.label(), in.seed());
  out.set_family(in.family());
  out.set_source_json(in.source_json());
  out.set_offset(in.offset());
  out.aux_vars() = in.aux_vars();
  out.cardinality() = in.cardinality();

  SymMatrix q = grow_matrix(in.q(), n + 1);
  q.set(best_a, best_b, lambda / 2.0);
  q.set(z, z, coupling + 3.0 * lambda);
  q.set(z, best_a, -lambda);
  q.set(z, best_b, -lambda);
  out.q() = std::move(q);

  if (in.split()) {
    // The enforcement penalty is a constraint; the absorbed coupling keeps
    // its original objective/constraint shares on the new diagonal.
    const ConstraintSplit& split = *in.split();
    double obj_share = 2.0 * split.objective.at(best_a, best_b);
    double con_share = 2.0 * split.constraint.at(best_a, best_b);
    SymMatrix obj = grow_matrix(split.objective, n + 1);
    SymMatrix con = grow_matrix(split.constraint, n + 1);
    obj.set(best_a, best_b, 0.0);
    obj.set(z, z, obj_share);
    con.set(best_a, best_b, lambda / 2.0);
    con.set(z, z, con_share + 3.0 * lambda);
    con.set(z, best_a, -lambda);
    con.set(z, best_b, -lambda);
    out.split() = ConstraintSplit{std::move(obj), std::move(con), split.objective_offset,
                                  split.constraint_offset};
  }

  out.aux_vars().push_back(AuxVar{z, best_a, best_b});

  Candidate cand;
  cand.strategy = Strategy::kAuxDecomposition;
  cand.note = "absorbed coupling " + format_double(coupling) + " on (" +
              std::to_string(best_a) + ", " + std::to_string(best_b) + ") with weight " +
              format_double(lambda);
  cand.instance = std::move(out);
  cand.new_ops.push_back(MapOp{MapOp::Kind::kAux, z, best_a, best_b});
  return cand;
}

}  // namespace

SemanticsReport preserves_semantics(const QuboInstance& original,
                                    const QuboInstance& transformed, const VariableMap& map,
                                    SemanticsMode mode, int samples, std::uint64_t seed) {
  if (map.original_n() != original.n() || map.current_n() != transformed.n()) {
    throw_invalid("variable map does not connect the two instances");
  }
  const int n = original.n();

  SemanticsReport report;
  bool exhaustive = false;
  switch (mode) {
    case SemanticsMode::kExhaustive:
      if (n > kExhaustiveCap) {
        throw_capacity("exhaustive semantics check is limited to " +
                       std::to_string(kExhaustiveCap) + " original variables");
      }
      exhaustive = true;
      break;
    case SemanticsMode::kSampled:
      exhaustive = false;
      break;
    case SemanticsMode::kAuto:
      exhaustive = n <= kExhaustiveCap;
      break;
  }
  report.mode = exhaustive ? "exhaustive" : "sampled";

  // Product-variable exclusion: for every aux variable, the energy gained by
  // setting it against its defining product must be positive whatever the
  // parents hold, read directly off the final coefficients. This rules out
  // any aux-inconsistent configuration being a minimizer, in either mode.
  const auto& ops = map.ops();
  for (std::size_t p = 0; p < ops.size(); ++p) {
    if (ops[p].kind != MapOp::Kind::kAux) {
      continue;
    }
    const int z = ops[p].var;
    const int a = ops[p].parent_a;
    const int b = ops[p].parent_b;
    for (int w = 0; w < transformed.n(); ++w) {
      if (w == z || w == a || w == b) {
        continue;
      }
      if (transformed.q().at(z, w) != 0.0) {
        report.detail = "aux variable " + std::to_string(z) + " couples beyond its parents";
        return report;
      }
    }
    const int fa = map.flip_parity_after(a, p);
    const int fb = map.flip_parity_after(b, p);
    const double qzz = transformed.q().at(z, z);
    const double qza = transformed.q().at(z, a);
    const double qzb = transformed.q().at(z, b);
    for (int va = 0; va <= 1; ++va) {
      for (int vb = 0; vb <= 1; ++vb) {
        const int consistent = ((va ^ fa) & (vb ^ fb));
        const double gain = qzz + 2.0 * qza * va + 2.0 * qzb * vb;
        const bool ok = consistent == 1 ? gain < 0.0 : gain > 0.0;
        if (!ok) {
          report.detail = "aux variable " + std::to_string(z) +
                          " is not pinned to its product at parent values (" +
                          std::to_string(va) + ", " + std::to_string(vb) + ")";
          return report;
        }
      }
    }
  }

  if (exhaustive) {
    const std::uint64_t total = std::uint64_t{1} << n;
    std::vector<double> orig_energy(total);
    std::vector<double> lifted_energy(total);
    std::vector<std::uint32_t> order(total);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (int i = 0; i < n; ++i) {
        bits[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>((mask >> i) & 1u);
      }
      orig_energy[mask] = evaluate(original, bits);
      lifted_energy[mask] = evaluate(transformed, map.forward(bits));
      order[mask] = static_cast<std::uint32_t>(mask);
    }
    std::sort(order.begin(), order.end(), [&](std::uint32_t lhs, std::uint32_t rhs) {
      return orig_energy[lhs] < orig_energy[rhs];
    });

    // Walk tie groups of the original spectrum: strict level ordering must
    // survive the transform, ties may reorder freely within their group.
    std::size_t group_start = 0;
    double prev_group_max = 0.0;
    bool first_group = true;
    std::vector<std::uint32_t> minimizer_masks;
    while (group_start < order.size()) {
      std::size_t group_end = group_start + 1;
      while (group_end < order.size() &&
             energies_match(orig_energy[order[group_end]],
                            orig_energy[order[group_end - 1]])) {
        ++group_end;
      }
      double group_min = std::numeric_limits<double>::infinity();
      double group_max = -std::numeric_limits<double>::infinity();
      for (std::size_t k = group_start; k < group_end; ++k) {
        group_min = std::min(group_min, lifted_energy[order[k]]);
        group_max = std::max(group_max, lifted_energy[order[k]]);
      }
      if (!first_group && !(prev_group_max < group_min)) {
        report.detail = "energy order of original configurations is not preserved";
        return report;
      }
      if (first_group) {
        for (std::size_t k = group_start; k < group_end; ++k) {
          minimizer_masks.push_back(order[k]);
        }
      }
      prev_group_max = group_max;
      first_group = false;
      group_start = group_end;
    }

    if (transformed.n() <= kScanCrossCheckCap) {
      ScanResult scan = landscape_scan(transformed);
      std::vector<std::vector<std::uint8_t>> expected;
      expected.reserve(minimizer_masks.size());
      for (std::uint32_t mask : minimizer_masks) {
        for (int i = 0; i < n; ++i) {
          bits[static_cast<std::size_t>(i)] =
              static_cast<std::uint8_t>((mask >> i) & 1u);
        }
        expected.push_back(map.forward(bits));
      }
      std::sort(expected.begin(), expected.end());
      if (expected != scan.minimizers) {
        report.detail = "minimizer sets differ between the two instances";
        return report;
      }
    }
    report.preserved = true;
    return report;
  }

  // Sampled mode: random configuration pairs must keep their order, then two
  // independent local searches must agree once the transformed winner is
  // projected back.
  RngStream rng(derive_seed(seed, 0x73656d63ULL));
  for (int s = 0; s < samples; ++s) {
    std::vector<std::uint8_t> x = rng.bits(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> y = rng.bits(static_cast<std::size_t>(n));
    double ex = evaluate(original, x);
    double ey = evaluate(original, y);
    if (energies_match(ex, ey)) {
      continue;
    }
    double tx = evaluate(transformed, map.forward(x));
    double ty = evaluate(transformed, map.forward(y));
    if ((ex < ey && !(tx < ty)) || (ey < ex && !(ty < tx))) {
      report.detail = "sampled configuration pair changed energy order";
      return report;
    }
  }

  SgdConfig probe;
  probe.max_steps = 300;
  probe.no_improve_stop = 60;
  probe.trajectories = 16;
  probe.seed = derive_seed(seed, 0x70726f62ULL);
  SolverOutcome in_original = solve_sgd(original, probe);
  probe.seed = derive_seed(seed, 0x70726f63ULL);
  SolverOutcome in_transformed = solve_sgd(transformed, probe);
  std::vector<std::uint8_t> projected = map.project(in_transformed.best_bits);
  double projected_energy = evaluate(original, projected);
  if (projected_energy > in_original.best_energy + tie_band(in_original.best_energy)) {
    report.detail = "local search in the transformed frame projects to a worse solution";
    return report;
  }
  report.preserved = true;
  return report;
}

ReformulationResult reformulate(const QuboInstance& instance, const ReformulateParams& params) {
  if (params.max_rounds < 0) {
    throw_invalid("max_rounds must be non-negative");
  }
  if (params.num_samples < 2) {
    throw_invalid("ruggedness estimation needs at least 2 samples");
  }
  if (params.penalty_scale < 1.2 || params.penalty_scale > 2.0) {
    throw_invalid("penalty_scale must lie in [1.2, 2.0]");
  }
  if (params.aux_lambda <= 0.0) {
    throw_invalid("aux_lambda must be positive");
  }
  if (params.semantic_samples < 1) {
    throw_invalid("semantic_samples must be at least 1");
  }
  for (double m : params.relaxation_grid) {
    if (m <= 0.0) {
      throw_invalid("relaxation multipliers must be positive");
    }
  }
  if (instance.n() < 1) {
    throw_invalid("cannot reformulate an empty instance");
  }

  std::vector<Strategy> strategies = params.strategies;
  if (strategies.empty()) {
    strategies = {Strategy::kPenaltyScaling, Strategy::kSubstitution,
                  Strategy::kAuxDecomposition, Strategy::kRelaxation};
  }

  LandscapeOptions estimate;
  estimate.num_samples = params.num_samples;
  estimate.seed = params.seed;

  const QuboInstance& original = instance;
  const int original_n = instance.n();

  ReformulationResult result;
  result.instance = instance;
  result.map = VariableMap(original_n);
  result.sigma_initial = gradient_variance(instance, estimate).sigma_grad;
  result.sigma_final = result.sigma_initial;

  double sigma_current = result.sigma_initial;
  for (int round = 0; round < params.max_rounds; ++round) {
    std::vector<Candidate> candidates;
    for (Strategy strategy : strategies) {
      switch (strategy) {
        case Strategy::kPenaltyScaling: {
          auto cand = make_penalty_scaling(result.instance, params.penalty_scale, strategy,
                                           "penalty factor");
          if (cand) {
            candidates.push_back(std::move(*cand));
          }
          break;
        }
        case Strategy::kSubstitution: {
          auto cand = make_substitution(result.instance, original_n, params.substitution_mask);
          if (cand) {
            candidates.push_back(std::move(*cand));
          }
          break;
        }
        case Strategy::kAuxDecomposition: {
          auto cand = make_aux(result.instance, original_n, params.aux_lambda);
          if (cand) {
            candidates.push_back(std::move(*cand));
          }
          break;
        }
        case Strategy::kRelaxation: {
          if (!result.instance.cardinality()) {
            break;
          }
          for (double multiplier : params.relaxation_grid) {
            auto cand = make_penalty_scaling(result.instance, multiplier, strategy,
                                             "constraint multiplier");
            if (cand) {
              candidates.push_back(std::move(*cand));
            }
          }
          break;
        }
      }
    }
    if (candidates.empty()) {
      break;
    }

    for (Candidate& cand : candidates) {
      cand.sigma = gradient_variance(cand.instance, estimate).sigma_grad;
    }
    // Stable sort keeps the strategy preference order for equal estimates.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& lhs, const Candidate& rhs) {
                       return lhs.sigma > rhs.sigma;
                     });

    bool adopted = false;
    for (Candidate& cand : candidates) {
      if (!(cand.sigma > sigma_current)) {
        break;
      }
      VariableMap trial = result.map;
      for (const MapOp& op : cand.new_ops) {
        if (op.kind == MapOp::Kind::kFlip) {
          trial.push_flip(op.var);
        } else {
          trial.push_aux(op.parent_a, op.parent_b);
        }
      }
      SemanticsReport sem = preserves_semantics(original, cand.instance, trial,
                                                params.semantics, params.semantic_samples,
                                                params.seed);
      if (!sem.preserved) {
        continue;
      }
      result.trace.push_back(ReformulationStep{strategy_name(cand.strategy), sigma_current,
                                               cand.sigma, cand.note});
      result.instance = std::move(cand.instance);
      result.map = std::move(trial);
      sigma_current = cand.sigma;
      adopted = true;
      break;
    }
    if (!adopted) {
      break;
    }
  }

  result.sigma_final = sigma_current;
  if (result.trace.empty()) {
    result.semantics.preserved = true;
    result.semantics.mode = "identity";
  } else {
    result.semantics = preserves_semantics(original, result.instance, result.map,
                                           params.semantics, params.semantic_samples,
                                           params.seed);
  }
  return result;
}

}  // namespace qvar
