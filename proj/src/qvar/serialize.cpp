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

#include "qvar/serialize.hpp"

#include <fstream>
#include <sstream>

#include "qvar/error.hpp"

namespace qvar {

namespace {

nlohmann::json entries_to_json(const std::vector<Entry>& entries) {
  nlohmann::json out = nlohmann::json::array();
  for (const Entry& e : entries) {
    out.push_back(nlohmann::json::array({e.i, e.j, e.coeff}));
  }
  return out;
}

std::vector<Entry> entries_from_json(const nlohmann::json& j, int n) {
  if (!j.is_array()) throw_invalid("\"entries\" must be an array");
  std::vector<Entry> entries;
  entries.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() ||
        !item[1].is_number_integer() || !item[2].is_number()) {
      throw_invalid("each entry must be [i, j, coeff]");
    }
    Entry e{item[0].get<int>(), item[1].get<int>(), item[2].get<double>()};
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) throw_invalid("entry index out of range");
    if (e.i > e.j) throw_invalid("entries must be upper-triangular (i <= j)");
    entries.push_back(e);
  }
  return entries;
}

// Rebuilds a symmetric matrix from upper-triangular entries (used for the
// objective/constraint split blocks).
SymMatrix matrix_from_entries(const std::vector<Entry>& entries, int n) {
  SymMatrix m(n);
  for (const Entry& e : entries) {
    if (e.i == e.j) {
      m.add(e.i, e.i, e.coeff);
    } else {
      m.add(e.i, e.j, e.coeff / 2.0);
    }
  }
  return m;
}

std::vector<Entry> matrix_to_entries(const SymMatrix& m) {
  std::vector<Entry> out;
  for (int i = 0; i < m.n(); ++i) {
    if (m.at(i, i) != 0.0) out.push_back({i, i, m.at(i, i)});
    for (int j = i + 1; j < m.n(); ++j) {
      if (m.at(i, j) != 0.0) out.push_back({i, j, 2.0 * m.at(i, j)});
    }
  }
  return out;
}

}  // namespace

nlohmann::json instance_to_json(const QuboInstance& instance) {
  nlohmann::json out;
  out["n"] = instance.n();
  out["label"] = instance.label();
  out["entries"] = entries_to_json(instance.entries());
  if (!instance.family().empty()) out["family"] = instance.family();
  if (instance.seed()) out["seed"] = *instance.seed();
  if (instance.offset() != 0.0) out["offset"] = instance.offset();
  if (instance.split()) {
    out["objective_entries"] = entries_to_json(matrix_to_entries(instance.split()->objective));
    out["constraint_entries"] = entries_to_json(matrix_to_entries(instance.split()->constraint));
    out["objective_offset"] = instance.split()->objective_offset;
    out["constraint_offset"] = instance.split()->constraint_offset;
  }
  if (instance.cardinality()) {
    out["cardinality"] = {{"k", instance.cardinality()->k},
                          {"gamma", instance.cardinality()->gamma}};
  }
  if (!instance.aux_vars().empty()) {
    nlohmann::json aux = nlohmann::json::array();
    for (const AuxVar& a : instance.aux_vars()) {
      aux.push_back(nlohmann::json::array({a.z, a.parent_a, a.parent_b}));
    }
    out["aux_vars"] = aux;
  }
  if (!instance.source_json().empty()) {
    out["source"] = nlohmann::json::parse(instance.source_json());
  }
  return out;
}

QuboInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw_invalid("instance file must contain a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw_invalid("instance file missing integer \"n\"");
  }
  const int n = j["n"].get<int>();
  if (n < 1) throw_invalid("instance must have at least one variable");
  if (!j.contains("entries")) throw_invalid("instance file missing \"entries\"");

  std::vector<Entry> entries = entries_from_json(j["entries"], n);
  std::string label = j.value("label", std::string{});
  std::optional<std::uint64_t> seed;
  if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();

  QuboInstance instance = QuboInstance::from_entries(n, entries, label, seed);
  instance.set_family(j.value("family", std::string{}));
  if (j.contains("offset")) instance.set_offset(j["offset"].get<double>());

  if (j.contains("objective_entries") && j.contains("constraint_entries")) {
    ConstraintSplit split;
    split.objective = matrix_from_entries(entries_from_json(j["objective_entries"], n), n);
    split.constraint = matrix_from_entries(entries_from_json(j["constraint_entries"], n), n);
    split.objective_offset = j.value("objective_offset", 0.0);
    split.constraint_offset = j.value("constraint_offset", 0.0);
    // The stored total must equal the split sum; rebuild the matrix from the
    // split so the equality is exact rather than subject to re-rounding.
    for (std::size_t k = 0; k < instance.q().data().size(); ++k) {
      instance.q().data()[k] = split.objective.data()[k] + split.constraint.data()[k];
    }
    instance.split() = std::move(split);
  }
  if (j.contains("cardinality")) {
    instance.cardinality() = CardinalityConstraint{j["cardinality"].value("k", 0.0),
                                                   j["cardinality"].value("gamma", 0.0)};
  }
  if (j.contains("aux_vars")) {
    for (const auto& a : j["aux_vars"]) {
      if (!a.is_array() || a.size() != 3) throw_invalid("each aux annotation must be [z, a, b]");
      instance.aux_vars().push_back({a[0].get<int>(), a[1].get<int>(), a[2].get<int>()});
    }
  }
  if (j.contains("source")) instance.set_source_json(j["source"].dump());
  instance.validate();
  return instance;
}

void save_instance(const QuboInstance& instance, const std::string& path) {
  write_text_file(path, instance_to_json(instance).dump(2) + "\n");
}

QuboInstance load_instance(const std::string& path) {
  return instance_from_json(parse_json_text(read_text_file(path), path));
}

nlohmann::json graph_to_json(const Graph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : graph.edges) {
    edges.push_back(nlohmann::json::array({e.u, e.v, e.weight}));
  }
  return {{"num_vertices", graph.num_vertices}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  Graph g;
  if (!j.is_object() || !j.contains("num_vertices")) {
    throw_invalid("graph JSON must contain \"num_vertices\"");
  }
  g.num_vertices = j["num_vertices"].get<int>();
  for (const auto& e : j.value("edges", nlohmann::json::array())) {
    if (!e.is_array() || e.size() != 3) throw_invalid("each edge must be [u, v, weight]");
    g.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  validate_graph(g);
  return g;
}

nlohmann::json set_cover_to_json(const SetCoverInput& input) {
  return {{"num_elements", input.num_elements}, {"sets", input.sets}};
}

SetCoverInput set_cover_from_json(const nlohmann::json& j) {
  SetCoverInput input;
  if (!j.is_object() || !j.contains("num_elements") || !j.contains("sets")) {
    throw_invalid("set system JSON must contain \"num_elements\" and \"sets\"");
  }
  input.num_elements = j["num_elements"].get<int>();
  for (const auto& s : j["sets"]) input.sets.push_back(s.get<std::vector<int>>());
  validate_set_cover(input);
  return input;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw_io("error while reading " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw_io("error while writing " + path);
}

nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_invalid("malformed JSON in " + what + ": " + e.what());
  }
}

nlohmann::json landscape_report_to_json(const LandscapeReport& report) {
  nlohmann::json j;
  j["sigma_grad"] = report.sigma_grad;
  j["sigma2_grad"] = report.sigma2_grad;
  j["per_var"] = report.per_var;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["normalization"] =
      report.normalization == Normalization::kPerVariable ? "per_variable" : "raw";
  return j;
}

nlohmann::json outcome_to_json(const SolverOutcome& outcome) {
  nlohmann::json j;
  j["solver"] = outcome.solver_id;
  j["best_energy"] = outcome.best_energy;
  j["best_bits"] = outcome.best_bits;
  j["mean_energy"] = outcome.mean_energy;
  j["success_prob"] = outcome.success_prob;
  j["wall_time_s"] = outcome.wall_time_s;
  j["trajectories"] = outcome.trajectories;
  j["trajectory_bests"] = outcome.trajectory_bests;
  j["reference"] = outcome.reference;
  return j;
}

nlohmann::json reformulation_to_json(const ReformulationResult& result) {
  nlohmann::json steps = nlohmann::json::array();
  for (const ReformulationStep& step : result.trace) {
    steps.push_back({{"strategy", step.strategy},
                     {"sigma_before", step.sigma_before},
                     {"sigma_after", step.sigma_after},
                     {"note", step.note}});
  }
  nlohmann::json ops = nlohmann::json::array();
  for (const MapOp& op : result.map.ops()) {
    if (op.kind == MapOp::Kind::kFlip) {
      ops.push_back({{"kind", "flip"}, {"var", op.var}});
    } else {
      ops.push_back({{"kind", "aux"},
                     {"var", op.var},
                     {"parent_a", op.parent_a},
                     {"parent_b", op.parent_b}});
    }
  }
  nlohmann::json j;
  j["sigma_initial"] = result.sigma_initial;
  j["sigma_final"] = result.sigma_final;
  j["steps"] = std::move(steps);
  j["map"] = {{"original_n", result.map.original_n()},
              {"current_n", result.map.current_n()},
              {"ops", std::move(ops)}};
  j["semantics"] = {{"preserved", result.semantics.preserved},
                    {"mode", result.semantics.mode},
                    {"detail", result.semantics.detail}};
  j["instance"] = instance_to_json(result.instance);
  return j;
}

nlohmann::json fit_result_to_json(const FitResult& fit) {
  nlohmann::json points = nlohmann::json::array();
  for (const FitPoint& pt : fit.points) {
    points.push_back({pt.inv_sigma, pt.log_p});
  }
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& [sigma, p] : fit.excluded) {
    excluded.push_back({sigma, p});
  }
  nlohmann::json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["alpha_estimate"] = -fit.slope;
  j["points"] = std::move(points);
  j["excluded"] = std::move(excluded);
  return j;
}

nlohmann::json recommendation_to_json(const Recommendation& rec) {
  nlohmann::json j;
  j["verdict"] = verdict_name(rec.verdict);
  j["sigma_measured"] = rec.sigma_measured;
  j["threshold_used"] = rec.threshold_used;
  j["rationale"] = rec.rationale;
  return j;
}

nlohmann::json scan_result_to_json(const ScanResult& scan) {
  nlohmann::json j;
  j["min_energy"] = scan.min_energy;
  j["minimizers"] = scan.minimizers;
  j["local_minima"] = scan.local_minima;
  // The full energy table can reach 2^20 doubles; report its size only.
  j["configurations"] = scan.energies.size();
  return j;
}

nlohmann::json bench_result_to_json(const BenchResult& result) {
  nlohmann::json j;
  j["output_dir"] = result.output_dir;
  j["rows"] = result.rows;
  j["skips"] = result.skips;
  j["errors"] = result.errors;
  j["warnings"] = result.warnings;
  j["written"] = result.written;
  return j;
}

ReformulateParams reformulate_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw_invalid("reformulation parameters must be a JSON object");
  }
  ReformulateParams params;
  for (const auto& [key, value] : j.items()) {
    if (key == "max_rounds") {
      params.max_rounds = value.get<int>();
    } else if (key == "num_samples") {
      params.num_samples = value.get<int>();
    } else if (key == "seed") {
      params.seed = value.get<std::uint64_t>();
    } else if (key == "penalty_scale") {
      params.penalty_scale = value.get<double>();
    } else if (key == "relaxation_grid") {
      params.relaxation_grid = value.get<std::vector<double>>();
    } else if (key == "aux_lambda") {
      params.aux_lambda = value.get<double>();
    } else if (key == "substitution_mask") {
      const std::string mask = value.get<std::string>();
      if (mask == "full") {
        params.substitution_mask = ReformulateParams::SubstitutionMask::kFull;
      } else if (mask == "negative_linear") {
        params.substitution_mask = ReformulateParams::SubstitutionMask::kNegativeLinear;
      } else {
        throw_invalid("substitution_mask must be \"full\" or \"negative_linear\", got \"" + mask +
                      "\"");
      }
    } else if (key == "strategies") {
      params.strategies.clear();
      for (const auto& name : value) {
        const std::string text = name.get<std::string>();
        bool found = false;
        for (const Strategy s : {Strategy::kPenaltyScaling, Strategy::kSubstitution,
                                 Strategy::kAuxDecomposition, Strategy::kRelaxation}) {
          if (text == strategy_name(s)) {
            params.strategies.push_back(s);
            found = true;
            break;
          }
        }
        if (!found) {
          throw_invalid("unknown reformulation strategy \"" + text + "\"");
        }
      }
    } else if (key == "semantics") {
      const std::string mode = value.get<std::string>();
      if (mode == "auto") {
        params.semantics = SemanticsMode::kAuto;
      } else if (mode == "exhaustive") {
        params.semantics = SemanticsMode::kExhaustive;
      } else if (mode == "sampled") {
        params.semantics = SemanticsMode::kSampled;
      } else {
        throw_invalid("semantics must be \"auto\", \"exhaustive\" or \"sampled\", got \"" + mode +
                      "\"");
      }
    } else if (key == "semantic_samples") {
      params.semantic_samples = value.get<int>();
    } else {
      throw_invalid("unknown reformulation parameter \"" + key + "\"");
    }
  }
  return params;
}

}  // namespace qvar
