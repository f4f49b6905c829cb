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

#ifndef QVAR_SERIALIZE_HPP
#define QVAR_SERIALIZE_HPP

#include <string>

#include "json.hpp"
#include "qvar/advisor.hpp"
#include "qvar/bench.hpp"
#include "qvar/generators.hpp"
#include "qvar/graph.hpp"
#include "qvar/landscape.hpp"
#include "qvar/qubo.hpp"
#include "qvar/reformulate.hpp"
#include "qvar/solvers.hpp"

namespace qvar {

/// Instance file schema (upper-triangular exchange convention):
///   { "n": int, "label": string, "entries": [[i, j, coeff], ...] }
/// The diagonal carries linear coefficients; an off-diagonal entry carries
/// the full pairwise coupling, halved into the two symmetric cells on load
/// and doubled back on save, which is exact in binary floating point.
/// Optional additive keys (family, seed, offset, constraint split,
/// cardinality, aux annotations, source) round-trip generator metadata;
/// files carrying only the core keys load fine.
nlohmann::json instance_to_json(const QuboInstance& instance);
QuboInstance instance_from_json(const nlohmann::json& j);

void save_instance(const QuboInstance& instance, const std::string& path);
QuboInstance load_instance(const std::string& path);

/// Graph schema: { "num_vertices": int, "edges": [[u, v, weight], ...] }.
nlohmann::json graph_to_json(const Graph& graph);
Graph graph_from_json(const nlohmann::json& j);

/// Set system schema: { "num_elements": int, "sets": [[e, ...], ...] }.
nlohmann::json set_cover_to_json(const SetCoverInput& input);
SetCoverInput set_cover_from_json(const nlohmann::json& j);

/// Whole-file helpers; failures raise I/O errors.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

nlohmann::json parse_json_text(const std::string& text, const std::string& what);

/// Report payloads rendered by the CLI and the C API. Core keys are stable;
/// consumers must tolerate additive ones.
nlohmann::json landscape_report_to_json(const LandscapeReport& report);
nlohmann::json scan_result_to_json(const ScanResult& scan);
nlohmann::json outcome_to_json(const SolverOutcome& outcome);
nlohmann::json reformulation_to_json(const ReformulationResult& result);
nlohmann::json fit_result_to_json(const FitResult& fit);
nlohmann::json recommendation_to_json(const Recommendation& rec);
nlohmann::json bench_result_to_json(const BenchResult& result);

/// Parses reformulation options from a JSON object. Unknown keys are
/// rejected; every key is optional and falls back to the struct default.
ReformulateParams reformulate_params_from_json(const nlohmann::json& j);

}  // namespace qvar

#endif  // QVAR_SERIALIZE_HPP
