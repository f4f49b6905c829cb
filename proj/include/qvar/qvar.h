/* Copyright 2026 qvar developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qvar toolkit: QUBO instances, landscape measurement,
 * solvers, reformulation and the solver-choice advisor.
 *
 * Conventions:
 *   - Every fallible call returns a qv_status; QV_OK means success.
 *   - On failure, qv_last_error() returns a thread-local message describing
 *     what went wrong. The pointer stays valid until the next failing call
 *     on the same thread.
 *   - Output strings (char** parameters) are heap-allocated JSON or plain
 *     text; release them with qv_string_free(). Output handles are released
 *     with qv_instance_free().
 *   - Structured inputs and outputs travel as JSON text, which keeps this
 *     boundary small and lets the library evolve payloads additively.
 */

#ifndef QVAR_QVAR_H
#define QVAR_QVAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QV_API __declspec(dllexport)
#else
#define QV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values match the CLI exit codes for the same
 * failure class, so shell callers and C callers see one numbering. */
typedef enum qv_status {
  QV_OK = 0,
  QV_ERROR_INVALID_ARGUMENT = 2,
  QV_ERROR_CAPACITY_EXCEEDED = 3,
  QV_ERROR_IO = 4,
  QV_ERROR_INSUFFICIENT_DATA = 5,
  QV_ERROR_INTERNAL = 6
} qv_status;

/* Opaque QUBO instance handle. */
typedef struct qv_instance qv_instance;

/* Library version as "major.minor.patch". Static storage; do not free. */
QV_API const char* qv_version(void);

/* Message from the most recent failing call on this thread, or an empty
 * string if nothing failed yet. Do not free. */
QV_API const char* qv_last_error(void);

/* Releases a string returned through a char** output parameter. */
QV_API void qv_string_free(char* text);

/* Releases an instance handle. NULL is allowed. */
QV_API void qv_instance_free(qv_instance* instance);

/* --- Instances ---------------------------------------------------------- */

/* Parses an instance from JSON text: {"n": int, "label": string,
 * "entries": [[i, j, coeff], ...]} with linear terms on the diagonal and
 * full pairwise couplings above it. */
QV_API qv_status qv_instance_from_json(const char* json_text, qv_instance** out_instance);

/* Serializes an instance back to JSON text. */
QV_API qv_status qv_instance_to_json(const qv_instance* instance, char** out_json);

/* File variants of the two calls above. */
QV_API qv_status qv_instance_load(const char* path, qv_instance** out_instance);
QV_API qv_status qv_instance_save(const qv_instance* instance, const char* path);

/* Number of binary variables. */
QV_API qv_status qv_instance_num_vars(const qv_instance* instance, int* out_n);

/* Builds an instance from a generator spec such as
 * {"family": "maxcut", "params": {...}, "seed": 7}. Families: synthetic,
 * maxcut, graph_partition, number_partition, set_cover. */
QV_API qv_status qv_generate(const char* spec_json, qv_instance** out_instance);

/* --- Energies ----------------------------------------------------------- */

/* Energy of an assignment; bits[i] must be 0 or 1 and num_bits must equal
 * the variable count. */
QV_API qv_status qv_evaluate(const qv_instance* instance, const uint8_t* bits, size_t num_bits,
                             double* out_energy);

/* Energy change from flipping one variable, in O(n) without re-evaluating. */
QV_API qv_status qv_flip_delta(const qv_instance* instance, const uint8_t* bits, size_t num_bits,
                               int index, double* out_delta);

/* --- Landscape ---------------------------------------------------------- */

/* Samples the gradient variance of the energy landscape. normalization is
 * "per_variable" (default when NULL or empty) or "raw". Returns a JSON
 * report with sigma_grad, sigma2_grad, per-variable contributions, and the
 * sampling parameters. */
QV_API qv_status qv_gradient_variance(const qv_instance* instance, int num_samples, uint64_t seed,
                                      int threads, const char* normalization,
                                      char** out_report_json);

/* Exhaustive scan (up to 20 variables): global minimum energy, all
 * minimizing assignments and the local-minimum count, as JSON. */
QV_API qv_status qv_landscape_scan(const qv_instance* instance, char** out_report_json);

/* --- Solvers ------------------------------------------------------------ */

/* Runs one solver. solver_id is "brute_force", "sa", "sgd" or "sqa".
 * config_json holds solver-specific overrides (pass NULL or "{}" for
 * defaults); unknown keys are rejected. The JSON result carries the best
 * energy and bits, per-trajectory statistics and wall time. */
QV_API qv_status qv_solve(const qv_instance* instance, const char* solver_id,
                          const char* config_json, char** out_result_json);

/* --- Reformulation ------------------------------------------------------ */

/* Greedy gradient-variance ascent over semantics-preserving rewrites.
 * params_json keys (all optional): max_rounds, num_samples, seed,
 * penalty_scale, relaxation_grid, aux_lambda, substitution_mask,
 * strategies, semantics, semantic_samples. The JSON result carries the
 * transformed instance, the variable map, the per-step trace and the
 * semantics verdict. */
QV_API qv_status qv_reformulate(const qv_instance* instance, const char* params_json,
                                char** out_result_json);

/* --- Advisor ------------------------------------------------------------ */

/* Barrier-crossing model: p = exp(-alpha / sigma), sigma > 0. */
QV_API qv_status qv_tunneling_probability(double sigma, double alpha, double* out_probability);

/* Thermal escape model: p = exp(-delta_e / kt), kt > 0, delta_e >= 0. */
QV_API qv_status qv_thermal_probability(double delta_e, double kt, double* out_probability);

/* Crossover point where the two models break even: alpha * kt / delta_e. */
QV_API qv_status qv_critical_sigma(double alpha, double kt, double delta_e, double* out_sigma);

/* Fits log p = slope * (1/sigma) + intercept over paired arrays of sigma
 * and success probability. Points with sigma <= 0 or p <= 0 are excluded;
 * at least three usable points are required. Returns the fit as JSON. */
QV_API qv_status qv_fit_wkb(const double* sigmas, const double* success_probs, size_t num_points,
                            char** out_fit_json);

/* Solver-class recommendation for a measured sigma_grad and problem size,
 * as JSON with verdict, thresholds and rationale. */
QV_API qv_status qv_recommend(double sigma_grad, int num_vars, char** out_json);

/* --- Benchmarking ------------------------------------------------------- */

/* Executes an experiment plan (JSON text). output_dir overrides the plan's
 * output directory when non-NULL and non-empty; threads > 0 overrides the
 * plan's worker count. Returns a JSON summary listing written files,
 * skips, warnings and errors. */
QV_API qv_status qv_bench_run(const char* plan_json, const char* output_dir, int threads,
                              char** out_summary_json);

/* Rebuilds the derived report files from an existing results directory. */
QV_API qv_status qv_bench_report(const char* results_dir, char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* QVAR_QVAR_H */
