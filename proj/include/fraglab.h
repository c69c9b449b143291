/* Copyright 2026 The fraglab authors
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

/* C API of the fraglab shared library.
 *
 * All functions returning fl_status are safe to call from any thread.
 * On failure they return a nonzero status and leave a human-readable
 * message retrievable through fl_last_error() (thread-local). Strings
 * returned through char** out-parameters are heap-allocated and owned by
 * the caller; release them with fl_string_free().
 */

#ifndef FRAGLAB_H
#define FRAGLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fl_status {
  FL_OK = 0,
  FL_VERIFICATION_FAILED = 1, /* computation succeeded, check did not pass */
  FL_USAGE_ERROR = 2,         /* invalid arguments or configuration */
  FL_NUMERICAL_ERROR = 3      /* numerical precondition or computation failed */
} fl_status;

const char* fl_version(void);
const char* fl_last_error(void);
void fl_string_free(char* s);

/* ---- opaque handles ---------------------------------------------------- */

typedef struct fl_system fl_system;
typedef struct fl_decomposition fl_decomposition;
typedef struct fl_dataset fl_dataset;

/* Temperley-Lieb chain on `qubits` system qubits with an ancilla register
 * of `ancillas` qubits. */
fl_status fl_system_create_tl(int32_t qubits, int32_t ancillas,
                              fl_system** out);
void fl_system_free(fl_system* system);
int32_t fl_system_qubits(const fl_system* system);
int32_t fl_system_ancillas(const fl_system* system);
int64_t fl_system_dim(const fl_system* system);

/* Krylov sector decomposition of the system algebra. Deterministic for a
 * fixed seed. */
fl_status fl_system_decompose(const fl_system* system, uint64_t seed,
                              fl_decomposition** out);
void fl_decomposition_free(fl_decomposition* decomp);
int32_t fl_decomposition_sector_count(const fl_decomposition* decomp);
fl_status fl_decomposition_sector(const fl_decomposition* decomp,
                                  int32_t index, int32_t* id,
                                  int64_t* irrep_dim, int64_t* multiplicity);
fl_status fl_decomposition_to_json(const fl_decomposition* decomp,
                                   char** json_out);
/* Largest cross-sector residual of the system generators under the
 * decomposition's basis change. */
fl_status fl_decomposition_residual(const fl_decomposition* decomp,
                                    const fl_system* system,
                                    double* residual_out);

/* The reference datasets (qubits must be 4 or 8). */
fl_status fl_dataset_paper(int32_t qubits, fl_dataset** out);
void fl_dataset_free(fl_dataset* dataset);
int32_t fl_dataset_size(const fl_dataset* dataset);
fl_status fl_dataset_to_json(const fl_dataset* dataset, char** json_out);
fl_status fl_dataset_from_json(const char* json_text, fl_dataset** out);
fl_status fl_dataset_tag_sectors(fl_dataset* dataset,
                                 const fl_decomposition* decomp);

/* ---- config-driven experiment runners ---------------------------------- */

/* The configuration is a JSON object; unknown keys are rejected. See the
 * project README for the schema. Presets: fig2-4q, fig2-8q, fig3-4q. */
fl_status fl_preset_config(const char* name, char** config_json);

/* Returns FL_VERIFICATION_FAILED (with outputs filled) when the block
 * residual exceeds the tolerance. */
fl_status fl_decompose_run(const char* config_json, char** decomposition_json,
                           char** report_json);
fl_status fl_train_run(const char* config_json, char** curves_csv,
                       char** finals_csv, char** summary_json);
fl_status fl_minima_run(const char* config_json, char** finals_csv,
                        char** histogram_csv, char** summary_json);
/* check is one of: variance, moments, generalization, hessian-rank.
 * Returns FL_VERIFICATION_FAILED (report still filled) when the check does
 * not pass. */
fl_status fl_verify_run(const char* check, const char* config_json,
                        char** report_json);
fl_status fl_dataset_export_run(const char* config_json, char** dataset_json);

#ifdef __cplusplus
}
#endif

#endif /* FRAGLAB_H */
