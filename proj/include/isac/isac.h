/* SPDX-License-Identifier: Apache-2.0
 *
 * isac-irs: alternating precoder / IRS phase design for IRS-aided ISAC
 * Copyright (C) 2026 isac-irs contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------ */

/* C interface of libisac. Every function returns an isac_status; on failure the message is
 * available from isac_last_error_message() on the same thread until the next call.
 * Handles are opaque and owned by the caller (release with the matching *_destroy).
 * Strings returned through char** are heap copies; release them with isac_string_free(). */

#ifndef ISAC_ISAC_H
#define ISAC_ISAC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define ISAC_API __declspec(dllexport)
#else
#  define ISAC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum isac_status {
  ISAC_OK = 0,
  ISAC_ERR_INVALID_ARGUMENT = 1, /* null pointer, short buffer, dimension mismatch */
  ISAC_ERR_CONFIG = 2,           /* bad JSON, unknown key, out-of-range value */
  ISAC_ERR_SOLVER = 3,           /* numerical failure */
  ISAC_ERR_IO = 4,
  ISAC_ERR_INTERNAL = 5
} isac_status;

typedef struct isac_scene isac_scene_t;
typedef struct isac_run isac_run_t;

/* Fields with *_set == 0 are ignored. */
typedef struct isac_overrides {
  int seed_set;
  uint64_t seed;
  int trials_set;
  int trials;
  int threads_set;
  int threads;
} isac_overrides;

ISAC_API const char* isac_version(void);
ISAC_API const char* isac_last_error_message(void);
ISAC_API void isac_string_free(char* s);

/* Scene from a "scene" JSON object (NULL or "{}" for defaults). Channels are those of harness
 * trial `trial` under `master_seed`. */
ISAC_API isac_status isac_scene_create(const char* scene_json, uint64_t master_seed, int trial,
                                       isac_scene_t** out);
ISAC_API void isac_scene_destroy(isac_scene_t* scene);
ISAC_API isac_status isac_scene_dims(const isac_scene_t* scene, int* n_tx, int* n_users, int* irs_elements);
/* Weighted SNR of a given precoder (column-major N_T x K, interleaved re/im) and IRS phase
 * vector (length L, interleaved re/im). */
ISAC_API isac_status isac_scene_objective(const isac_scene_t* scene, const double* precoder, const double* theta,
                                          double* objective, double* snr_radar, double* snr_comm);

/* Alternating optimization with a "solver" JSON object (NULL for defaults). */
ISAC_API isac_status isac_run_alternating(const isac_scene_t* scene, const char* solver_json, isac_run_t** out);
ISAC_API void isac_run_destroy(isac_run_t* run);
/* Copies up to `capacity` values; *length receives the full length either way. */
ISAC_API isac_status isac_run_objective_trace(const isac_run_t* run, double* values, size_t capacity,
                                              size_t* length);
/* Interleaved re/im: buffers need 2 * L (theta) and 2 * N_T * K (precoder, column-major) doubles. */
ISAC_API isac_status isac_run_theta(const isac_run_t* run, double* values, size_t capacity, size_t* length);
ISAC_API isac_status isac_run_precoder(const isac_run_t* run, double* values, size_t capacity, size_t* length);
/* terminated_by: 0 tolerance, 1 t_max. */
ISAC_API isac_status isac_run_info(const isac_run_t* run, int* outer_iterations, int* terminated_by,
                                   int* precoder_dips);

/* Parses and validates an experiment JSON document. */
ISAC_API isac_status isac_config_validate(const char* experiment_json);
/* Resolved experiment (linear units, every key present) as JSON. */
ISAC_API isac_status isac_config_resolve(const char* experiment_json, char** resolved_json);
/* Runs an experiment. out_dir (if non-NULL) replaces the config's output_dir. *summary_json
 * (optional) receives files written and failure counts. */
ISAC_API isac_status isac_experiment_run(const char* experiment_json, const char* out_dir,
                                         const isac_overrides* overrides, char** summary_json);
/* gnuplot-ready text for a harness CSV; group_column may be NULL. */
ISAC_API isac_status isac_plot_data(const char* csv_path, const char* group_column, char** text);

#ifdef __cplusplus
}
#endif

#endif /* ISAC_ISAC_H */
