// Copyright 2026 The manifold-jko Authors
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

/* C interface of the manifold JKO library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an mjko_status; on
 * failure mjko_last_error() describes the problem (thread-local, valid until
 * the next failing call on the same thread). Strings returned through `char**`
 * out-parameters are freed with mjko_string_free. */

#ifndef MJKO_MJKO_H_
#define MJKO_MJKO_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MJKO_API __declspec(dllexport)
#else
#define MJKO_API __attribute__((visibility("default")))
#endif

typedef enum mjko_status {
  MJKO_OK = 0,
  MJKO_ERR_DOMAIN = 1,
  MJKO_ERR_CUT_LOCUS = 2,
  MJKO_ERR_NONDIFFERENTIABLE = 3,
  MJKO_ERR_STAGNATION = 4,
  MJKO_ERR_CONFIG = 5,
  MJKO_ERR_SIZE = 6,
  MJKO_ERR_INTERNAL = 7,
  MJKO_ERR_IO = 8,
  MJKO_ERR_INVALID_ARGUMENT = 9,
} mjko_status;

/* Process exit codes of a run. */
enum {
  MJKO_EXIT_OK = 0,
  MJKO_EXIT_CHECK_FAILURE = 1,
  MJKO_EXIT_CONFIG = 2,
  MJKO_EXIT_CUT_INCURSION = 3,
  MJKO_EXIT_RUNTIME = 4,
};

typedef struct mjko_config mjko_config;
typedef struct mjko_run mjko_run;

typedef struct mjko_check_result {
  const char* id;      /* owned by the run handle */
  int passed;
  double worst_margin;
  double tolerance;
  const char* details; /* owned by the run handle */
} mjko_check_result;

MJKO_API const char* mjko_version(void);
MJKO_API const char* mjko_last_error(void);
MJKO_API const char* mjko_status_name(mjko_status status);
MJKO_API void mjko_string_free(char* s);

/* Configuration. */
MJKO_API mjko_status mjko_config_load(const char* path, mjko_config** out);
MJKO_API mjko_status mjko_config_parse(const char* json_text,
                                       mjko_config** out);
MJKO_API void mjko_config_free(mjko_config* config);
MJKO_API mjko_status mjko_config_set_seed(mjko_config* config, uint64_t seed);
/* Also refreshes the default inner tolerance unless it was set explicitly. */
MJKO_API mjko_status mjko_config_set_tau(mjko_config* config, double tau);
/* Comma-separated check ids; "all" selects the default suite. */
MJKO_API mjko_status mjko_config_set_checks(mjko_config* config,
                                            const char* list);
MJKO_API mjko_status mjko_config_set_output_dir(mjko_config* config,
                                                const char* dir);
MJKO_API mjko_status mjko_config_set_oracle(mjko_config* config, int enabled);
MJKO_API mjko_status mjko_config_to_json(const mjko_config* config,
                                         char** out);

/* Runs the scenario and writes the output directory. Returns MJKO_OK whenever
 * a run handle was produced; the outcome is in mjko_run_exit_code. */
MJKO_API mjko_status mjko_run_execute(const mjko_config* config,
                                      mjko_run** out);
MJKO_API void mjko_run_free(mjko_run* run);
MJKO_API int mjko_run_exit_code(const mjko_run* run);
MJKO_API const char* mjko_run_status(const mjko_run* run);
MJKO_API const char* mjko_run_message(const mjko_run* run);
MJKO_API size_t mjko_run_step_count(const mjko_run* run);
MJKO_API size_t mjko_run_check_count(const mjko_run* run);
MJKO_API mjko_status mjko_run_check(const mjko_run* run, size_t index,
                                    mjko_check_result* out);

/* Geometry and transport primitives. Points are flat coordinate arrays of
 * mjko_coord_count(manifold) doubles: circle (angle), sphere2 (x, y, z),
 * torus2 (u, v). */
MJKO_API mjko_status mjko_coord_count(const char* manifold, size_t* out);
MJKO_API mjko_status mjko_distance(const char* manifold, const double* x,
                                   const double* y, double* out);
/* d_p between two discrete measures, p in {1, 2}, by exact LP. */
MJKO_API mjko_status mjko_wasserstein(const char* manifold, size_t n,
                                      const double* atoms_a,
                                      const double* weights_a, size_t m,
                                      const double* atoms_b,
                                      const double* weights_b, int p,
                                      double* out);

#ifdef __cplusplus
}
#endif

#endif /* MJKO_MJKO_H_ */
