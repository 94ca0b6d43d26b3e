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

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "mjko/mjko.h"

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: CHECK(%s) failed (last error: %s)\n", \
              __FILE__, __LINE__, #cond, mjko_last_error());     \
      ++failures;                                                \
    }                                                            \
  } while (0)

static const char* kConfig =
    "{\"manifold\": \"circle\","
    " \"potential\": {\"family\": \"power_law\", \"exponent\": 1,"
    " \"coefficient\": 1},"
    " \"initial\": {\"atoms\": [[-0.4], [0.3], [1.1]]},"
    " \"tau\": 0.01, \"horizon\": 0.05, \"inner_tol\": 1e-10}";

static void TestPrimitives(void) {
  size_t n = 0;
  CHECK(mjko_coord_count("sphere2", &n) == MJKO_OK && n == 3);
  CHECK(mjko_coord_count("klein", &n) == MJKO_ERR_DOMAIN);
  CHECK(strlen(mjko_last_error()) > 0);

  const double x[3] = {1, 0, 0}, y[3] = {0, 1, 0};
  double d = 0.0;
  CHECK(mjko_distance("sphere2", x, y, &d) == MJKO_OK);
  CHECK(fabs(d - acos(-1.0) / 2) < 1e-15);
  const double u[2] = {0.1, 0.1}, v[2] = {0.9, 0.9};
  CHECK(mjko_distance("torus2", u, v, &d) == MJKO_OK);
  CHECK(fabs(d - sqrt(0.08)) < 1e-15);
  CHECK(mjko_distance("torus2", u, v, NULL) == MJKO_ERR_INVALID_ARGUMENT);

  /* Two Diracs: d_1 = d_2 = d(x, y). */
  const double a[1] = {0.5}, b[1] = {2.0}, w[1] = {1.0};
  CHECK(mjko_wasserstein("circle", 1, a, w, 1, b, w, 2, &d) == MJKO_OK);
  CHECK(fabs(d - 1.5) < 1e-15);
  CHECK(mjko_wasserstein("circle", 1, a, w, 1, b, w, 3, &d) == MJKO_ERR_DOMAIN);
  const double half[2] = {0.5, 0.5}, pair[2] = {0.0, 1.0};
  CHECK(mjko_wasserstein("circle", 2, pair, half, 1, a, w, 1, &d) == MJKO_OK);
  CHECK(fabs(d - 0.5) < 1e-15);
}

static void TestRun(const char* out_dir) {
  mjko_config* config = NULL;
  CHECK(mjko_config_parse("{", &config) == MJKO_ERR_CONFIG);
  CHECK(config == NULL);
  CHECK(mjko_config_parse(kConfig, &config) == MJKO_OK);
  if (config == NULL) return;
  CHECK(mjko_config_set_checks(config, "descent,nonsense") == MJKO_ERR_CONFIG);
  CHECK(strstr(mjko_last_error(), "finite_speed") != NULL);
  CHECK(mjko_config_set_checks(config, "descent,finite_speed,el_residual") ==
        MJKO_OK);
  CHECK(mjko_config_set_tau(config, -1.0) == MJKO_ERR_CONFIG);
  CHECK(mjko_config_set_tau(config, 0.01) == MJKO_OK);
  CHECK(mjko_config_set_seed(config, 3) == MJKO_OK);
  CHECK(mjko_config_set_oracle(config, 1) == MJKO_OK);
  CHECK(mjko_config_set_output_dir(config, out_dir) == MJKO_OK);

  char* json = NULL;
  CHECK(mjko_config_to_json(config, &json) == MJKO_OK);
  CHECK(json != NULL && strstr(json, "\"oracle\": true") != NULL);
  mjko_string_free(json);

  mjko_run* run = NULL;
  CHECK(mjko_run_execute(config, &run) == MJKO_OK);
  if (run != NULL) {
    CHECK(mjko_run_exit_code(run) == MJKO_EXIT_OK);
    CHECK(strcmp(mjko_run_status(run), "completed") == 0);
    CHECK(mjko_run_step_count(run) == 5);
    /* descent, finite_speed, el_residual, el_scalar, oracle_gap */
    CHECK(mjko_run_check_count(run) == 5);
    for (size_t i = 0; i < mjko_run_check_count(run); ++i) {
      mjko_check_result r;
      CHECK(mjko_run_check(run, i, &r) == MJKO_OK);
      CHECK(r.passed);
      CHECK(r.worst_margin <= r.tolerance);
    }
    mjko_check_result r;
    CHECK(mjko_run_check(run, 99, &r) == MJKO_ERR_INVALID_ARGUMENT);
    mjko_run_free(run);
  }
  mjko_config_free(config);
  CHECK(mjko_config_load("/nonexistent.json", &config) == MJKO_ERR_CONFIG);
}

int main(int argc, char** argv) {
  if (argc != 2) {
    fprintf(stderr, "usage: %s OUTPUT_DIR\n", argv[0]);
    return 2;
  }
  CHECK(strlen(mjko_version()) > 0);
  CHECK(strcmp(mjko_status_name(MJKO_ERR_CUT_LOCUS), "cut_locus") == 0);
  TestPrimitives();
  TestRun(argv[1]);
  if (failures == 0) printf("c api: all checks passed\n");
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
