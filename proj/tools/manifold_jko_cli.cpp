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

// Batch front end: runs one scenario described by a JSON config and writes
// trajectory, check reports and a manifest. Links only the C API.

#include <cinttypes>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mjko/mjko.h"

namespace {

int ConfigFailure(const char* what) {
  std::fprintf(stderr, "manifold_jko: %s: %s\n", what, mjko_last_error());
  return MJKO_EXIT_CONFIG;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimizing movement scheme for interaction energies on "
               "circle, sphere and torus, with theory checks."};
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> checks;
  std::optional<double> tau;
  bool oracle = false;
  bool quiet = false;
  app.add_option("--config", config_path, "Scenario config (JSON)")
      ->required();
  app.add_option("--out", out_dir, "Output directory (overrides config)");
  app.add_option("--seed", seed, "Random seed (overrides config)");
  app.add_option("--checks", checks,
                 "Comma-separated check ids, or 'all' (overrides config)");
  app.add_option("--tau", tau, "Time step (overrides config)");
  app.add_flag("--oracle", oracle, "Cross-validate steps against the grid oracle");
  app.add_flag("-q,--quiet", quiet, "Only print the final status line");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return MJKO_EXIT_CONFIG;
  }

  mjko_config* config = nullptr;
  if (mjko_config_load(config_path.c_str(), &config) != MJKO_OK) {
    return ConfigFailure("invalid config");
  }
  struct Releaser {
    mjko_config* c;
    ~Releaser() { mjko_config_free(c); }
  } release_config{config};

  if (seed && mjko_config_set_seed(config, *seed) != MJKO_OK) {
    return ConfigFailure("--seed");
  }
  if (tau && mjko_config_set_tau(config, *tau) != MJKO_OK) {
    return ConfigFailure("--tau");
  }
  if (checks && mjko_config_set_checks(config, checks->c_str()) != MJKO_OK) {
    return ConfigFailure("--checks");
  }
  if (out_dir && mjko_config_set_output_dir(config, out_dir->c_str()) != MJKO_OK) {
    return ConfigFailure("--out");
  }
  if (oracle && mjko_config_set_oracle(config, 1) != MJKO_OK) {
    return ConfigFailure("--oracle");
  }

  mjko_run* run = nullptr;
  if (mjko_run_execute(config, &run) != MJKO_OK) {
    std::fprintf(stderr, "manifold_jko: %s\n", mjko_last_error());
    return MJKO_EXIT_RUNTIME;
  }
  if (!quiet) {
    for (std::size_t i = 0; i < mjko_run_check_count(run); ++i) {
      mjko_check_result r;
      if (mjko_run_check(run, i, &r) != MJKO_OK) continue;
      std::printf("%s %-16s margin=%.3e tol=%.3e  %s\n",
                  r.passed ? "PASS" : "FAIL", r.id, r.worst_margin,
                  r.tolerance, r.details);
    }
  }
  const int code = mjko_run_exit_code(run);
  std::printf("status=%s steps=%zu exit=%d%s%s\n", mjko_run_status(run),
              mjko_run_step_count(run), code,
              *mjko_run_message(run) ? "  " : "", mjko_run_message(run));
  mjko_run_free(run);
  return code;
}
