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

// Executes one configured scenario and writes its output directory:
//
//   manifest.json     config echo, constants, status, check summary
//   trajectory.jsonl  one record per measure mu_0 .. mu_N
//   checks.jsonl      one CheckReport per line
//   table.csv         per-step scalars for plotting

#ifndef MJKO_RUNNER_HPP_
#define MJKO_RUNNER_HPP_

#include <string>
#include <vector>

#include "mjko/config.hpp"
#include "mjko/diagnostics.hpp"

namespace mjko {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailure = 1,
  kExitConfig = 2,
  kExitCutIncursion = 3,
  kExitRuntime = 4,  // stagnation, I/O and other runtime errors
};

struct RunConstants {
  double lipschitz = 0.0;         // L
  double k_low = 0.0;
  double initial_energy = 0.0;
  double square_bound = 0.0;      // C = 2 (E(mu_0) - k_low)
  double delta0 = 0.0;
  double guaranteed_horizon = 0.0;  // delta_0 / (2 L)
  bool guaranteed = false;          // horizon < delta_0 / (2 L)
};

RunConstants ComputeRunConstants(const DiscreteMeasure& mu0,
                                 const PotentialSpec& spec, double horizon);

struct RunSummary {
  int exit_code = kExitOk;
  // "completed", "checks_failed", "assumptions_failed", "cut_incursion",
  // "config_error" or "error".
  std::string status;
  std::string message;
  std::size_t steps = 0;
  std::vector<CheckReport> reports;
};

// Never throws for scenario problems; they are mapped onto the exit code.
RunSummary ExecuteRun(const RunConfig& config);

}  // namespace mjko

#endif  // MJKO_RUNNER_HPP_
