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

#include "mjko/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json_codec.hpp"
#include "mjko/error.hpp"
#include "mjko/io.hpp"

namespace mjko {
namespace {

using codec::Json;

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

CheckReport ErrorReport(const std::string& id, const Error& e) {
  CheckReport r;
  r.id = id;
  r.passed = false;
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.slack = -std::numeric_limits<double>::infinity();
  r.details = std::string(ErrorKindName(e.kind())) + ": " + e.what();
  return r;
}

std::vector<std::string> EffectiveChecks(const RunConfig& config) {
  std::vector<std::string> ids = config.checks;
  if (config.oracle &&
      std::find(ids.begin(), ids.end(), "oracle_gap") == ids.end()) {
    ids.push_back("oracle_gap");
  }
  return ids;
}

Json ConstantsJson(const RunConstants& k) {
  Json j;
  j["lipschitz"] = codec::Number(k.lipschitz);
  j["k_low"] = codec::Number(k.k_low);
  j["initial_energy"] = codec::Number(k.initial_energy);
  j["square_bound"] = codec::Number(k.square_bound);
  j["delta0"] = codec::Number(k.delta0);
  j["guaranteed_horizon"] = codec::Number(k.guaranteed_horizon);
  j["guaranteed"] = k.guaranteed;
  return j;
}

void WriteOutputs(const RunConfig& config, const RunConstants* constants,
                  const Trajectory* traj, const RunSummary& summary) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::string lines, table = TableHeader() + "\n";
  if (traj != nullptr) {
    for (std::size_t k = 0; k < traj->records.size(); ++k) {
      lines += TrajectoryLineToJson(traj->records[k], traj->measures[k]) + "\n";
      table += TableRow(traj->records[k]) + "\n";
    }
  }
  WriteFile(dir / "trajectory.jsonl", lines);
  WriteFile(dir / "table.csv", table);

  std::string checks;
  for (const CheckReport& r : summary.reports) checks += CheckReportToJson(r) + "\n";
  WriteFile(dir / "checks.jsonl", checks);

  Json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["config"] = Json::parse(ConfigToJson(config));
  manifest["seed"] = config.scheme.seed;
  if (constants != nullptr) manifest["constants"] = ConstantsJson(*constants);
  manifest["status"] = summary.status;
  manifest["message"] = summary.message;
  manifest["exit_code"] = summary.exit_code;
  manifest["steps"] = summary.steps;
  Json results = Json::array();
  for (const CheckReport& r : summary.reports) {
    Json c;
    c["id"] = r.id;
    c["passed"] = r.passed;
    c["worst_margin"] = codec::Number(r.worst_margin);
    results.push_back(std::move(c));
  }
  manifest["checks"] = std::move(results);
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

RunConstants ComputeRunConstants(const DiscreteMeasure& mu0,
                                 const PotentialSpec& spec, double horizon) {
  RunConstants k;
  const EnergyBounds bounds = ComputeEnergyBounds(spec);
  k.lipschitz = bounds.lipschitz;
  k.k_low = bounds.lower;
  k.initial_energy = Energy(spec, mu0);
  k.square_bound = 2.0 * (k.initial_energy - k.k_low);
  k.delta0 = DeltaCut(mu0);
  k.guaranteed_horizon = k.lipschitz > 0.0
                             ? k.delta0 / (2.0 * k.lipschitz)
                             : std::numeric_limits<double>::infinity();
  k.guaranteed = horizon < k.guaranteed_horizon;
  return k;
}

RunSummary ExecuteRun(const RunConfig& config) {
  RunSummary summary;
  std::optional<RunConstants> constants;
  std::optional<Trajectory> traj;
  try {
    config.Validate();
    const DiscreteMeasure mu0 = config.InitialMeasure();
    constants = ComputeRunConstants(mu0, config.potential, config.scheme.horizon);
    if (!(constants->delta0 > 0.0)) {
      throw ConfigError("initial", "support touches the cut locus (delta = 0)");
    }

    const CheckReport assumptions = CheckAssumptionsReport(config.potential);
    if (!assumptions.passed) {
      summary.reports.push_back(assumptions);
      summary.exit_code = kExitCheckFailure;
      summary.status = "assumptions_failed";
      summary.message = "potential rejected, scheme not run: " + assumptions.details;
      WriteOutputs(config, &*constants, nullptr, summary);
      return summary;
    }

    try {
      traj = config.replay.empty()
                 ? RunScheme(mu0, config.potential, config.scheme)
                 : AssembleTrajectory(config.replay, config.potential,
                                      config.scheme);
    } catch (const CutLocusError& e) {
      summary.exit_code = kExitCutIncursion;
      summary.status = "cut_incursion";
      summary.message = e.what();
      // Steps completed before the failing one.
      if (e.step()) summary.steps = *e.step() - 1;
      WriteOutputs(config, &*constants, nullptr, summary);
      return summary;
    }
    summary.steps = traj->StepsTaken();
    if (traj->status == RunStatus::kCutIncursion) {
      summary.exit_code = kExitCutIncursion;
      summary.status = "cut_incursion";
      summary.message = traj->status_message;
      WriteOutputs(config, &*constants, &*traj, summary);
      return summary;
    }

    CheckOptions options;
    options.holder_samples = config.holder_samples;
    options.seed = config.scheme.seed;
    options.quadrature_n = config.quadrature_n;
    options.probe_times = config.probe_times;
    options.oracle_grid_points = config.scheme.grid_points;
    for (const std::string& id : EffectiveChecks(config)) {
      try {
        for (CheckReport& r : RunChecks(*traj, {id}, options)) {
          summary.reports.push_back(std::move(r));
        }
      } catch (const Error& e) {
        summary.reports.push_back(ErrorReport(id, e));
      }
    }
    const bool all_passed =
        std::all_of(summary.reports.begin(), summary.reports.end(),
                    [](const CheckReport& r) { return r.passed; });
    summary.exit_code = all_passed ? kExitOk : kExitCheckFailure;
    summary.status = all_passed ? "completed" : "checks_failed";
    if (!all_passed) {
      for (const CheckReport& r : summary.reports) {
        if (!r.passed) {
          summary.message += (summary.message.empty() ? "failed: " : ", ") + r.id;
        }
      }
    }
    if (!constants->guaranteed) {
      summary.message += std::string(summary.message.empty() ? "" : "; ") +
                         "horizon beyond the guaranteed delta_0 / (2L)";
    }
    WriteOutputs(config, &*constants, &*traj, summary);
  } catch (const ConfigError& e) {
    summary.exit_code = kExitConfig;
    summary.status = "config_error";
    summary.message = e.what();
  } catch (const Error& e) {
    summary.exit_code =
        e.kind() == ErrorKind::kCutLocus ? kExitCutIncursion : kExitRuntime;
    summary.status = e.kind() == ErrorKind::kCutLocus ? "cut_incursion" : "error";
    summary.message = std::string(ErrorKindName(e.kind())) + ": " + e.what();
    if (e.kind() != ErrorKind::kIo) {
      try {
        WriteOutputs(config, constants ? &*constants : nullptr,
                     traj ? &*traj : nullptr, summary);
      } catch (const Error&) {
      }
    }
  }
  return summary;
}

}  // namespace mjko
