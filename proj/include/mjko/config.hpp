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

// Run configuration: a JSON document describing one scenario.
//
//   {
//     "manifold": "circle" | "sphere2" | "torus2",
//     "potential": {"family": "power_law", "exponent": 1, "coefficient": 1},
//     "initial": {"atoms": [[...], ...], "weights": [...]}
//              | {"generator": "uniform_cap", "atoms": 4, "cap_radius": 0.5},
//     "tau": 0.01,
//     "horizon": 0.2
//   }
//
// Optional keys and defaults are listed in README.md. Unknown keys are
// rejected.

#ifndef MJKO_CONFIG_HPP_
#define MJKO_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mjko/jko.hpp"
#include "mjko/manifold.hpp"
#include "mjko/measure.hpp"
#include "mjko/potential.hpp"

namespace mjko {

inline constexpr int kSchemaVersion = 1;

struct UniformCap {
  std::size_t atoms = 1;
  double cap_radius = 0.0;
  std::optional<Coords> center;  // default: canonical base point
  bool random_weights = false;
};

// Keeps delta(mu_0) > 0 for every draw: cap_radius must be below
// (injectivity radius - kCapMargin) / 2.
inline constexpr double kCapMargin = 1e-3;
double MaxCapRadius(ManifoldKind kind);

// Atoms uniform (w.r.t. the Riemannian volume) in the geodesic ball of radius
// cap_radius around the center; equal weights unless random_weights.
DiscreteMeasure GenerateUniformCap(ManifoldKind kind, const UniformCap& cap,
                                   std::uint64_t seed);

struct RunConfig {
  ManifoldKind manifold = ManifoldKind::kCircle;
  PotentialSpec potential = PotentialSpec::Power(ManifoldKind::kCircle, 1, 1);
  std::optional<DiscreteMeasure> initial;  // inline measure
  std::optional<UniformCap> generator;
  // Explicit measure sequence replayed instead of running the scheme.
  std::vector<DiscreteMeasure> replay;
  SchemeConfig scheme;
  bool inner_tol_explicit = false;
  std::vector<std::string> checks;
  std::string output_dir = "out";
  std::vector<double> probe_times;
  std::size_t quadrature_n = 64;
  std::size_t holder_samples = 500;
  bool oracle = false;

  // Resolved mu_0 (inline, generated, or replay[0]).
  DiscreteMeasure InitialMeasure() const;
  // Re-checks invariants after overrides; throws ConfigError.
  void Validate() const;
  // Recomputes the default inner_tol after a tau override.
  void SetTau(double tau);
};

// Default check list: every check id except oracle_gap.
std::vector<std::string> DefaultChecks();

// Splits "a,b,c" and validates each id (ConfigError on field "checks");
// "all" expands to DefaultChecks().
std::vector<std::string> ParseCheckList(const std::string& list);

RunConfig ParseConfigText(const std::string& text);
RunConfig ParseConfig(const std::string& path);

// Canonical JSON echo of a parsed config (used in the run manifest).
std::string ConfigToJson(const RunConfig& config);

}  // namespace mjko

#endif  // MJKO_CONFIG_HPP_
