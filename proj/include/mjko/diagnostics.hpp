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

// Checks of the scheme's proven inequalities and identities on concrete
// trajectories, the weak-solution residual and tau-refinement studies.
//
// Every check returns a CheckReport whose margin is max(0, lhs - rhs) over
// all evaluated instances of its inequality; it passes iff the margin is at
// most the stated tolerance.

#ifndef MJKO_DIAGNOSTICS_HPP_
#define MJKO_DIAGNOSTICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mjko/jko.hpp"
#include "mjko/manifold.hpp"
#include "mjko/measure.hpp"
#include "mjko/potential.hpp"

namespace mjko {

struct CheckLocation {
  std::optional<std::size_t> step;
  std::optional<double> time;
  std::optional<double> time2;  // second sample time (Hoelder pairs)
  std::optional<std::size_t> atom;
};

struct CheckReport {
  std::string id;
  bool passed = true;
  double worst_margin = 0.0;  // max(0, lhs - rhs)
  double tolerance = 0.0;
  // min(rhs - lhs) over instances; negative when violated.
  double slack = 0.0;
  CheckLocation location;
  std::string details;
};

// Check ids understood by RunChecks, in canonical order.
const std::vector<std::string>& CheckIds();
bool IsCheckId(const std::string& id);

// W0-W2 on the potential; margin is the worst offending magnitude.
CheckReport CheckAssumptionsReport(const PotentialSpec& spec);

// E(mu_{k+1}) + d_2^2 / (2 tau) <= E(mu_k) + tolerance.
CheckReport CheckDescent(const Trajectory& traj, double tolerance = 1e-8);

// Per step, max over atoms x of mu_{k+1} of max(d(x, spt mu_k), plan
// displacement) <= L tau + tolerance. Default tolerance: config.inner_tol.
CheckReport CheckFiniteSpeed(const Trajectory& traj,
                             std::optional<double> tolerance = std::nullopt);

// sum_k d_2^2(mu_k, mu_{k+1}) / tau <= 2 (E(mu_0) - k_low) + tolerance, with
// d_2 recomputed from the measures.
CheckReport CheckSquareEstimate(const Trajectory& traj,
                                double tolerance = 1e-6);

// Random pairs s < t in [0, N tau] (every other pair inside one bracket):
// d_2(Geo(t), Geo(s)) <= sqrt(2 (E(mu_0) - k_low)) sqrt(t - s) + tolerance.
CheckReport CheckHolder(const Trajectory& traj, std::size_t sample_count,
                        std::uint64_t seed, double tolerance = 1e-6);

// Random pairs inside one bracket:
// |d_2(Geo(t), Geo(s)) - |t - s| / tau d_2(mu_k, mu_{k+1})| <= tolerance.
CheckReport CheckGeodesicSpeed(const Trajectory& traj,
                               std::size_t sample_count, std::uint64_t seed,
                               double tolerance = 1e-7);

struct ElReports {
  CheckReport vector;  // "el_residual": max |r| <= factor * L / tau
  CheckReport scalar;  // "el_scalar": max(variance, duality gap) <= tol
};

ElReports CheckElResidual(const Trajectory& traj, double factor = 1e-4,
                          double scalar_tolerance = 1e-8);

// delta(mu_k) >= delta(mu_0) - 2 k tau L - tolerance.
CheckReport CheckDeltaDecay(const Trajectory& traj, double tolerance = 1e-6);

// Sphere2 only: |delta(mu_k) - (pi - diam spt mu_k)| <= tolerance.
CheckReport CheckSphereDeltaIdentity(const Trajectory& traj,
                                     double tolerance = 1e-9);

// Per step, JKO objective of mu_{k+1} against the GridLp optimum from mu_k:
// objective - oracle <= tolerance. Circle with <= 4 atoms only.
CheckReport CheckOracleGap(const Trajectory& traj, std::size_t grid_points,
                           double tolerance = 1e-4);

// phi(t, x) = b(t) f(x) with f closed form on one manifold and b a smooth
// bump supported in (0.05 T, 0.95 T).
class TestFunction {
 public:
  using Value = std::function<double(const Point&)>;
  using Gradient = std::function<Tangent(const Point&)>;

  TestFunction(std::string id, ManifoldKind kind, Value value,
               Gradient gradient);

  const std::string& id() const { return id_; }
  ManifoldKind kind() const { return kind_; }

  double Spatial(const Point& x) const { return value_(x); }
  Tangent SpatialGradient(const Point& x) const { return gradient_(x); }

  static double Bump(double t, double horizon);
  static double BumpDerivative(double t, double horizon);

 private:
  std::string id_;
  ManifoldKind kind_;
  Value value_;
  Gradient gradient_;
};

const std::vector<TestFunction>& TestFunctionRegistry(ManifoldKind kind);
const TestFunction& FindTestFunction(ManifoldKind kind, const std::string& id);

enum class WeakSign {
  // d_t phi - <grad phi, grad(W * mu)>: the velocity is -grad(W * mu).
  kDynamics,
  // d_t phi + <grad phi, grad(W * mu)>.
  kAsPrinted,
};

// | int_0^T int_M d_t phi + sign <grad phi, grad(W * mu_t)> dmu_t dt | along
// the geodesic interpolation, composite midpoint rule with quadrature_n
// nodes per bracket. The bump is built on `support_horizon` (default
// N tau). Throws CutLocusError for a trajectory that halted at the cut locus.
double WeakResidual(const Trajectory& traj, const TestFunction& f,
                    std::size_t quadrature_n,
                    WeakSign sign = WeakSign::kDynamics,
                    std::optional<double> support_horizon = std::nullopt);

struct RefinementTable {
  std::vector<double> taus;
  std::vector<double> gaps;              // gaps[i]: runs i and i+1
  std::vector<double> worst_probe_time;  // argmax time per gap
  // min over runs of N tau; later probe times are skipped because a run
  // holds mu_N constant past its last bracket.
  double covered_time = 0.0;
};

// Runs the scheme for each tau (other settings from `base`) and reports the
// sup over probe times of d_2 between consecutive geodesic interpolations.
// Runs are executed on up to WorkerCount() threads.
RefinementTable TauRefinementStudy(const DiscreteMeasure& mu0,
                                   const PotentialSpec& spec,
                                   const SchemeConfig& base,
                                   const std::vector<double>& taus,
                                   double horizon,
                                   const std::vector<double>& probe_times);

// n equally spaced probe times in [0, horizon], endpoints included.
std::vector<double> UniformProbeTimes(double horizon, std::size_t n);

struct WeakStudyRow {
  std::string function_id;
  std::vector<double> taus;
  std::vector<double> residuals;
};

// Weak residual of every registry function for runs at each tau, with a
// common bump support of min_i N_i tau_i.
std::vector<WeakStudyRow> WeakResidualStudy(const DiscreteMeasure& mu0,
                                            const PotentialSpec& spec,
                                            const SchemeConfig& base,
                                            const std::vector<double>& taus,
                                            std::size_t quadrature_n,
                                            WeakSign sign = WeakSign::kDynamics);

// Values must strictly decrease (all-zero tails count as converged).
// Passes iff values strictly decrease. Consecutive values that are both at
// or below `noise_floor` count as converged.
CheckReport StrictDecreaseReport(const std::string& id,
                                 const std::vector<double>& values,
                                 const std::string& label,
                                 double noise_floor = 0.0);

// Residuals and gaps below this are quadrature rounding.
inline constexpr double kRefinementNoiseFloor = 1e-12;

struct CheckOptions {
  std::size_t holder_samples = 500;
  std::uint64_t seed = 0;
  std::size_t quadrature_n = 64;
  // Empty: 32 uniform times over the span covered by the 8 tau run.
  std::vector<double> probe_times;
  std::size_t oracle_grid_points = 200;
};

// Runs the named checks in canonical order. "el_residual" also emits
// "el_scalar"; "delta_decay" also emits "delta_identity" on Sphere2;
// "weak_residual" and "tau_refinement" rerun the scheme at 4, 2 and 1
// times the trajectory's tau.
std::vector<CheckReport> RunChecks(const Trajectory& traj,
                                   const std::vector<std::string>& ids,
                                   const CheckOptions& options);

}  // namespace mjko

#endif  // MJKO_DIAGNOSTICS_HPP_
