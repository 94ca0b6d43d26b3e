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

// Minimizing movement (JKO) scheme for the interaction energy:
//
//   mu_{k+1} in argmin_rho  E_W(rho) + d_2^2(rho, mu_k) / (2 tau)
//
// plus the piecewise-constant and geodesic (displacement) time
// interpolations of the resulting sequence.

#ifndef MJKO_JKO_HPP_
#define MJKO_JKO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mjko/measure.hpp"
#include "mjko/potential.hpp"
#include "mjko/transport.hpp"

namespace mjko {

enum class InnerSolver {
  // Lagrangian particles with frozen weights, Riemannian descent with Armijo
  // backtracking along the exponential map.
  kPlanGradientDescent,
  // Exact minimization over measures on a finite grid (Circle only, <= 4
  // atoms). Used as an oracle.
  kGridLp,
};

const char* InnerSolverName(InnerSolver solver);
InnerSolver ParseInnerSolver(const std::string& name);

struct SchemeConfig {
  double tau = 0.01;
  double horizon = 0.1;
  double inner_tol = 1e-8;
  std::size_t inner_max_iters = 500;
  InnerSolver solver = InnerSolver::kPlanGradientDescent;
  std::uint64_t seed = 0;
  std::size_t grid_points = 200;  // GridLp only

  void Validate() const;
  // 1e-8 (1 + L / tau).
  static double DefaultInnerTol(double lipschitz, double tau);
};

// floor(horizon / tau), with quotients within 1e-9 of an integer snapped to
// it so that e.g. 0.2 / 0.04 counts as 5 steps.
std::size_t StepCount(double tau, double horizon);

// Armijo constants for the inner descent.
inline constexpr double kArmijoSufficientDecrease = 1e-4;
inline constexpr double kArmijoBacktrack = 0.5;
inline constexpr int kArmijoMaxHalvings = 60;

inline constexpr double kGeodesicMergeTolerance = 1e-10;

struct StepDiagnostics {
  double objective_before = 0.0;  // E_W(mu_k)
  double objective_after = 0.0;   // E_W(mu_{k+1}) + d_2^2 / (2 tau)
  std::size_t iterations = 0;
  double inner_residual = 0.0;    // max_i |grad_i F| / w_i at exit
  double max_displacement = 0.0;  // over transported mass, plan based
  // "first_variation" when the returned dual satisfies the scalar
  // Euler-Lagrange relation, "lp_vertex" for the simplex dual.
  std::string dual_source;
};

struct StepResult {
  DiscreteMeasure next;
  QuadraticTransport transport;  // source mu_k, target mu_{k+1}
  StepDiagnostics diagnostics;
};

// min over ordered support pairs (x, y), x = y included, of the cut-pair
// distance.
double DeltaCut(const DiscreteMeasure& mu);

// E_W(rho) + d_2^2(rho, prev) / (2 tau).
double JkoObjective(const PotentialSpec& spec, const DiscreteMeasure& rho,
                    const DiscreteMeasure& prev, double tau);

// One step of the scheme with the configured inner solver. Throws
// CutLocusError on a cut incursion and StagnationError when backtracking
// cannot decrease the objective.
StepResult JkoStep(const DiscreteMeasure& prev, const PotentialSpec& spec,
                   const SchemeConfig& config);

StepResult PlanGradientDescentStep(const DiscreteMeasure& prev,
                                   const PotentialSpec& spec,
                                   const SchemeConfig& config);

// Oracle. Every atom y_j gets floor(grid_points / n) grid points on the arc
// [y_j - L tau, y_j + L tau]; mass of atom j may only go to its own grid
// points (finite speed of propagation). All unsplit assignments are
// enumerated and the best one is then improved by exact line searches over
// pairwise mass transfers, which covers split optima.
StepResult GridLpStep(const DiscreteMeasure& prev, const PotentialSpec& spec,
                      const SchemeConfig& config);

// Dual pair for (prev, next) built from the scalar first-variation relation
// phi_c = -tau (W * next) on spt(next), phi = its c-transform on spt(prev).
// Returned only if it is an optimal dual for `plan` (complementary slackness
// within 1e-10).
std::optional<KantorovichDual> FirstVariationDual(const DiscreteMeasure& prev,
                                                  const DiscreteMeasure& next,
                                                  const TransportPlan& plan,
                                                  const PotentialSpec& spec,
                                                  double tau);

struct ElResidual {
  double max_vector = 0.0;  // max_x |grad phi^c(x) / tau + grad(W * mu)(x)|
  std::size_t worst_atom = 0;
  double scalar_variance = 0.0;  // variance of phi^c / tau + W * mu on spt
  double duality_gap = 0.0;      // |dual value - d_2^2 / 2|
  std::vector<std::string> findings;  // ties / cut pairs, per atom
};

// Residual of the Euler-Lagrange identity on spt(dual.target).
ElResidual ComputeElResidual(const KantorovichDual& dual,
                             const PotentialSpec& spec, double tau,
                             double half_cost);

struct StepRecord {
  std::size_t step = 0;  // index k of mu_k
  double time = 0.0;
  double energy = 0.0;
  double step_distance = 0.0;  // d_2(mu_{k-1}, mu_k), 0 for k = 0
  double max_displacement = 0.0;
  double delta = 0.0;
  double el_residual = 0.0;
  std::size_t iterations = 0;
  std::string dual_source;
};

enum class RunStatus { kCompleted, kCutIncursion };

struct Trajectory {
  SchemeConfig config;
  PotentialSpec spec;
  std::vector<DiscreteMeasure> measures;  // mu_0 .. mu_N
  std::vector<TransportPlan> plans;       // mu_k -> mu_{k+1}
  std::vector<KantorovichDual> duals;     // phi on mu_k, phi_c on mu_{k+1}
  std::vector<double> half_costs;         // d_2^2(mu_k, mu_{k+1}) / 2
  std::vector<StepRecord> records;        // one per measure
  RunStatus status = RunStatus::kCompleted;
  std::string status_message;

  std::size_t StepsTaken() const { return measures.size() - 1; }
  // End of the last interpolation bracket, N tau.
  double CoveredTime() const;
};

// Runs floor(T / tau) steps. Halts early with kCutIncursion once
// delta_cut(mu_k) <= 2 kCutEpsilon or a step hits the cut locus; the
// trajectory then holds the steps completed so far. Stagnation is rethrown
// annotated with the step index.
Trajectory RunScheme(const DiscreteMeasure& mu0, const PotentialSpec& spec,
                     const SchemeConfig& config);

// Builds a trajectory from an explicit measure sequence (plans, duals and
// records computed as in RunScheme). Used for replay and for fixtures.
Trajectory AssembleTrajectory(std::vector<DiscreteMeasure> measures,
                              const PotentialSpec& spec,
                              const SchemeConfig& config);

// mu_k for t in [k tau, (k+1) tau); mu_N past the last bracket.
DiscreteMeasure InterpolateConstant(const Trajectory& traj, double t);

// Displacement interpolation along the optimal plan of the bracket:
// mass P_ji sits at exp_{x_i}(s log_{x_i}(y_j)), s = ((k+1) tau - t) / tau,
// x_i in spt(mu_{k+1}), y_j in spt(mu_k).
DiscreteMeasure InterpolateGeodesic(const Trajectory& traj, double t);

// Bracket index k with t in [k tau, (k+1) tau) after snapping near-integer
// quotients.
std::size_t BracketIndex(double t, double tau);

}  // namespace mjko

#endif  // MJKO_JKO_HPP_
