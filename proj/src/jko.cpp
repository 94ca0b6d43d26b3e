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

#include "mjko/jko.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mjko/error.hpp"

namespace mjko {
namespace {

// Particle configuration with frozen weights; may contain coincident atoms.
struct Particles {
  std::vector<Point> atoms;
  std::vector<double> weights;
};

double ParticleEnergy(const PotentialSpec& spec, const Particles& p) {
  double total = 0.0;
  const double h0 = spec.h(0.0);
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    total += 0.5 * p.weights[i] * p.weights[i] * h0;
    for (std::size_t j = i + 1; j < p.atoms.size(); ++j) {
      total += p.weights[i] * p.weights[j] *
               PairPotential(spec, p.atoms[i], p.atoms[j]);
    }
  }
  return total;
}

Matrix HalfSquaredCost(std::span<const Point> a, std::span<const Point> b) {
  Matrix c(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = Distance(a[i], b[j]);
      c(i, j) = 0.5 * d * d;
    }
  }
  return c;
}

struct Evaluation {
  double objective = 0.0;
  Matrix plan;  // (particle i, prev atom j)
};

Evaluation Evaluate(const PotentialSpec& spec, const Particles& p,
                    const DiscreteMeasure& prev, double tau) {
  const Matrix cost = HalfSquaredCost(p.atoms, prev.atoms());
  TransportLpSolution lp = SolveTransportLp(p.weights, prev.weights(), cost);
  return {ParticleEnergy(spec, p) + std::max(0.0, lp.cost) / tau,
          std::move(lp.plan)};
}

// Per-unit-mass gradient r_i = grad_i F / w_i at every particle.
std::vector<Tangent> MassGradient(const PotentialSpec& spec, const Particles& p,
                                  const DiscreteMeasure& prev,
                                  const Matrix& plan, double tau) {
  std::vector<Tangent> out;
  out.reserve(p.atoms.size());
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    const Point& x = p.atoms[i];
    Tangent g = GradConvolve(spec, p.atoms, p.weights, x);
    for (std::size_t j = 0; j < prev.size(); ++j) {
      if (plan(i, j) <= 0.0) continue;
      g = g.Plus(Log(x, prev.atom(j)).Scaled(-plan(i, j) / (tau * p.weights[i])));
    }
    out.push_back(g);
  }
  return out;
}

double MaxNorm(const std::vector<Tangent>& v) {
  double best = 0.0;
  for (const Tangent& t : v) best = std::max(best, t.Norm());
  return best;
}

Particles Move(const Particles& p, const std::vector<Tangent>& direction,
               double step) {
  Particles out{{}, p.weights};
  out.atoms.reserve(p.atoms.size());
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    out.atoms.push_back(Exp(p.atoms[i], direction[i].Scaled(-step)));
  }
  return out;
}

StepResult Finish(const DiscreteMeasure& prev, DiscreteMeasure next,
                  const PotentialSpec& spec, const SchemeConfig& config,
                  StepDiagnostics diag) {
  QuadraticTransport transport = SolveQuadraticTransport(prev, next);
  if (auto dual = FirstVariationDual(prev, next, transport.plan, spec,
                                     config.tau)) {
    transport.dual = std::move(*dual);
    diag.dual_source = "first_variation";
  } else {
    diag.dual_source = "lp_vertex";
  }
  diag.objective_after = Energy(spec, next) + transport.half_cost / config.tau;
  diag.max_displacement = transport.plan.MaxDisplacement(1e-14);
  return {std::move(next), std::move(transport), std::move(diag)};
}

}  // namespace

const char* InnerSolverName(InnerSolver solver) {
  return solver == InnerSolver::kGridLp ? "grid_lp" : "plan_gradient_descent";
}

InnerSolver ParseInnerSolver(const std::string& name) {
  if (name == "plan_gradient_descent") return InnerSolver::kPlanGradientDescent;
  if (name == "grid_lp") return InnerSolver::kGridLp;
  throw DomainError("unknown solver '" + name +
                    "' (expected plan_gradient_descent or grid_lp)");
}

void SchemeConfig::Validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("horizon must be > 0");
  }
  if (!(inner_tol > 0.0)) throw DomainError("inner_tol must be > 0");
  if (inner_max_iters == 0) throw DomainError("inner_max_iters must be >= 1");
  if (grid_points < 2) throw DomainError("grid_points must be >= 2");
}

double SchemeConfig::DefaultInnerTol(double lipschitz, double tau) {
  return 1e-8 * (1.0 + lipschitz / tau);
}

std::size_t BracketIndex(double t, double tau) {
  const double r = t / tau;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, std::abs(r))) {
    return static_cast<std::size_t>(std::max(0.0, nearest));
  }
  return static_cast<std::size_t>(std::max(0.0, std::floor(r)));
}

std::size_t StepCount(double tau, double horizon) {
  return BracketIndex(horizon, tau);
}

double DeltaCut(const DiscreteMeasure& mu) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = i; j < mu.size(); ++j) {
      best = std::min(best, CutPairDistance(mu.atom(i), mu.atom(j)));
    }
  }
  return best;
}

double JkoObjective(const PotentialSpec& spec, const DiscreteMeasure& rho,
                    const DiscreteMeasure& prev, double tau) {
  const double d2 = Wasserstein(rho, prev, 2).distance;
  return Energy(spec, rho) + d2 * d2 / (2.0 * tau);
}

StepResult JkoStep(const DiscreteMeasure& prev, const PotentialSpec& spec,
                   const SchemeConfig& config) {
  config.Validate();
  if (prev.kind() != spec.kind()) {
    throw DomainError("measure and potential live on different manifolds");
  }
  return config.solver == InnerSolver::kGridLp
             ? GridLpStep(prev, spec, config)
             : PlanGradientDescentStep(prev, spec, config);
}

StepResult PlanGradientDescentStep(const DiscreteMeasure& prev,
                                   const PotentialSpec& spec,
                                   const SchemeConfig& config) {
  const double tau = config.tau;
  Particles current{prev.atoms(), prev.weights()};
  StepDiagnostics diag;
  diag.objective_before = Energy(spec, prev);

  try {
    Evaluation eval = Evaluate(spec, current, prev, tau);
    std::vector<Tangent> grad = MassGradient(spec, current, prev, eval.plan, tau);
    double residual = MaxNorm(grad);
    std::size_t iter = 0;
    while (residual > config.inner_tol && iter < config.inner_max_iters) {
      // Directional derivative of F along -r: sum_i w_i |r_i|^2.
      double slope = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i) {
        slope += current.weights[i] * grad[i].Dot(grad[i]);
      }
      const double floor = 1e-13 * (1.0 + std::abs(eval.objective));
      double step = tau;
      bool accepted = false;
      for (int halving = 0; halving <= kArmijoMaxHalvings; ++halving) {
        Particles trial = Move(current, grad, step);
        Evaluation trial_eval = Evaluate(spec, trial, prev, tau);
        const bool armijo = trial_eval.objective <=
                            eval.objective - kArmijoSufficientDecrease * step * slope;
        bool take = armijo;
        if (!armijo && step * slope < floor &&
            trial_eval.objective <= eval.objective + floor) {
          // The predicted decrease is below the rounding level of F; accept
          // the step if it brings the residual down instead.
          std::vector<Tangent> trial_grad =
              MassGradient(spec, trial, prev, trial_eval.plan, tau);
          if (MaxNorm(trial_grad) < residual) take = true;
        }
        if (take) {
          current = std::move(trial);
          eval = std::move(trial_eval);
          accepted = true;
          break;
        }
        step *= kArmijoBacktrack;
      }
      if (!accepted) {
        std::ostringstream os;
        os << "inner descent stagnated at residual " << residual
           << " after " << iter << " iterations";
        throw StagnationError(os.str());
      }
      ++iter;
      grad = MassGradient(spec, current, prev, eval.plan, tau);
      residual = MaxNorm(grad);
    }
    diag.iterations = iter;
    diag.inner_residual = residual;
  } catch (const CutLocusError& e) {
    throw CutLocusError(std::string("cut incursion in inner solve: ") + e.what(),
                        e.first(), e.second());
  }

  DiscreteMeasure next(prev.kind(), current.atoms, current.weights);
  return Finish(prev, std::move(next), spec, config, std::move(diag));
}

StepResult GridLpStep(const DiscreteMeasure& prev, const PotentialSpec& spec,
                      const SchemeConfig& config) {
  if (prev.kind() != ManifoldKind::kCircle) {
    throw DomainError("the grid oracle supports the circle only");
  }
  const std::size_t n = prev.size();
  if (n > 4) throw SizeError("the grid oracle supports at most 4 atoms");
  if (config.grid_points > 200) {
    throw SizeError("the grid oracle supports at most 200 grid points");
  }
  const double tau = config.tau;
  const std::size_t per_atom = config.grid_points / n;
  if (per_atom < 2) throw SizeError("grid too coarse for the atom count");
  const double radius =
      std::min(LipschitzConstant(spec) * tau, kPi - 10 * kCutEpsilon);

  // Candidate points, grouped by the prev atom that may send mass there.
  std::vector<Point> points;
  std::vector<std::size_t> owner;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < per_atom; ++k) {
      const double offset =
          -radius + 2.0 * radius * static_cast<double>(k) /
                        static_cast<double>(per_atom - 1);
      points.push_back(Point::Circle(prev.atom(j)[0] + offset));
      owner.push_back(j);
    }
  }
  const std::size_t g = points.size();
  Matrix kernel(g, g);
  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = 0; b < g; ++b) {
      kernel(a, b) = PairPotential(spec, points[a], points[b]);
    }
  }
  // Transport cost per unit mass of moving prev atom owner[a] to point a.
  std::vector<double> unary(g);
  for (std::size_t a = 0; a < g; ++a) {
    const double d = Distance(points[a], prev.atom(owner[a]));
    unary[a] = d * d / (2.0 * tau);
  }
  const std::vector<double>& w = prev.weights();

  // Exhaustive search over unsplit assignments.
  std::vector<std::size_t> choice(n, 0), best_choice(n, 0);
  double best = std::numeric_limits<double>::infinity();
  auto index = [per_atom](std::size_t j, std::size_t k) {
    return j * per_atom + k;
  };
  // Depth-first with partial objective sums.
  std::vector<double> partial(n + 1, 0.0);
  std::size_t depth = 0;
  choice[0] = 0;
  while (true) {
    if (depth < n && choice[depth] < per_atom) {
      const std::size_t a = index(depth, choice[depth]);
      double add = w[depth] * unary[a] + 0.5 * w[depth] * w[depth] * kernel(a, a);
      for (std::size_t i = 0; i < depth; ++i) {
        add += w[i] * w[depth] * kernel(index(i, choice[i]), a);
      }
      partial[depth + 1] = partial[depth] + add;
      if (depth + 1 == n) {
        if (partial[n] < best) {
          best = partial[n];
          best_choice = choice;
        }
        ++choice[depth];
      } else {
        ++depth;
        choice[depth] = 0;
      }
    } else {
      if (depth == 0) break;
      --depth;
      ++choice[depth];
    }
  }

  // Pairwise mass transfers within each column, exact line search.
  Matrix mass(n, g, 0.0);
  for (std::size_t j = 0; j < n; ++j) mass(j, index(j, best_choice[j])) = w[j];
  std::vector<double> rho(g, 0.0);
  for (std::size_t j = 0; j < n; ++j) rho[index(j, best_choice[j])] = w[j];
  std::vector<double> field(g, 0.0);  // (K rho)_a
  auto refresh_field = [&]() {
    for (std::size_t a = 0; a < g; ++a) {
      double s = 0.0;
      for (std::size_t b = 0; b < g; ++b) s += kernel(a, b) * rho[b];
      field[a] = s;
    }
  };
  refresh_field();
  std::size_t sweeps = 0;
  for (; sweeps < 10000; ++sweeps) {
    double best_delta = -1e-16;
    std::size_t bj = 0, ba = 0, bb = 0;
    double bm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t ka = 0; ka < per_atom; ++ka) {
        const std::size_t a = index(j, ka);
        const double avail = mass(j, a);
        if (avail <= 0.0) continue;
        for (std::size_t kb = 0; kb < per_atom; ++kb) {
          if (kb == ka) continue;
          const std::size_t b = index(j, kb);
          const double linear = field[b] + unary[b] - field[a] - unary[a];
          const double quad = kernel(a, a) + kernel(b, b) - 2.0 * kernel(a, b);
          double m = avail;
          if (quad > 0.0) m = std::clamp(-linear / quad, 0.0, avail);
          const double delta = m * linear + 0.5 * m * m * quad;
          if (delta < best_delta) {
            best_delta = delta;
            bj = j;
            ba = a;
            bb = b;
            bm = m;
          }
        }
      }
    }
    if (bm <= 0.0) break;
    mass(bj, ba) -= bm;
    mass(bj, bb) += bm;
    if (mass(bj, ba) < 1e-300) mass(bj, ba) = 0.0;
    rho[ba] -= bm;
    rho[bb] += bm;
    refresh_field();
  }

  std::vector<Point> atoms;
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t a = 0; a < g; ++a) {
    if (rho[a] > 1e-15) {
      atoms.push_back(points[a]);
      weights.push_back(rho[a]);
      total += rho[a];
    }
  }
  for (double& v : weights) v /= total;

  StepDiagnostics diag;
  diag.objective_before = Energy(spec, prev);
  diag.iterations = sweeps;
  DiscreteMeasure next(ManifoldKind::kCircle, std::move(atoms),
                       std::move(weights));
  return Finish(prev, std::move(next), spec, config, std::move(diag));
}

std::optional<KantorovichDual> FirstVariationDual(const DiscreteMeasure& prev,
                                                  const DiscreteMeasure& next,
                                                  const TransportPlan& plan,
                                                  const PotentialSpec& spec,
                                                  double tau) {
  KantorovichDual dual{prev, next, std::vector<double>(prev.size()),
                       std::vector<double>(next.size())};
  for (std::size_t i = 0; i < next.size(); ++i) {
    dual.phi_c[i] = -tau * Convolve(spec, next, next.atom(i));
  }
  const Matrix d = DistanceMatrix(prev, next);
  for (std::size_t j = 0; j < prev.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < next.size(); ++i) {
      best = std::min(best, 0.5 * d(j, i) * d(j, i) - dual.phi_c[i]);
    }
    dual.phi[j] = best;
  }
  for (std::size_t j = 0; j < prev.size(); ++j) {
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (plan.matrix(j, i) <= 1e-14) continue;
      const double slack = 0.5 * d(j, i) * d(j, i) - dual.phi[j] - dual.phi_c[i];
      if (std::abs(slack) > 1e-10) return std::nullopt;
    }
  }
  AnchorDual(dual);
  return dual;
}

ElResidual ComputeElResidual(const KantorovichDual& dual,
                             const PotentialSpec& spec, double tau,
                             double half_cost) {
  ElResidual out;
  const DiscreteMeasure& next = dual.target;
  std::vector<double> scalars;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const Point& x = next.atom(i);
    const CTransformValue ct = CTransform(dual.source.atoms(), dual.phi, x);
    scalars.push_back(ct.value / tau + Convolve(spec, next, x));
    try {
      const Tangent r =
          GradCTransform(dual, x).Scaled(1.0 / tau).Plus(GradConvolve(spec, next, x));
      if (r.Norm() > out.max_vector) {
        out.max_vector = r.Norm();
        out.worst_atom = i;
      }
    } catch (const Error& e) {
      out.findings.push_back("atom " + std::to_string(i) + ": " + e.what());
    }
  }
  double mean = 0.0;
  for (double s : scalars) mean += s;
  mean /= static_cast<double>(scalars.size());
  double var = 0.0;
  for (double s : scalars) var += (s - mean) * (s - mean);
  out.scalar_variance = var / static_cast<double>(scalars.size());
  out.duality_gap = std::abs(dual.Value() - half_cost);
  return out;
}

double Trajectory::CoveredTime() const {
  return static_cast<double>(StepsTaken()) * config.tau;
}

namespace {

StepRecord MakeRecord(std::size_t k, const Trajectory& traj) {
  StepRecord r;
  r.step = k;
  r.time = static_cast<double>(k) * traj.config.tau;
  r.energy = Energy(traj.spec, traj.measures[k]);
  r.delta = DeltaCut(traj.measures[k]);
  if (k > 0) {
    r.step_distance = std::sqrt(2.0 * traj.half_costs[k - 1]);
    r.max_displacement = traj.plans[k - 1].MaxDisplacement(1e-14);
    const ElResidual el = ComputeElResidual(traj.duals[k - 1], traj.spec,
                                            traj.config.tau,
                                            traj.half_costs[k - 1]);
    r.el_residual = el.findings.empty()
                        ? el.max_vector
                        : std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace

Trajectory RunScheme(const DiscreteMeasure& mu0, const PotentialSpec& spec,
                     const SchemeConfig& config) {
  config.Validate();
  if (mu0.kind() != spec.kind()) {
    throw DomainError("initial measure and potential live on different "
                      "manifolds");
  }
  const AssumptionReport assumptions = CheckAssumptions(spec);
  if (!assumptions.AllPassed()) {
    for (const AssumptionFinding& f : assumptions.findings) {
      if (!f.passed) {
        throw DomainError("potential violates " + f.id + ": " + f.message);
      }
    }
  }
  if (!(DeltaCut(mu0) > 0.0)) {
    throw DomainError("initial support touches the cut locus (delta = 0)");
  }

  Trajectory traj{config, spec, {mu0}, {}, {}, {}, {}, RunStatus::kCompleted,
                  ""};
  traj.records.push_back(MakeRecord(0, traj));
  const std::size_t steps = StepCount(config.tau, config.horizon);
  for (std::size_t k = 0; k < steps; ++k) {
    if (traj.records.back().delta <= 2.0 * kCutEpsilon) {
      traj.status = RunStatus::kCutIncursion;
      traj.status_message = "halted before step " + std::to_string(k + 1) +
                            ": support reached the cut locus";
      break;
    }
    std::optional<StepResult> attempt;
    try {
      attempt = JkoStep(traj.measures.back(), spec, config);
    } catch (const CutLocusError& e) {
      traj.status = RunStatus::kCutIncursion;
      traj.status_message = "step " + std::to_string(k + 1) + ": " + e.what();
      break;
    } catch (const StagnationError& e) {
      throw StagnationError("step " + std::to_string(k + 1) + ": " + e.what());
    }
    StepResult& step = *attempt;
    traj.measures.push_back(step.next);
    traj.plans.push_back(step.transport.plan);
    traj.duals.push_back(step.transport.dual);
    traj.half_costs.push_back(step.transport.half_cost);
    StepRecord rec = MakeRecord(k + 1, traj);
    rec.iterations = step.diagnostics.iterations;
    rec.dual_source = step.diagnostics.dual_source;
    traj.records.push_back(std::move(rec));
  }
  return traj;
}

Trajectory AssembleTrajectory(std::vector<DiscreteMeasure> measures,
                              const PotentialSpec& spec,
                              const SchemeConfig& config) {
  config.Validate();
  if (measures.empty()) throw DomainError("a trajectory needs mu_0");
  Trajectory traj{config, spec, {}, {}, {}, {}, {}, RunStatus::kCompleted, ""};
  traj.measures.push_back(measures.front());
  traj.records.push_back(MakeRecord(0, traj));
  for (std::size_t k = 1; k < measures.size(); ++k) {
    QuadraticTransport t = SolveQuadraticTransport(measures[k - 1], measures[k]);
    std::string source = "lp_vertex";
    if (auto dual = FirstVariationDual(measures[k - 1], measures[k], t.plan,
                                       spec, config.tau)) {
      t.dual = std::move(*dual);
      source = "first_variation";
    }
    traj.measures.push_back(measures[k]);
    traj.plans.push_back(std::move(t.plan));
    traj.duals.push_back(std::move(t.dual));
    traj.half_costs.push_back(t.half_cost);
    StepRecord rec = MakeRecord(k, traj);
    rec.dual_source = source;
    traj.records.push_back(std::move(rec));
  }
  return traj;
}

DiscreteMeasure InterpolateConstant(const Trajectory& traj, double t) {
  if (!(t >= 0.0) || t > traj.config.horizon * (1.0 + 1e-12)) {
    throw DomainError("interpolation time outside [0, T]");
  }
  const std::size_t k = BracketIndex(t, traj.config.tau);
  return traj.measures[std::min(k, traj.StepsTaken())];
}

DiscreteMeasure InterpolateGeodesic(const Trajectory& traj, double t) {
  if (!(t >= 0.0) || t > traj.config.horizon * (1.0 + 1e-12)) {
    throw DomainError("interpolation time outside [0, T]");
  }
  const double tau = traj.config.tau;
  const std::size_t k = BracketIndex(t, tau);
  if (k >= traj.StepsTaken()) return traj.measures.back();
  // s = ((k+1) tau - t) / tau, with s = 1 exactly at snapped bracket starts.
  double s = static_cast<double>(k + 1) - t / tau;
  if (std::abs(t / tau - static_cast<double>(k)) <=
      1e-9 * std::max(1.0, t / tau)) {
    s = 1.0;
  }
  s = std::clamp(s, 0.0, 1.0);
  const DiscreteMeasure& from = traj.measures[k];      // y_j
  const DiscreteMeasure& to = traj.measures[k + 1];    // x_i
  const Matrix& plan = traj.plans[k].matrix;           // (j, i)
  std::vector<Point> atoms;
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t j = 0; j < from.size(); ++j) {
    for (std::size_t i = 0; i < to.size(); ++i) {
      const double m = plan(j, i);
      if (m <= 1e-14) continue;
      atoms.push_back(Geodesic(to.atom(i), from.atom(j), s));
      weights.push_back(m);
      total += m;
    }
  }
  for (double& w : weights) w /= total;
  return DiscreteMeasure(from.kind(), std::move(atoms), std::move(weights),
                         kGeodesicMergeTolerance);
}

}  // namespace mjko
