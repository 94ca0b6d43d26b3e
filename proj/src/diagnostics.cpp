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

#include "mjko/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mjko/error.hpp"
#include "mjko/parallel.hpp"
#include "mjko/transport.hpp"

namespace mjko {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates lhs <= rhs instances into a report.
class MarginTracker {
 public:
  MarginTracker(std::string id, double tolerance) {
    report_.id = std::move(id);
    report_.tolerance = tolerance;
    report_.slack = kInf;
  }

  void Observe(double lhs, double rhs, const CheckLocation& where) {
    const double slack = rhs - lhs;
    if (std::isnan(slack)) {
      report_.slack = -kInf;
      report_.location = where;
      return;
    }
    if (slack < report_.slack) {
      report_.slack = slack;
      report_.location = where;
    }
  }

  CheckReport Finish(std::string details) {
    if (report_.slack == kInf) report_.slack = 0.0;  // nothing evaluated
    report_.worst_margin = std::max(0.0, -report_.slack);
    report_.passed = report_.worst_margin <= report_.tolerance;
    report_.details = std::move(details);
    return std::move(report_);
  }

 private:
  CheckReport report_;
};

CheckLocation AtStep(std::size_t k) {
  CheckLocation loc;
  loc.step = k;
  return loc;
}

double HolderConstant(const Trajectory& traj) {
  const double c = 2.0 * (Energy(traj.spec, traj.measures.front()) -
                          ComputeEnergyBounds(traj.spec).lower);
  return std::sqrt(std::max(0.0, c));
}

std::string Format(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Random pair s <= t; odd samples stay inside one bracket.
std::pair<double, double> SamplePair(const Trajectory& traj, std::size_t index,
                                     bool within_bracket, std::mt19937_64& rng) {
  const double tau = traj.config.tau;
  const std::size_t n = traj.StepsTaken();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double s, t;
  if (within_bracket || index % 2 == 1) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const double k = static_cast<double>(pick(rng));
    s = (k + unit(rng)) * tau;
    t = (k + unit(rng)) * tau;
  } else {
    const double horizon = traj.CoveredTime();
    s = unit(rng) * horizon;
    t = unit(rng) * horizon;
  }
  if (s > t) std::swap(s, t);
  return {s, t};
}

}  // namespace

const std::vector<std::string>& CheckIds() {
  static const std::vector<std::string> ids = {
      "assumptions",  "descent",     "finite_speed",  "square_estimate",
      "holder",       "geodesic_speed", "el_residual", "delta_decay",
      "weak_residual", "tau_refinement", "oracle_gap"};
  return ids;
}

bool IsCheckId(const std::string& id) {
  const auto& ids = CheckIds();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

CheckReport CheckAssumptionsReport(const PotentialSpec& spec) {
  MarginTracker tracker("assumptions", 0.0);
  std::string details;
  for (const AssumptionFinding& f : CheckAssumptions(spec).findings) {
    tracker.Observe(f.passed ? 0.0 : std::max(f.worst_value, 1e-300), 0.0,
                    CheckLocation{});
    if (!f.passed) {
      if (!details.empty()) details += "; ";
      details += f.id + ": " + f.message;
    }
  }
  return tracker.Finish(details.empty() ? "W0, W1, W2 hold" : details);
}

CheckReport CheckDescent(const Trajectory& traj, double tolerance) {
  MarginTracker tracker("descent", tolerance);
  const double tau = traj.config.tau;
  for (std::size_t k = 0; k < traj.StepsTaken(); ++k) {
    const double d2 = Wasserstein(traj.measures[k], traj.measures[k + 1], 2).distance;
    const double lhs = Energy(traj.spec, traj.measures[k + 1]) + d2 * d2 / (2.0 * tau);
    tracker.Observe(lhs, Energy(traj.spec, traj.measures[k]), AtStep(k + 1));
  }
  return tracker.Finish("E(mu_{k+1}) + d_2^2 / (2 tau) <= E(mu_k)");
}

CheckReport CheckFiniteSpeed(const Trajectory& traj,
                             std::optional<double> tolerance) {
  MarginTracker tracker("finite_speed",
                        tolerance.value_or(traj.config.inner_tol));
  const double bound = LipschitzConstant(traj.spec) * traj.config.tau;
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.StepsTaken(); ++k) {
    const DiscreteMeasure& prev = traj.measures[k];
    const DiscreteMeasure& next = traj.measures[k + 1];
    const Matrix& plan = traj.plans[k].matrix;
    for (std::size_t i = 0; i < next.size(); ++i) {
      double moved = prev.DistanceToSupport(next.atom(i));
      for (std::size_t j = 0; j < prev.size(); ++j) {
        if (plan(j, i) > 1e-14) {
          moved = std::max(moved, Distance(prev.atom(j), next.atom(i)));
        }
      }
      worst = std::max(worst, moved);
      CheckLocation loc = AtStep(k + 1);
      loc.atom = i;
      tracker.Observe(moved, bound, loc);
    }
  }
  return tracker.Finish("max displacement " + Format(worst) + " vs L tau " +
                        Format(bound));
}

CheckReport CheckSquareEstimate(const Trajectory& traj, double tolerance) {
  MarginTracker tracker("square_estimate", tolerance);
  double sum = 0.0;
  for (std::size_t k = 0; k < traj.StepsTaken(); ++k) {
    const double d2 = Wasserstein(traj.measures[k], traj.measures[k + 1], 2).distance;
    sum += d2 * d2 / traj.config.tau;
  }
  const double c = HolderConstant(traj);
  CheckLocation loc = AtStep(traj.StepsTaken());
  tracker.Observe(sum, c * c, loc);
  return tracker.Finish("sum d_2^2 / tau = " + Format(sum) +
                        ", 2 (E(mu_0) - k_low) = " + Format(c * c));
}

CheckReport CheckHolder(const Trajectory& traj, std::size_t sample_count,
                        std::uint64_t seed, double tolerance) {
  MarginTracker tracker("holder", tolerance);
  const double c = HolderConstant(traj);
  if (traj.StepsTaken() > 0) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < sample_count; ++i) {
      const auto [s, t] = SamplePair(traj, i, false, rng);
      const double d = Wasserstein(InterpolateGeodesic(traj, t),
                                   InterpolateGeodesic(traj, s), 2).distance;
      CheckLocation loc;
      loc.time = s;
      loc.time2 = t;
      tracker.Observe(d, c * std::sqrt(t - s), loc);
    }
  }
  return tracker.Finish(std::to_string(sample_count) +
                        " samples, constant " + Format(c));
}

CheckReport CheckGeodesicSpeed(const Trajectory& traj,
                               std::size_t sample_count, std::uint64_t seed,
                               double tolerance) {
  MarginTracker tracker("geodesic_speed", tolerance);
  if (traj.StepsTaken() > 0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const double tau = traj.config.tau;
    for (std::size_t i = 0; i < sample_count; ++i) {
      const auto [s, t] = SamplePair(traj, i, true, rng);
      const std::size_t k = std::min(BracketIndex(s, tau), traj.StepsTaken() - 1);
      const double step = std::sqrt(2.0 * traj.half_costs[k]);
      const double d = Wasserstein(InterpolateGeodesic(traj, t),
                                   InterpolateGeodesic(traj, s), 2).distance;
      CheckLocation loc = AtStep(k);
      loc.time = s;
      loc.time2 = t;
      tracker.Observe(std::abs(d - (t - s) / tau * step), 0.0, loc);
    }
  }
  return tracker.Finish(std::to_string(sample_count) + " within-bracket samples");
}

ElReports CheckElResidual(const Trajectory& traj, double factor,
                          double scalar_tolerance) {
  const double tau = traj.config.tau;
  MarginTracker vec("el_residual", factor * LipschitzConstant(traj.spec) / tau);
  MarginTracker scalar("el_scalar", scalar_tolerance);
  std::string findings;
  double worst_vec = 0.0, worst_var = 0.0, worst_gap = 0.0;
  for (std::size_t k = 0; k < traj.StepsTaken(); ++k) {
    const ElResidual el =
        ComputeElResidual(traj.duals[k], traj.spec, tau, traj.half_costs[k]);
    CheckLocation loc = AtStep(k + 1);
    loc.atom = el.worst_atom;
    if (!el.findings.empty()) {
      vec.Observe(kInf, 0.0, loc);
      for (const std::string& f : el.findings) {
        findings += "; step " + std::to_string(k + 1) + " " + f;
      }
    } else {
      vec.Observe(el.max_vector, 0.0, loc);
    }
    worst_vec = std::max(worst_vec, el.max_vector);
    worst_var = std::max(worst_var, el.scalar_variance);
    worst_gap = std::max(worst_gap, el.duality_gap);
    scalar.Observe(std::max(el.scalar_variance, el.duality_gap), 0.0,
                   AtStep(k + 1));
  }
  return {vec.Finish("max |r| = " + Format(worst_vec) + findings),
          scalar.Finish("variance " + Format(worst_var) + ", duality gap " +
                        Format(worst_gap))};
}

CheckReport CheckDeltaDecay(const Trajectory& traj, double tolerance) {
  MarginTracker tracker("delta_decay", tolerance);
  const double two_l_tau =
      2.0 * LipschitzConstant(traj.spec) * traj.config.tau;
  const double delta0 = traj.records.front().delta;
  std::optional<std::size_t> vacuous;
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const double bound = delta0 - static_cast<double>(k) * two_l_tau;
    if (bound < 0.0 && !vacuous) vacuous = k;
    tracker.Observe(bound, DeltaCut(traj.measures[k]), AtStep(k));
  }
  std::string details = "delta_0 = " + Format(delta0);
  if (vacuous) {
    details += "; bound vacuous from step " + std::to_string(*vacuous);
  }
  return tracker.Finish(details);
}

CheckReport CheckSphereDeltaIdentity(const Trajectory& traj, double tolerance) {
  if (traj.spec.kind() != ManifoldKind::kSphere2) {
    throw DomainError("delta identity check applies to sphere2 only");
  }
  MarginTracker tracker("delta_identity", tolerance);
  for (std::size_t k = 0; k < traj.measures.size(); ++k) {
    const DiscreteMeasure& mu = traj.measures[k];
    tracker.Observe(std::abs(DeltaCut(mu) - (kPi - mu.SupportDiameter())), 0.0,
                    AtStep(k));
  }
  return tracker.Finish("delta = pi - diam(spt mu)");
}

CheckReport CheckOracleGap(const Trajectory& traj, std::size_t grid_points,
                           double tolerance) {
  MarginTracker tracker("oracle_gap", tolerance);
  SchemeConfig config = traj.config;
  config.solver = InnerSolver::kGridLp;
  config.grid_points = grid_points;
  double worst = -kInf;
  for (std::size_t k = 0; k < traj.StepsTaken(); ++k) {
    const double oracle =
        GridLpStep(traj.measures[k], traj.spec, config).diagnostics.objective_after;
    const double ours = JkoObjective(traj.spec, traj.measures[k + 1],
                                     traj.measures[k], config.tau);
    worst = std::max(worst, ours - oracle);
    tracker.Observe(ours, oracle, AtStep(k + 1));
  }
  return tracker.Finish(traj.StepsTaken() == 0
                            ? "no steps"
                            : "max objective - oracle = " + Format(worst));
}

TestFunction::TestFunction(std::string id, ManifoldKind kind, Value value,
                           Gradient gradient)
    : id_(std::move(id)),
      kind_(kind),
      value_(std::move(value)),
      gradient_(std::move(gradient)) {}

double TestFunction::Bump(double t, double horizon) {
  const double u = (t - 0.5 * horizon) / (0.45 * horizon);
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double TestFunction::BumpDerivative(double t, double horizon) {
  const double r = 0.45 * horizon;
  const double u = (t - 0.5 * horizon) / r;
  if (!(std::abs(u) < 1.0)) return 0.0;
  const double q = 1.0 - u * u;
  return Bump(t, horizon) * (-2.0 * u / (q * q)) / r;
}

const std::vector<TestFunction>& TestFunctionRegistry(ManifoldKind kind) {
  static const std::vector<TestFunction> circle = {
      {"circle_sin", ManifoldKind::kCircle,
       [](const Point& x) { return std::sin(x[0]); },
       [](const Point& x) { return Tangent(x, {std::cos(x[0]), 0.0, 0.0}); }},
      {"circle_cos2", ManifoldKind::kCircle,
       [](const Point& x) { return std::cos(2.0 * x[0]); },
       [](const Point& x) {
         return Tangent(x, {-2.0 * std::sin(2.0 * x[0]), 0.0, 0.0});
       }},
      {"circle_mix", ManifoldKind::kCircle,
       [](const Point& x) { return std::sin(x[0]) + 0.5 * std::cos(3.0 * x[0]); },
       [](const Point& x) {
         return Tangent(
             x, {std::cos(x[0]) - 1.5 * std::sin(3.0 * x[0]), 0.0, 0.0});
       }},
  };
  // Ambient polynomials; Tangent projects the ambient gradient.
  static const std::vector<TestFunction> sphere = {
      {"sphere_z", ManifoldKind::kSphere2,
       [](const Point& x) { return x[2]; },
       [](const Point& x) { return Tangent(x, {0.0, 0.0, 1.0}); }},
      {"sphere_xy", ManifoldKind::kSphere2,
       [](const Point& x) { return x[0] * x[1]; },
       [](const Point& x) { return Tangent(x, {x[1], x[0], 0.0}); }},
      {"sphere_quad", ManifoldKind::kSphere2,
       [](const Point& x) { return x[0] * x[0] - x[2] * x[2] + 0.5 * x[1]; },
       [](const Point& x) {
         return Tangent(x, {2.0 * x[0], 0.5, -2.0 * x[2]});
       }},
  };
  static const std::vector<TestFunction> torus = {
      {"torus_sin_u", ManifoldKind::kTorus2,
       [](const Point& x) { return std::sin(kTwoPi * x[0]); },
       [](const Point& x) {
         return Tangent(x, {kTwoPi * std::cos(kTwoPi * x[0]), 0.0, 0.0});
       }},
      {"torus_cos_sum", ManifoldKind::kTorus2,
       [](const Point& x) { return std::cos(kTwoPi * (x[0] + x[1])); },
       [](const Point& x) {
         const double g = -kTwoPi * std::sin(kTwoPi * (x[0] + x[1]));
         return Tangent(x, {g, g, 0.0});
       }},
      {"torus_product", ManifoldKind::kTorus2,
       [](const Point& x) {
         return std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]);
       },
       [](const Point& x) {
         const double su = std::sin(kTwoPi * x[0]), cu = std::cos(kTwoPi * x[0]);
         const double sv = std::sin(kTwoPi * x[1]), cv = std::cos(kTwoPi * x[1]);
         return Tangent(x, {kTwoPi * cu * cv, -kTwoPi * su * sv, 0.0});
       }},
  };
  switch (kind) {
    case ManifoldKind::kCircle:
      return circle;
    case ManifoldKind::kSphere2:
      return sphere;
    case ManifoldKind::kTorus2:
      return torus;
  }
  throw InternalError("unknown manifold");
}

const TestFunction& FindTestFunction(ManifoldKind kind, const std::string& id) {
  for (const TestFunction& f : TestFunctionRegistry(kind)) {
    if (f.id() == id) return f;
  }
  throw DomainError("no test function '" + id + "' on " +
                    std::string(ManifoldName(kind)));
}

double WeakResidual(const Trajectory& traj, const TestFunction& f,
                    std::size_t quadrature_n, WeakSign sign,
                    std::optional<double> support_horizon) {
  if (f.kind() != traj.spec.kind()) {
    throw DomainError("test function lives on a different manifold");
  }
  if (quadrature_n == 0) throw DomainError("quadrature_n must be >= 1");
  if (traj.status != RunStatus::kCompleted) {
    throw CutLocusError("weak residual needs a trajectory without cut "
                        "incursion: " + traj.status_message);
  }
  const double horizon = support_horizon.value_or(traj.CoveredTime());
  if (horizon > traj.CoveredTime() * (1.0 + 1e-12)) {
    throw DomainError("bump support exceeds the covered time");
  }
  const double tau = traj.config.tau;
  const double h = tau / static_cast<double>(quadrature_n);
  const double sgn = sign == WeakSign::kDynamics ? -1.0 : 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < traj.StepsTaken(); ++k) {
    double bracket = 0.0;
    for (std::size_t m = 0; m < quadrature_n; ++m) {
      const double t =
          static_cast<double>(k) * tau + (static_cast<double>(m) + 0.5) * h;
      const double b = TestFunction::Bump(t, horizon);
      const double db = TestFunction::BumpDerivative(t, horizon);
      if (b == 0.0 && db == 0.0) continue;
      const DiscreteMeasure mu = InterpolateGeodesic(traj, t);
      double value = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        const Point& x = mu.atom(i);
        const double transport =
            f.SpatialGradient(x).Dot(GradConvolve(traj.spec, mu, x));
        value += mu.weight(i) * (db * f.Spatial(x) + sgn * b * transport);
      }
      bracket += value;
    }
    total += bracket * h;
  }
  return std::abs(total);
}

std::vector<double> UniformProbeTimes(double horizon, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {0.0};
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(horizon * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

namespace {

std::vector<Trajectory> RunAtTaus(const DiscreteMeasure& mu0,
                                  const PotentialSpec& spec,
                                  const SchemeConfig& base,
                                  const std::vector<double>& taus,
                                  double horizon) {
  return ParallelMap(taus.size(), [&](std::size_t i) {
    SchemeConfig config = base;
    config.tau = taus[i];
    config.horizon = horizon;
    return RunScheme(mu0, spec, config);
  });
}

}  // namespace

RefinementTable TauRefinementStudy(const DiscreteMeasure& mu0,
                                   const PotentialSpec& spec,
                                   const SchemeConfig& base,
                                   const std::vector<double>& taus,
                                   double horizon,
                                   const std::vector<double>& probe_times) {
  if (taus.empty()) throw DomainError("tau list is empty");
  for (double t : probe_times) {
    if (t < 0.0 || t > horizon) throw DomainError("probe time outside [0, T]");
  }
  const std::vector<Trajectory> runs = RunAtTaus(mu0, spec, base, taus, horizon);
  RefinementTable table;
  table.taus = taus;
  table.covered_time = horizon;
  for (const Trajectory& r : runs) {
    table.covered_time = std::min(table.covered_time, r.CoveredTime());
  }
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    double sup = 0.0, at = 0.0;
    for (double t : probe_times) {
      if (t > table.covered_time * (1.0 + 1e-12)) continue;
      const double d = Wasserstein(InterpolateGeodesic(runs[i], t),
                                   InterpolateGeodesic(runs[i + 1], t), 2)
                           .distance;
      if (d > sup) {
        sup = d;
        at = t;
      }
    }
    table.gaps.push_back(sup);
    table.worst_probe_time.push_back(at);
  }
  return table;
}

std::vector<WeakStudyRow> WeakResidualStudy(const DiscreteMeasure& mu0,
                                            const PotentialSpec& spec,
                                            const SchemeConfig& base,
                                            const std::vector<double>& taus,
                                            std::size_t quadrature_n,
                                            WeakSign sign) {
  if (taus.empty()) throw DomainError("tau list is empty");
  const std::vector<Trajectory> runs =
      RunAtTaus(mu0, spec, base, taus, base.horizon);
  double support = kInf;
  for (const Trajectory& r : runs) support = std::min(support, r.CoveredTime());
  if (!(support > 0.0)) {
    throw DomainError("horizon shorter than the coarsest tau");
  }
  std::vector<WeakStudyRow> rows;
  for (const TestFunction& f : TestFunctionRegistry(spec.kind())) {
    WeakStudyRow row{f.id(), taus, {}};
    for (const Trajectory& r : runs) {
      row.residuals.push_back(WeakResidual(r, f, quadrature_n, sign, support));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CheckReport StrictDecreaseReport(const std::string& id,
                                 const std::vector<double>& values,
                                 const std::string& label,
                                 double noise_floor) {
  MarginTracker tracker(id, 0.0);
  std::string details = label + ":";
  for (double v : values) details += " " + Format(v);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const bool converged =
        values[i] <= noise_floor && values[i + 1] <= noise_floor;
    CheckLocation loc;
    loc.step = i + 1;
    if (converged) {
      tracker.Observe(0.0, 0.0, loc);
    } else if (values[i + 1] >= values[i]) {
      // Equal non-zero values are not a strict decrease.
      tracker.Observe(values[i + 1] - values[i] +
                          std::numeric_limits<double>::min(),
                      0.0, loc);
    } else {
      tracker.Observe(values[i + 1], values[i], loc);
    }
  }
  return tracker.Finish(details);
}

std::vector<CheckReport> RunChecks(const Trajectory& traj,
                                   const std::vector<std::string>& ids,
                                   const CheckOptions& options) {
  for (const std::string& id : ids) {
    if (!IsCheckId(id)) throw DomainError("unknown check id '" + id + "'");
  }
  auto wanted = [&ids](const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
  };
  std::vector<CheckReport> out;
  const double tau = traj.config.tau;
  for (const std::string& id : CheckIds()) {
    if (!wanted(id)) continue;
    if (id == "assumptions") {
      out.push_back(CheckAssumptionsReport(traj.spec));
    } else if (id == "descent") {
      out.push_back(CheckDescent(traj));
    } else if (id == "finite_speed") {
      out.push_back(CheckFiniteSpeed(traj));
    } else if (id == "square_estimate") {
      out.push_back(CheckSquareEstimate(traj));
    } else if (id == "holder") {
      out.push_back(CheckHolder(traj, options.holder_samples, options.seed));
    } else if (id == "geodesic_speed") {
      out.push_back(
          CheckGeodesicSpeed(traj, options.holder_samples, options.seed));
    } else if (id == "el_residual") {
      ElReports el = CheckElResidual(traj);
      out.push_back(std::move(el.vector));
      out.push_back(std::move(el.scalar));
    } else if (id == "delta_decay") {
      out.push_back(CheckDeltaDecay(traj));
      if (traj.spec.kind() == ManifoldKind::kSphere2) {
        out.push_back(CheckSphereDeltaIdentity(traj));
      }
    } else if (id == "weak_residual") {
      const std::vector<WeakStudyRow> rows =
          WeakResidualStudy(traj.measures.front(), traj.spec, traj.config,
                            {4 * tau, 2 * tau, tau}, options.quadrature_n);
      CheckReport merged;
      merged.id = "weak_residual";
      merged.slack = kInf;
      for (const WeakStudyRow& row : rows) {
        CheckReport r = StrictDecreaseReport("weak_residual", row.residuals,
                                             row.function_id,
                                             kRefinementNoiseFloor);
        if (r.slack < merged.slack) {
          merged.slack = r.slack;
          merged.location = r.location;
        }
        merged.worst_margin = std::max(merged.worst_margin, r.worst_margin);
        merged.details += (merged.details.empty() ? "" : "; ") + r.details;
      }
      if (merged.slack == kInf) merged.slack = 0.0;
      merged.passed = merged.worst_margin <= merged.tolerance;
      out.push_back(std::move(merged));
    } else if (id == "tau_refinement") {
      const double coarse = 8 * tau;
      const std::vector<double> probes =
          options.probe_times.empty()
              ? UniformProbeTimes(
                    coarse * StepCount(coarse, traj.config.horizon), 32)
              : options.probe_times;
      const RefinementTable table = TauRefinementStudy(
          traj.measures.front(), traj.spec, traj.config,
          {8 * tau, 4 * tau, 2 * tau, tau}, traj.config.horizon, probes);
      out.push_back(StrictDecreaseReport("tau_refinement", table.gaps,
                                         "cauchy gaps", kRefinementNoiseFloor));
    } else if (id == "oracle_gap") {
      out.push_back(CheckOracleGap(traj, options.oracle_grid_points));
    }
  }
  return out;
}

}  // namespace mjko
