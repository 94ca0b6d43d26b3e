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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mjko/diagnostics.hpp"
#include "mjko/error.hpp"
#include "test_util.hpp"

namespace mjko {
namespace {

SchemeConfig Config(double tau, double horizon, std::size_t max_iters = 5000) {
  SchemeConfig c;
  c.tau = tau;
  c.horizon = horizon;
  c.inner_tol = 1e-10;
  c.inner_max_iters = max_iters;
  return c;
}

DiscreteMeasure SpherePair() {
  return DiscreteMeasure(
      ManifoldKind::kSphere2,
      {Point::Sphere(1, 0, 0), Point::Sphere(0.3, 0.8, 0.5196152422706632)},
      {0.4, 0.6});
}

PotentialSpec Attractive(ManifoldKind kind) {
  return PotentialSpec::Power(kind, 1.0, 1.0);
}

Trajectory StationaryDirac() {
  return RunScheme(DiscreteMeasure::Dirac(Point::Sphere(0, 0.6, 0.8)),
                   Attractive(ManifoldKind::kSphere2), Config(0.01, 0.16));
}

TEST(CheckRegistryTest, IdsAreClosed) {
  const std::vector<std::string> want{
      "assumptions",   "descent",        "finite_speed", "square_estimate",
      "holder",        "geodesic_speed", "el_residual",  "delta_decay",
      "weak_residual", "tau_refinement", "oracle_gap"};
  EXPECT_EQ(CheckIds(), want);
  EXPECT_TRUE(IsCheckId("holder"));
  EXPECT_FALSE(IsCheckId("hoelder"));
  EXPECT_THROW(RunChecks(StationaryDirac(), {"speed"}, {}), DomainError);
}

TEST(CheckReportTest, StrictDecrease) {
  EXPECT_TRUE(StrictDecreaseReport("x", {3.0, 2.0, 1.0}, "v").passed);
  EXPECT_TRUE(StrictDecreaseReport("x", {0.0, 0.0}, "v").passed);
  EXPECT_FALSE(StrictDecreaseReport("x", {1e-16, 2e-16}, "v").passed);
  EXPECT_TRUE(StrictDecreaseReport("x", {1e-16, 2e-16}, "v", 1e-12).passed);
  EXPECT_FALSE(StrictDecreaseReport("x", {1e-3, 2e-3}, "v", 1e-12).passed);
  const CheckReport flat = StrictDecreaseReport("x", {1.0, 1.0}, "v");
  EXPECT_FALSE(flat.passed);
  const CheckReport up = StrictDecreaseReport("x", {1.0, 0.5, 0.7}, "v");
  EXPECT_FALSE(up.passed);
  EXPECT_NEAR(up.worst_margin, 0.2, 1e-12);
  EXPECT_EQ(up.location.step, 2u);
}

TEST(ChecksTest, StationaryDiracHasZeroMargins) {
  const Trajectory traj = StationaryDirac();
  std::vector<std::string> ids = CheckIds();
  ids.pop_back();  // oracle_gap is circle only
  for (const CheckReport& r : RunChecks(traj, ids, {})) {
    EXPECT_TRUE(r.passed) << r.id << ": " << r.details;
    EXPECT_EQ(r.worst_margin, 0.0) << r.id;
  }
}

TEST(ChecksTest, TwoAtomSphereRunPasses) {
  const Trajectory traj =
      RunScheme(SpherePair(), Attractive(ManifoldKind::kSphere2), Config(0.01, 0.2));
  std::vector<std::string> ids = CheckIds();
  ids.pop_back();
  for (const CheckReport& r : RunChecks(traj, ids, {})) {
    EXPECT_TRUE(r.passed) << r.id << ": " << r.details;
  }
  // L = 2 pi, so no step moves mass further than 0.0628.
  for (const StepRecord& rec : traj.records) {
    EXPECT_LE(rec.max_displacement, 2 * kPi * 0.01 + 1e-10);
  }
  // Under attraction delta grows from its initial value.
  EXPECT_GT(traj.records.back().delta, traj.records.front().delta);
}

TEST(ChecksTest, HolderOnConstantTrajectoryIsTight) {
  const CheckReport r = CheckHolder(StationaryDirac(), 100, 5);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.worst_margin, 0.0);
}

TEST(ChecksTest, DeltaDecayReportsVacuousBound) {
  // delta_0 / (2 L tau) = (pi - d_0) / (4 pi 0.01) < 20 steps for d_0 > 2.
  const DiscreteMeasure mu = DiscreteMeasure::Uniform(
      ManifoldKind::kCircle, {Point::Circle(-1.2), Point::Circle(1.2)});
  const Trajectory traj =
      RunScheme(mu, Attractive(ManifoldKind::kCircle), Config(0.01, 0.2));
  const CheckReport r = CheckDeltaDecay(traj);
  EXPECT_TRUE(r.passed);
  EXPECT_NE(r.details.find("vacuous"), std::string::npos) << r.details;
}

TEST(AdversarialTest, TeleportedAtomFailsFiniteSpeed) {
  const PotentialSpec spec = Attractive(ManifoldKind::kCircle);
  const double jump = 2 * LipschitzConstant(spec) * 0.01;
  const Trajectory traj = AssembleTrajectory(
      {DiscreteMeasure::Uniform(ManifoldKind::kCircle,
                                {Point::Circle(0.0), Point::Circle(1.0)}),
       DiscreteMeasure::Uniform(ManifoldKind::kCircle,
                                {Point::Circle(0.0), Point::Circle(1.0 + jump)})},
      spec, Config(0.01, 0.01));
  const CheckReport r = CheckFiniteSpeed(traj, 1e-6);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.worst_margin, jump / 2, 1e-9);
  EXPECT_EQ(r.location.step, 1u);
}

TEST(AdversarialTest, InflatedStepsFailSquareEstimate) {
  const PotentialSpec spec = Attractive(ManifoldKind::kCircle);
  const DiscreteMeasure a = DiscreteMeasure::Uniform(
      ManifoldKind::kCircle, {Point::Circle(0.0), Point::Circle(0.2)});
  const DiscreteMeasure b = DiscreteMeasure::Uniform(
      ManifoldKind::kCircle, {Point::Circle(1.5), Point::Circle(1.7)});
  const Trajectory traj = AssembleTrajectory({a, b, a, b}, spec, Config(0.01, 0.03));
  const CheckReport r = CheckSquareEstimate(traj);
  EXPECT_FALSE(r.passed);
  // 3 steps of d_2 = 1.5 against 2 (E(mu_0) - k_low).
  const double lhs = 3 * 1.5 * 1.5 / 0.01;
  const double rhs = 2 * (Energy(spec, a) - ComputeEnergyBounds(spec).lower);
  EXPECT_NEAR(r.worst_margin, lhs - rhs, 1e-6);
}

TEST(AdversarialTest, UnconvergedStepFailsElResidual) {
  const PotentialSpec spec = PotentialSpec::Power(ManifoldKind::kCircle, 1.0, 10.0);
  const DiscreteMeasure mu = DiscreteMeasure::Uniform(
      ManifoldKind::kCircle, {Point::Circle(-0.5), Point::Circle(0.5)});
  const Trajectory traj = RunScheme(mu, spec, Config(0.02, 0.04, 1));
  const ElReports el = CheckElResidual(traj);
  EXPECT_FALSE(el.vector.passed);
  EXPECT_GT(el.vector.worst_margin, 0.0);
  const Trajectory converged = RunScheme(mu, spec, Config(0.02, 0.04));
  EXPECT_TRUE(CheckElResidual(converged).vector.passed);
}

TEST(TestFunctionTest, BumpIsCompactlySupported) {
  const double T = 0.2;
  for (double t : {-0.1, 0.0, 0.01, 0.19, 0.2, 0.3}) {
    EXPECT_EQ(TestFunction::Bump(t, T), 0.0) << t;
    EXPECT_EQ(TestFunction::BumpDerivative(t, T), 0.0) << t;
  }
  EXPECT_DOUBLE_EQ(TestFunction::Bump(0.1, T), 1.0);
  for (int k = 1; k < 40; ++k) {
    const double t = T * k / 40.0, h = 1e-6;
    const double fd =
        (TestFunction::Bump(t + h, T) - TestFunction::Bump(t - h, T)) / (2 * h);
    EXPECT_NEAR(TestFunction::BumpDerivative(t, T), fd, 1e-5 * (1 + std::abs(fd)));
  }
}

TEST(TestFunctionTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(6);
  for (ManifoldKind kind : testing::kAllKinds) {
    ASSERT_EQ(TestFunctionRegistry(kind).size(), 3u);
    for (const TestFunction& f : TestFunctionRegistry(kind)) {
      EXPECT_EQ(&FindTestFunction(kind, f.id()), &f);
      for (int trial = 0; trial < 100; ++trial) {
        const Point x = testing::RandomPoint(kind, rng);
        const Tangent g = f.SpatialGradient(x);
        const double h = 1e-5;
        for (const Tangent& e : testing::TangentBasis(x)) {
          const double fd = (f.Spatial(Exp(x, e.Scaled(h))) -
                             f.Spatial(Exp(x, e.Scaled(-h)))) /
                            (2 * h);
          EXPECT_NEAR(g.Dot(e), fd, 1e-6) << f.id();
        }
      }
    }
  }
  EXPECT_THROW(FindTestFunction(ManifoldKind::kCircle, "sphere_z"), DomainError);
}

TEST(WeakResidualTest, StationaryDiracVanishes) {
  const Trajectory traj = StationaryDirac();
  for (const TestFunction& f : TestFunctionRegistry(ManifoldKind::kSphere2)) {
    EXPECT_NEAR(WeakResidual(traj, f, 64), 0.0, 1e-12) << f.id();
  }
}

TEST(WeakResidualTest, ConstantSpatialPartVanishes) {
  const Trajectory traj =
      RunScheme(SpherePair(), Attractive(ManifoldKind::kSphere2), Config(0.01, 0.2));
  const TestFunction one("one", ManifoldKind::kSphere2,
                         [](const Point&) { return 1.0; },
                         [](const Point& x) { return Tangent::Zero(x); });
  EXPECT_NEAR(WeakResidual(traj, one, 64), 0.0, 1e-12);
}

TEST(WeakResidualTest, QuadratureIsConverged) {
  const Trajectory traj =
      RunScheme(SpherePair(), Attractive(ManifoldKind::kSphere2), Config(0.01, 0.2));
  for (const TestFunction& f : TestFunctionRegistry(ManifoldKind::kSphere2)) {
    EXPECT_LT(std::abs(WeakResidual(traj, f, 64) - WeakResidual(traj, f, 128)), 1e-8)
        << f.id();
  }
}

// The residual of the gradient-flow sign shrinks with tau; the other sign
// stalls at a tau-independent value.
TEST(WeakResidualTest, SignConventions) {
  const std::vector<WeakStudyRow> dyn =
      WeakResidualStudy(SpherePair(), Attractive(ManifoldKind::kSphere2),
                        Config(0.01, 0.2), {0.04, 0.02, 0.01}, 64);
  const std::vector<WeakStudyRow> printed = WeakResidualStudy(
      SpherePair(), Attractive(ManifoldKind::kSphere2), Config(0.01, 0.2),
      {0.04, 0.02, 0.01}, 64, WeakSign::kAsPrinted);
  ASSERT_EQ(dyn.size(), 3u);
  for (std::size_t i = 0; i < dyn.size(); ++i) {
    EXPECT_TRUE(StrictDecreaseReport("w", dyn[i].residuals, dyn[i].function_id).passed)
        << dyn[i].function_id;
    EXPECT_LE(dyn[i].residuals[2], 0.5 * dyn[i].residuals[0]);
    EXPECT_GT(printed[i].residuals[2], 0.5 * printed[i].residuals[0]);
  }
}

TEST(RefinementTest, IdenticalTausGiveZeroGap) {
  const RefinementTable t = TauRefinementStudy(
      SpherePair(), Attractive(ManifoldKind::kSphere2), Config(0.02, 0.16),
      {0.02, 0.02}, 0.16, UniformProbeTimes(0.16, 32));
  ASSERT_EQ(t.gaps.size(), 1u);
  EXPECT_EQ(t.gaps[0], 0.0);
}

TEST(RefinementTest, StationaryDiracGivesZeroGaps) {
  const RefinementTable t = TauRefinementStudy(
      DiscreteMeasure::Dirac(Point::Sphere(0, 0, 1)), Attractive(ManifoldKind::kSphere2),
      Config(0.04, 0.16), {0.04, 0.02, 0.01}, 0.16, UniformProbeTimes(0.16, 32));
  for (double g : t.gaps) EXPECT_EQ(g, 0.0);
}

TEST(RefinementTest, HalvingsShrinkGaps) {
  const RefinementTable t = TauRefinementStudy(
      SpherePair(), Attractive(ManifoldKind::kSphere2), Config(0.04, 0.16),
      {0.04, 0.02, 0.01, 0.005}, 0.16, UniformProbeTimes(0.16, 32));
  ASSERT_EQ(t.gaps.size(), 3u);
  EXPECT_TRUE(StrictDecreaseReport("g", t.gaps, "gaps").passed);
  const std::vector<double> probes = UniformProbeTimes(0.16, 32);
  ASSERT_EQ(probes.size(), 32u);
  EXPECT_GE(probes.front(), 0.0);
  EXPECT_LE(probes.back(), 0.16);
}

TEST(OracleGapTest, PassesOnSmallCircleInstance) {
  const DiscreteMeasure mu(ManifoldKind::kCircle,
                           {Point::Circle(0.0), Point::Circle(0.7), Point::Circle(2.0)},
                           {0.2, 0.5, 0.3});
  const Trajectory traj =
      RunScheme(mu, Attractive(ManifoldKind::kCircle), Config(0.01, 0.03));
  const CheckReport r = CheckOracleGap(traj, 200);
  EXPECT_TRUE(r.passed) << r.details;
  EXPECT_THROW(CheckOracleGap(StationaryDirac(), 200), DomainError);
}

}  // namespace
}  // namespace mjko
