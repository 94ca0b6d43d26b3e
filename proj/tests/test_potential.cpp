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

#include "mjko/error.hpp"
#include "mjko/potential.hpp"
#include "test_util.hpp"

namespace mjko {
namespace {

using testing::kAllKinds;
using testing::RandomMeasure;
using testing::RandomPoint;
using testing::TangentBasis;

const Point kE1 = Point::Sphere(1, 0, 0);
const Point kE2 = Point::Sphere(0, 1, 0);

TEST(PotentialTest, PairPotentialExamples) {
  const auto linear = PotentialSpec::Power(ManifoldKind::kSphere2, 1.0, 1.0);
  EXPECT_EQ(PairPotential(linear, kE1, kE1), 0.0);
  EXPECT_NEAR(PairPotential(linear, kE1, kE2), kPi * kPi / 4, 1e-14);
  const auto quartic = PotentialSpec::Power(ManifoldKind::kCircle, 2.0, 0.5);
  EXPECT_NEAR(
      PairPotential(quartic, Point::Circle(0.0), Point::Circle(kPi / 2)),
      0.5 * std::pow(kPi / 2, 4), 1e-13);
}

TEST(PotentialTest, LipschitzConstantExamples) {
  EXPECT_NEAR(LipschitzConstant(PotentialSpec::Power(ManifoldKind::kSphere2, 1, 1)),
              2 * kPi, 1e-14);
  EXPECT_NEAR(LipschitzConstant(PotentialSpec::Power(ManifoldKind::kTorus2, 1, 1)),
              std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(LipschitzConstant(PotentialSpec::Power(ManifoldKind::kSphere2, 2, 1)),
              4 * kPi * kPi * kPi, 1e-11);
}

TEST(PotentialTest, EnergyExamples) {
  const auto spec = PotentialSpec::Power(ManifoldKind::kSphere2, 1.0, 1.0);
  EXPECT_EQ(Energy(spec, DiscreteMeasure::Dirac(kE1)), 0.0);
  EXPECT_NEAR(Energy(spec, DiscreteMeasure::Uniform(ManifoldKind::kSphere2,
                                                    {kE1, kE2})),
              kPi * kPi / 16, 1e-14);
  // Collocated atoms merge into a Dirac.
  EXPECT_EQ(Energy(spec, DiscreteMeasure::Uniform(ManifoldKind::kSphere2,
                                                  {kE2, kE2, kE2})),
            0.0);
}

TEST(PotentialTest, ConvolveExamples) {
  const auto spec = PotentialSpec::Power(ManifoldKind::kSphere2, 1.0, 1.0);
  const Point e3 = Point::Sphere(0, 0, 1);
  EXPECT_EQ(Convolve(spec, DiscreteMeasure::Dirac(kE1), kE1), 0.0);
  EXPECT_DOUBLE_EQ(Convolve(spec, DiscreteMeasure::Dirac(kE2), kE1),
                   PairPotential(spec, kE1, kE2));
  const Point y = Point::Sphere(0, -1, 0);
  const DiscreteMeasure two =
      DiscreteMeasure::Uniform(ManifoldKind::kSphere2, {kE2, y});
  EXPECT_NEAR(Convolve(spec, two, e3),
              0.5 * (PairPotential(spec, e3, kE2) + PairPotential(spec, e3, y)),
              1e-15);
}

TEST(PotentialTest, GradConvolveExamples) {
  const auto spec = PotentialSpec::Power(ManifoldKind::kSphere2, 1.0, 1.0);
  EXPECT_EQ(GradConvolve(spec, DiscreteMeasure::Dirac(kE1), kE1).Norm(), 0.0);
  const Tangent g = GradConvolve(spec, DiscreteMeasure::Dirac(kE2), kE1);
  const Tangent expected = Log(kE1, kE2).Scaled(-2.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(g[i], expected[i], 1e-15);
  EXPECT_THROW(GradConvolve(spec, DiscreteMeasure::Dirac(Point::Sphere(-1, 0, 0)), kE1),
               CutLocusError);
}

TEST(PotentialTest, FamiliesEvaluate) {
  const PotentialSpec smooth(ManifoldKind::kCircle, SmoothedPower{1.5, 2.0, 0.1});
  EXPECT_EQ(smooth.h(0.0), 0.0);
  EXPECT_NEAR(smooth.h(1.0), 2.0 * (std::pow(1.1, 1.5) - std::pow(0.1, 1.5)), 1e-14);
  EXPECT_NEAR(smooth.dh(1.0), 2.0 * 1.5 * std::pow(1.1, 0.5), 1e-14);
  EXPECT_THROW(PotentialSpec::Power(ManifoldKind::kCircle, 0.5, 1.0), DomainError);
  EXPECT_THROW(PotentialSpec::Power(ManifoldKind::kCircle, 1.0, -1.0), DomainError);
}

// Cubic Hermite tables reproduce cubic polynomials exactly.
TEST(PotentialTest, TabulatedReproducesCubic) {
  const double span = kPi * kPi;
  auto h = [](double s) { return 0.3 * s + 0.02 * s * s - 0.001 * s * s * s; };
  auto dh = [](double s) { return 0.3 + 0.04 * s - 0.003 * s * s; };
  Tabulated tab;
  const int n = 7;
  for (int i = 0; i < n; ++i) {
    const double s = span * i / (n - 1);
    tab.values.push_back(h(s));
    tab.slopes.push_back(dh(s));
  }
  const PotentialSpec spec(ManifoldKind::kCircle, tab);
  double sampled_lip = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double s = span * k / 1000.0;
    EXPECT_NEAR(spec.h(s), h(s), 1e-12);
    EXPECT_NEAR(spec.dh(s), dh(s), 1e-12);
    sampled_lip = std::max(sampled_lip, std::abs(dh(s)));
  }
  EXPECT_GE(spec.lip_h(), sampled_lip - 1e-12);
  EXPECT_LE(spec.lip_h(), sampled_lip + 1e-6);
}

TEST(PotentialTest, AssumptionsPassForPowerLaw) {
  const auto spec = PotentialSpec::Power(ManifoldKind::kSphere2, 1.0, 1.0);
  const AssumptionReport report = CheckAssumptions(spec);
  EXPECT_TRUE(report.AllPassed());
  EXPECT_EQ(spec.r_h(), 0.0);
}

TEST(PotentialTest, AssumptionW0Violation) {
  const double span = kPi * kPi;
  Tabulated tab{{0.1, 0.1 + span / 2, 0.1 + span}, {1.0, 1.0, 1.0}};
  const AssumptionReport report =
      CheckAssumptions(PotentialSpec(ManifoldKind::kCircle, tab));
  ASSERT_EQ(report.findings[0].id, "W0");
  EXPECT_FALSE(report.findings[0].passed);
  EXPECT_NEAR(report.findings[0].worst_value, 0.1, 1e-15);
  EXPECT_TRUE(report.findings[1].passed);
  EXPECT_TRUE(report.findings[2].passed);
}

// h(s) = s (S - s) turns down past S / 2; with r_h = 0 that violates W2.
TEST(PotentialTest, AssumptionW2Violation) {
  const double span = kPi * kPi;
  Tabulated tab;
  const int n = 9;
  for (int i = 0; i < n; ++i) {
    const double s = span * i / (n - 1);
    tab.values.push_back(s * (span - s));
    tab.slopes.push_back(span - 2 * s);
  }
  const AssumptionReport strict =
      CheckAssumptions(PotentialSpec(ManifoldKind::kCircle, tab, 0.0));
  EXPECT_TRUE(strict.findings[0].passed);
  EXPECT_TRUE(strict.findings[1].passed);
  ASSERT_EQ(strict.findings[2].id, "W2");
  EXPECT_FALSE(strict.findings[2].passed);
  EXPECT_GT(strict.findings[2].worst_s, span / 2);
  // A threshold at the end of the table makes the condition vacuous.
  const PotentialSpec lenient(ManifoldKind::kCircle, tab);
  EXPECT_DOUBLE_EQ(lenient.r_h(), span);
  EXPECT_TRUE(CheckAssumptions(lenient).AllPassed());
}

// Hermite interpolation is C^1 by construction, so every table satisfies W1,
// even one whose slopes disagree with its values.
TEST(PotentialTest, AssumptionW1HoldsForHermiteTables) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    Tabulated tab{{0.0}, {unit(rng)}};
    for (int k = 0; k < 6; ++k) {
      tab.values.push_back(unit(rng));
      tab.slopes.push_back(unit(rng));
    }
    const AssumptionReport report =
        CheckAssumptions(PotentialSpec(ManifoldKind::kCircle, tab));
    ASSERT_EQ(report.findings[1].id, "W1");
    EXPECT_TRUE(report.findings[1].passed) << report.findings[1].message;
  }
}

std::vector<PotentialSpec> SampleSpecs(ManifoldKind kind) {
  return {PotentialSpec::Power(kind, 1.0, 1.0),
          PotentialSpec::Power(kind, 2.0, 0.5),
          PotentialSpec::Power(kind, 1.5, 2.0),
          PotentialSpec(kind, SmoothedPower{0.5, 1.0, 0.05})};
}

TEST(PotentialPropertyTest, SymmetryAndEnergyLowerBound) {
  for (ManifoldKind kind : kAllKinds) {
    std::mt19937_64 rng(700 + static_cast<int>(kind));
    for (const PotentialSpec& spec : SampleSpecs(kind)) {
      const double k_low = ComputeEnergyBounds(spec).lower;
      for (int trial = 0; trial < 200; ++trial) {
        const Point x = RandomPoint(kind, rng), y = RandomPoint(kind, rng);
        EXPECT_EQ(PairPotential(spec, x, y), PairPotential(spec, y, x));
        EXPECT_GE(Energy(spec, RandomMeasure(kind, 1 + trial % 6, rng)), k_low);
      }
    }
  }
}

TEST(PotentialPropertyTest, GradConvolveMatchesFiniteDifferences) {
  int tested = 0;
  std::mt19937_64 rng(800);
  while (tested < 500) {
    const ManifoldKind kind = testing::kAllKinds[tested % 3];
    const PotentialSpec spec = SampleSpecs(kind)[tested % 4];
    const DiscreteMeasure mu = RandomMeasure(kind, 1 + tested % 5, rng);
    const Point x = RandomPoint(kind, rng);
    bool clear = true;
    for (const Point& a : mu.atoms()) clear = clear && CutPairDistance(x, a) >= 0.1;
    if (!clear) continue;
    ++tested;
    const Tangent g = GradConvolve(spec, mu, x);
    const double h = 1e-4;
    for (const Tangent& e : TangentBasis(x)) {
      const double fd = (Convolve(spec, mu, Exp(x, e.Scaled(h))) -
                         Convolve(spec, mu, Exp(x, e.Scaled(-h)))) /
                        (2 * h);
      EXPECT_NEAR(g.Dot(e), fd, 1e-5) << "spec " << spec.FamilyName();
    }
  }
}

TEST(PotentialPropertyTest, GradConvolveBoundedByLipschitzConstant) {
  int tested = 0;
  std::mt19937_64 rng(900);
  while (tested < 1000) {
    const ManifoldKind kind = testing::kAllKinds[tested % 3];
    const PotentialSpec spec = SampleSpecs(kind)[tested % 4];
    const DiscreteMeasure mu = RandomMeasure(kind, 1 + tested % 6, rng);
    const Point x = RandomPoint(kind, rng);
    try {
      const double norm = GradConvolve(spec, mu, x).Norm();
      EXPECT_LE(norm, LipschitzConstant(spec) + 1e-9);
      ++tested;
    } catch (const CutLocusError&) {
      // Measure-zero draw at a cut pair; resample.
    }
  }
}

}  // namespace
}  // namespace mjko
