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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "mjko/config.hpp"
#include "mjko/error.hpp"
#include "mjko/io.hpp"
#include "mjko/runner.hpp"
#include "test_util.hpp"

namespace mjko {
namespace {

namespace fs = std::filesystem;

const char* kMinimal = R"({
  "manifold": "sphere2",
  "potential": {"family": "power_law", "exponent": 1, "coefficient": 1},
  "initial": {"atoms": [[1, 0, 0], [0.3, 0.8, 0.5196152422706632]],
              "weights": [0.4, 0.6]},
  "tau": 0.01,
  "horizon": 0.1
})";

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mjko_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string WithKey(const std::string& key, const std::string& value) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), ", \"" + key + "\": " + value + "\n");
  return text;
}

std::string ConfigErrorField(const std::string& text) {
  try {
    ParseConfigText(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(ConfigTest, MinimalConfigGetsDefaults) {
  const RunConfig c = ParseConfigText(kMinimal);
  EXPECT_EQ(c.manifold, ManifoldKind::kSphere2);
  EXPECT_EQ(c.scheme.inner_max_iters, 500u);
  EXPECT_EQ(c.quadrature_n, 64u);
  EXPECT_EQ(c.holder_samples, 500u);
  EXPECT_EQ(c.scheme.solver, InnerSolver::kPlanGradientDescent);
  EXPECT_FALSE(c.oracle);
  EXPECT_EQ(c.checks, DefaultChecks());
  EXPECT_EQ(c.output_dir, "out");
  // 1e-8 (1 + L / tau) with L = 2 pi.
  EXPECT_DOUBLE_EQ(c.scheme.inner_tol, 1e-8 * (1.0 + 2.0 * kPi / 0.01));
  EXPECT_EQ(c.InitialMeasure().size(), 2u);
}

TEST(ConfigTest, FieldErrors) {
  std::string text = kMinimal;
  text.replace(text.find("\"tau\": 0.01"), 11, "\"tau\": -0.01");
  EXPECT_EQ(ConfigErrorField(text), "tau");
  EXPECT_EQ(ConfigErrorField(WithKey("colour", "1")), "colour");
  EXPECT_EQ(ConfigErrorField(WithKey("solver", "\"newton\"")), "solver");
  EXPECT_EQ(ConfigErrorField("{"), "config");
  try {
    ParseConfigText(WithKey("checks", "[\"holder\", \"speed\"]"));
    FAIL() << "unknown check id accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "checks");
    for (const std::string& id : CheckIds()) {
      EXPECT_NE(std::string(e.what()).find(id), std::string::npos) << id;
    }
  }
  EXPECT_THROW(ParseConfig("/nonexistent/config.json"), ConfigError);
}

TEST(ConfigTest, CheckListParsing) {
  EXPECT_EQ(ParseCheckList("all"), DefaultChecks());
  const std::vector<std::string> two{"holder", "descent"};
  EXPECT_EQ(ParseCheckList("holder,descent"), two);
  EXPECT_EQ(ParseCheckList("holder,,descent,"), two);
  EXPECT_THROW(ParseCheckList("holder,speed"), ConfigError);
  const std::vector<std::string> defaults = DefaultChecks();
  EXPECT_EQ(std::count(defaults.begin(), defaults.end(), "oracle_gap"), 0);
}

TEST(ConfigTest, ConfigEchoReparses) {
  const RunConfig c = ParseConfigText(WithKey("seed", "11"));
  const RunConfig again = ParseConfigText(ConfigToJson(c));
  EXPECT_EQ(ConfigToJson(again), ConfigToJson(c));
  EXPECT_EQ(again.scheme.seed, 11u);
}

TEST(GeneratorTest, CapStaysAwayFromCutLocus) {
  for (ManifoldKind kind : testing::kAllKinds) {
    const double r = MaxCapRadius(kind);
    EXPECT_NEAR(r, (InjectivityRadius(kind) - kCapMargin) / 2, 1e-15);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      UniformCap cap{8, r * 0.999, std::nullopt, seed % 2 == 1};
      const DiscreteMeasure mu = GenerateUniformCap(kind, cap, seed);
      EXPECT_EQ(mu.size(), 8u);
      EXPECT_GT(DeltaCut(mu), 0.0);
      EXPECT_LE(mu.SupportDiameter(), 2 * cap.cap_radius + 1e-12);
    }
    // Same seed, same measure.
    const UniformCap cap{5, r / 2, std::nullopt, true};
    EXPECT_EQ(MeasureToJson(GenerateUniformCap(kind, cap, 3)),
              MeasureToJson(GenerateUniformCap(kind, cap, 3)));
  }
  std::string text = kMinimal;
  const std::size_t a = text.find("\"initial\"");
  const std::size_t b = text.find("\"tau\"");
  text.replace(a, b - a, "\"initial\": {\"generator\": \"uniform_cap\", \"atoms\": 3, "
                         "\"cap_radius\": 2.0},\n  ");
  EXPECT_EQ(ConfigErrorField(text), "initial.cap_radius");
}

TEST(RoundTripTest, MeasureAndPotential) {
  std::mt19937_64 rng(1);
  for (ManifoldKind kind : testing::kAllKinds) {
    const DiscreteMeasure mu = testing::RandomMeasure(kind, 4, rng);
    const DiscreteMeasure back = MeasureFromJson(kind, MeasureToJson(mu));
    ASSERT_EQ(back.size(), mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      EXPECT_EQ(back.atom(i).coords(), mu.atom(i).coords());
      EXPECT_EQ(back.weight(i), mu.weight(i));
    }
    for (const PotentialSpec& spec :
         {PotentialSpec::Power(kind, 1.5, 0.3),
          PotentialSpec(kind, SmoothedPower{0.5, 2.0, 0.01})}) {
      EXPECT_EQ(PotentialToJson(PotentialFromJson(kind, PotentialToJson(spec))),
                PotentialToJson(spec));
    }
  }
}

TEST(RoundTripTest, TrajectoryLineAndReport) {
  StepRecord rec;
  rec.step = 3;
  rec.time = 0.03;
  rec.energy = 0.125;
  rec.step_distance = 1.0 / 3.0;
  rec.max_displacement = 0.01;
  rec.delta = 2.5;
  rec.el_residual = std::numeric_limits<double>::infinity();
  rec.iterations = 17;
  rec.dual_source = "lp_vertex";
  const DiscreteMeasure mu(ManifoldKind::kTorus2,
                           {Point::Torus(0.1, 0.2), Point::Torus(0.7, 0.9)},
                           {0.25, 0.75});
  const std::string line = TrajectoryLineToJson(rec, mu);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const TrajectoryLine back = TrajectoryLineFromJson(line);
  EXPECT_EQ(back.record.step, 3u);
  EXPECT_EQ(back.record.step_distance, 1.0 / 3.0);
  EXPECT_TRUE(std::isinf(back.record.el_residual));
  EXPECT_EQ(back.record.dual_source, "lp_vertex");
  EXPECT_EQ(back.weights, mu.weights());
  EXPECT_EQ(TrajectoryLineToJson(back.record, mu), line);

  CheckReport r;
  r.id = "holder";
  r.passed = false;
  r.worst_margin = 0.5;
  r.tolerance = 1e-6;
  r.slack = -0.5;
  r.location.time = 0.01;
  r.location.time2 = 0.04;
  r.details = "x";
  const std::string json = CheckReportToJson(r);
  EXPECT_EQ(CheckReportToJson(CheckReportFromJson(json)), json);
  EXPECT_THROW(TrajectoryLineFromJson("{\"schema_version\": 99}"), Error);
}

TEST(TableTest, HeaderMatchesRow) {
  StepRecord rec;
  rec.el_residual = std::numeric_limits<double>::quiet_NaN();
  const std::string header = TableHeader();
  const std::string row = TableRow(rec);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','),
            std::count(row.begin(), row.end(), ','));
  EXPECT_NE(row.find("nan"), std::string::npos);
}

TEST(RunnerTest, ConstantsAndHorizonFlag) {
  const RunConfig c = ParseConfigText(kMinimal);
  const RunConstants k = ComputeRunConstants(c.InitialMeasure(), c.potential, 0.1);
  EXPECT_DOUBLE_EQ(k.lipschitz, 2 * kPi);
  EXPECT_NEAR(k.guaranteed_horizon, k.delta0 / (4 * kPi), 1e-15);
  EXPECT_EQ(k.guaranteed, 0.1 < k.guaranteed_horizon);
  EXPECT_NEAR(k.square_bound, 2 * (k.initial_energy - k.k_low), 1e-15);
}

TEST(RunnerTest, OutputsAreDeterministicAndParseable) {
  std::vector<std::string> contents;
  for (const char* name : {"det_a", "det_b"}) {
    const fs::path dir = ScratchDir(name);
    RunConfig c = ParseConfigText(WithKey("seed", "5"));
    c.output_dir = dir.string();
    const RunSummary s = ExecuteRun(c);
    EXPECT_EQ(s.exit_code, kExitOk) << s.message;
    EXPECT_EQ(s.status, "completed");
    EXPECT_EQ(s.steps, 10u);
    std::string all;
    for (const char* file : {"trajectory.jsonl", "checks.jsonl", "table.csv"}) {
      all += ReadFile(dir / file);
    }
    contents.push_back(all);
    // Every trajectory line parses back to the same bytes.
    std::ifstream in(dir / "trajectory.jsonl");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
      const TrajectoryLine t = TrajectoryLineFromJson(line);
      std::vector<Point> atoms;
      for (const Coords& x : t.atoms) atoms.emplace_back(ManifoldKind::kSphere2, x);
      EXPECT_EQ(TrajectoryLineToJson(
                    t.record, DiscreteMeasure(ManifoldKind::kSphere2, atoms, t.weights)),
                line);
      ++lines;
    }
    EXPECT_EQ(lines, 11u);
    std::ifstream checks(dir / "checks.jsonl");
    while (std::getline(checks, line)) {
      EXPECT_EQ(CheckReportToJson(CheckReportFromJson(line)), line);
    }
    fs::remove_all(dir);
  }
  EXPECT_EQ(contents[0], contents[1]);
}

TEST(RunnerTest, BeyondGuaranteedHorizonStillRunsChecks) {
  const fs::path dir = ScratchDir("beyond");
  RunConfig c = ParseConfigText(kMinimal);
  c.scheme.horizon = 0.4;  // delta_0 / (2 L) is about 0.10 here
  c.checks = {"descent", "finite_speed"};
  c.output_dir = dir.string();
  const RunSummary s = ExecuteRun(c);
  EXPECT_EQ(s.exit_code, kExitOk) << s.message;
  EXPECT_EQ(s.reports.size(), 2u);
  const std::string manifest = ReadFile(dir / "manifest.json");
  EXPECT_NE(manifest.find("\"guaranteed\": false"), std::string::npos) << manifest;
  fs::remove_all(dir);
}

TEST(RunnerTest, ExitCodesByClass) {
  const fs::path dir = ScratchDir("codes");
  RunConfig c = ParseConfigText(kMinimal);
  c.output_dir = dir.string();
  c.checks = {"descent"};
  // Antipodal start: delta_0 = 0 is a configuration problem.
  c.initial = DiscreteMeasure::Uniform(
      ManifoldKind::kSphere2, {Point::Sphere(0, 0, 1), Point::Sphere(0, 0, -1)});
  EXPECT_EQ(ExecuteRun(c).exit_code, kExitConfig);
  // h(s) = -s on the circle pushes two atoms apart until they are antipodal.
  const double span = kPi * kPi;
  c.manifold = ManifoldKind::kCircle;
  c.potential = PotentialSpec(ManifoldKind::kCircle,
                              Tabulated{{0.0, -span / 2, -span}, {-1.0, -1.0, -1.0}});
  c.initial = DiscreteMeasure::Uniform(ManifoldKind::kCircle,
                                       {Point::Circle(-1.4), Point::Circle(1.4)});
  c.scheme.horizon = 0.5;
  const RunSummary cut = ExecuteRun(c);
  EXPECT_EQ(cut.exit_code, kExitCutIncursion) << cut.message;
  EXPECT_EQ(cut.status, "cut_incursion");
  // The steps completed before the incursion are still written.
  EXPECT_GT(cut.steps, 0u);
  const std::string lines = ReadFile(dir / "trajectory.jsonl");
  EXPECT_EQ(static_cast<std::size_t>(std::count(lines.begin(), lines.end(), '\n')),
            cut.steps + 1);
  // An unwritable output directory is a runtime error.
  c.initial = DiscreteMeasure::Uniform(ManifoldKind::kCircle,
                                       {Point::Circle(-0.3), Point::Circle(0.3)});
  c.potential = PotentialSpec::Power(ManifoldKind::kCircle, 1.0, 1.0);
  c.output_dir = "/proc/forbidden/out";
  EXPECT_EQ(ExecuteRun(c).exit_code, kExitRuntime);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace mjko
