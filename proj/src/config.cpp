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

#include "mjko/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json_codec.hpp"
#include "mjko/diagnostics.hpp"
#include "mjko/error.hpp"

namespace mjko {
namespace {

using codec::Json;

Coords DefaultCenter(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::kCircle:
      return {0.0, 0.0, 0.0};
    case ManifoldKind::kSphere2:
      return {0.0, 0.0, 1.0};
    case ManifoldKind::kTorus2:
      return {0.5, 0.5, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

double PositiveNumber(const Json& j, const char* key) {
  const double v = codec::ToNumber(j, key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be > 0");
  return v;
}

std::size_t Count(const Json& j, const char* key, std::size_t min) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min)) {
    throw ConfigError(key, "must be an integer >= " + std::to_string(min));
  }
  return j.get<std::size_t>();
}

UniformCap ParseGenerator(ManifoldKind kind, const Json& j) {
  const std::string field = "initial";
  codec::RequireKnownKeys(
      j, {"generator", "atoms", "cap_radius", "center", "random_weights"},
      field);
  const Json& name = codec::Required(j, "generator", field);
  if (!name.is_string() || name.get<std::string>() != "uniform_cap") {
    throw ConfigError("initial.generator", "only uniform_cap is supported");
  }
  UniformCap cap;
  cap.atoms = Count(codec::Required(j, "atoms", field), "initial.atoms", 1);
  cap.cap_radius =
      codec::ToNumber(codec::Required(j, "cap_radius", field), "initial.cap_radius");
  if (j.contains("center")) {
    cap.center = codec::PointFromJson(kind, j["center"], "initial.center").coords();
  }
  if (j.contains("random_weights")) {
    if (!j["random_weights"].is_boolean()) {
      throw ConfigError("initial.random_weights", "expected a boolean");
    }
    cap.random_weights = j["random_weights"].get<bool>();
  }
  return cap;
}

RunConfig ParseDocument(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  codec::RequireKnownKeys(
      doc,
      {"schema_version", "manifold", "potential", "initial", "replay", "tau",
       "horizon", "solver", "inner_tol", "inner_max_iters", "seed", "checks",
       "output_dir", "probe_times", "quadrature_n", "holder_samples", "oracle",
       "grid_points"},
      "");
  if (doc.contains("schema_version") &&
      (!doc["schema_version"].is_number_integer() ||
       doc["schema_version"].get<int>() != kSchemaVersion)) {
    throw ConfigError("schema_version",
                      "must be " + std::to_string(kSchemaVersion));
  }
  RunConfig c;
  const Json& manifold = codec::Required(doc, "manifold", "");
  try {
    c.manifold = ParseManifold(manifold.is_string() ? manifold.get<std::string>()
                                                    : std::string("?"));
  } catch (const DomainError& e) {
    throw ConfigError("manifold", e.what());
  }
  c.potential =
      codec::PotentialFromJson(c.manifold, codec::Required(doc, "potential", ""),
                               "potential");
  if (doc.contains("replay")) {
    if (doc.contains("initial")) {
      throw ConfigError("replay", "give either initial or replay, not both");
    }
    const Json& replay = doc["replay"];
    if (!replay.is_array() || replay.empty()) {
      throw ConfigError("replay", "expected a non-empty array of measures");
    }
    for (std::size_t i = 0; i < replay.size(); ++i) {
      c.replay.push_back(codec::MeasureFromJson(
          c.manifold, replay[i], "replay[" + std::to_string(i) + "]"));
    }
  } else {
    const Json& initial = codec::Required(doc, "initial", "");
    if (!initial.is_object()) throw ConfigError("initial", "expected an object");
    if (initial.contains("generator")) {
      c.generator = ParseGenerator(c.manifold, initial);
    } else {
      c.initial = codec::MeasureFromJson(c.manifold, initial, "initial");
    }
  }
  c.scheme.tau = PositiveNumber(codec::Required(doc, "tau", ""), "tau");
  c.scheme.horizon =
      PositiveNumber(codec::Required(doc, "horizon", ""), "horizon");
  if (doc.contains("solver")) {
    try {
      c.scheme.solver = ParseInnerSolver(doc["solver"].get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError("solver", e.what());
    }
  }
  if (doc.contains("inner_tol")) {
    c.scheme.inner_tol = PositiveNumber(doc["inner_tol"], "inner_tol");
    c.inner_tol_explicit = true;
  } else {
    c.scheme.inner_tol = SchemeConfig::DefaultInnerTol(
        LipschitzConstant(c.potential), c.scheme.tau);
  }
  if (doc.contains("inner_max_iters")) {
    c.scheme.inner_max_iters = Count(doc["inner_max_iters"], "inner_max_iters", 1);
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ConfigError("seed", "must be a non-negative integer");
    }
    c.scheme.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("grid_points")) {
    c.scheme.grid_points = Count(doc["grid_points"], "grid_points", 2);
  }
  if (doc.contains("checks")) {
    const Json& checks = doc["checks"];
    if (!checks.is_array()) throw ConfigError("checks", "expected an array");
    std::string list;
    for (const Json& id : checks) {
      if (!id.is_string()) throw ConfigError("checks", "expected check ids");
      list += (list.empty() ? "" : ",") + id.get<std::string>();
    }
    c.checks = ParseCheckList(list);
  } else {
    c.checks = DefaultChecks();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) {
      throw ConfigError("output_dir", "expected a string");
    }
    c.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("probe_times")) {
    if (!doc["probe_times"].is_array()) {
      throw ConfigError("probe_times", "expected an array");
    }
    for (const Json& t : doc["probe_times"]) {
      c.probe_times.push_back(codec::ToNumber(t, "probe_times"));
    }
  }
  if (doc.contains("quadrature_n")) {
    c.quadrature_n = Count(doc["quadrature_n"], "quadrature_n", 1);
  }
  if (doc.contains("holder_samples")) {
    c.holder_samples = Count(doc["holder_samples"], "holder_samples", 0);
  }
  if (doc.contains("oracle")) {
    if (!doc["oracle"].is_boolean()) throw ConfigError("oracle", "expected a boolean");
    c.oracle = doc["oracle"].get<bool>();
  }
  c.Validate();
  return c;
}

}  // namespace

double MaxCapRadius(ManifoldKind kind) {
  return 0.5 * (InjectivityRadius(kind) - kCapMargin);
}

DiscreteMeasure GenerateUniformCap(ManifoldKind kind, const UniformCap& cap,
                                   std::uint64_t seed) {
  if (cap.atoms == 0) throw DomainError("generator needs at least one atom");
  if (!(cap.cap_radius >= 0.0) || cap.cap_radius >= MaxCapRadius(kind)) {
    throw DomainError("cap_radius must lie in [0, " +
                      std::to_string(MaxCapRadius(kind)) + ")");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Point center(kind, cap.center.value_or(DefaultCenter(kind)));
  const double r = cap.cap_radius;
  std::vector<Point> atoms;
  for (std::size_t i = 0; i < cap.atoms; ++i) {
    switch (kind) {
      case ManifoldKind::kCircle:
        atoms.push_back(Point::Circle(center[0] + r * (2.0 * unit(rng) - 1.0)));
        break;
      case ManifoldKind::kSphere2: {
        // Area-uniform: cos(theta) uniform on [cos r, 1].
        const double cos_theta = 1.0 - unit(rng) * (1.0 - std::cos(r));
        const double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
        const double phi = kTwoPi * unit(rng);
        const Coords& c = center.coords();
        // Orthonormal frame (e1, e2) of the tangent plane at the center.
        Coords a = std::abs(c[0]) < 0.9 ? Coords{1.0, 0.0, 0.0}
                                        : Coords{0.0, 1.0, 0.0};
        const double dot = a[0] * c[0] + a[1] * c[1] + a[2] * c[2];
        Coords e1{a[0] - dot * c[0], a[1] - dot * c[1], a[2] - dot * c[2]};
        const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
        for (double& v : e1) v /= n1;
        const Coords e2{c[1] * e1[2] - c[2] * e1[1], c[2] * e1[0] - c[0] * e1[2],
                        c[0] * e1[1] - c[1] * e1[0]};
        Coords v;
        for (int k = 0; k < 3; ++k) {
          v[k] = theta * (std::cos(phi) * e1[k] + std::sin(phi) * e2[k]);
        }
        atoms.push_back(Exp(center, Tangent(center, v)));
        break;
      }
      case ManifoldKind::kTorus2: {
        double dx, dy;
        do {
          dx = r * (2.0 * unit(rng) - 1.0);
          dy = r * (2.0 * unit(rng) - 1.0);
        } while (dx * dx + dy * dy > r * r);
        atoms.push_back(Point::Torus(center[0] + dx, center[1] + dy));
        break;
      }
    }
  }
  std::vector<double> weights(cap.atoms, 1.0);
  if (cap.random_weights) {
    for (double& w : weights) w = 0.5 + unit(rng);
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return DiscreteMeasure(kind, std::move(atoms), std::move(weights));
}

DiscreteMeasure RunConfig::InitialMeasure() const {
  if (!replay.empty()) return replay.front();
  if (initial) return *initial;
  if (generator) return GenerateUniformCap(manifold, *generator, scheme.seed);
  throw ConfigError("initial", "missing initial measure");
}

void RunConfig::Validate() const {
  if (!(scheme.tau > 0.0) || !std::isfinite(scheme.tau)) {
    throw ConfigError("tau", "must be > 0");
  }
  if (!(scheme.horizon > 0.0) || !std::isfinite(scheme.horizon)) {
    throw ConfigError("horizon", "must be > 0");
  }
  if (!(scheme.inner_tol > 0.0)) throw ConfigError("inner_tol", "must be > 0");
  if (potential.kind() != manifold) {
    throw ConfigError("potential", "built for a different manifold");
  }
  if (generator && !(generator->cap_radius >= 0.0 &&
                     generator->cap_radius < MaxCapRadius(manifold))) {
    throw ConfigError("initial.cap_radius",
                      "must lie in [0, " + std::to_string(MaxCapRadius(manifold)) +
                          ") so that delta(mu_0) > 0");
  }
  for (const std::string& id : checks) {
    if (!IsCheckId(id)) {
      std::string valid;
      for (const std::string& v : CheckIds()) {
        valid += (valid.empty() ? "" : ", ") + v;
      }
      throw ConfigError("checks", "unknown check id '" + id +
                                      "' (valid ids: " + valid + ")");
    }
  }
  for (double t : probe_times) {
    if (!(t >= 0.0 && t <= scheme.horizon)) {
      throw ConfigError("probe_times", "probe times must lie in [0, horizon]");
    }
  }
  if (quadrature_n == 0) throw ConfigError("quadrature_n", "must be >= 1");
  if (!replay.empty() &&
      replay.size() - 1 > StepCount(scheme.tau, scheme.horizon)) {
    throw ConfigError("replay", "more measures than floor(horizon / tau) + 1");
  }
  const bool wants_oracle =
      oracle || scheme.solver == InnerSolver::kGridLp ||
      std::find(checks.begin(), checks.end(), "oracle_gap") != checks.end();
  if (wants_oracle) {
    if (manifold != ManifoldKind::kCircle) {
      throw ConfigError("oracle", "the grid oracle supports the circle only");
    }
    const std::size_t n = !replay.empty() ? replay.front().size()
                          : initial       ? initial->size()
                          : generator     ? generator->atoms
                                          : 0;
    if (n > 4) throw ConfigError("oracle", "the grid oracle supports <= 4 atoms");
    if (scheme.grid_points > 200) {
      throw ConfigError("grid_points", "the grid oracle supports <= 200 points");
    }
  }
}

void RunConfig::SetTau(double tau) {
  scheme.tau = tau;
  if (!inner_tol_explicit && tau > 0.0) {
    scheme.inner_tol =
        SchemeConfig::DefaultInnerTol(LipschitzConstant(potential), tau);
  }
}

std::vector<std::string> DefaultChecks() {
  std::vector<std::string> out;
  for (const std::string& id : CheckIds()) {
    if (id != "oracle_gap") out.push_back(id);
  }
  return out;
}

std::vector<std::string> ParseCheckList(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (const std::string& id : DefaultChecks()) out.push_back(id);
      continue;
    }
    if (!IsCheckId(item)) {
      std::string valid;
      for (const std::string& v : CheckIds()) {
        valid += (valid.empty() ? "" : ", ") + v;
      }
      throw ConfigError("checks", "unknown check id '" + item +
                                      "' (valid ids: " + valid + ")");
    }
    out.push_back(item);
  }
  return out;
}

RunConfig ParseConfigText(const std::string& text) {
  const Json doc = codec::Parse(text, "config");
  try {
    return ParseDocument(doc);
  } catch (const Json::exception& e) {
    throw ConfigError("config", std::string("wrong value type: ") + e.what());
  }
}

RunConfig ParseConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfigText(ss.str());
}

std::string ConfigToJson(const RunConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["manifold"] = std::string(ManifoldName(c.manifold));
  j["potential"] = codec::PotentialToJson(c.potential);
  if (!c.replay.empty()) {
    Json replay = Json::array();
    for (const DiscreteMeasure& m : c.replay) replay.push_back(codec::MeasureToJson(m));
    j["replay"] = std::move(replay);
  } else if (c.generator) {
    Json g;
    g["generator"] = "uniform_cap";
    g["atoms"] = c.generator->atoms;
    g["cap_radius"] = c.generator->cap_radius;
    if (c.generator->center) {
      g["center"] = codec::PointToJson(Point(c.manifold, *c.generator->center));
    }
    g["random_weights"] = c.generator->random_weights;
    j["initial"] = std::move(g);
  } else if (c.initial) {
    j["initial"] = codec::MeasureToJson(*c.initial);
  }
  j["tau"] = c.scheme.tau;
  j["horizon"] = c.scheme.horizon;
  j["solver"] = InnerSolverName(c.scheme.solver);
  j["inner_tol"] = c.scheme.inner_tol;
  j["inner_max_iters"] = c.scheme.inner_max_iters;
  j["seed"] = c.scheme.seed;
  j["checks"] = c.checks;
  j["output_dir"] = c.output_dir;
  j["probe_times"] = c.probe_times;
  j["quadrature_n"] = c.quadrature_n;
  j["holder_samples"] = c.holder_samples;
  j["oracle"] = c.oracle;
  j["grid_points"] = c.scheme.grid_points;
  return j.dump(2);
}

}  // namespace mjko
