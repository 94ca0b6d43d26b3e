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

#include "mjko/io.hpp"

#include <cmath>
#include <sstream>

#include "json_codec.hpp"
#include "mjko/config.hpp"
#include "mjko/error.hpp"

namespace mjko {
namespace codec {

Json Number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double ToNumber(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError(field, "expected a number");
}

Json PointToJson(const Point& p) {
  Json out = Json::array();
  for (std::size_t i = 0; i < CoordCount(p.kind()); ++i) out.push_back(p[i]);
  return out;
}

Point PointFromJson(ManifoldKind kind, const Json& j, const std::string& field) {
  const std::size_t n = CoordCount(kind);
  if (!j.is_array() || j.size() != n) {
    throw ConfigError(field, "expected " + std::to_string(n) +
                                 " coordinates for " +
                                 std::string(ManifoldName(kind)));
  }
  Coords c{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) c[i] = ToNumber(j[i], field);
  try {
    return Point(kind, c);
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
}

Json MeasureToJson(const DiscreteMeasure& mu) {
  Json atoms = Json::array();
  for (const Point& p : mu.atoms()) atoms.push_back(PointToJson(p));
  Json weights = Json::array();
  for (double w : mu.weights()) weights.push_back(w);
  Json out;
  out["atoms"] = std::move(atoms);
  out["weights"] = std::move(weights);
  return out;
}

DiscreteMeasure MeasureFromJson(ManifoldKind kind, const Json& j,
                                const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  RequireKnownKeys(j, {"atoms", "weights"}, field);
  const Json& atoms = Required(j, "atoms", field);
  if (!atoms.is_array()) throw ConfigError(field + ".atoms", "expected an array");
  std::vector<Point> points;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    points.push_back(PointFromJson(kind, atoms[i],
                                   field + ".atoms[" + std::to_string(i) + "]"));
  }
  std::vector<double> weights;
  if (j.contains("weights")) {
    const Json& w = j["weights"];
    if (!w.is_array()) throw ConfigError(field + ".weights", "expected an array");
    for (const Json& v : w) weights.push_back(ToNumber(v, field + ".weights"));
  } else {
    weights.assign(points.size(), points.empty() ? 0.0 : 1.0 / points.size());
  }
  try {
    return DiscreteMeasure(kind, std::move(points), std::move(weights));
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
}

Json PotentialToJson(const PotentialSpec& spec) {
  Json out;
  out["family"] = spec.FamilyName();
  std::visit(
      [&out](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          out["exponent"] = f.exponent;
          out["coefficient"] = f.coefficient;
        } else if constexpr (std::is_same_v<T, SmoothedPower>) {
          out["exponent"] = f.exponent;
          out["coefficient"] = f.coefficient;
          out["smoothing"] = f.smoothing;
        } else {
          out["values"] = f.values;
          out["slopes"] = f.slopes;
        }
      },
      spec.family());
  out["r_h"] = spec.r_h();
  return out;
}

PotentialSpec PotentialFromJson(ManifoldKind kind, const Json& j,
                                const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  const Json& family = Required(j, "family", field);
  if (!family.is_string()) {
    throw ConfigError(field + ".family", "expected a string");
  }
  const std::string name = family.get<std::string>();
  auto number = [&](const char* key, double fallback) {
    return j.contains(key) ? ToNumber(j[key], field + "." + key) : fallback;
  };
  auto numbers = [&](const char* key) {
    const Json& a = Required(j, key, field);
    if (!a.is_array()) {
      throw ConfigError(field + "." + key, "expected an array of numbers");
    }
    std::vector<double> out;
    for (const Json& v : a) out.push_back(ToNumber(v, field + "." + key));
    return out;
  };
  PotentialFamily fam;
  if (name == "power_law") {
    RequireKnownKeys(j, {"family", "exponent", "coefficient", "r_h"}, field);
    fam = PowerLaw{number("exponent", 1.0), number("coefficient", 1.0)};
  } else if (name == "smoothed_power") {
    RequireKnownKeys(
        j, {"family", "exponent", "coefficient", "smoothing", "r_h"}, field);
    fam = SmoothedPower{number("exponent", 1.0), number("coefficient", 1.0),
                        number("smoothing", 1e-3)};
  } else if (name == "tabulated") {
    RequireKnownKeys(j, {"family", "values", "slopes", "r_h"}, field);
    fam = Tabulated{numbers("values"), numbers("slopes")};
  } else {
    throw ConfigError(field + ".family",
                      "unknown family '" + name +
                          "' (expected power_law, smoothed_power or tabulated)");
  }
  std::optional<double> r_h;
  if (j.contains("r_h")) r_h = ToNumber(j["r_h"], field + ".r_h");
  try {
    return PotentialSpec(kind, std::move(fam), r_h);
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
}

void RequireKnownKeys(const Json& j, std::initializer_list<const char*> allowed,
                      const std::string& field) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) {
      std::string list;
      for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      const std::string where = field.empty() ? it.key() : field + "." + it.key();
      throw ConfigError(where, "unknown key (allowed: " + list + ")");
    }
  }
}

const Json& Required(const Json& j, const char* key, const std::string& field) {
  if (!j.contains(key)) {
    throw ConfigError(field.empty() ? key : field + "." + key, "missing key");
  }
  return j[key];
}

Json Parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(what, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace codec

using codec::Json;

std::string MeasureToJson(const DiscreteMeasure& mu) {
  return codec::MeasureToJson(mu).dump();
}

DiscreteMeasure MeasureFromJson(ManifoldKind kind, const std::string& text) {
  return codec::MeasureFromJson(kind, codec::Parse(text, "measure"), "measure");
}

std::string PotentialToJson(const PotentialSpec& spec) {
  return codec::PotentialToJson(spec).dump();
}

PotentialSpec PotentialFromJson(ManifoldKind kind, const std::string& text) {
  return codec::PotentialFromJson(kind, codec::Parse(text, "potential"),
                                  "potential");
}

std::string TrajectoryLineToJson(const StepRecord& r, const DiscreteMeasure& mu) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["manifold"] = std::string(ManifoldName(mu.kind()));
  j["step"] = r.step;
  j["time"] = codec::Number(r.time);
  const Json m = codec::MeasureToJson(mu);
  j["atoms"] = m["atoms"];
  j["weights"] = m["weights"];
  j["energy"] = codec::Number(r.energy);
  j["step_distance"] = codec::Number(r.step_distance);
  j["max_displacement"] = codec::Number(r.max_displacement);
  j["delta"] = codec::Number(r.delta);
  j["el_residual"] = codec::Number(r.el_residual);
  j["iterations"] = r.iterations;
  j["dual_source"] = r.dual_source;
  return j.dump();
}

TrajectoryLine TrajectoryLineFromJson(const std::string& text) {
  const Json j = codec::Parse(text, "trajectory");
  codec::RequireKnownKeys(
      j,
      {"schema_version", "manifold", "step", "time", "atoms", "weights",
       "energy", "step_distance", "max_displacement", "delta", "el_residual",
       "iterations", "dual_source"},
      "trajectory");
  if (codec::Required(j, "schema_version", "trajectory").get<int>() !=
      kSchemaVersion) {
    throw ConfigError("trajectory.schema_version", "unsupported version");
  }
  const ManifoldKind kind =
      ParseManifold(codec::Required(j, "manifold", "trajectory").get<std::string>());
  TrajectoryLine line;
  StepRecord& r = line.record;
  r.step = j.at("step").get<std::size_t>();
  r.time = codec::ToNumber(j.at("time"), "time");
  r.energy = codec::ToNumber(j.at("energy"), "energy");
  r.step_distance = codec::ToNumber(j.at("step_distance"), "step_distance");
  r.max_displacement =
      codec::ToNumber(j.at("max_displacement"), "max_displacement");
  r.delta = codec::ToNumber(j.at("delta"), "delta");
  r.el_residual = codec::ToNumber(j.at("el_residual"), "el_residual");
  r.iterations = j.at("iterations").get<std::size_t>();
  r.dual_source = j.at("dual_source").get<std::string>();
  for (const Json& a : j.at("atoms")) {
    line.atoms.push_back(codec::PointFromJson(kind, a, "atoms").coords());
  }
  for (const Json& w : j.at("weights")) {
    line.weights.push_back(codec::ToNumber(w, "weights"));
  }
  return line;
}

std::string CheckReportToJson(const CheckReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = report.id;
  j["passed"] = report.passed;
  j["worst_margin"] = codec::Number(report.worst_margin);
  j["tolerance"] = codec::Number(report.tolerance);
  j["slack"] = codec::Number(report.slack);
  Json loc = Json::object();
  if (report.location.step) loc["step"] = *report.location.step;
  if (report.location.time) loc["time"] = *report.location.time;
  if (report.location.time2) loc["time2"] = *report.location.time2;
  if (report.location.atom) loc["atom"] = *report.location.atom;
  j["location"] = std::move(loc);
  j["details"] = report.details;
  return j.dump();
}

CheckReport CheckReportFromJson(const std::string& text) {
  const Json j = codec::Parse(text, "check");
  codec::RequireKnownKeys(j,
                          {"schema_version", "id", "passed", "worst_margin",
                           "tolerance", "slack", "location", "details"},
                          "check");
  if (codec::Required(j, "schema_version", "check").get<int>() !=
      kSchemaVersion) {
    throw ConfigError("check.schema_version", "unsupported version");
  }
  CheckReport r;
  r.id = j.at("id").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  r.worst_margin = codec::ToNumber(j.at("worst_margin"), "worst_margin");
  r.tolerance = codec::ToNumber(j.at("tolerance"), "tolerance");
  r.slack = codec::ToNumber(j.at("slack"), "slack");
  const Json& loc = j.at("location");
  codec::RequireKnownKeys(loc, {"step", "time", "time2", "atom"},
                          "check.location");
  if (loc.contains("step")) r.location.step = loc["step"].get<std::size_t>();
  if (loc.contains("time")) r.location.time = loc["time"].get<double>();
  if (loc.contains("time2")) r.location.time2 = loc["time2"].get<double>();
  if (loc.contains("atom")) r.location.atom = loc["atom"].get<std::size_t>();
  r.details = j.at("details").get<std::string>();
  return r;
}

std::string TableHeader() {
  return "step,time,energy,step_distance,max_displacement,delta,el_residual,"
         "iterations";
}

std::string TableRow(const StepRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.step << ',' << r.time << ',' << r.energy << ',' << r.step_distance
     << ',' << r.max_displacement << ',' << r.delta << ',' << r.el_residual
     << ',' << r.iterations;
  return os.str();
}

}  // namespace mjko
