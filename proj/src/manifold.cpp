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

#include "mjko/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mjko/error.hpp"

namespace mjko {
namespace {

double WrapPeriodic(double value, double period) {
  double r = std::fmod(value, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative number can round up to exactly `period`.
  if (r >= period) r = 0.0;
  return r;
}

double Dot3(const Coords& a, const Coords& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Coords Cross3(const Coords& a, const Coords& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double Norm3(const Coords& a) { return std::sqrt(Dot3(a, a)); }

void RequireSame(const Point& x, const Point& y) {
  if (x.kind() != y.kind()) {
    throw DomainError("points live on different manifolds (" +
                      std::string(ManifoldName(x.kind())) + " vs " +
                      std::string(ManifoldName(y.kind())) + ")");
  }
}

std::string Describe(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << ManifoldName(p.kind()) << "(";
  for (std::size_t i = 0; i < CoordCount(p.kind()); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

std::string_view ManifoldName(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::kCircle:
      return "circle";
    case ManifoldKind::kSphere2:
      return "sphere2";
    case ManifoldKind::kTorus2:
      return "torus2";
  }
  return "unknown";
}

ManifoldKind ParseManifold(std::string_view name) {
  if (name == "circle") return ManifoldKind::kCircle;
  if (name == "sphere2") return ManifoldKind::kSphere2;
  if (name == "torus2") return ManifoldKind::kTorus2;
  throw DomainError("unknown manifold '" + std::string(name) +
                    "' (expected circle, sphere2 or torus2)");
}

double Diameter(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::kCircle:
    case ManifoldKind::kSphere2:
      return kPi;
    case ManifoldKind::kTorus2:
      return std::sqrt(2.0) / 2.0;
  }
  return 0.0;
}

double InjectivityRadius(ManifoldKind kind) {
  return kind == ManifoldKind::kTorus2 ? 0.5 : kPi;
}

std::size_t CoordCount(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::kCircle:
      return 1;
    case ManifoldKind::kSphere2:
      return 3;
    case ManifoldKind::kTorus2:
      return 2;
  }
  return 0;
}

std::size_t Dimension(ManifoldKind kind) {
  return kind == ManifoldKind::kCircle ? 1 : 2;
}

Point::Point(ManifoldKind kind, const Coords& coords) : kind_(kind) {
  switch (kind) {
    case ManifoldKind::kCircle:
      if (!std::isfinite(coords[0])) throw DomainError("non-finite angle");
      coords_ = {WrapPeriodic(coords[0], kTwoPi), 0.0, 0.0};
      break;
    case ManifoldKind::kTorus2:
      if (!std::isfinite(coords[0]) || !std::isfinite(coords[1])) {
        throw DomainError("non-finite torus coordinates");
      }
      coords_ = {WrapPeriodic(coords[0], 1.0), WrapPeriodic(coords[1], 1.0),
                 0.0};
      break;
    case ManifoldKind::kSphere2: {
      const double n = Norm3(coords);
      if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
        throw DomainError("sphere point must have unit norm, got norm " +
                          std::to_string(n));
      }
      // Unit up to rounding: keep the bits so that encode/decode is exact.
      if (std::abs(n - 1.0) <= 4 * std::numeric_limits<double>::epsilon()) {
        coords_ = coords;
      } else {
        coords_ = {coords[0] / n, coords[1] / n, coords[2] / n};
      }
      break;
    }
  }
}

Point Point::Circle(double angle) {
  return Point(ManifoldKind::kCircle, {angle, 0.0, 0.0});
}

Point Point::Sphere(double x, double y, double z) {
  return Point(ManifoldKind::kSphere2, {x, y, z});
}

Point Point::Torus(double u, double v) {
  return Point(ManifoldKind::kTorus2, {u, v, 0.0});
}

Tangent::Tangent(const Point& base, const Coords& components) : base_(base) {
  switch (base.kind()) {
    case ManifoldKind::kCircle:
      components_ = {components[0], 0.0, 0.0};
      break;
    case ManifoldKind::kTorus2:
      components_ = {components[0], components[1], 0.0};
      break;
    case ManifoldKind::kSphere2: {
      const double radial = Dot3(components, base.coords());
      for (int i = 0; i < 3; ++i) {
        components_[i] = components[i] - radial * base[i];
      }
      break;
    }
  }
}

Tangent Tangent::Zero(const Point& base) { return Tangent(base, {0, 0, 0}); }

double Tangent::Norm() const { return Norm3(components_); }

Tangent Tangent::Scaled(double factor) const {
  return Tangent(base_, {components_[0] * factor, components_[1] * factor,
                         components_[2] * factor});
}

Tangent Tangent::Plus(const Tangent& other) const {
  return Tangent(base_, {components_[0] + other[0], components_[1] + other[1],
                         components_[2] + other[2]});
}

double Tangent::Dot(const Tangent& other) const {
  return Dot3(components_, other.components_);
}

double WrapDifference(double delta, double period) {
  double r = std::fmod(delta, period);
  const double half = 0.5 * period;
  if (r > half) r -= period;
  if (r <= -half) r += period;
  return r;
}

double Distance(const Point& x, const Point& y) {
  RequireSame(x, y);
  switch (x.kind()) {
    case ManifoldKind::kCircle:
      return std::abs(WrapDifference(y[0] - x[0], kTwoPi));
    case ManifoldKind::kTorus2: {
      const double du = WrapDifference(y[0] - x[0], 1.0);
      const double dv = WrapDifference(y[1] - x[1], 1.0);
      return std::hypot(du, dv);
    }
    case ManifoldKind::kSphere2:
      // atan2 keeps full precision near 0 and near pi, unlike acos.
      return std::atan2(Norm3(Cross3(x.coords(), y.coords())),
                        Dot3(x.coords(), y.coords()));
  }
  return 0.0;
}

Point Exp(const Point& x, const Tangent& v) {
  RequireSame(x, v.base());
  switch (x.kind()) {
    case ManifoldKind::kCircle:
      return Point::Circle(x[0] + v[0]);
    case ManifoldKind::kTorus2:
      return Point::Torus(x[0] + v[0], x[1] + v[1]);
    case ManifoldKind::kSphere2: {
      const double n = v.Norm();
      if (n == 0.0) return x;
      const double c = std::cos(n);
      const double s = std::sin(n) / n;
      return Point::Sphere(c * x[0] + s * v[0], c * x[1] + s * v[1],
                           c * x[2] + s * v[2]);
    }
  }
  return x;
}

Tangent Log(const Point& x, const Point& y) {
  RequireSame(x, y);
  if (CutPairDistance(x, y) <= kCutEpsilon) {
    throw CutLocusError("log map undefined: " + Describe(y) +
                        " is at the cut locus of " + Describe(x));
  }
  switch (x.kind()) {
    case ManifoldKind::kCircle:
      return Tangent(x, {WrapDifference(y[0] - x[0], kTwoPi), 0.0, 0.0});
    case ManifoldKind::kTorus2:
      return Tangent(x, {WrapDifference(y[0] - x[0], 1.0),
                         WrapDifference(y[1] - x[1], 1.0), 0.0});
    case ManifoldKind::kSphere2: {
      const double cos_t = Dot3(x.coords(), y.coords());
      Coords u{y[0] - cos_t * x[0], y[1] - cos_t * x[1], y[2] - cos_t * x[2]};
      const double un = Norm3(u);
      if (un == 0.0) return Tangent::Zero(x);
      const double theta = std::atan2(un, cos_t);
      const double scale = theta / un;
      return Tangent(x, {u[0] * scale, u[1] * scale, u[2] * scale});
    }
  }
  return Tangent::Zero(x);
}

double CutPairDistance(const Point& x, const Point& y) {
  RequireSame(x, y);
  switch (x.kind()) {
    case ManifoldKind::kCircle:
    case ManifoldKind::kSphere2:
      return std::max(0.0, kPi - Distance(x, y));
    case ManifoldKind::kTorus2: {
      double best = 1.0;
      for (int i = 0; i < 2; ++i) {
        const double delta = y[i] - x[i];
        best = std::min(best, std::abs(WrapDifference(delta - 0.5, 1.0)));
      }
      return best;
    }
  }
  return 0.0;
}

Point Geodesic(const Point& x, const Point& y, double s) {
  if (s == 0.0) return x;
  if (s == 1.0) return y;
  return Exp(x, Log(x, y).Scaled(s));
}

}  // namespace mjko
