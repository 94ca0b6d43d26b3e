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

// Closed-form Riemannian geometry of the three supported compact manifolds:
//
//   Circle  - unit circle, points are angles in [0, 2*pi).
//   Sphere2 - unit 2-sphere embedded in R^3, tangent vectors in ambient
//             coordinates.
//   Torus2  - flat torus R^2 / Z^2, points in [0, 1)^2.
//
// Everything here is a pure function of immutable values.

#ifndef MJKO_MANIFOLD_HPP_
#define MJKO_MANIFOLD_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace mjko {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Distance to the cut locus below which a pair counts as "at the cut locus".
inline constexpr double kCutEpsilon = 1e-6;

enum class ManifoldKind { kCircle, kSphere2, kTorus2 };

std::string_view ManifoldName(ManifoldKind kind);
// Accepts "circle", "sphere2", "torus2". Throws DomainError otherwise.
ManifoldKind ParseManifold(std::string_view name);

double Diameter(ManifoldKind kind);
double InjectivityRadius(ManifoldKind kind);
// Number of coordinates stored for points / tangent vectors.
std::size_t CoordCount(ManifoldKind kind);
std::size_t Dimension(ManifoldKind kind);

using Coords = std::array<double, 3>;

class Point {
 public:
  // Canonicalizes: angles wrapped to [0, 2pi), torus coordinates to [0, 1),
  // sphere coordinates renormalized (DomainError if the input norm is not
  // within 1e-6 of 1).
  Point(ManifoldKind kind, const Coords& coords);

  static Point Circle(double angle);
  static Point Sphere(double x, double y, double z);
  static Point Torus(double u, double v);

  ManifoldKind kind() const { return kind_; }
  const Coords& coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  ManifoldKind kind_;
  Coords coords_{};
};

class Tangent {
 public:
  // Sphere2 components are projected onto the tangent plane at `base`.
  Tangent(const Point& base, const Coords& components);
  static Tangent Zero(const Point& base);

  const Point& base() const { return base_; }
  const Coords& components() const { return components_; }
  double operator[](std::size_t i) const { return components_[i]; }

  double Norm() const;
  Tangent Scaled(double factor) const;
  Tangent Plus(const Tangent& other) const;
  double Dot(const Tangent& other) const;

 private:
  Point base_;
  Coords components_{};
};

double Distance(const Point& x, const Point& y);
Point Exp(const Point& x, const Tangent& v);

// Inverse of Exp on the minimizing branch. Throws CutLocusError when
// CutPairDistance(x, y) <= kCutEpsilon.
Tangent Log(const Point& x, const Point& y);

// inf over (x', y') in Cut of d(x, x') + d(y, y').
double CutPairDistance(const Point& x, const Point& y);

// Point on the minimizing geodesic from x to y at fraction s in [0, 1].
Point Geodesic(const Point& x, const Point& y, double s);

// Signed circle difference wrapped to (-period/2, period/2].
double WrapDifference(double delta, double period);

}  // namespace mjko

#endif  // MJKO_MANIFOLD_HPP_
