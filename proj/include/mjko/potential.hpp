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

// Intrinsic interaction potentials W(x, y) = h(d(x, y)^2).
//
// The profile h is one of
//   PowerLaw       h(s) = a s^q                      (q >= 1, a > 0)
//   SmoothedPower  h(s) = a ((s + delta)^q - delta^q) (q > 0, a > 0, delta > 0)
//   Tabulated      cubic Hermite interpolant of (h, h') on a uniform grid over
//                  [0, diam^2]
// The monotonicity threshold r_h is measured in squared-distance units.

#ifndef MJKO_POTENTIAL_HPP_
#define MJKO_POTENTIAL_HPP_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mjko/manifold.hpp"
#include "mjko/measure.hpp"

namespace mjko {

struct PowerLaw {
  double exponent = 1.0;
  double coefficient = 1.0;
};

struct SmoothedPower {
  double exponent = 1.0;
  double coefficient = 1.0;
  double smoothing = 1e-3;
};

struct Tabulated {
  // Samples of h and h' at s_i = i * diam^2 / (n - 1), i = 0..n-1.
  std::vector<double> values;
  std::vector<double> slopes;
};

using PotentialFamily = std::variant<PowerLaw, SmoothedPower, Tabulated>;

class PotentialSpec {
 public:
  // `r_h` defaults to 0 for the power families and to the smallest grid
  // point past which the table is non-decreasing for Tabulated.
  PotentialSpec(ManifoldKind kind, PotentialFamily family,
                std::optional<double> r_h = std::nullopt);

  static PotentialSpec Power(ManifoldKind kind, double exponent,
                             double coefficient);

  ManifoldKind kind() const { return kind_; }
  const PotentialFamily& family() const { return family_; }
  std::string FamilyName() const;

  double h(double s) const;
  double dh(double s) const;
  // sup |h'| over [0, diam^2].
  double lip_h() const { return lip_h_; }
  double r_h() const { return r_h_; }

 private:
  ManifoldKind kind_;
  PotentialFamily family_;
  double lip_h_ = 0.0;
  double r_h_ = 0.0;
};

struct EnergyBounds {
  double lipschitz = 0.0;  // L = 2 lip(h) diam(M)
  double lower = 0.0;      // k_low <= inf W
};

// W(x, y) = h(d(x, y)^2).
double PairPotential(const PotentialSpec& spec, const Point& x, const Point& y);

double LipschitzConstant(const PotentialSpec& spec);

// k_low is the minimum of h(d^2) over 10,000 equispaced distances in
// [0, diam] minus L times the grid spacing.
EnergyBounds ComputeEnergyBounds(const PotentialSpec& spec);

// E_W(mu) = 1/2 sum_ij w_i w_j W(x_i, x_j).
double Energy(const PotentialSpec& spec, const DiscreteMeasure& mu);

// (W * mu)(x) = sum_j w_j W(x, x_j).
double Convolve(const PotentialSpec& spec, const DiscreteMeasure& mu,
                const Point& x);
double Convolve(const PotentialSpec& spec, std::span<const Point> atoms,
                std::span<const double> weights, const Point& x);

// grad_x (W * mu)(x) = sum_j w_j h'(d^2) (-2 log_x(x_j)). Throws
// CutLocusError naming the atom when a positively weighted atom sits at the
// cut locus of x.
Tangent GradConvolve(const PotentialSpec& spec, const DiscreteMeasure& mu,
                     const Point& x);
Tangent GradConvolve(const PotentialSpec& spec, std::span<const Point> atoms,
                     std::span<const double> weights, const Point& x);

struct AssumptionFinding {
  std::string id;  // "W0", "W1", "W2"
  bool passed = true;
  double worst_value = 0.0;  // offending magnitude (0 when passed)
  double worst_s = 0.0;      // squared-distance grid point of the worst case
  std::string message;
};

struct AssumptionReport {
  std::vector<AssumptionFinding> findings;
  bool AllPassed() const;
};

// Checks W0 exactly, W1 (continuity of h' and consistency with h) and W2
// (h non-decreasing on [r_h, diam^2]) on a 10,000-point grid.
AssumptionReport CheckAssumptions(const PotentialSpec& spec);

}  // namespace mjko

#endif  // MJKO_POTENTIAL_HPP_
