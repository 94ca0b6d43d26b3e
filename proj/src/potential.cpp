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

#include "mjko/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mjko/error.hpp"

namespace mjko {
namespace {

constexpr int kCheckGrid = 10000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double SquaredDiameter(ManifoldKind kind) {
  const double d = Diameter(kind);
  return d * d;
}

// Cubic Hermite interpolation on the uniform table grid.
struct HermiteCell {
  double t;
  double step;
  std::size_t i;
};

HermiteCell Locate(const Tabulated& tab, double s, double span) {
  const std::size_t cells = tab.values.size() - 1;
  const double step = span / static_cast<double>(cells);
  s = std::clamp(s, 0.0, span);
  std::size_t i = static_cast<std::size_t>(s / step);
  if (i >= cells) i = cells - 1;
  return {(s - static_cast<double>(i) * step) / step, step, i};
}

double TableValue(const Tabulated& tab, double s, double span) {
  const auto [t, step, i] = Locate(tab, s, span);
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * tab.values[i] +
         (t3 - 2 * t2 + t) * step * tab.slopes[i] +
         (-2 * t3 + 3 * t2) * tab.values[i + 1] +
         (t3 - t2) * step * tab.slopes[i + 1];
}

double TableSlope(const Tabulated& tab, double s, double span) {
  const auto [t, step, i] = Locate(tab, s, span);
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * tab.values[i] +
          (-6 * t2 + 6 * t) * tab.values[i + 1]) /
             step +
         (3 * t2 - 4 * t + 1) * tab.slopes[i] + (3 * t2 - 2 * t) * tab.slopes[i + 1];
}

// The Hermite derivative is a quadratic in t on every cell, so its maximum
// modulus is attained at a cell end or at the vertex.
double TableLipschitz(const Tabulated& tab, double span) {
  const std::size_t cells = tab.values.size() - 1;
  const double step = span / static_cast<double>(cells);
  double best = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double y0 = tab.values[i], y1 = tab.values[i + 1];
    const double m0 = tab.slopes[i], m1 = tab.slopes[i + 1];
    // h'(t) = A t^2 + B t + C
    const double a = 6 * (y0 - y1) / step + 3 * m0 + 3 * m1;
    const double b = -6 * (y0 - y1) / step - 4 * m0 - 2 * m1;
    const double c = m0;
    auto eval = [&](double t) { return std::abs((a * t + b) * t + c); };
    best = std::max({best, eval(0.0), eval(1.0)});
    if (a != 0.0) {
      const double vertex = -b / (2 * a);
      if (vertex > 0.0 && vertex < 1.0) best = std::max(best, eval(vertex));
    }
  }
  return best;
}

void ValidateFamily(ManifoldKind kind, const PotentialFamily& family) {
  std::visit(
      Overloaded{
          [](const PowerLaw& p) {
            if (!(p.exponent >= 1.0) || !std::isfinite(p.exponent)) {
              throw DomainError("power_law exponent must be >= 1");
            }
            if (!(p.coefficient > 0.0) || !std::isfinite(p.coefficient)) {
              throw DomainError("power_law coefficient must be positive");
            }
          },
          [](const SmoothedPower& p) {
            if (!(p.exponent > 0.0) || !std::isfinite(p.exponent)) {
              throw DomainError("smoothed_power exponent must be positive");
            }
            if (!(p.coefficient > 0.0) || !std::isfinite(p.coefficient)) {
              throw DomainError("smoothed_power coefficient must be positive");
            }
            if (!(p.smoothing > 0.0) || !std::isfinite(p.smoothing)) {
              throw DomainError("smoothed_power smoothing must be positive");
            }
          },
          [kind](const Tabulated& t) {
            (void)kind;
            if (t.values.size() < 2 || t.values.size() != t.slopes.size()) {
              throw DomainError(
                  "tabulated potential needs >= 2 samples of h and h' of "
                  "equal length");
            }
            for (std::size_t i = 0; i < t.values.size(); ++i) {
              if (!std::isfinite(t.values[i]) || !std::isfinite(t.slopes[i])) {
                throw DomainError("tabulated potential has a non-finite entry");
              }
            }
          },
      },
      family);
}

}  // namespace

PotentialSpec::PotentialSpec(ManifoldKind kind, PotentialFamily family,
                             std::optional<double> r_h)
    : kind_(kind), family_(std::move(family)) {
  ValidateFamily(kind_, family_);
  const double span = SquaredDiameter(kind_);
  lip_h_ = std::visit(
      Overloaded{
          [span](const PowerLaw& p) {
            return p.coefficient * p.exponent *
                   std::pow(span, p.exponent - 1.0);
          },
          [span](const SmoothedPower& p) {
            const double base = p.exponent >= 1.0 ? span + p.smoothing
                                                  : p.smoothing;
            return p.coefficient * p.exponent *
                   std::pow(base, p.exponent - 1.0);
          },
          [span](const Tabulated& t) { return TableLipschitz(t, span); },
      },
      family_);

  if (r_h) {
    if (!(*r_h >= 0.0) || *r_h > span) {
      throw DomainError("r_h must lie in [0, diam^2]");
    }
    r_h_ = *r_h;
  } else if (const auto* tab = std::get_if<Tabulated>(&family_)) {
    const std::size_t n = tab->values.size();
    std::size_t start = n - 1;
    while (start > 0 && tab->values[start - 1] <= tab->values[start]) --start;
    r_h_ = span * static_cast<double>(start) / static_cast<double>(n - 1);
  }
}

PotentialSpec PotentialSpec::Power(ManifoldKind kind, double exponent,
                                   double coefficient) {
  return PotentialSpec(kind, PowerLaw{exponent, coefficient});
}

std::string PotentialSpec::FamilyName() const {
  return std::visit(Overloaded{
                        [](const PowerLaw&) { return "power_law"; },
                        [](const SmoothedPower&) { return "smoothed_power"; },
                        [](const Tabulated&) { return "tabulated"; },
                    },
                    family_);
}

double PotentialSpec::h(double s) const {
  s = std::max(s, 0.0);
  return std::visit(
      Overloaded{
          [s](const PowerLaw& p) {
            return p.coefficient * std::pow(s, p.exponent);
          },
          [s](const SmoothedPower& p) {
            return p.coefficient * (std::pow(s + p.smoothing, p.exponent) -
                                    std::pow(p.smoothing, p.exponent));
          },
          [this, s](const Tabulated& t) {
            return TableValue(t, s, SquaredDiameter(kind_));
          },
      },
      family_);
}

double PotentialSpec::dh(double s) const {
  s = std::max(s, 0.0);
  return std::visit(
      Overloaded{
          [s](const PowerLaw& p) {
            if (p.exponent == 1.0) return p.coefficient;
            return p.coefficient * p.exponent * std::pow(s, p.exponent - 1.0);
          },
          [s](const SmoothedPower& p) {
            return p.coefficient * p.exponent *
                   std::pow(s + p.smoothing, p.exponent - 1.0);
          },
          [this, s](const Tabulated& t) {
            return TableSlope(t, s, SquaredDiameter(kind_));
          },
      },
      family_);
}

double PairPotential(const PotentialSpec& spec, const Point& x,
                     const Point& y) {
  const double d = Distance(x, y);
  return spec.h(d * d);
}

double LipschitzConstant(const PotentialSpec& spec) {
  return 2.0 * spec.lip_h() * Diameter(spec.kind());
}

EnergyBounds ComputeEnergyBounds(const PotentialSpec& spec) {
  EnergyBounds bounds;
  bounds.lipschitz = LipschitzConstant(spec);
  const double diam = Diameter(spec.kind());
  const double step = diam / (kCheckGrid - 1);
  double lowest = spec.h(0.0);
  for (int i = 1; i < kCheckGrid; ++i) {
    const double d = step * i;
    lowest = std::min(lowest, spec.h(d * d));
  }
  bounds.lower = lowest - bounds.lipschitz * step;
  return bounds;
}

double Energy(const PotentialSpec& spec, const DiscreteMeasure& mu) {
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = i + 1; j < mu.size(); ++j) {
      total += mu.weight(i) * mu.weight(j) *
               PairPotential(spec, mu.atom(i), mu.atom(j));
    }
  }
  // Off-diagonal pairs counted once above; diagonal terms are h(0) each.
  double diagonal = 0.0;
  const double h0 = spec.h(0.0);
  if (h0 != 0.0) {
    for (double w : mu.weights()) diagonal += w * w * h0;
  }
  return total + 0.5 * diagonal;
}

double Convolve(const PotentialSpec& spec, std::span<const Point> atoms,
                std::span<const double> weights, const Point& x) {
  double total = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    total += weights[j] * PairPotential(spec, x, atoms[j]);
  }
  return total;
}

double Convolve(const PotentialSpec& spec, const DiscreteMeasure& mu,
                const Point& x) {
  return Convolve(spec, mu.atoms(), mu.weights(), x);
}

Tangent GradConvolve(const PotentialSpec& spec, std::span<const Point> atoms,
                     std::span<const double> weights, const Point& x) {
  Tangent grad = Tangent::Zero(x);
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (weights[j] == 0.0 || atoms[j] == x) continue;
    if (CutPairDistance(x, atoms[j]) <= kCutEpsilon) {
      throw CutLocusError("gradient of W * mu undefined: atom " +
                              std::to_string(j) +
                              " is at the cut locus of the evaluation point",
                          j);
    }
    const Tangent log = Log(x, atoms[j]);
    const double d = log.Norm();
    grad = grad.Plus(log.Scaled(-2.0 * weights[j] * spec.dh(d * d)));
  }
  return grad;
}

Tangent GradConvolve(const PotentialSpec& spec, const DiscreteMeasure& mu,
                     const Point& x) {
  return GradConvolve(spec, mu.atoms(), mu.weights(), x);
}

bool AssumptionReport::AllPassed() const {
  return std::all_of(findings.begin(), findings.end(),
                     [](const AssumptionFinding& f) { return f.passed; });
}

AssumptionReport CheckAssumptions(const PotentialSpec& spec) {
  AssumptionReport report;
  const double span = SquaredDiameter(spec.kind());
  const double step = span / (kCheckGrid - 1);
  auto grid = [&](int k) { return step * k; };

  AssumptionFinding w0{"W0", true, 0.0, 0.0, "h(0) = 0"};
  const double h0 = spec.h(0.0);
  if (h0 != 0.0) {
    w0.passed = false;
    w0.worst_value = std::abs(h0);
    std::ostringstream os;
    os << "h(0) = " << h0 << ", expected 0";
    w0.message = os.str();
  }
  report.findings.push_back(w0);

  // h' continuous on the grid (no jump exceeding 1% of 1 + lip(h)) and
  // consistent with h (trapezoid rule on each cell).
  AssumptionFinding w1{"W1", true, 0.0, 0.0, "h' continuous on [0, diam^2]"};
  const double scale = 1.0 + spec.lip_h();
  double worst = 0.0;
  double worst_s = 0.0;
  bool finite = true;
  for (int k = 0; k + 1 < kCheckGrid; ++k) {
    const double s0 = grid(k), s1 = grid(k + 1);
    const double d0 = spec.dh(s0), d1 = spec.dh(s1);
    if (!std::isfinite(d0) || !std::isfinite(d1)) {
      finite = false;
      worst_s = std::isfinite(d0) ? s1 : s0;
      break;
    }
    const double jump = std::abs(d1 - d0);
    const double secant = (spec.h(s1) - spec.h(s0)) / step;
    const double mismatch = std::abs(secant - 0.5 * (d0 + d1));
    const double value = std::max(jump, mismatch) / scale;
    if (value > worst) {
      worst = value;
      worst_s = s0;
    }
  }
  if (!finite || worst > 1e-2) {
    w1.passed = false;
    w1.worst_value = finite ? worst : INFINITY;
    w1.worst_s = worst_s;
    std::ostringstream os;
    os << "h' is not continuous near s = " << worst_s;
    w1.message = os.str();
  }
  report.findings.push_back(w1);

  AssumptionFinding w2{"W2", true, 0.0, spec.r_h(),
                       "h non-decreasing on [r_h, diam^2]"};
  double worst_drop = 0.0;
  double drop_at = 0.0;
  for (int k = 0; k + 1 < kCheckGrid; ++k) {
    const double s0 = grid(k), s1 = grid(k + 1);
    if (s0 < spec.r_h()) continue;
    const double h_a = spec.h(s0), h_b = spec.h(s1);
    const double drop = h_a - h_b;
    if (drop > 1e-12 * (1.0 + std::abs(h_a)) && drop > worst_drop) {
      worst_drop = drop;
      drop_at = s1;
    }
  }
  if (worst_drop > 0.0) {
    w2.passed = false;
    w2.worst_value = worst_drop;
    w2.worst_s = drop_at;
    std::ostringstream os;
    os << "h decreases by " << worst_drop << " at s = " << drop_at
       << " (r_h = " << spec.r_h() << ")";
    w2.message = os.str();
  }
  report.findings.push_back(w2);
  return report;
}

}  // namespace mjko
