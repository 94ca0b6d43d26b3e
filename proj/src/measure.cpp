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

#include "mjko/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mjko/error.hpp"

namespace mjko {

DiscreteMeasure::DiscreteMeasure(ManifoldKind kind, std::vector<Point> atoms,
                                 std::vector<double> weights,
                                 double merge_tolerance)
    : kind_(kind) {
  if (atoms.empty()) throw DomainError("a measure needs at least one atom");
  if (atoms.size() != weights.size()) {
    throw DomainError("atom/weight count mismatch: " +
                      std::to_string(atoms.size()) + " atoms, " +
                      std::to_string(weights.size()) + " weights");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].kind() != kind) {
      throw DomainError("atom " + std::to_string(i) +
                        " lives on a different manifold");
    }
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw DomainError("weight " + std::to_string(i) +
                        " must be positive and finite");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("weights must sum to 1, got " + std::to_string(total));
  }

  for (std::size_t i = 0; i < atoms.size(); ++i) {
    bool merged = false;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (Distance(atoms_[k], atoms[i]) <= merge_tolerance) {
        weights_[k] += weights[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      atoms_.push_back(atoms[i]);
      weights_.push_back(weights[i]);
    }
  }
  // Sums within rounding of 1 are left alone so that encode/decode is exact.
  const double rounding =
      4 * std::numeric_limits<double>::epsilon() * static_cast<double>(atoms.size());
  if (std::abs(total - 1.0) > rounding) {
    for (double& w : weights_) w /= total;
  }
}

DiscreteMeasure DiscreteMeasure::Dirac(const Point& x) {
  return DiscreteMeasure(x.kind(), {x}, {1.0});
}

DiscreteMeasure DiscreteMeasure::Uniform(ManifoldKind kind,
                                         std::vector<Point> atoms) {
  const std::size_t n = atoms.size();
  if (n == 0) throw DomainError("a measure needs at least one atom");
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  // Make the sum exactly 1 up to rounding of the last entry.
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) partial += weights[i];
  weights[n - 1] = 1.0 - partial;
  return DiscreteMeasure(kind, std::move(atoms), std::move(weights));
}

double DiscreteMeasure::SupportDiameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      best = std::max(best, Distance(atoms_[i], atoms_[j]));
    }
  }
  return best;
}

double DiscreteMeasure::DistanceToSupport(const Point& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& a : atoms_) best = std::min(best, Distance(x, a));
  return best;
}

}  // namespace mjko
