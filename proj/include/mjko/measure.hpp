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

#ifndef MJKO_MEASURE_HPP_
#define MJKO_MEASURE_HPP_

#include <cstddef>
#include <vector>

#include "mjko/manifold.hpp"

namespace mjko {

inline constexpr double kDefaultMergeTolerance = 1e-12;

// Finitely supported probability measure on one manifold.
//
// Construction validates and canonicalizes: weights must be positive and sum
// to 1 within 1e-12 (they are then renormalized exactly), and atoms closer
// than `merge_tolerance` are merged with their weights added. Atom order is
// the order of first appearance.
class DiscreteMeasure {
 public:
  DiscreteMeasure(ManifoldKind kind, std::vector<Point> atoms,
                  std::vector<double> weights,
                  double merge_tolerance = kDefaultMergeTolerance);

  static DiscreteMeasure Dirac(const Point& x);
  // Equal weights 1/n.
  static DiscreteMeasure Uniform(ManifoldKind kind, std::vector<Point> atoms);

  ManifoldKind kind() const { return kind_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  const Point& atom(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  // Largest pairwise geodesic distance in the support.
  double SupportDiameter() const;
  // d(x, spt(mu)).
  double DistanceToSupport(const Point& x) const;

 private:
  ManifoldKind kind_;
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

}  // namespace mjko

#endif  // MJKO_MEASURE_HPP_
