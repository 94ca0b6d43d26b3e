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

// Exact optimal transport between discrete measures.
//
// The balanced transportation LP is solved by the primal transportation
// simplex (northwest-corner start, MODI duals, Bland's entering/leaving rule),
// which returns an optimal vertex plan together with an optimal dual pair.
// Nothing here is regularized.

#ifndef MJKO_TRANSPORT_HPP_
#define MJKO_TRANSPORT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "mjko/manifold.hpp"
#include "mjko/measure.hpp"

namespace mjko {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct TransportLpSolution {
  Matrix plan;
  std::vector<double> row_duals;  // u_i
  std::vector<double> col_duals;  // v_j, with u_i + v_j <= c_ij
  double cost = 0.0;
  std::size_t pivots = 0;
};

// min <C, P> s.t. P 1 = supply, P^T 1 = demand, P >= 0. Supplies and demands
// must be positive with equal totals (relative 1e-9).
TransportLpSolution SolveTransportLp(std::span<const double> supply,
                                     std::span<const double> demand,
                                     const Matrix& cost);

Matrix DistanceMatrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct TransportPlan {
  DiscreteMeasure source;
  DiscreteMeasure target;
  Matrix matrix;  // (source atom, target atom)
  int exponent = 2;

  // sum_ij P_ij d(x_i, y_j)^p.
  double TotalCost() const;
  // Largest d(x_i, y_j) over entries with mass above `threshold`.
  double MaxDisplacement(double threshold = 0.0) const;
};

struct WassersteinResult {
  double distance = 0.0;  // d_p
  TransportPlan plan;
};

// p must be 1 or 2.
WassersteinResult Wasserstein(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, int p);

// d_1(mu, nu) <= d_2(mu, nu) + 1e-10.
bool WassersteinOrderingHolds(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu);

// Dual pair for the cost c = d^2 / 2: phi on source atoms, phi_c on target
// atoms, phi_i + phi_c_j <= c_ij, anchored so that sum_i w_i phi_i = 0.
struct KantorovichDual {
  DiscreteMeasure source;
  DiscreteMeasure target;
  std::vector<double> phi;
  std::vector<double> phi_c;

  double Value() const;
  // max_ij (phi_i + phi_c_j - c_ij), <= 0 for a feasible pair.
  double MaxFeasibilityViolation() const;
};

struct QuadraticTransport {
  TransportPlan plan;  // exponent 2
  KantorovichDual dual;
  double half_cost = 0.0;  // d_2^2 / 2
};

// Optimal plan and anchored dual for c = d^2 / 2.
QuadraticTransport SolveQuadraticTransport(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& nu);

KantorovichDual ComputeKantorovichDual(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu);

// Shift (phi, phi_c) -> (phi - s, phi_c + s) so that sum_i w_i phi_i = 0.
void AnchorDual(KantorovichDual& dual);

struct CTransformValue {
  double value = 0.0;
  std::size_t argmin = 0;
  // Gap between the best and the second-best candidate (infinity for a
  // single atom).
  double gap = 0.0;
};

// min_z d(x, z)^2 / 2 - phi(z) over the given atoms, lowest index on ties.
CTransformValue CTransform(std::span<const Point> atoms,
                           std::span<const double> phi, const Point& x);

inline constexpr double kCTransformTieTolerance = 1e-9;

// Gradient of the c-transform of dual.phi (over dual.source atoms) at x:
// -log_x(z*). Throws NondifferentiableError on a tie within 1e-9 and
// CutLocusError if z* is at the cut locus of x.
Tangent GradCTransform(const KantorovichDual& dual, const Point& x);

struct ProductContraction {
  double product_distance = 0.0;  // d_1(mu (x) mu, nu (x) nu)
  double bound = 0.0;             // 2 d_1(mu, nu)
  bool holds = false;
};

inline constexpr std::size_t kMaxProductAtoms = 6;

// Both sides by exact LP under the sum metric on M x M. Throws SizeError if
// either measure has more than 6 atoms.
ProductContraction CheckProductContraction(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& nu);

}  // namespace mjko

#endif  // MJKO_TRANSPORT_HPP_
