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

#include "mjko/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mjko/error.hpp"

namespace mjko {
namespace {

void RequireSameManifold(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.kind() != nu.kind()) {
    throw DomainError("measures live on different manifolds");
  }
}

}  // namespace

Matrix DistanceMatrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  RequireSameManifold(mu, nu);
  Matrix d(mu.size(), nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      d(i, j) = Distance(mu.atom(i), nu.atom(j));
    }
  }
  return d;
}

double TransportPlan::TotalCost() const {
  double total = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (matrix(i, j) == 0.0) continue;
      total += matrix(i, j) *
               std::pow(Distance(source.atom(i), target.atom(j)), exponent);
    }
  }
  return total;
}

double TransportPlan::MaxDisplacement(double threshold) const {
  double best = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (matrix(i, j) > threshold) {
        best = std::max(best, Distance(source.atom(i), target.atom(j)));
      }
    }
  }
  return best;
}

WassersteinResult Wasserstein(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, int p) {
  if (p != 1 && p != 2) throw DomainError("Wasserstein exponent must be 1 or 2");
  Matrix cost = DistanceMatrix(mu, nu);
  if (p == 2) {
    for (std::size_t i = 0; i < cost.rows(); ++i) {
      for (std::size_t j = 0; j < cost.cols(); ++j) cost(i, j) *= cost(i, j);
    }
  }
  TransportLpSolution lp = SolveTransportLp(mu.weights(), nu.weights(), cost);
  const double total = std::max(0.0, lp.cost);
  return {p == 2 ? std::sqrt(total) : total,
          TransportPlan{mu, nu, std::move(lp.plan), p}};
}

bool WassersteinOrderingHolds(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu) {
  return Wasserstein(mu, nu, 1).distance <=
         Wasserstein(mu, nu, 2).distance + 1e-10;
}

double KantorovichDual::Value() const {
  double total = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) total += source.weight(i) * phi[i];
  for (std::size_t j = 0; j < phi_c.size(); ++j) {
    total += target.weight(j) * phi_c[j];
  }
  return total;
}

double KantorovichDual::MaxFeasibilityViolation() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double d = Distance(source.atom(i), target.atom(j));
      worst = std::max(worst, phi[i] + phi_c[j] - 0.5 * d * d);
    }
  }
  return worst;
}

void AnchorDual(KantorovichDual& dual) {
  double shift = 0.0;
  for (std::size_t i = 0; i < dual.phi.size(); ++i) {
    shift += dual.source.weight(i) * dual.phi[i];
  }
  for (double& p : dual.phi) p -= shift;
  for (double& p : dual.phi_c) p += shift;
}

QuadraticTransport SolveQuadraticTransport(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& nu) {
  Matrix cost = DistanceMatrix(mu, nu);
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    for (std::size_t j = 0; j < cost.cols(); ++j) {
      cost(i, j) = 0.5 * cost(i, j) * cost(i, j);
    }
  }
  TransportLpSolution lp = SolveTransportLp(mu.weights(), nu.weights(), cost);
  KantorovichDual dual{mu, nu, std::move(lp.row_duals),
                       std::move(lp.col_duals)};
  AnchorDual(dual);
  const double half_cost = std::max(0.0, lp.cost);
  return {TransportPlan{mu, nu, std::move(lp.plan), 2}, std::move(dual),
          half_cost};
}

KantorovichDual ComputeKantorovichDual(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu) {
  return SolveQuadraticTransport(mu, nu).dual;
}

CTransformValue CTransform(std::span<const Point> atoms,
                           std::span<const double> phi, const Point& x) {
  if (atoms.empty() || atoms.size() != phi.size()) {
    throw DomainError("c-transform needs one potential value per atom");
  }
  CTransformValue out;
  out.value = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double d = Distance(x, atoms[k]);
    const double value = 0.5 * d * d - phi[k];
    if (value < out.value) {
      second = out.value;
      out.value = value;
      out.argmin = k;
    } else if (value < second) {
      second = value;
    }
  }
  out.gap = second - out.value;
  return out;
}

Tangent GradCTransform(const KantorovichDual& dual, const Point& x) {
  const CTransformValue ct = CTransform(dual.source.atoms(), dual.phi, x);
  if (ct.gap <= kCTransformTieTolerance) {
    throw NondifferentiableError(
        "c-transform has a tied minimizer (gap " + std::to_string(ct.gap) +
        ") at the evaluation point; atom " + std::to_string(ct.argmin));
  }
  const Point& z = dual.source.atom(ct.argmin);
  if (CutPairDistance(x, z) <= kCutEpsilon) {
    throw CutLocusError("c-transform minimizer is at the cut locus of the "
                        "evaluation point",
                        ct.argmin);
  }
  return Log(x, z).Scaled(-1.0);
}

ProductContraction CheckProductContraction(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& nu) {
  RequireSameManifold(mu, nu);
  if (mu.size() > kMaxProductAtoms || nu.size() > kMaxProductAtoms) {
    throw SizeError("product contraction check supports at most " +
                    std::to_string(kMaxProductAtoms) + " atoms per measure");
  }
  const Matrix d = DistanceMatrix(mu, nu);
  const std::size_t n = mu.size(), m = nu.size();
  std::vector<double> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) a.push_back(mu.weight(i) * mu.weight(k));
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < m; ++l) b.push_back(nu.weight(j) * nu.weight(l));
  }
  Matrix cost(n * n, m * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = 0; l < m; ++l) {
          cost(i * n + k, j * m + l) = d(i, j) + d(k, l);
        }
      }
    }
  }
  ProductContraction out;
  out.product_distance = std::max(0.0, SolveTransportLp(a, b, cost).cost);
  out.bound = 2.0 * Wasserstein(mu, nu, 1).distance;
  out.holds = out.product_distance <= out.bound + 1e-9;
  return out;
}

}  // namespace mjko
