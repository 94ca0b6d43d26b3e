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

// Transportation simplex. The basis is a spanning tree on the bipartite graph
// with row nodes 0..n-1 and column nodes n..n+m-1; a basic cell (i, j) is the
// edge between row i and column j. Degenerate bases keep zero-valued basic
// cells so the tree always has n + m - 1 edges.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mjko/error.hpp"
#include "mjko/transport.hpp"

namespace mjko {
namespace {

class SimplexState {
 public:
  SimplexState(std::span<const double> supply, std::span<const double> demand,
               const Matrix& cost)
      : n_(supply.size()),
        m_(demand.size()),
        cost_(cost),
        x_(n_, m_, 0.0),
        basic_(n_ * m_, 0),
        u_(n_, 0.0),
        v_(m_, 0.0) {
    NorthwestCorner(supply, demand);
  }

  std::size_t Run() {
    double scale = 1.0;
    for (double c : cost_.data()) scale = std::max(scale, std::abs(c));
    const double eps = 1e-12 * scale;
    // Bland's rule terminates; the cap only guards against NaN costs.
    const std::size_t cap = 50 * (n_ + m_) * (n_ * m_ + 1) + 1000;
    std::size_t pivots = 0;
    while (true) {
      ComputeDuals();
      std::size_t entering = kNone;
      for (std::size_t k = 0; k < n_ * m_; ++k) {
        if (basic_[k]) continue;
        const std::size_t i = k / m_, j = k % m_;
        if (cost_(i, j) - u_[i] - v_[j] < -eps) {
          entering = k;
          break;
        }
      }
      if (entering == kNone) break;
      Pivot(entering);
      if (++pivots > cap) {
        throw InternalError("transport simplex failed to terminate");
      }
    }
    return pivots;
  }

  TransportLpSolution Release(std::size_t pivots) {
    TransportLpSolution out;
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        if (x_(i, j) < 0.0) x_(i, j) = 0.0;
        total += x_(i, j) * cost_(i, j);
      }
    }
    out.plan = std::move(x_);
    out.row_duals = std::move(u_);
    out.col_duals = std::move(v_);
    out.cost = total;
    out.pivots = pivots;
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void NorthwestCorner(std::span<const double> supply,
                       std::span<const double> demand) {
    std::vector<double> a(supply.begin(), supply.end());
    std::vector<double> b(demand.begin(), demand.end());
    std::size_t i = 0, j = 0;
    while (i < n_ && j < m_) {
      const double q = std::min(a[i], b[j]);
      x_(i, j) = q;
      basic_[i * m_ + j] = 1;
      a[i] -= q;
      b[j] -= q;
      if (i == n_ - 1) {
        ++j;
      } else if (j == m_ - 1) {
        ++i;
      } else if (a[i] <= b[j]) {
        a[i] = 0.0;
        ++i;
      } else {
        b[j] = 0.0;
        ++j;
      }
    }
  }

  // Node ids: rows 0..n-1, columns n..n+m-1.
  void BuildAdjacency() {
    adjacency_.assign(n_ + m_, {});
    for (std::size_t k = 0; k < n_ * m_; ++k) {
      if (!basic_[k]) continue;
      const std::size_t i = k / m_, j = k % m_;
      adjacency_[i].push_back(n_ + j);
      adjacency_[n_ + j].push_back(i);
    }
  }

  void ComputeDuals() {
    BuildAdjacency();
    std::vector<char> seen(n_ + m_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    u_[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t next : adjacency_[node]) {
        if (seen[next]) continue;
        seen[next] = 1;
        if (node < n_) {
          const std::size_t j = next - n_;
          v_[j] = cost_(node, j) - u_[node];
        } else {
          const std::size_t j = node - n_;
          u_[next] = cost_(next, j) - v_[j];
        }
        stack.push_back(next);
      }
    }
    for (std::size_t k = 0; k < n_ + m_; ++k) {
      if (!seen[k]) throw InternalError("transport basis is not spanning");
    }
  }

  // Tree path from column node of `entering` to its row node.
  std::vector<std::size_t> CyclePath(std::size_t entering) {
    const std::size_t ei = entering / m_, ej = entering % m_;
    const std::size_t start = n_ + ej, goal = ei;
    std::vector<std::size_t> parent(n_ + m_, kNone);
    std::vector<std::size_t> queue{start};
    parent[start] = start;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      if (node == goal) break;
      for (std::size_t next : adjacency_[node]) {
        if (parent[next] != kNone) continue;
        parent[next] = node;
        queue.push_back(next);
      }
    }
    if (parent[goal] == kNone) throw InternalError("no cycle for entering cell");
    std::vector<std::size_t> nodes;
    for (std::size_t node = goal; node != start; node = parent[node]) {
      nodes.push_back(node);
    }
    nodes.push_back(start);
    std::reverse(nodes.begin(), nodes.end());  // start (column) ... goal (row)
    std::vector<std::size_t> cells;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      const std::size_t a = nodes[k], b = nodes[k + 1];
      const std::size_t row = a < n_ ? a : b;
      const std::size_t col = (a < n_ ? b : a) - n_;
      cells.push_back(row * m_ + col);
    }
    return cells;
  }

  void Pivot(std::size_t entering) {
    // Path cells alternate -, +, -, ... starting from the entering column.
    const std::vector<std::size_t> path = CyclePath(entering);
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      theta = std::min(theta, Value(path[k]));
    }
    const double tie = theta + 1e-15;
    std::size_t leaving = kNone;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (Value(path[k]) <= tie && path[k] < leaving) leaving = path[k];
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      Value(path[k]) += (k % 2 == 0) ? -theta : theta;
    }
    Value(entering) = theta;
    Value(leaving) = 0.0;
    basic_[entering] = 1;
    basic_[leaving] = 0;
  }

  double& Value(std::size_t k) { return x_(k / m_, k % m_); }

  std::size_t n_, m_;
  const Matrix& cost_;
  Matrix x_;
  std::vector<char> basic_;
  std::vector<double> u_, v_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

}  // namespace

TransportLpSolution SolveTransportLp(std::span<const double> supply,
                                     std::span<const double> demand,
                                     const Matrix& cost) {
  if (supply.empty() || demand.empty()) {
    throw InternalError("transport LP needs non-empty marginals");
  }
  if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
    throw InternalError("cost matrix shape does not match marginals");
  }
  double sa = 0.0, sb = 0.0;
  for (double a : supply) {
    if (!(a > 0.0)) throw InternalError("supplies must be positive");
    sa += a;
  }
  for (double b : demand) {
    if (!(b > 0.0)) throw InternalError("demands must be positive");
    sb += b;
  }
  if (std::abs(sa - sb) > 1e-9 * std::max(sa, sb)) {
    throw InternalError("infeasible transport problem: total supply " +
                        std::to_string(sa) + " != total demand " +
                        std::to_string(sb));
  }
  SimplexState state(supply, demand, cost);
  const std::size_t pivots = state.Run();
  return state.Release(pivots);
}

}  // namespace mjko
