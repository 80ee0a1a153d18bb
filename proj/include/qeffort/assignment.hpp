// Copyright 2026 The qeffort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <vector>

namespace qeffort {

/// Maximum-weight perfect matching on a square weight matrix (Hungarian
/// algorithm with potentials, O(n^3)). Returns assignment[row] = column.
/// Entries equal to -infinity are forbidden.
inline std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weight) {
  const int n = static_cast<int>(weight.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; u, v are row/column potentials for the cost -weight.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double w = weight(i0 - 1, j - 1);
        double cost = w == -inf ? inf : -w;
        double cur = cost - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0 || delta == inf) return {};  // no perfect matching
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

inline double assignment_weight(const Eigen::MatrixXd& weight, const std::vector<int>& assignment) {
  double s = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    s += weight(static_cast<Eigen::Index>(i), assignment[i]);
  }
  return s;
}

/// Best total weight among assignments that differ from `best` in at least
/// one row (the second-best assignment, by forbidding each chosen edge in turn).
inline double second_best_assignment_weight(const Eigen::MatrixXd& weight,
                                            const std::vector<int>& best) {
  const double inf = std::numeric_limits<double>::infinity();
  double second = -inf;
  for (std::size_t i = 0; i < best.size(); ++i) {
    Eigen::MatrixXd w = weight;
    w(static_cast<Eigen::Index>(i), best[i]) = -inf;
    auto alt = max_weight_assignment(w);
    if (!alt.empty()) second = std::max(second, assignment_weight(w, alt));
  }
  return second;
}

}  // namespace qeffort
