#include "svne/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace svne {

std::optional<std::vector<int>> min_cost_assignment(
    const std::vector<std::vector<double>>& cost, double* total) {
  int n = static_cast<int>(cost.size());
  if (n == 0) {
    if (total) *total = 0.0;
    return std::vector<int>{};
  }
  int m = static_cast<int>(cost[0].size());
  if (m < n) return std::nullopt;
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("min_cost_assignment: ragged cost matrix");

  const double inf = std::numeric_limits<double>::infinity();
  // Potentials over rows/columns; way[j] remembers the augmenting predecessor.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0);  // column -> row (1-based); 0 = free
  std::vector<int> way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, false);
    int j0 = 0;
    match[0] = i;
    do {
      used[j0] = true;
      int i0 = match[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double c = cost[i0 - 1][j - 1];
        double cur = (c >= kAssignForbidden) ? inf : c - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 < 0 || delta == inf) return std::nullopt;  // row i cannot be matched
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    while (j0 != 0) {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    }
  }

  std::vector<int> result(n, -1);
  double sum = 0.0;
  for (int j = 1; j <= m; ++j) {
    if (match[j] > 0) {
      result[match[j] - 1] = j - 1;
      sum += cost[match[j] - 1][j - 1];
    }
  }
  for (int i = 0; i < n; ++i)
    if (result[i] < 0) return std::nullopt;
  if (total) *total = sum;
  return result;
}

std::optional<std::vector<int>> max_weight_assignment(
    const std::vector<std::vector<double>>& weight, double* total) {
  std::vector<std::vector<double>> cost(weight.size());
  for (std::size_t i = 0; i < weight.size(); ++i) {
    cost[i].resize(weight[i].size());
    for (std::size_t j = 0; j < weight[i].size(); ++j)
      cost[i][j] = (weight[i][j] >= kAssignForbidden || weight[i][j] <= -kAssignForbidden)
                       ? kAssignForbidden
                       : -weight[i][j];
  }
  auto res = min_cost_assignment(cost, total);
  if (res && total) *total = -*total;
  return res;
}

}  // namespace svne
