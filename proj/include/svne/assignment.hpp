#pragma once

#include <optional>
#include <vector>

namespace svne {

// Large sentinel marking a forbidden row/column pair.
inline constexpr double kAssignForbidden = 1e18;

// Minimum-cost perfect assignment of rows to columns (Hungarian algorithm
// with potentials, O(n^2 m)). cost may be rectangular with rows <= cols;
// every row gets a distinct column. Returns nullopt when no assignment
// avoiding forbidden entries exists.
std::optional<std::vector<int>> min_cost_assignment(
    const std::vector<std::vector<double>>& cost, double* total = nullptr);

// Maximum-weight variant (negates weights; forbidden entries stay forbidden).
std::optional<std::vector<int>> max_weight_assignment(
    const std::vector<std::vector<double>>& weight, double* total = nullptr);

}  // namespace svne
