#pragma once

#include <Eigen/Core>
#include <vector>

namespace coseg {

// Minimum-cost assignment on a rectangular cost matrix (Jonker-style O(n^3)
// shortest augmenting paths). Returns, per row, the assigned column or -1
// when rows exceed columns.
std::vector<int> hungarian_min_assignment(const Eigen::MatrixXd& cost);

// Convenience: maximize total profit instead.
std::vector<int> hungarian_max_assignment(const Eigen::MatrixXd& profit);

}  // namespace coseg
