#include "coseg/hungarian.hpp"

#include <limits>

namespace coseg {

// Shortest-augmenting-path assignment with potentials; rows are padded onto
// columns when the matrix is wide, transposed handling when it is tall.
std::vector<int> hungarian_min_assignment(const Eigen::MatrixXd& cost) {
  const int nr = static_cast<int>(cost.rows());
  const int nc = static_cast<int>(cost.cols());
  if (nr > nc) {
    // transpose, solve, invert the matching
    std::vector<int> col_of = hungarian_min_assignment(cost.transpose());
    std::vector<int> row_of(nr, -1);
    for (int c = 0; c < nc; ++c)
      if (col_of[c] >= 0) row_of[col_of[c]] = c;
    return row_of;
  }

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays in the classic formulation
  std::vector<double> u(nr + 1, 0.0), v(nc + 1, 0.0);
  std::vector<int> p(nc + 1, 0), way(nc + 1, 0);
  for (int i = 1; i <= nr; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(nc + 1, inf);
    std::vector<char> used(nc + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= nc; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= nc; ++j) {
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
    } while (j0);
  }

  std::vector<int> row_to_col(nr, -1);
  for (int j = 1; j <= nc; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

std::vector<int> hungarian_max_assignment(const Eigen::MatrixXd& profit) {
  return hungarian_min_assignment(-profit);
}

}  // namespace coseg
