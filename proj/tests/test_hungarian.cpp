#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "coseg/hungarian.hpp"

using namespace coseg;

namespace {

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& a) {
  double s = 0.0;
  for (int r = 0; r < static_cast<int>(a.size()); ++r)
    if (a[r] >= 0) s += cost(r, a[r]);
  return s;
}

// Exhaustive optimum over all injective row-to-column maps.
double brute_force_min(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  std::vector<int> cols(m);
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int r = 0; r < std::min(n, m); ++r) s += cost(r, cols[r]);
    best = std::min(best, s);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

}  // namespace

TEST_CASE("one by one") {
  Eigen::MatrixXd c(1, 1);
  c << 7.0;
  std::vector<int> a = hungarian_min_assignment(c);
  CHECK(a == std::vector<int>{0});
}

TEST_CASE("known 3x3 instance") {
  Eigen::MatrixXd c(3, 3);
  c << 4, 1, 3,
       2, 0, 5,
       3, 2, 2;
  std::vector<int> a = hungarian_min_assignment(c);
  CHECK(assignment_cost(c, a) == doctest::Approx(5.0));  // 1 + 2 + 2
  CHECK(a == std::vector<int>{1, 0, 2});
}

TEST_CASE("identity is optimal on a diagonal-favoring matrix") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(4, 4, 10.0);
  c.diagonal().setConstant(1.0);
  std::vector<int> a = hungarian_min_assignment(c);
  for (int r = 0; r < 4; ++r) CHECK(a[r] == r);
}

TEST_CASE("rectangular wide matrix assigns all rows") {
  Eigen::MatrixXd c(2, 4);
  c << 9, 9, 1, 9,
       9, 9, 9, 2;
  std::vector<int> a = hungarian_min_assignment(c);
  CHECK(a == std::vector<int>{2, 3});
}

TEST_CASE("rectangular tall matrix leaves rows unassigned") {
  Eigen::MatrixXd c(3, 2);
  c << 1, 9,
       9, 1,
       5, 5;
  std::vector<int> a = hungarian_min_assignment(c);
  int unassigned = 0;
  std::vector<bool> used(2, false);
  for (int r = 0; r < 3; ++r) {
    if (a[r] < 0) {
      ++unassigned;
      continue;
    }
    CHECK(!used[a[r]]);
    used[a[r]] = true;
  }
  CHECK(unassigned == 1);
  CHECK(assignment_cost(c, a) == doctest::Approx(brute_force_min(c)));
}

TEST_CASE("matches brute force on random instances") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    int m = n + static_cast<int>(rng() % 3);  // square or wide
    Eigen::MatrixXd c(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) c(i, j) = unif(rng);
    std::vector<int> a = hungarian_min_assignment(c);
    std::vector<bool> used(m, false);
    for (int r = 0; r < n; ++r) {
      REQUIRE(a[r] >= 0);
      REQUIRE(!used[a[r]]);
      used[a[r]] = true;
    }
    CHECK(assignment_cost(c, a) ==
          doctest::Approx(brute_force_min(c)).epsilon(1e-12));
  }
}

TEST_CASE("max assignment negates the cost") {
  Eigen::MatrixXd p(3, 3);
  p << 4, 1, 3,
       2, 0, 5,
       3, 2, 2;
  std::vector<int> a = hungarian_max_assignment(p);
  // 4 + 5 + 2 = 11 is the maximum
  CHECK(assignment_cost(p, a) == doctest::Approx(11.0));
  CHECK(a == std::vector<int>{0, 2, 1});
}
