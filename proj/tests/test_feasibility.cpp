#include <cmath>

#include "doctest.h"

#include "cvqss/feasibility.hpp"
#include "cvqss/rng.hpp"

using namespace cvqss;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, SplitMix64& rng, double scale) {
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = scale * (2.0 * rng.uniform01() - 1.0);
  return M;
}

}  // namespace

TEST_SUITE("feasibility") {

TEST_CASE("identity system solves exactly") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd rhs(2);
  rhs << 3.0, -4.0;
  RowSystemSolution sol = solve_row_system(M, rhs);
  CHECK(sol.feasible);
  CHECK((sol.y - rhs).norm() < 1e-14);
  CHECK(sol.certificate.rank == 2);
  CHECK(sol.certificate.rank_augmented == 2);
  CHECK(sol.certificate.residual <= sol.certificate.tolerance);
}

TEST_CASE("inconsistent system is reported infeasible with rank gap") {
  // y^T M = rhs^T with both rows of M proportional but rhs not.
  Eigen::MatrixXd M(2, 2);
  M << 1.0, 2.0, 2.0, 4.0;
  Eigen::VectorXd rhs(2);
  rhs << 1.0, 0.0;
  RowSystemSolution sol = solve_row_system(M, rhs);
  CHECK_FALSE(sol.feasible);
  CHECK(sol.certificate.rank == 1);
  CHECK(sol.certificate.rank_augmented == 2);
  CHECK(sol.certificate.residual > sol.certificate.tolerance);
}

TEST_CASE("underdetermined feasible system returns the minimum-norm solution") {
  // One row, two columns equal: y1 + y2 form... here M is 2x1: y^T M = rhs.
  Eigen::MatrixXd M(2, 1);
  M << 1.0, 1.0;
  Eigen::VectorXd rhs(1);
  rhs << 2.0;
  RowSystemSolution sol = solve_row_system(M, rhs);
  CHECK(sol.feasible);
  // Solutions are y1 + y2 = 2; minimum norm at (1, 1).
  CHECK(sol.y[0] == doctest::Approx(1.0));
  CHECK(sol.y[1] == doctest::Approx(1.0));
}

TEST_CASE("constructed feasible systems are accepted and residuals vanish") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + static_cast<int>(rng.next() % 4);
    int m = 1 + static_cast<int>(rng.next() % 5);
    Eigen::MatrixXd M = random_matrix(k, m, rng, 3.0);
    Eigen::VectorXd y0 = random_matrix(k, 1, rng, 2.0);
    Eigen::VectorXd rhs = M.transpose() * y0;
    RowSystemSolution sol = solve_row_system(M, rhs);
    CHECK(sol.feasible);
    CHECK((M.transpose() * sol.y - rhs).norm() <= sol.certificate.tolerance);
    // Minimum-norm property against the generating point.
    CHECK(sol.y.norm() <= y0.norm() + 1e-9);
  }
}

TEST_CASE("solver verdict agrees with the rank oracle") {
  SplitMix64 rng(21);
  int disagreements = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int k = 1 + static_cast<int>(rng.next() % 3);
    int m = 1 + static_cast<int>(rng.next() % 5);
    Eigen::MatrixXd M = random_matrix(k, m, rng, 2.0);
    // Half the trials get a rank-deficient M to exercise infeasibility.
    if (m >= 2 && (rng.next() & 1ull)) M.col(m - 1) = 2.0 * M.col(0);
    Eigen::VectorXd rhs = random_matrix(m, 1, rng, 2.0);
    RowSystemSolution sol = solve_row_system(M, rhs);
    if (sol.feasible != rank_oracle_feasible(M, rhs)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("scale invariance of the feasibility verdict") {
  SplitMix64 rng(4);
  Eigen::MatrixXd M = random_matrix(3, 5, rng, 1.0);
  Eigen::VectorXd y0 = random_matrix(3, 1, rng, 1.0);
  Eigen::VectorXd rhs = M.transpose() * y0;
  for (double scale : {1.0, 1e4, 1e8}) {
    RowSystemSolution sol = solve_row_system(scale * M, scale * rhs);
    CHECK(sol.feasible);
  }
}

TEST_CASE("zero right-hand side is always feasible with zero solution") {
  SplitMix64 rng(12);
  Eigen::MatrixXd M = random_matrix(2, 4, rng, 5.0);
  RowSystemSolution sol = solve_row_system(M, Eigen::VectorXd::Zero(4));
  CHECK(sol.feasible);
  CHECK(sol.y.norm() < 1e-12);
}

}  // TEST_SUITE
