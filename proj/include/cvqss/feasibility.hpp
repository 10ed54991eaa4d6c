#pragma once

#include <Eigen/Dense>

namespace cvqss {

// Evidence attached to every feasibility decision: ranks of the system and of
// the system augmented with the right-hand side, plus the least-squares
// residual and the threshold it was compared against.
struct RankCertificate {
  int rank = 0;
  int rank_augmented = 0;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct RowSystemSolution {
  bool feasible = false;
  Eigen::VectorXd y;  // minimum-norm solution; meaningful when feasible
  RankCertificate certificate;
};

// Singular values below rank_threshold_factor * sigma_max count as zero.
inline constexpr double kRankThresholdFactor = 1e-10;
// A system is feasible when the minimum-norm least-squares residual is below
// kResidualFactor scaled by the size of the data involved.
inline constexpr double kResidualFactor = 1e-8;

// Solves y^T M = rhs^T (equivalently M^T y = rhs) in the minimum-norm
// least-squares sense and decides consistency.
RowSystemSolution solve_row_system(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& rhs);

// Independent consistency check: rank(M^T) versus rank([M^T | rhs]).
bool rank_oracle_feasible(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs);

}  // namespace cvqss
