#include "cvqss/feasibility.hpp"

#include <stdexcept>

namespace cvqss {

RowSystemSolution solve_row_system(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& rhs) {
  if (M.cols() != rhs.size())
    throw std::invalid_argument("right-hand side does not match system width");

  RowSystemSolution out;
  Eigen::MatrixXd A = M.transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankThresholdFactor);
  out.y = svd.solve(rhs);
  out.certificate.rank = static_cast<int>(svd.rank());

  Eigen::MatrixXd augmented(A.rows(), A.cols() + 1);
  augmented << A, rhs;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_aug(augmented);
  svd_aug.setThreshold(kRankThresholdFactor);
  out.certificate.rank_augmented = static_cast<int>(svd_aug.rank());

  double sigma_max =
      svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  out.certificate.residual = (A * out.y - rhs).norm();
  // Scale-aware acceptance: exact systems with entries of any magnitude keep
  // a sensible margin over double-precision rounding.
  out.certificate.tolerance =
      kResidualFactor * (1.0 + rhs.norm() + sigma_max * out.y.norm());
  out.feasible = out.certificate.residual <= out.certificate.tolerance;
  return out;
}

bool rank_oracle_feasible(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs) {
  RowSystemSolution s = solve_row_system(M, rhs);
  return s.certificate.rank == s.certificate.rank_augmented;
}

}  // namespace cvqss
