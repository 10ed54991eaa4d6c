#pragma once

#include <vector>

#include "cvqss/feasibility.hpp"
#include "cvqss/graph_state.hpp"

namespace cvqss {

// Classical secret, private channels, classical player communication.
// Player j applies a shear and measures mu_j = M(alpha_j X_j + beta_j P_j^D);
// the players publish the sum as their estimate of gamma.
struct CpvtcParams {
  Eigen::VectorXd a;  // alpha_j
  Eigen::VectorXd b;  // beta_j
  Eigen::VectorXd c;  // dealer displacements
  Eigen::VectorXd r;  // squeezing

  static CpvtcParams validated(Eigen::VectorXd a, Eigen::VectorXd b,
                               Eigen::VectorXd c, Eigen::VectorXd r);
};

struct ErrorStats {
  double bias_slope = 0.0;  // b.c - 1, multiplies gamma in the mean error
  double variance = 0.0;
};

struct CpvtcFeasibility {
  bool feasible = false;
  Eigen::VectorXd a;  // full length n, zero off the subset
  Eigen::VectorXd b;
  RankCertificate certificate;
};

// Closed-form error statistics:
//   E e = (b.c - 1) gamma
//   Var e = ||(a^T + b^T G) R||^2 + ||b^T R^{-1}||^2.
ErrorStats error_stats(const GraphSpec& spec, const CpvtcParams& params);

// The estimation error e = sum_j mu_j - gamma as an affine form over the
// encoded state's latents. Its moments reproduce error_stats exactly.
AffineForm error_form(const GraphState& encoded, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b);

// mu_j for one shot's latents; alpha = 0 degenerates to a momentum
// measurement (the linear form stays well defined even though the shear
// realization needs alpha != 0).
double player_measure(const GraphState& encoded, int j, double alpha,
                      double beta, const Eigen::VectorXd& latents,
                      double gamma);

double estimate(const Eigen::VectorXd& mu);

struct OptimalSqueezing {
  Eigen::VectorXd r;
  // false marks a component whose 1-D problem has no interior minimizer
  // (b_j = 0 or (a^T + b^T G)_j = 0); its r entry is reported as 0.
  std::vector<bool> constrained;
  // Infimum of the variance: sum over constrained components of 2|q_j b_j|.
  double min_variance = 0.0;
};

// Componentwise minimizer r_j = 0.5 log|b_j / (a^T + b^T G)_j|.
OptimalSqueezing optimal_squeezing(const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b,
                                   const GraphSpec& spec);

// Perfect-reconstruction system for the subset J (0-based):
//   [a_J^T b_J^T] [[I_J,N, 0], [G_J,N, c_J]] = [0 ... 0 1].
// Infeasibility is a result carrying a rank certificate, not an error.
CpvtcFeasibility solve_perfect(const GraphSpec& spec, const Eigen::VectorXd& c,
                               const std::vector<int>& subset);

}  // namespace cvqss
