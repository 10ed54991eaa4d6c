#pragma once

#include <utility>
#include <vector>

#include "cvqss/feasibility.hpp"
#include "cvqss/graph_state.hpp"

namespace cvqss {

// Quantum secret teleported through an (n+1)-mode graph state. Mode n (0-based)
// is the dealer's qumode that enters the Bell measurement with the secret.
struct SecretQumode {
  double var_x = 1.0;
  double var_p = 1.0;
  double mean_x = 0.0;
  double mean_p = 0.0;

  // Enforces var_x, var_p > 0 and var_x * var_p >= 1.
  static SecretQumode validated(double var_x, double var_p, double mean_x = 0.0,
                                double mean_p = 0.0);
};

struct QpvtqParams {
  Eigen::VectorXd a;   // alpha_j, position reconstruction
  Eigen::VectorXd b;   // beta_j
  Eigen::VectorXd ap;  // alpha'_j, momentum reconstruction
  Eigen::VectorXd bp;  // beta'_j
  Eigen::VectorXd r;   // squeezing, length n+1

  static QpvtqParams validated(Eigen::VectorXd a, Eigen::VectorXd b,
                               Eigen::VectorXd ap, Eigen::VectorXd bp,
                               Eigen::VectorXd r);
};

struct BellOutcome {
  double m_xu = 0.0;
  double m_pv = 0.0;
};

struct FidelityReport {
  double V1 = 0.0;
  double V2 = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double F = 0.0;
};

struct QpvtqFeasibility {
  RowSystemSolution position;  // y = [a_J; b_J]
  RowSystemSolution momentum;  // y = [a'_J; b'_J]
  bool feasible = false;       // both systems consistent
};

struct ExclusivityReport {
  std::vector<int> group;       // J
  std::vector<int> complement;  // K = {0..n-1} \ J
  QpvtqFeasibility group_result;
  QpvtqFeasibility complement_result;
  bool group_feasible = false;
  // When the group reconstructs, both of the complement's systems must fail.
  bool complement_excluded = false;
  // J-position and K-momentum can never be simultaneously feasible.
  bool cross_case_impossible = false;
  bool pass = false;
};

// Dealer state: (n+1)-mode CVGS whose latent basis carries the secret pair.
GraphState build_dealer_state(const GraphSpec& spec_np1,
                              const Eigen::VectorXd& r,
                              const SecretQumode& secret);

// X_u = (X_{n+1}^G + X_S)/sqrt2, P_v = (P_{n+1}^G - P_S)/sqrt2.
std::pair<AffineForm, AffineForm> bell_forms(const GraphState& dealer_state);
BellOutcome bell_measure(const GraphState& dealer_state,
                         const Eigen::VectorXd& latents);

// X_est = sum_j (a_j X_j^G + b_j P_j^G) + sqrt2 m_xu,
// P_est = sum_j (a'_j X_j^G + b'_j P_j^G) - sqrt2 m_pv.
std::pair<AffineForm, AffineForm> reconstruct(const GraphState& dealer_state,
                                              const QpvtqParams& params,
                                              const BellOutcome& bell);

// Teleportation errors as forms over the graph latents:
//   e_x = [[a^T 1] + [b^T 0] G | [b^T 0]] v
//   e_p = [[a'^T 0] + [b'^T 0] G - g_{n+1}^T | [b'^T -1]] v
// with v = (R x(0), R^{-1} p(0)). Per shot, X_est - X_S = e_x and
// P_est - P_S = e_p exactly.
std::pair<AffineForm, AffineForm> error_forms(const GraphSpec& spec_np1,
                                              const QpvtqParams& params);
std::pair<AffineForm, AffineForm> error_forms(const GraphSpec& spec_np1,
                                              const QpvtqParams& params,
                                              const LatentBasis& basis);

std::pair<double, double> error_variances_q(const GraphSpec& spec_np1,
                                            const QpvtqParams& params);

// F = 2 / (sqrt(delta + epsilon) - sqrt(epsilon)) with
// delta = (2 var_x + V1)(2 var_p + V2),
// epsilon = (var_x var_p - 1)((var_x + V1)(var_p + V2) - 1).
FidelityReport fidelity(const SecretQumode& secret, double V1, double V2);

// Position system rhs -e_{n+1}, momentum system rhs g_{n+1}; both restricted
// to support J over the n players (dealer never holds coefficients).
QpvtqFeasibility solve_perfect_q(const GraphSpec& spec_np1,
                                 const std::vector<int>& subset);

ExclusivityReport exclusivity_check(const GraphSpec& spec_np1,
                                    const std::vector<int>& subset);

}  // namespace cvqss
