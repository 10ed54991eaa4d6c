#pragma once

#include <utility>
#include <vector>

#include "cvqss/affine_form.hpp"

namespace cvqss {

struct GraphSpec {
  int n_modes = 0;
  Eigen::MatrixXd G;

  // Throws std::invalid_argument unless G is square, symmetric and
  // zero-diagonal.
  static GraphSpec validated(Eigen::MatrixXd G);
  static GraphSpec empty(int n_modes);
};

struct SqueezingSpec {
  Eigen::VectorXd r;

  static SqueezingSpec from_r(Eigen::VectorXd r);
  static SqueezingSpec uniform(int n_modes, double r_value);

  Eigen::VectorXd R() const;          // e^{r_j}
  Eigen::VectorXd R_inverse() const;  // e^{-r_j}
};

// Heisenberg-picture quadratures of an n-mode state. After build_cvgs,
// x_forms[j] = e^{r_j} X(0)_j and
// p_forms[j] = e^{-r_j} P(0)_j + sum_l G_jl e^{r_l} X(0)_l.
struct GraphState {
  GraphSpec spec;
  SqueezingSpec squeezing;
  LatentBasis basis;
  std::vector<AffineForm> x_forms;
  std::vector<AffineForm> p_forms;
};

std::vector<std::pair<AffineForm, AffineForm>> make_squeezed_vacua(
    int n, const Eigen::VectorXd& r);
std::vector<std::pair<AffineForm, AffineForm>> make_squeezed_vacua(
    const LatentBasis& basis, const Eigen::VectorXd& r);

// P_i += gain * X_j and P_j += gain * X_i; X quadratures untouched.
// Throws std::invalid_argument when i == j or out of range.
GraphState apply_qnd(GraphState state, int i, int j, double gain);

GraphState build_cvgs(const GraphSpec& spec, const Eigen::VectorXd& r);
GraphState build_cvgs(const GraphSpec& spec, const Eigen::VectorXd& r,
                      const LatentBasis& basis);

// Momentum displacement encoding: P_j gains c_j * gamma, tracked symbolically
// through the secret coefficient. Means shift; variances are untouched.
GraphState encode_secret(GraphState state, const Eigen::VectorXd& c);

// Analytic covariance matrix of the 2n quadratures ordered
// (X_1..X_n, P_1..P_n).
Eigen::MatrixXd quadrature_covariance(const GraphState& state);

}  // namespace cvqss
