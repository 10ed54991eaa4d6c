#include "cvqss/cpvtc.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqss/sampling.hpp"

namespace cvqss {

CpvtcParams CpvtcParams::validated(Eigen::VectorXd a, Eigen::VectorXd b,
                                   Eigen::VectorXd c, Eigen::VectorXd r) {
  const auto n = a.size();
  if (b.size() != n || c.size() != n || r.size() != n)
    throw std::invalid_argument("parameter vectors must share one length");
  if (n == 0) throw std::invalid_argument("parameter vectors are empty");
  CpvtcParams p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.c = std::move(c);
  p.r = std::move(r);
  return p;
}

ErrorStats error_stats(const GraphSpec& spec, const CpvtcParams& params) {
  const int n = spec.n_modes;
  if (params.a.size() != n)
    throw std::invalid_argument("parameter length does not match graph");
  ErrorStats stats;
  stats.bias_slope = params.b.dot(params.c) - 1.0;
  // q^T = a^T + b^T G; G symmetric so q = a + G b.
  Eigen::VectorXd q = params.a + spec.G * params.b;
  Eigen::VectorXd R = params.r.array().exp();
  Eigen::VectorXd Rinv = (-params.r.array()).exp();
  stats.variance = (q.array() * R.array()).matrix().squaredNorm() +
                   (params.b.array() * Rinv.array()).matrix().squaredNorm();
  return stats;
}

AffineForm error_form(const GraphState& encoded, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b) {
  const int n = encoded.spec.n_modes;
  if (a.size() != n || b.size() != n)
    throw std::invalid_argument("coefficient length does not match state");
  AffineForm e = linear_combine(encoded.x_forms, a);
  e += linear_combine(encoded.p_forms, b);
  e.secret_coeff -= 1.0;  // the players' target is gamma itself
  return e;
}

double player_measure(const GraphState& encoded, int j, double alpha,
                      double beta, const Eigen::VectorXd& latents,
                      double gamma) {
  if (j < 0 || j >= encoded.spec.n_modes)
    throw std::invalid_argument("player index out of range");
  double x = evaluate(encoded.x_forms[static_cast<std::size_t>(j)], latents, gamma);
  double pd = evaluate(encoded.p_forms[static_cast<std::size_t>(j)], latents, gamma);
  return alpha * x + beta * pd;
}

double estimate(const Eigen::VectorXd& mu) { return mu.sum(); }

OptimalSqueezing optimal_squeezing(const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b,
                                   const GraphSpec& spec) {
  const int n = spec.n_modes;
  if (a.size() != n || b.size() != n)
    throw std::invalid_argument("coefficient length does not match graph");
  Eigen::VectorXd q = a + spec.G * b;
  OptimalSqueezing out;
  out.r = Eigen::VectorXd::Zero(n);
  out.constrained.assign(static_cast<std::size_t>(n), false);
  out.min_variance = 0.0;
  // The variance splits per mode into q_j^2 e^{2r_j} + b_j^2 e^{-2r_j};
  // both terms active gives the interior optimum 2|q_j b_j|, otherwise the
  // infimum over r_j is 0 and the component is unconstrained.
  for (int j = 0; j < n; ++j) {
    if (q[j] != 0.0 && b[j] != 0.0) {
      out.r[j] = 0.5 * std::log(std::abs(b[j] / q[j]));
      out.constrained[static_cast<std::size_t>(j)] = true;
      out.min_variance += 2.0 * std::abs(q[j] * b[j]);
    }
  }
  return out;
}

CpvtcFeasibility solve_perfect(const GraphSpec& spec, const Eigen::VectorXd& c,
                               const std::vector<int>& subset) {
  const int n = spec.n_modes;
  if (c.size() != n)
    throw std::invalid_argument("displacement vector length does not match graph");
  if (subset.empty()) throw std::invalid_argument("player subset is empty");
  for (int j : subset)
    if (j < 0 || j >= n) throw std::invalid_argument("player index out of range");

  const int k = static_cast<int>(subset.size());
  // Rows: the X coefficient rows e_j, then the P rows [G_j,: c_j]; columns
  // n+1 wide, last column enforcing b.c = 1.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * k, n + 1);
  for (int t = 0; t < k; ++t) {
    M(t, subset[static_cast<std::size_t>(t)]) = 1.0;
    M.block(k + t, 0, 1, n) = spec.G.row(subset[static_cast<std::size_t>(t)]);
    M(k + t, n) = c[subset[static_cast<std::size_t>(t)]];
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;

  RowSystemSolution sol = solve_row_system(M, rhs);
  CpvtcFeasibility out;
  out.feasible = sol.feasible;
  out.certificate = sol.certificate;
  out.a = Eigen::VectorXd::Zero(n);
  out.b = Eigen::VectorXd::Zero(n);
  if (sol.feasible) {
    for (int t = 0; t < k; ++t) {
      out.a[subset[static_cast<std::size_t>(t)]] = sol.y[t];
      out.b[subset[static_cast<std::size_t>(t)]] = sol.y[k + t];
    }
  }
  return out;
}

}  // namespace cvqss
