#include "cvqss/qpvtq.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqss/sampling.hpp"

namespace cvqss {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
}

SecretQumode SecretQumode::validated(double var_x, double var_p, double mean_x,
                                     double mean_p) {
  if (var_x <= 0.0 || var_p <= 0.0)
    throw std::invalid_argument("secret variances must be positive");
  if (var_x * var_p < 1.0)
    throw std::invalid_argument(
        "secret variances violate the uncertainty relation var_x*var_p >= 1");
  SecretQumode s;
  s.var_x = var_x;
  s.var_p = var_p;
  s.mean_x = mean_x;
  s.mean_p = mean_p;
  return s;
}

QpvtqParams QpvtqParams::validated(Eigen::VectorXd a, Eigen::VectorXd b,
                                   Eigen::VectorXd ap, Eigen::VectorXd bp,
                                   Eigen::VectorXd r) {
  const auto n = a.size();
  if (b.size() != n || ap.size() != n || bp.size() != n)
    throw std::invalid_argument("coefficient vectors must share one length");
  if (r.size() != n + 1)
    throw std::invalid_argument("squeezing vector must cover players plus dealer");
  QpvtqParams p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.ap = std::move(ap);
  p.bp = std::move(bp);
  p.r = std::move(r);
  return p;
}

GraphState build_dealer_state(const GraphSpec& spec_np1,
                              const Eigen::VectorXd& r,
                              const SecretQumode& secret) {
  LatentBasis basis = LatentBasis::with_secret(
      spec_np1.n_modes, secret.var_x, secret.var_p, secret.mean_x,
      secret.mean_p);
  return build_cvgs(spec_np1, r, basis);
}

std::pair<AffineForm, AffineForm> bell_forms(const GraphState& dealer_state) {
  if (!dealer_state.basis.has_secret)
    throw std::invalid_argument("state basis carries no secret qumode");
  const int dealer = dealer_state.spec.n_modes - 1;
  AffineForm xu(dealer_state.basis), pv(dealer_state.basis);
  xu = dealer_state.x_forms[static_cast<std::size_t>(dealer)];
  xu.coeffs[dealer_state.basis.secret_x_index()] += 1.0;
  xu *= 1.0 / kSqrt2;
  pv = dealer_state.p_forms[static_cast<std::size_t>(dealer)];
  pv.coeffs[dealer_state.basis.secret_p_index()] -= 1.0;
  pv *= 1.0 / kSqrt2;
  return {xu, pv};
}

BellOutcome bell_measure(const GraphState& dealer_state,
                         const Eigen::VectorXd& latents) {
  auto [xu, pv] = bell_forms(dealer_state);
  BellOutcome out;
  out.m_xu = evaluate(xu, latents);
  out.m_pv = evaluate(pv, latents);
  return out;
}

std::pair<AffineForm, AffineForm> reconstruct(const GraphState& dealer_state,
                                              const QpvtqParams& params,
                                              const BellOutcome& bell) {
  const int n = dealer_state.spec.n_modes - 1;
  if (params.a.size() != n)
    throw std::invalid_argument("parameter length does not match state");
  AffineForm x_est(dealer_state.basis), p_est(dealer_state.basis);
  for (int j = 0; j < n; ++j) {
    x_est += params.a[j] * dealer_state.x_forms[static_cast<std::size_t>(j)];
    x_est += params.b[j] * dealer_state.p_forms[static_cast<std::size_t>(j)];
    p_est += params.ap[j] * dealer_state.x_forms[static_cast<std::size_t>(j)];
    p_est += params.bp[j] * dealer_state.p_forms[static_cast<std::size_t>(j)];
  }
  x_est.constant += kSqrt2 * bell.m_xu;
  p_est.constant -= kSqrt2 * bell.m_pv;
  return {x_est, p_est};
}

std::pair<AffineForm, AffineForm> error_forms(const GraphSpec& spec_np1,
                                              const QpvtqParams& params,
                                              const LatentBasis& basis) {
  const int m = spec_np1.n_modes;
  const int n = m - 1;
  if (params.a.size() != n)
    throw std::invalid_argument("parameter length does not match graph");
  if (basis.n_modes != m)
    throw std::invalid_argument("basis mode count does not match graph");

  // Extended coefficient vectors over all n+1 modes.
  Eigen::VectorXd ae = Eigen::VectorXd::Zero(m), be = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd aep = Eigen::VectorXd::Zero(m), bep = Eigen::VectorXd::Zero(m);
  ae.head(n) = params.a;
  ae[n] = 1.0;
  be.head(n) = params.b;
  aep.head(n) = params.ap;
  bep.head(n) = params.bp;
  bep[n] = -1.0;

  Eigen::VectorXd ux = ae + spec_np1.G * be;
  Eigen::VectorXd up = aep + spec_np1.G * bep;  // G's last column is g_{n+1}

  Eigen::VectorXd R = params.r.array().exp();
  Eigen::VectorXd Rinv = (-params.r.array()).exp();

  AffineForm ex(basis), ep(basis);
  for (int l = 0; l < m; ++l) {
    ex.coeffs[basis.x_index(l)] = ux[l] * R[l];
    ex.coeffs[basis.p_index(l)] = be[l] * Rinv[l];
    ep.coeffs[basis.x_index(l)] = up[l] * R[l];
    ep.coeffs[basis.p_index(l)] = bep[l] * Rinv[l];
  }
  return {ex, ep};
}

std::pair<AffineForm, AffineForm> error_forms(const GraphSpec& spec_np1,
                                              const QpvtqParams& params) {
  return error_forms(spec_np1, params,
                     LatentBasis::graph_only(spec_np1.n_modes));
}

std::pair<double, double> error_variances_q(const GraphSpec& spec_np1,
                                            const QpvtqParams& params) {
  auto [ex, ep] = error_forms(spec_np1, params);
  return {ex.variance(), ep.variance()};
}

FidelityReport fidelity(const SecretQumode& secret, double V1, double V2) {
  if (V1 < 0.0 || V2 < 0.0)
    throw std::invalid_argument("error variances must be nonnegative");
  FidelityReport rep;
  rep.V1 = V1;
  rep.V2 = V2;
  rep.delta = (2.0 * secret.var_x + V1) * (2.0 * secret.var_p + V2);
  rep.epsilon = (secret.var_x * secret.var_p - 1.0) *
                ((secret.var_x + V1) * (secret.var_p + V2) - 1.0);
  rep.F = 2.0 / (std::sqrt(rep.delta + rep.epsilon) - std::sqrt(rep.epsilon));
  return rep;
}

namespace {

RowSystemSolution solve_support_system(const GraphSpec& spec_np1,
                                       const std::vector<int>& subset,
                                       const Eigen::VectorXd& rhs) {
  const int m = spec_np1.n_modes;
  const int k = static_cast<int>(subset.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * k, m);
  for (int t = 0; t < k; ++t) {
    M(t, subset[static_cast<std::size_t>(t)]) = 1.0;
    M.row(k + t) = spec_np1.G.row(subset[static_cast<std::size_t>(t)]);
  }
  return solve_row_system(M, rhs);
}

}  // namespace

QpvtqFeasibility solve_perfect_q(const GraphSpec& spec_np1,
                                 const std::vector<int>& subset) {
  const int m = spec_np1.n_modes;
  const int n = m - 1;
  for (int j : subset)
    if (j < 0 || j >= n)
      throw std::invalid_argument("player index out of range");

  QpvtqFeasibility out;
  if (subset.empty()) {
    // No players, no estimator; both systems are vacuously unsatisfiable
    // because the dealer-column targets are nonzero in the position system
    // and the momentum estimate has no terms to cancel P_{n+1}.
    out.feasible = false;
    return out;
  }
  Eigen::VectorXd rhs_x = Eigen::VectorXd::Zero(m);
  rhs_x[n] = -1.0;
  Eigen::VectorXd rhs_p = spec_np1.G.row(n).transpose();
  out.position = solve_support_system(spec_np1, subset, rhs_x);
  out.momentum = solve_support_system(spec_np1, subset, rhs_p);
  out.feasible = out.position.feasible && out.momentum.feasible;
  return out;
}

ExclusivityReport exclusivity_check(const GraphSpec& spec_np1,
                                    const std::vector<int>& subset) {
  const int n = spec_np1.n_modes - 1;
  ExclusivityReport rep;
  rep.group = subset;
  std::vector<bool> in_group(static_cast<std::size_t>(n), false);
  for (int j : subset) {
    if (j < 0 || j >= n)
      throw std::invalid_argument("player index out of range");
    in_group[static_cast<std::size_t>(j)] = true;
  }
  for (int j = 0; j < n; ++j)
    if (!in_group[static_cast<std::size_t>(j)]) rep.complement.push_back(j);

  rep.group_result = solve_perfect_q(spec_np1, rep.group);
  rep.complement_result = solve_perfect_q(spec_np1, rep.complement);
  rep.group_feasible = rep.group_result.feasible;
  rep.complement_excluded = !rep.complement_result.position.feasible &&
                            !rep.complement_result.momentum.feasible;
  rep.cross_case_impossible = !(rep.group_result.position.feasible &&
                                rep.complement_result.momentum.feasible);
  rep.pass = (!rep.group_feasible || rep.complement_excluded) &&
             rep.cross_case_impossible;
  return rep;
}

}  // namespace cvqss
