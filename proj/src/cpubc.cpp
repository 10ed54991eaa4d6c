#include "cvqss/cpubc.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqss/sampling.hpp"

namespace cvqss {

const char* to_string(QuadChoice choice) {
  return choice == QuadChoice::position ? "position" : "momentum";
}

CpubcParams CpubcParams::validated(Eigen::VectorXd a, Eigen::VectorXd b,
                                   Eigen::VectorXd ap, Eigen::VectorXd bp,
                                   Eigen::VectorXd r) {
  const auto n = a.size();
  if (b.size() != n || ap.size() != n || bp.size() != n)
    throw std::invalid_argument("coefficient vectors must share one length");
  if (r.size() != n + 1)
    throw std::invalid_argument("squeezing vector must cover players plus dealer");
  CpubcParams p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.ap = std::move(ap);
  p.bp = std::move(bp);
  p.r = std::move(r);
  return p;
}

double dealer_measure(const GraphState& state, QuadChoice choice,
                      const Eigen::VectorXd& latents) {
  const int dealer = state.spec.n_modes - 1;
  const AffineForm& form =
      choice == QuadChoice::position
          ? state.x_forms[static_cast<std::size_t>(dealer)]
          : state.p_forms[static_cast<std::size_t>(dealer)];
  return evaluate(form, latents);
}

double players_estimate(const GraphState& state, const CpubcParams& params,
                        QuadChoice choice, const Eigen::VectorXd& latents) {
  const int n = state.spec.n_modes - 1;
  if (params.a.size() != n)
    throw std::invalid_argument("parameter length does not match state");
  const Eigen::VectorXd& av = choice == QuadChoice::position ? params.a : params.ap;
  const Eigen::VectorXd& bv = choice == QuadChoice::position ? params.b : params.bp;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (av[j] != 0.0)
      sum += av[j] *
             evaluate(state.x_forms[static_cast<std::size_t>(j)], latents);
    if (bv[j] != 0.0)
      sum += bv[j] *
             evaluate(state.p_forms[static_cast<std::size_t>(j)], latents);
  }
  return sum;
}

std::vector<SiftRound> sift(const std::vector<SiftRound>& rounds) {
  std::vector<SiftRound> kept;
  for (const auto& r : rounds)
    if (r.kept) kept.push_back(r);
  return kept;
}

AffineForm round_error_form(const GraphSpec& spec_np1,
                            const CpubcParams& params,
                            QuadChoice dealer_choice,
                            QuadChoice players_choice) {
  const int m = spec_np1.n_modes;
  const int n = m - 1;
  if (params.a.size() != n)
    throw std::invalid_argument("parameter length does not match graph");

  // players' combination minus the dealer's measured quadrature, expanded
  // over the initial squeezed latents.
  const Eigen::VectorXd& av =
      players_choice == QuadChoice::position ? params.a : params.ap;
  const Eigen::VectorXd& bv =
      players_choice == QuadChoice::position ? params.b : params.bp;

  Eigen::VectorXd ae = Eigen::VectorXd::Zero(m), be = Eigen::VectorXd::Zero(m);
  ae.head(n) = av;
  be.head(n) = bv;
  if (dealer_choice == QuadChoice::position) {
    ae[n] -= 1.0;  // subtract X_{n+1}^G
  } else {
    be[n] -= 1.0;  // subtract P_{n+1}^G
  }

  Eigen::VectorXd ux = ae + spec_np1.G * be;
  Eigen::VectorXd R = params.r.array().exp();
  Eigen::VectorXd Rinv = (-params.r.array()).exp();

  AffineForm e(LatentBasis::graph_only(m));
  for (int l = 0; l < m; ++l) {
    e.coeffs[e.basis.x_index(l)] = ux[l] * R[l];
    e.coeffs[e.basis.p_index(l)] = be[l] * Rinv[l];
  }
  return e;
}

std::pair<double, double> error_variances(const GraphSpec& spec_np1,
                                          const CpubcParams& params) {
  double vx = round_error_form(spec_np1, params, QuadChoice::position,
                               QuadChoice::position)
                  .variance();
  double vp = round_error_form(spec_np1, params, QuadChoice::momentum,
                               QuadChoice::momentum)
                  .variance();
  return {vx, vp};
}

RowSystemSolution solve_perfect_pub(const GraphSpec& spec_np1,
                                    const std::vector<int>& subset,
                                    QuadChoice quad) {
  const int m = spec_np1.n_modes;
  const int n = m - 1;
  for (int j : subset)
    if (j < 0 || j >= n)
      throw std::invalid_argument("player index out of range");
  if (subset.empty()) return RowSystemSolution{};

  const int k = static_cast<int>(subset.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * k, m);
  for (int t = 0; t < k; ++t) {
    M(t, subset[static_cast<std::size_t>(t)]) = 1.0;
    M.row(k + t) = spec_np1.G.row(subset[static_cast<std::size_t>(t)]);
  }
  Eigen::VectorXd rhs;
  if (quad == QuadChoice::position) {
    rhs = Eigen::VectorXd::Zero(m);
    rhs[n] = 1.0;  // key agreement targets +X_{n+1}, not the teleported -X_S
  } else {
    rhs = spec_np1.G.row(n).transpose();
  }
  return solve_row_system(M, rhs);
}

DualityReport duality_check(const GraphSpec& spec_np1,
                            const std::vector<int>& subset) {
  DualityReport rep;
  QpvtqFeasibility q = solve_perfect_q(spec_np1, subset);
  RowSystemSolution pub_x = solve_perfect_pub(spec_np1, subset, QuadChoice::position);
  RowSystemSolution pub_p = solve_perfect_pub(spec_np1, subset, QuadChoice::momentum);

  rep.qpvtq_feasible = q.feasible;
  rep.cpubc_feasible = pub_x.feasible && pub_p.feasible;
  rep.equivalent = rep.qpvtq_feasible == rep.cpubc_feasible;
  if (q.position.feasible && pub_x.feasible)
    rep.position_negation_gap = (pub_x.y + q.position.y).norm();
  if (q.momentum.feasible && pub_p.feasible)
    rep.momentum_solution_gap = (pub_p.y - q.momentum.y).norm();
  return rep;
}

std::vector<SiftRound> simulate_rounds(const GraphState& state,
                                       const CpubcParams& params,
                                       std::int64_t rounds,
                                       std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("round count must be at least 1");
  std::vector<SiftRound> out(static_cast<std::size_t>(rounds));
  for_each_chunk(rounds, 64, [&](std::int64_t lo, std::int64_t hi, int) {
    for (std::int64_t i = lo; i < hi; ++i) {
      ShotRng rng(seed, static_cast<std::uint64_t>(i));
      SiftRound& r = out[static_cast<std::size_t>(i)];
      r.round = i;
      r.dealer_choice = rng.coin() ? QuadChoice::momentum : QuadChoice::position;
      r.players_choice = rng.coin() ? QuadChoice::momentum : QuadChoice::position;
      Eigen::VectorXd latents = draw_latents_with(rng, state.basis);
      r.dealer_key = dealer_measure(state, r.dealer_choice, latents);
      r.players_estimate = players_estimate(state, params, r.players_choice, latents);
      r.kept = r.dealer_choice == r.players_choice;
      r.error = r.players_estimate - r.dealer_key;
    }
  });
  return out;
}

}  // namespace cvqss
