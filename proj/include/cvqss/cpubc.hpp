#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cvqss/feasibility.hpp"
#include "cvqss/graph_state.hpp"
#include "cvqss/qpvtq.hpp"

namespace cvqss {

// Classical key agreement over a public channel: dealer and players each
// measure a random quadrature per round and keep the rounds where the choices
// match.
enum class QuadChoice { position, momentum };

const char* to_string(QuadChoice choice);

struct CpubcParams {
  Eigen::VectorXd a;   // position-round estimator
  Eigen::VectorXd b;
  Eigen::VectorXd ap;  // momentum-round estimator
  Eigen::VectorXd bp;
  Eigen::VectorXd r;   // length n+1

  static CpubcParams validated(Eigen::VectorXd a, Eigen::VectorXd b,
                               Eigen::VectorXd ap, Eigen::VectorXd bp,
                               Eigen::VectorXd r);
};

struct SiftRound {
  std::int64_t round = 0;
  QuadChoice dealer_choice = QuadChoice::position;
  QuadChoice players_choice = QuadChoice::position;
  double dealer_key = 0.0;
  double players_estimate = 0.0;
  bool kept = false;
  double error = 0.0;  // players_estimate - dealer_key
};

double dealer_measure(const GraphState& state, QuadChoice choice,
                      const Eigen::VectorXd& latents);

double players_estimate(const GraphState& state, const CpubcParams& params,
                        QuadChoice choice, const Eigen::VectorXd& latents);

std::vector<SiftRound> sift(const std::vector<SiftRound>& rounds);

// Error form for a (dealer_choice, players_choice) combination; matching
// choices give the kept-round error, mismatched ones the discarded
// configurations whose variance blows up with squeezing.
AffineForm round_error_form(const GraphSpec& spec_np1,
                            const CpubcParams& params,
                            QuadChoice dealer_choice,
                            QuadChoice players_choice);

// Kept-round variances:
//   Var e_x = ||([a^T -1] + [b^T 0] G) R||^2 + ||[b^T 0] R^{-1}||^2
//   Var e_p = ||([a'^T 0] + [b'^T 0] G - g_{n+1}^T) R||^2 + ||[b'^T -1] R^{-1}||^2.
std::pair<double, double> error_variances(const GraphSpec& spec_np1,
                                          const CpubcParams& params);

// Position system rhs +e_{n+1} (sign-flipped relative to teleportation),
// momentum system identical to the teleportation one.
RowSystemSolution solve_perfect_pub(const GraphSpec& spec_np1,
                                    const std::vector<int>& subset,
                                    QuadChoice quad);

struct DualityReport {
  bool qpvtq_feasible = false;
  bool cpubc_feasible = false;
  bool equivalent = false;
  // || y_pub_position + y_q_position || on feasible pairs (solutions are exact
  // negations); 0 when not applicable.
  double position_negation_gap = 0.0;
  double momentum_solution_gap = 0.0;
};

DualityReport duality_check(const GraphSpec& spec_np1,
                            const std::vector<int>& subset);

// Per round: the dealer's coin, the players' coin, then the latent draw, all
// from the round's substream.
std::vector<SiftRound> simulate_rounds(const GraphState& state,
                                       const CpubcParams& params,
                                       std::int64_t rounds,
                                       std::uint64_t seed);

}  // namespace cvqss
