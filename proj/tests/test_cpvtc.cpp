#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "cvqss/cpvtc.hpp"
#include "cvqss/harness.hpp"
#include "cvqss/rng.hpp"
#include "cvqss/sampling.hpp"

using namespace cvqss;

namespace {

// Three-player line-distance graph whose 2-of-3 reconstruction works for
// c = (1, 2, 3): G(i,j) = |i - j| over 1-based labels.
GraphSpec ladder_graph3() {
  Eigen::MatrixXd G(3, 3);
  G << 0, 1, 2,
       1, 0, 1,
       2, 1, 0;
  return GraphSpec::validated(G);
}

CpvtcParams ladder_params() {
  Eigen::VectorXd a(3), b(3), c(3), r(3);
  a << 0.5, -0.25, 0.0;
  b << 0.25, 0.25, 0.0;
  c << 1.0, 2.0, 3.0;
  r << 1.0, 1.0, 1.0;
  return CpvtcParams::validated(a, b, c, r);
}

GraphSpec random_graph(int n, SplitMix64& rng, double scale) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      G(i, j) = G(j, i) = scale * (2.0 * rng.uniform01() - 1.0);
  return GraphSpec::validated(G);
}

Eigen::VectorXd random_vector(int n, SplitMix64& rng, double scale) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * (2.0 * rng.uniform01() - 1.0);
  return v;
}

}  // namespace

TEST_SUITE("cpvtc") {

TEST_CASE("parameter validation enforces shared lengths") {
  Eigen::VectorXd v2 = Eigen::VectorXd::Zero(2), v3 = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(CpvtcParams::validated(v2, v3, v2, v2), std::invalid_argument);
  CHECK_THROWS_AS(CpvtcParams::validated(Eigen::VectorXd(), Eigen::VectorXd(),
                                         Eigen::VectorXd(), Eigen::VectorXd()),
                  std::invalid_argument);
}

TEST_CASE("a lone position measurement has unit variance and slope -1") {
  GraphSpec spec = GraphSpec::empty(2);
  Eigen::VectorXd a(2), b(2), c(2), r(2);
  a << 1, 0;
  b << 0, 0;
  c << 0, 0;
  r << 0, 0;
  ErrorStats stats = error_stats(spec, CpvtcParams::validated(a, b, c, r));
  CHECK(stats.bias_slope == doctest::Approx(-1.0));
  CHECK(stats.variance == doctest::Approx(1.0));
}

TEST_CASE("a squeezed momentum measurement has variance e^{-2r}") {
  GraphSpec spec = GraphSpec::empty(2);
  Eigen::VectorXd a(2), b(2), c(2), r(2);
  a << 0, 0;
  b << 1, 0;
  c << 0, 0;
  r << 2, 0;
  ErrorStats stats = error_stats(spec, CpvtcParams::validated(a, b, c, r));
  CHECK(stats.variance == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("one position plus one momentum on vacuum gives variance 2") {
  GraphSpec spec = GraphSpec::empty(2);
  Eigen::VectorXd a(2), b(2), c(2), r(2);
  a << 1, 0;
  b << 0, 1;
  c << 0, 0;
  r << 0, 0;
  ErrorStats stats = error_stats(spec, CpvtcParams::validated(a, b, c, r));
  CHECK(stats.variance == doctest::Approx(2.0));
}

TEST_CASE("worked three-player instance") {
  ErrorStats stats = error_stats(ladder_graph3(), ladder_params());
  CHECK(stats.bias_slope == doctest::Approx(-0.25));
  CHECK(stats.variance == doctest::Approx(8.3296050217).epsilon(1e-9));
}

TEST_CASE("error form reproduces the closed-form statistics") {
  SplitMix64 rng(60);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng.next() % 4);
    GraphSpec spec = random_graph(n, rng, 2.0);
    CpvtcParams params = CpvtcParams::validated(
        random_vector(n, rng, 1.5), random_vector(n, rng, 1.5),
        random_vector(n, rng, 2.0), random_vector(n, rng, 0.8));
    ErrorStats stats = error_stats(spec, params);
    GraphState state = encode_secret(build_cvgs(spec, params.r), params.c);
    AffineForm e = error_form(state, params.a, params.b);
    const double gamma = 1.7;
    MomentSummary m = e.moments(gamma);
    CHECK(m.mean == doctest::Approx(stats.bias_slope * gamma).epsilon(1e-12));
    CHECK(m.variance == doctest::Approx(stats.variance).epsilon(1e-12));
  }
}

TEST_CASE("player measurements sum to the estimate and match the error form") {
  GraphSpec spec = ladder_graph3();
  CpvtcParams params = ladder_params();
  GraphState state = encode_secret(build_cvgs(spec, params.r), params.c);
  AffineForm e = error_form(state, params.a, params.b);
  const double gamma = -1.3;
  for (std::uint64_t shot = 0; shot < 20; ++shot) {
    Eigen::VectorXd latents = draw_latents(state.basis, 44, shot);
    Eigen::VectorXd mu(3);
    for (int j = 0; j < 3; ++j)
      mu[j] = player_measure(state, j, params.a[j], params.b[j], latents, gamma);
    double est = estimate(mu);
    double err = evaluate(e, latents, gamma);
    CHECK(est - gamma == doctest::Approx(err).epsilon(1e-12));
  }
}

TEST_CASE("optimal squeezing, symmetric component") {
  GraphSpec spec = GraphSpec::empty(2);
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 1, 0;
  OptimalSqueezing opt = optimal_squeezing(a, b, spec);
  CHECK(opt.constrained[0]);
  CHECK_FALSE(opt.constrained[1]);
  CHECK(opt.r[0] == doctest::Approx(0.0));
  CHECK(opt.min_variance == doctest::Approx(2.0));
}

TEST_CASE("optimal squeezing, asymmetric component") {
  GraphSpec spec = GraphSpec::empty(2);
  Eigen::VectorXd a(2), b(2);
  a << 2, 0;
  b << 1, 0;
  OptimalSqueezing opt = optimal_squeezing(a, b, spec);
  CHECK(opt.r[0] == doctest::Approx(0.5 * std::log(0.5)));
  CHECK(opt.min_variance == doctest::Approx(4.0));
}

TEST_CASE("unconstrained components report a zero infimum") {
  GraphSpec spec = GraphSpec::empty(2);
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 0, 0;
  OptimalSqueezing opt = optimal_squeezing(a, b, spec);
  CHECK_FALSE(opt.constrained[0]);
  CHECK(opt.min_variance == 0.0);
}

TEST_CASE("grid scan confirms the closed-form optimum") {
  SplitMix64 rng(71);
  const int n = 3;
  GraphSpec spec = random_graph(n, rng, 1.0);
  Eigen::VectorXd a = random_vector(n, rng, 1.5);
  Eigen::VectorXd b(n);
  b << 0.9, -1.1, 0.7;  // keep every component constrained
  OptimalSqueezing opt = optimal_squeezing(a, b, spec);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);

  ErrorStats at_opt = error_stats(spec, CpvtcParams::validated(a, b, c, opt.r));
  CHECK(at_opt.variance == doctest::Approx(opt.min_variance).epsilon(1e-12));

  for (int j = 0; j < n; ++j) {
    if (!opt.constrained[static_cast<std::size_t>(j)]) continue;
    for (double d : {-0.05, -0.001, 0.001, 0.05}) {
      Eigen::VectorXd r = opt.r;
      r[j] += d;
      ErrorStats perturbed = error_stats(spec, CpvtcParams::validated(a, b, c, r));
      CHECK(perturbed.variance >= at_opt.variance);
    }
  }
}

TEST_CASE("perfect solve on the two-player chain gives the minimum-norm pair") {
  Eigen::MatrixXd G(2, 2);
  G << 0, 1, 1, 0;
  GraphSpec spec = GraphSpec::validated(G);
  Eigen::VectorXd c(2);
  c << 0, 1;
  CpvtcFeasibility f = solve_perfect(spec, c, {0, 1});
  REQUIRE(f.feasible);
  CHECK(f.a[0] == doctest::Approx(-1.0));
  CHECK(f.a[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.b[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.b[1] == doctest::Approx(1.0));
}

TEST_CASE("a single player with zero displacement cannot reconstruct") {
  Eigen::MatrixXd G(2, 2);
  G << 0, 1, 1, 0;
  GraphSpec spec = GraphSpec::validated(G);
  Eigen::VectorXd c(2);
  c << 0, 1;
  CpvtcFeasibility f = solve_perfect(spec, c, {0});
  CHECK_FALSE(f.feasible);
  CHECK(f.certificate.rank_augmented > f.certificate.rank);
}

TEST_CASE("solve rejects empty and out-of-range subsets") {
  GraphSpec spec = GraphSpec::empty(2);
  Eigen::VectorXd c = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(solve_perfect(spec, c, {}), std::invalid_argument);
  CHECK_THROWS_AS(solve_perfect(spec, c, {2}), std::invalid_argument);
}

TEST_CASE("every pair of the ladder reconstructs and squeezing kills the error") {
  GraphSpec spec = ladder_graph3();
  Eigen::VectorXd c(3);
  c << 1, 2, 3;
  for (const auto& subset :
       std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}}) {
    CpvtcFeasibility f = solve_perfect(spec, c, subset);
    REQUIRE(f.feasible);
    Eigen::VectorXd r = Eigen::VectorXd::Constant(3, 3.0);
    ErrorStats stats =
        error_stats(spec, CpvtcParams::validated(f.a, f.b, c, r));
    CHECK(std::abs(stats.bias_slope) < 1e-10);
    CHECK(stats.variance ==
          doctest::Approx(std::exp(-6.0) * f.b.squaredNorm()).epsilon(1e-8));
  }
}

TEST_CASE("single players cannot reconstruct on the ladder") {
  GraphSpec spec = ladder_graph3();
  Eigen::VectorXd c(3);
  c << 1, 2, 3;
  for (int j = 0; j < 3; ++j) {
    CpvtcFeasibility f = solve_perfect(spec, c, {j});
    CHECK_FALSE(f.feasible);
  }
}

TEST_CASE("Monte Carlo agrees with the closed form") {
  CpvtcSimReport rep =
      simulate_cpvtc(ladder_graph3(), ladder_params(), 2.0, 30000, 913);
  CHECK(rep.pass);
  CHECK(rep.bias_slope == doctest::Approx(-0.25));
  CHECK(rep.error.analytic_mean == doctest::Approx(-0.5));
}

TEST_CASE("simulation is deterministic in the seed") {
  CpvtcSimReport r1 =
      simulate_cpvtc(ladder_graph3(), ladder_params(), 1.0, 5000, 3);
  CpvtcSimReport r2 =
      simulate_cpvtc(ladder_graph3(), ladder_params(), 1.0, 5000, 3);
  CHECK(r1.error.empirical_mean == r2.error.empirical_mean);
  CHECK(r1.error.empirical_variance == r2.error.empirical_variance);
}

}  // TEST_SUITE
