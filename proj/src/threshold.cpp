#include "cvqss/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvqss/rng.hpp"
#include "cvqss/sampling.hpp"

namespace cvqss {

namespace {

// Quality bound used by the random strategy: every size-k subset's
// minimum-norm solution must keep its finite-squeezing floor coefficient
// (||b||^2, and ||b'||^2 + 1 for momentum estimators) at or below this, so
// that r = 10 drives the reconstruction error below 1e-7.
constexpr double kDesignNormBound = 40.0;
constexpr int kMaxDesignAttempts = 10;

// Weight tiers for the random strategy. Player-player couplings are drawn
// much larger than player-dealer ones: the position solution scales like
// 1/s_pd and the momentum one like s_pd/t_pp, so this pair keeps both small.
constexpr double kPlayerPlayerScale = 1000.0;
constexpr double kPlayerDealerScale = 30.0;
// Same role for the dealer displacements of the classical-secret scheme.
constexpr double kDisplacementScale = 50.0;

double signed_magnitude(SplitMix64& rng, double scale) {
  double mag = 0.5 + 1.5 * rng.uniform01();
  double sign = (rng.next() & 1ull) ? 1.0 : -1.0;
  return sign * mag * scale;
}

bool needs_dealer_mode(Scheme scheme) { return scheme != Scheme::cpvtc; }

void check_design_shape(const ThresholdDesign& d) {
  if (d.k < 1 || d.n < d.k || d.n >= 2 * d.k)
    throw std::invalid_argument("threshold design requires n/2 < k <= n");
  const int expected_modes = d.n + (needs_dealer_mode(d.scheme) ? 1 : 0);
  if (d.graph.n_modes != expected_modes)
    throw std::invalid_argument("graph mode count does not match the design");
  if (d.scheme == Scheme::cpvtc && d.c.size() != d.n)
    throw std::invalid_argument("displacement vector length does not match n");
}

SubsetRecord evaluate_subset(const ThresholdDesign& d,
                             const std::vector<int>& subset) {
  SubsetRecord rec;
  rec.subset = subset;
  const int k = static_cast<int>(subset.size());
  switch (d.scheme) {
    case Scheme::cpvtc: {
      if (subset.empty()) {
        // No players means estimate 0, and b.c = 1 is unreachable.
        rec.feasible = false;
        rec.position_feasible = false;
        break;
      }
      CpvtcFeasibility f = solve_perfect(d.graph, d.c, subset);
      rec.feasible = f.feasible;
      rec.position_feasible = f.feasible;
      rec.position_certificate = f.certificate;
      rec.position_bnorm_sq = f.b.squaredNorm();
      break;
    }
    case Scheme::qpvtq: {
      QpvtqFeasibility f = solve_perfect_q(d.graph, subset);
      rec.feasible = f.feasible;
      rec.position_feasible = f.position.feasible;
      rec.momentum_feasible = f.momentum.feasible;
      rec.position_certificate = f.position.certificate;
      rec.momentum_certificate = f.momentum.certificate;
      if (f.position.feasible)
        rec.position_bnorm_sq = f.position.y.tail(k).squaredNorm();
      if (f.momentum.feasible)
        rec.momentum_bnorm_sq = f.momentum.y.tail(k).squaredNorm() + 1.0;
      break;
    }
    case Scheme::cpubc: {
      RowSystemSolution fx = solve_perfect_pub(d.graph, subset, QuadChoice::position);
      RowSystemSolution fp = solve_perfect_pub(d.graph, subset, QuadChoice::momentum);
      rec.position_feasible = fx.feasible;
      rec.momentum_feasible = fp.feasible;
      rec.feasible = fx.feasible && fp.feasible;
      rec.position_certificate = fx.certificate;
      rec.momentum_certificate = fp.certificate;
      if (fx.feasible) rec.position_bnorm_sq = fx.y.tail(k).squaredNorm();
      if (fp.feasible) rec.momentum_bnorm_sq = fp.y.tail(k).squaredNorm() + 1.0;
      break;
    }
  }
  return rec;
}

std::vector<SubsetRecord> evaluate_subsets(const ThresholdDesign& d, int size) {
  std::vector<std::vector<int>> subsets = subsets_of_size(d.n, size);
  std::vector<SubsetRecord> records(subsets.size());
  for_each_chunk(static_cast<std::int64_t>(subsets.size()), 8,
                 [&](std::int64_t lo, std::int64_t hi, int) {
                   for (std::int64_t i = lo; i < hi; ++i)
                     records[static_cast<std::size_t>(i)] = evaluate_subset(
                         d, subsets[static_cast<std::size_t>(i)]);
                 });
  return records;
}

bool small_subset_blocked(const ThresholdDesign& d, const SubsetRecord& rec) {
  if (d.scheme == Scheme::cpvtc) return !rec.feasible;
  // Fewer than k players must fail both quadrature systems.
  return !rec.position_feasible && !rec.momentum_feasible;
}

double worst_norm_floor(const VerificationReport& report) {
  double worst = 0.0;
  for (const auto& rec : report.k_subsets)
    worst = std::max({worst, rec.position_bnorm_sq, rec.momentum_bnorm_sq});
  return worst;
}

ThresholdDesign random_candidate(Scheme scheme, int k, SplitMix64& rng) {
  const int n = 2 * k - 1;
  const int m = n + (needs_dealer_mode(scheme) ? 1 : 0);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double scale = 1.0;
      if (needs_dealer_mode(scheme))
        scale = (j == m - 1) ? kPlayerDealerScale : kPlayerPlayerScale;
      G(i, j) = G(j, i) = signed_magnitude(rng, scale);
    }
  }
  ThresholdDesign d;
  d.scheme = scheme;
  d.k = k;
  d.n = n;
  d.graph = GraphSpec::validated(std::move(G));
  if (scheme == Scheme::cpvtc) {
    d.c = Eigen::VectorXd(n);
    for (int j = 0; j < n; ++j)
      d.c[j] = signed_magnitude(rng, kDisplacementScale);
  }
  return d;
}

ThresholdDesign structured_candidate(Scheme scheme, int k, int variant) {
  const int n = 2 * k - 1;
  const int m = n + (needs_dealer_mode(scheme) ? 1 : 0);
  // Deterministic weight ladder over 1-based mode labels: |i-j| and i+j are
  // the simple arithmetic patterns; they lose rank for larger subsets, where
  // 1/(i+j) takes over (every square submatrix of that kind is nonsingular).
  auto weight = [&](int i, int j) {
    double bi = static_cast<double>(i + 1), bj = static_cast<double>(j + 1);
    switch (variant) {
      case 0: return std::abs(bi - bj);
      case 1: return bi + bj;
      default: return 1.0 / (bi + bj);
    }
  };
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) G(i, j) = G(j, i) = weight(i, j);
  ThresholdDesign d;
  d.scheme = scheme;
  d.k = k;
  d.n = n;
  d.graph = GraphSpec::validated(std::move(G));
  if (scheme == Scheme::cpvtc) {
    d.c = Eigen::VectorXd(n);
    for (int j = 0; j < n; ++j) d.c[j] = static_cast<double>(j + 1);
  }
  return d;
}

ThresholdDesign restricted_copy(const ThresholdDesign& d, int n_new) {
  const bool dealer = needs_dealer_mode(d.scheme);
  const int m_new = n_new + (dealer ? 1 : 0);
  std::vector<int> keep;
  keep.reserve(static_cast<std::size_t>(m_new));
  for (int j = 0; j < n_new; ++j) keep.push_back(j);
  if (dealer) keep.push_back(d.n);  // dealer mode stays
  Eigen::MatrixXd G(m_new, m_new);
  for (int i = 0; i < m_new; ++i)
    for (int j = 0; j < m_new; ++j)
      G(i, j) = d.graph.G(keep[static_cast<std::size_t>(i)],
                          keep[static_cast<std::size_t>(j)]);
  ThresholdDesign out;
  out.scheme = d.scheme;
  out.k = d.k;
  out.n = n_new;
  out.graph = GraphSpec::validated(std::move(G));
  if (d.scheme == Scheme::cpvtc) out.c = d.c.head(n_new);
  return out;
}

}  // namespace

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::cpvtc: return "cpvtc";
    case Scheme::qpvtq: return "qpvtq";
    default: return "cpubc";
  }
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "cpvtc") return Scheme::cpvtc;
  if (name == "qpvtq") return Scheme::qpvtq;
  if (name == "cpubc") return Scheme::cpubc;
  throw std::invalid_argument("unknown scheme: " + name);
}

DesignStrategy strategy_from_string(const std::string& name) {
  if (name == "random") return DesignStrategy::random;
  if (name == "structured") return DesignStrategy::structured;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return out;
}

VerificationReport verify(const ThresholdDesign& design) {
  check_design_shape(design);
  VerificationReport report;
  report.k_subsets = evaluate_subsets(design, design.k);
  report.km1_subsets = evaluate_subsets(design, design.k - 1);

  bool ok = true;
  for (const auto& rec : report.k_subsets) ok = ok && rec.feasible;
  for (const auto& rec : report.km1_subsets)
    ok = ok && small_subset_blocked(design, rec);

  if (design.scheme == Scheme::qpvtq) {
    for (const auto& rec : report.k_subsets) {
      ExclusivityReport ex = exclusivity_check(design.graph, rec.subset);
      ExclusivitySummary s;
      s.group = ex.group;
      s.group_feasible = ex.group_feasible;
      s.complement_excluded = ex.complement_excluded;
      s.cross_case_impossible = ex.cross_case_impossible;
      s.pass = ex.pass;
      report.exclusivity.push_back(s);
      ok = ok && ex.pass;
    }
  }
  report.pass = ok;
  return report;
}

CertifiedDesign restrict_design(const ThresholdDesign& design, int n_new) {
  check_design_shape(design);
  if (n_new < design.k || n_new > design.n)
    throw std::invalid_argument("restriction target must satisfy k <= n <= current n");
  ThresholdDesign restricted = restricted_copy(design, n_new);
  VerificationReport report = verify(restricted);
  if (!report.pass)
    throw std::runtime_error(
        "restricted design failed verification (k=" + std::to_string(design.k) +
        ", n " + std::to_string(design.n) + " -> " + std::to_string(n_new) +
        "); deleting modes below n = 2k-2 removes the equations that block "
        "small subsets");
  return CertifiedDesign{std::move(restricted), std::move(report)};
}

CertifiedDesign design(Scheme scheme, int k, int n, DesignStrategy strategy,
                       std::uint64_t seed) {
  if (k < 1 || n < k || n >= 2 * k)
    throw std::invalid_argument("threshold design requires n/2 < k <= n");

  const int n_full = 2 * k - 1;
  const int attempts = strategy == DesignStrategy::random ? kMaxDesignAttempts : 3;
  SplitMix64 rng(seed);

  for (int attempt = 0; attempt < attempts; ++attempt) {
    ThresholdDesign candidate =
        strategy == DesignStrategy::random
            ? random_candidate(scheme, k, rng)
            : structured_candidate(scheme, k, attempt);
    VerificationReport report = verify(candidate);
    if (!report.pass) continue;
    if (n < n_full) {
      ThresholdDesign restricted = restricted_copy(candidate, n);
      VerificationReport restricted_report = verify(restricted);
      if (!restricted_report.pass) continue;
      candidate = std::move(restricted);
      report = std::move(restricted_report);
    }
    if (strategy == DesignStrategy::random &&
        worst_norm_floor(report) > kDesignNormBound)
      continue;
    return CertifiedDesign{std::move(candidate), std::move(report)};
  }
  throw std::runtime_error("no verified design after " +
                           std::to_string(attempts) + " attempts (scheme " +
                           to_string(scheme) + ", k=" + std::to_string(k) +
                           ", n=" + std::to_string(n) + ")");
}

}  // namespace cvqss
