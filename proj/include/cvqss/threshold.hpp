#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvqss/cpubc.hpp"
#include "cvqss/cpvtc.hpp"
#include "cvqss/graph_state.hpp"
#include "cvqss/qpvtq.hpp"

namespace cvqss {

enum class Scheme { cpvtc, qpvtq, cpubc };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

// A (k, n) access structure realized on a weighted graph: n modes for the
// classical-secret scheme, n+1 (players plus dealer) for the other two.
struct ThresholdDesign {
  Scheme scheme = Scheme::cpvtc;
  int k = 0;
  int n = 0;
  GraphSpec graph;
  Eigen::VectorXd c;  // dealer displacements; used by the cpvtc scheme only
};

struct SubsetRecord {
  std::vector<int> subset;  // 0-based player indices
  bool feasible = false;
  // Position/momentum system detail; the single cpvtc system is stored in the
  // position slots.
  bool position_feasible = false;
  bool momentum_feasible = false;
  RankCertificate position_certificate;
  RankCertificate momentum_certificate;
  // Squared norm of the momentum-coefficient part of each minimum-norm
  // solution; drives the finite-squeezing error floor e^{-2r} * norm.
  double position_bnorm_sq = 0.0;
  double momentum_bnorm_sq = 0.0;
};

struct ExclusivitySummary {
  std::vector<int> group;
  bool group_feasible = false;
  bool complement_excluded = false;
  bool cross_case_impossible = false;
  bool pass = false;
};

struct VerificationReport {
  bool pass = false;
  // Size-k subsets must all be feasible; size-(k-1) subsets must all be
  // infeasible (both systems, for the two-quadrature schemes).
  std::vector<SubsetRecord> k_subsets;
  std::vector<SubsetRecord> km1_subsets;
  std::vector<ExclusivitySummary> exclusivity;  // qpvtq only
};

struct CertifiedDesign {
  ThresholdDesign design;
  VerificationReport report;
};

enum class DesignStrategy { random, structured };

DesignStrategy strategy_from_string(const std::string& name);

// Builds a (k, 2k-1) design and, for n < 2k-1, restricts it to n players.
// Requires n/2 < k <= n. The random strategy rejection-samples weighted
// graphs until exhaustive verification passes and every size-k subset's
// minimum-norm solution stays small; it throws std::runtime_error with the
// attempt count after 10 failures. The structured strategy walks a
// deterministic ladder of weight patterns and verifies each candidate.
CertifiedDesign design(Scheme scheme, int k, int n, DesignStrategy strategy,
                       std::uint64_t seed);

VerificationReport verify(const ThresholdDesign& design);

// Deletes the highest-indexed player modes (rows and columns of G, entries of
// c) down to n_new players, keeping the dealer mode, then re-verifies.
// Requires k <= n_new <= n; throws std::runtime_error if the restricted
// design fails verification.
CertifiedDesign restrict_design(const ThresholdDesign& design, int n_new);

std::vector<std::vector<int>> subsets_of_size(int n, int k);

}  // namespace cvqss
