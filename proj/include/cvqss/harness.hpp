#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvqss/cpubc.hpp"
#include "cvqss/cpvtc.hpp"
#include "cvqss/qpvtq.hpp"
#include "cvqss/sampling.hpp"

namespace cvqss {

// One analytic-versus-empirical check. The z-scores normalize by the standard
// Monte Carlo spreads sqrt(Var/N) for the mean and Var*sqrt(2/N) for the
// variance; pass requires both within 5.
struct ComparisonLine {
  std::string label;
  std::int64_t n_samples = 0;
  double analytic_mean = 0.0;
  double analytic_variance = 0.0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double z_mean = 0.0;
  double z_variance = 0.0;
  bool pass = false;
};

ComparisonLine compare_moments(const std::string& label, double analytic_mean,
                               double analytic_variance,
                               const MomentSummary& empirical,
                               std::int64_t n_samples);

struct CpvtcSimReport {
  double gamma = 0.0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  double bias_slope = 0.0;
  ComparisonLine error;
  bool pass = false;
  double runtime_seconds = 0.0;
};

CpvtcSimReport simulate_cpvtc(const GraphSpec& spec, const CpvtcParams& params,
                              double gamma, std::int64_t shots,
                              std::uint64_t seed);

struct QpvtqSimReport {
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  ComparisonLine x_error;
  ComparisonLine p_error;
  FidelityReport analytic_fidelity;
  double empirical_fidelity = 0.0;
  // Largest per-shot gap between the stepwise protocol error and the closed
  // error form; pure linear algebra, should sit at rounding level.
  double max_identity_gap = 0.0;
  bool pass = false;
  double runtime_seconds = 0.0;
};

QpvtqSimReport simulate_qpvtq(const GraphSpec& spec_np1,
                              const QpvtqParams& params,
                              const SecretQumode& secret, std::int64_t shots,
                              std::uint64_t seed);

struct CpubcSimReport {
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
  std::int64_t kept = 0;
  double keep_rate = 0.0;
  bool keep_rate_ok = false;  // within [0.47, 0.53] per the binomial bound
  ComparisonLine x_error;     // kept rounds where both chose position
  ComparisonLine p_error;     // kept rounds where both chose momentum
  bool pass = false;
  double runtime_seconds = 0.0;
};

CpubcSimReport simulate_cpubc(const GraphSpec& spec_np1,
                              const CpubcParams& params, std::int64_t rounds,
                              std::uint64_t seed,
                              std::vector<SiftRound>* rounds_out = nullptr);

void write_keys_csv(const std::string& path,
                    const std::vector<SiftRound>& rounds);

}  // namespace cvqss
