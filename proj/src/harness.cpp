#include "cvqss/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cvqss {

namespace {

constexpr double kSqrt2Local = 1.4142135623730950488016887242097;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

struct RunningMoments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  MomentSummary summary() const {
    MomentSummary s;
    s.mean = mean;
    s.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return s;
  }
};

}  // namespace

ComparisonLine compare_moments(const std::string& label, double analytic_mean,
                               double analytic_variance,
                               const MomentSummary& empirical,
                               std::int64_t n_samples) {
  ComparisonLine line;
  line.label = label;
  line.n_samples = n_samples;
  line.analytic_mean = analytic_mean;
  line.analytic_variance = analytic_variance;
  line.empirical_mean = empirical.mean;
  line.empirical_variance = empirical.variance;
  const double n = static_cast<double>(n_samples);
  const double mean_scale = std::sqrt(analytic_variance / n);
  const double var_scale = analytic_variance * std::sqrt(2.0 / n);
  line.z_mean = mean_scale > 0.0
                    ? (empirical.mean - analytic_mean) / mean_scale
                    : (empirical.mean == analytic_mean ? 0.0 : INFINITY);
  line.z_variance =
      var_scale > 0.0
          ? (empirical.variance - analytic_variance) / var_scale
          : (empirical.variance == analytic_variance ? 0.0 : INFINITY);
  line.pass = std::abs(line.z_mean) <= 5.0 && std::abs(line.z_variance) <= 5.0;
  return line;
}

CpvtcSimReport simulate_cpvtc(const GraphSpec& spec, const CpvtcParams& params,
                              double gamma, std::int64_t shots,
                              std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  GraphState state = build_cvgs(spec, params.r);
  state = encode_secret(std::move(state), params.c);
  AffineForm e = error_form(state, params.a, params.b);
  ErrorStats stats = error_stats(spec, params);

  MomentSummary emp = sample_moments({e}, gamma, shots, seed).front();

  CpvtcSimReport rep;
  rep.gamma = gamma;
  rep.shots = shots;
  rep.seed = seed;
  rep.bias_slope = stats.bias_slope;
  rep.error = compare_moments("error", stats.bias_slope * gamma, stats.variance,
                              emp, shots);
  rep.pass = rep.error.pass;
  rep.runtime_seconds = elapsed_seconds(start);
  return rep;
}

QpvtqSimReport simulate_qpvtq(const GraphSpec& spec_np1,
                              const QpvtqParams& params,
                              const SecretQumode& secret, std::int64_t shots,
                              std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  GraphState state = build_dealer_state(spec_np1, params.r, secret);
  auto [ex_form, ep_form] = error_forms(spec_np1, params, state.basis);
  const double V1 = ex_form.variance();
  const double V2 = ep_form.variance();
  const int n = spec_np1.n_modes - 1;

  // Stepwise protocol per shot: Bell measurement, classical feedforward,
  // players' combination; compared per shot against the closed error forms.
  const int n_chunks = 64;
  std::vector<RunningMoments> accx(n_chunks), accp(n_chunks);
  std::vector<double> gap(n_chunks, 0.0);
  for_each_chunk(shots, n_chunks, [&](std::int64_t lo, std::int64_t hi, int slot) {
    for (std::int64_t s = lo; s < hi; ++s) {
      Eigen::VectorXd v = draw_latents(state.basis, seed,
                                       static_cast<std::uint64_t>(s));
      BellOutcome bell = bell_measure(state, v);
      double x_est = kSqrt2Local * bell.m_xu;
      double p_est = -kSqrt2Local * bell.m_pv;
      for (int j = 0; j < n; ++j) {
        const double xj = evaluate(state.x_forms[static_cast<std::size_t>(j)], v);
        const double pj = evaluate(state.p_forms[static_cast<std::size_t>(j)], v);
        x_est += params.a[j] * xj + params.b[j] * pj;
        p_est += params.ap[j] * xj + params.bp[j] * pj;
      }
      const double xs = v[state.basis.secret_x_index()];
      const double ps = v[state.basis.secret_p_index()];
      const double ex = x_est - xs;
      const double ep = p_est - ps;
      accx[slot].add(ex);
      accp[slot].add(ep);
      const double gx = std::abs(ex - evaluate(ex_form, v));
      const double gp = std::abs(ep - evaluate(ep_form, v));
      gap[slot] = std::max({gap[slot], gx, gp});
    }
  });

  MomentSummary empx, empp;
  {
    RunningMoments totx, totp;
    // chunk-ordered exact merge, same as sample_moments
    auto merge = [](RunningMoments& t, const RunningMoments& o) {
      if (o.n == 0) return;
      if (t.n == 0) {
        t = o;
        return;
      }
      double d = o.mean - t.mean;
      std::int64_t tot = t.n + o.n;
      t.mean += d * static_cast<double>(o.n) / static_cast<double>(tot);
      t.m2 += o.m2 + d * d * static_cast<double>(t.n) *
                         static_cast<double>(o.n) / static_cast<double>(tot);
      t.n = tot;
    };
    for (int c = 0; c < n_chunks; ++c) {
      merge(totx, accx[c]);
      merge(totp, accp[c]);
    }
    empx = totx.summary();
    empp = totp.summary();
  }

  QpvtqSimReport rep;
  rep.shots = shots;
  rep.seed = seed;
  rep.x_error = compare_moments("x_error", ex_form.mean(), V1, empx, shots);
  rep.p_error = compare_moments("p_error", ep_form.mean(), V2, empp, shots);
  rep.analytic_fidelity = fidelity(secret, V1, V2);
  rep.empirical_fidelity =
      fidelity(secret, std::max(0.0, empx.variance), std::max(0.0, empp.variance)).F;
  for (double g : gap) rep.max_identity_gap = std::max(rep.max_identity_gap, g);
  rep.pass = rep.x_error.pass && rep.p_error.pass;
  rep.runtime_seconds = elapsed_seconds(start);
  return rep;
}

CpubcSimReport simulate_cpubc(const GraphSpec& spec_np1,
                              const CpubcParams& params, std::int64_t rounds,
                              std::uint64_t seed,
                              std::vector<SiftRound>* rounds_out) {
  auto start = std::chrono::steady_clock::now();
  GraphState state = build_cvgs(spec_np1, params.r);
  std::vector<SiftRound> all = simulate_rounds(state, params, rounds, seed);
  auto [vx, vp] = error_variances(spec_np1, params);

  RunningMoments keptx, keptp;
  std::int64_t kept = 0;
  for (const auto& r : all) {
    if (!r.kept) continue;
    ++kept;
    if (r.dealer_choice == QuadChoice::position)
      keptx.add(r.error);
    else
      keptp.add(r.error);
  }

  CpubcSimReport rep;
  rep.rounds = rounds;
  rep.seed = seed;
  rep.kept = kept;
  rep.keep_rate = static_cast<double>(kept) / static_cast<double>(rounds);
  rep.keep_rate_ok = rep.keep_rate >= 0.47 && rep.keep_rate <= 0.53;
  rep.x_error = compare_moments("x_error", 0.0, vx, keptx.summary(), keptx.n);
  rep.p_error = compare_moments("p_error", 0.0, vp, keptp.summary(), keptp.n);
  rep.pass = rep.keep_rate_ok && rep.x_error.pass && rep.p_error.pass;
  rep.runtime_seconds = elapsed_seconds(start);
  if (rounds_out) *rounds_out = std::move(all);
  return rep;
}

void write_keys_csv(const std::string& path,
                    const std::vector<SiftRound>& rounds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "round,dealer_choice,players_choice,kept,dealer_key,players_estimate,error\n";
  out.precision(17);
  for (const auto& r : rounds) {
    out << r.round << ',' << to_string(r.dealer_choice) << ','
        << to_string(r.players_choice) << ',' << (r.kept ? 1 : 0) << ','
        << r.dealer_key << ',' << r.players_estimate << ',' << r.error << '\n';
  }
}

}  // namespace cvqss
