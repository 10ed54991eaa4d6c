#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cvqss/harness.hpp"
#include "cvqss/json_io.hpp"
#include "cvqss/threshold.hpp"

namespace {

using nlohmann::ordered_json;

struct IoOptions {
  std::string out;
  std::string format = "json";
};

void add_io_options(CLI::App* cmd, IoOptions& io) {
  cmd->add_option("--out", io.out, "output file (stdout when omitted)");
  cmd->add_option("--format", io.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void flatten(const ordered_json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
    return;
  }
  if (j.is_array()) {
    bool scalars = true;
    for (const auto& v : j)
      if (v.is_object() || v.is_array()) scalars = false;
    if (scalars) {
      std::string joined;
      for (const auto& v : j) {
        if (!joined.empty()) joined += ';';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      rows.emplace_back(prefix, joined);
    } else {
      int i = 0;
      for (const auto& v : j) flatten(v, prefix + "." + std::to_string(i++), rows);
    }
    return;
  }
  rows.emplace_back(prefix,
                    j.is_string() ? j.get<std::string>() : j.dump());
}

std::string to_csv(const ordered_json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  return out;
}

void emit_report(const ordered_json& report, const IoOptions& io) {
  if (io.format == "csv") {
    std::string body = to_csv(report);
    if (io.out.empty()) {
      std::cout << body;
    } else {
      std::ofstream f(io.out);
      if (!f) throw std::runtime_error("cannot write file: " + io.out);
      f << body;
    }
    return;
  }
  if (io.out.empty())
    std::cout << report.dump(2) << "\n";
  else
    cvqss::write_json_file(io.out, report);
}

ordered_json certificate_json(const cvqss::RankCertificate& c) {
  ordered_json j;
  j["rank"] = c.rank;
  j["rank_augmented"] = c.rank_augmented;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  return j;
}

ordered_json comparison_json(const cvqss::ComparisonLine& line) {
  ordered_json j;
  j["n_samples"] = line.n_samples;
  j["analytic_mean"] = line.analytic_mean;
  j["analytic_variance"] = line.analytic_variance;
  j["empirical_mean"] = line.empirical_mean;
  j["empirical_variance"] = line.empirical_variance;
  j["z_mean"] = line.z_mean;
  j["z_variance"] = line.z_variance;
  j["pass"] = line.pass;
  return j;
}

std::vector<int> all_players(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

std::vector<int> one_based(const std::vector<int>& subset) {
  std::vector<int> out;
  out.reserve(subset.size());
  for (int j : subset) out.push_back(j + 1);
  return out;
}

// Zeroes the coefficients of players outside the subset; used when --subset
// narrows which players participate in stats/simulate runs.
void mask_vector(Eigen::VectorXd& v, const std::vector<int>& subset) {
  Eigen::VectorXd masked = Eigen::VectorXd::Zero(v.size());
  for (int j : subset) masked[j] = v[j];
  v = std::move(masked);
}

struct CommonArgs {
  std::string graph_path;
  std::string params_path;
  std::string subset_csv;
  std::string secret_inline;
  std::int64_t shots = 100000;
  std::int64_t rounds = 10000;
  std::uint64_t seed = 0;
  std::string samples_path;
  std::string report_path;
  IoOptions io;
};

int run_cpvtc(const std::string& action, const CommonArgs& args) {
  cvqss::GraphInput graph = cvqss::graph_from_json(cvqss::load_json_file(args.graph_path));
  const int n = graph.spec.n_modes;

  if (action == "solve") {
    nlohmann::json pj = cvqss::load_json_file(args.params_path);
    Eigen::VectorXd c = cvqss::vector_from_json(
        pj.contains("c") ? pj.at("c") : nlohmann::json{}, "c");
    if (c.size() != n) throw cvqss::SchemaError("\"c\" must have length n");
    std::vector<int> subset = args.subset_csv.empty()
                                  ? all_players(n)
                                  : cvqss::subset_from_string(args.subset_csv, n);
    cvqss::CpvtcFeasibility f = cvqss::solve_perfect(graph.spec, c, subset);
    ordered_json rep;
    rep["scheme"] = "cpvtc";
    rep["command"] = "solve";
    rep["subset"] = one_based(subset);
    rep["feasible"] = f.feasible;
    rep["certificate"] = certificate_json(f.certificate);
    if (f.feasible) {
      ordered_json params;
      params["a"] = cvqss::to_std_vector(f.a);
      params["b"] = cvqss::to_std_vector(f.b);
      params["c"] = cvqss::to_std_vector(c);
      rep["params"] = std::move(params);
    }
    emit_report(rep, args.io);
    return 0;
  }

  nlohmann::json pj = cvqss::load_json_file(args.params_path);
  cvqss::CpvtcParams params = cvqss::cpvtc_params_from_json(pj, n, graph.r);
  double gamma = 1.0;
  if (pj.contains("gamma")) {
    if (!pj.at("gamma").is_number())
      throw cvqss::SchemaError("\"gamma\" must be a number");
    gamma = pj.at("gamma").get<double>();
  }
  if (!args.subset_csv.empty()) {
    std::vector<int> subset = cvqss::subset_from_string(args.subset_csv, n);
    mask_vector(params.a, subset);
    mask_vector(params.b, subset);
  }

  if (action == "stats") {
    cvqss::ErrorStats stats = cvqss::error_stats(graph.spec, params);
    ordered_json rep;
    rep["scheme"] = "cpvtc";
    rep["command"] = "stats";
    rep["n"] = n;
    rep["bias_slope"] = stats.bias_slope;
    rep["variance"] = stats.variance;
    emit_report(rep, args.io);
    return 0;
  }
  if (action == "optimize") {
    cvqss::OptimalSqueezing opt =
        cvqss::optimal_squeezing(params.a, params.b, graph.spec);
    ordered_json rep;
    rep["scheme"] = "cpvtc";
    rep["command"] = "optimize";
    rep["r"] = cvqss::to_std_vector(opt.r);
    rep["constrained"] = opt.constrained;
    rep["min_variance"] = opt.min_variance;
    emit_report(rep, args.io);
    return 0;
  }

  // simulate
  cvqss::CpvtcSimReport sim =
      cvqss::simulate_cpvtc(graph.spec, params, gamma, args.shots, args.seed);
  ordered_json rep;
  rep["scheme"] = "cpvtc";
  rep["command"] = "simulate";
  rep["gamma"] = gamma;
  rep["shots"] = sim.shots;
  rep["seed"] = sim.seed;
  rep["bias_slope"] = sim.bias_slope;
  rep["error"] = comparison_json(sim.error);
  rep["pass"] = sim.pass;
  emit_report(rep, args.io);
  std::cerr << "cpvtc simulate: " << (sim.pass ? "pass" : "FAIL") << " ("
            << sim.runtime_seconds << " s)\n";
  if (!args.samples_path.empty()) {
    cvqss::GraphState state = cvqss::build_cvgs(graph.spec, params.r);
    state = cvqss::encode_secret(std::move(state), params.c);
    cvqss::AffineForm e = cvqss::error_form(state, params.a, params.b);
    Eigen::MatrixXd samples = cvqss::sample({e}, gamma, args.shots, args.seed);
    std::ofstream f(args.samples_path);
    if (!f) throw std::runtime_error("cannot write file: " + args.samples_path);
    f << "shot,error\n";
    f.precision(17);
    for (Eigen::Index i = 0; i < samples.rows(); ++i)
      f << i << ',' << samples(i, 0) << '\n';
  }
  return sim.pass ? 0 : 1;
}

int run_qpvtq(const std::string& action, const CommonArgs& args) {
  cvqss::GraphInput graph = cvqss::graph_from_json(cvqss::load_json_file(args.graph_path));
  const int m = graph.spec.n_modes;
  const int n = m - 1;
  if (n < 1) throw cvqss::SchemaError("graph needs at least one player plus the dealer");

  if (action == "solve" || action == "exclusivity") {
    std::vector<int> subset = args.subset_csv.empty()
                                  ? all_players(n)
                                  : cvqss::subset_from_string(args.subset_csv, n);
    if (action == "solve") {
      cvqss::QpvtqFeasibility f = cvqss::solve_perfect_q(graph.spec, subset);
      const int k = static_cast<int>(subset.size());
      ordered_json rep;
      rep["scheme"] = "qpvtq";
      rep["command"] = "solve";
      rep["subset"] = one_based(subset);
      rep["feasible"] = f.feasible;
      auto system_json = [&](const cvqss::RowSystemSolution& s) {
        ordered_json sj;
        sj["feasible"] = s.feasible;
        sj["certificate"] = certificate_json(s.certificate);
        return sj;
      };
      rep["position"] = system_json(f.position);
      rep["momentum"] = system_json(f.momentum);
      if (f.feasible) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd ap = Eigen::VectorXd::Zero(n), bp = Eigen::VectorXd::Zero(n);
        for (int t = 0; t < k; ++t) {
          a[subset[static_cast<std::size_t>(t)]] = f.position.y[t];
          b[subset[static_cast<std::size_t>(t)]] = f.position.y[k + t];
          ap[subset[static_cast<std::size_t>(t)]] = f.momentum.y[t];
          bp[subset[static_cast<std::size_t>(t)]] = f.momentum.y[k + t];
        }
        ordered_json params;
        params["a"] = cvqss::to_std_vector(a);
        params["b"] = cvqss::to_std_vector(b);
        params["a_prime"] = cvqss::to_std_vector(ap);
        params["b_prime"] = cvqss::to_std_vector(bp);
        rep["params"] = std::move(params);
      }
      emit_report(rep, args.io);
      return 0;
    }
    cvqss::ExclusivityReport ex = cvqss::exclusivity_check(graph.spec, subset);
    ordered_json rep;
    rep["scheme"] = "qpvtq";
    rep["command"] = "exclusivity";
    rep["group"] = one_based(ex.group);
    rep["complement"] = one_based(ex.complement);
    rep["group_feasible"] = ex.group_feasible;
    rep["complement_excluded"] = ex.complement_excluded;
    rep["cross_case_impossible"] = ex.cross_case_impossible;
    rep["pass"] = ex.pass;
    emit_report(rep, args.io);
    return ex.pass ? 0 : 1;
  }

  cvqss::SecretQumode secret;
  if (!args.secret_inline.empty()) {
    nlohmann::json sj;
    try {
      sj = nlohmann::json::parse(args.secret_inline);
    } catch (const nlohmann::json::parse_error& e) {
      throw cvqss::SchemaError(std::string("invalid --secret JSON: ") + e.what());
    }
    secret = cvqss::secret_from_json(sj);
  }
  nlohmann::json pj = cvqss::load_json_file(args.params_path);
  cvqss::QpvtqParams params = cvqss::qpvtq_params_from_json(pj, n, graph.r);

  if (action == "fidelity") {
    auto [V1, V2] = cvqss::error_variances_q(graph.spec, params);
    cvqss::FidelityReport f = cvqss::fidelity(secret, V1, V2);
    ordered_json rep;
    rep["scheme"] = "qpvtq";
    rep["command"] = "fidelity";
    rep["secret"] = {{"var_x", secret.var_x}, {"var_p", secret.var_p}};
    rep["V1"] = f.V1;
    rep["V2"] = f.V2;
    rep["delta"] = f.delta;
    rep["epsilon"] = f.epsilon;
    rep["F"] = f.F;
    emit_report(rep, args.io);
    return 0;
  }

  // simulate
  cvqss::QpvtqSimReport sim =
      cvqss::simulate_qpvtq(graph.spec, params, secret, args.shots, args.seed);
  ordered_json rep;
  rep["scheme"] = "qpvtq";
  rep["command"] = "simulate";
  rep["shots"] = sim.shots;
  rep["seed"] = sim.seed;
  rep["secret"] = {{"var_x", secret.var_x}, {"var_p", secret.var_p}};
  rep["x_error"] = comparison_json(sim.x_error);
  rep["p_error"] = comparison_json(sim.p_error);
  rep["fidelity"] = {{"analytic", sim.analytic_fidelity.F},
                     {"empirical", sim.empirical_fidelity}};
  rep["max_identity_gap"] = sim.max_identity_gap;
  rep["pass"] = sim.pass;
  emit_report(rep, args.io);
  std::cerr << "qpvtq simulate: " << (sim.pass ? "pass" : "FAIL") << " ("
            << sim.runtime_seconds << " s)\n";
  return sim.pass ? 0 : 1;
}

int run_cpubc(const std::string& action, const CommonArgs& args) {
  cvqss::GraphInput graph = cvqss::graph_from_json(cvqss::load_json_file(args.graph_path));
  const int m = graph.spec.n_modes;
  const int n = m - 1;
  if (n < 1) throw cvqss::SchemaError("graph needs at least one player plus the dealer");

  if (action == "solve" || action == "duality") {
    std::vector<int> subset = args.subset_csv.empty()
                                  ? all_players(n)
                                  : cvqss::subset_from_string(args.subset_csv, n);
    if (action == "solve") {
      cvqss::RowSystemSolution fx =
          cvqss::solve_perfect_pub(graph.spec, subset, cvqss::QuadChoice::position);
      cvqss::RowSystemSolution fp =
          cvqss::solve_perfect_pub(graph.spec, subset, cvqss::QuadChoice::momentum);
      ordered_json rep;
      rep["scheme"] = "cpubc";
      rep["command"] = "solve";
      rep["subset"] = one_based(subset);
      rep["feasible"] = fx.feasible && fp.feasible;
      auto system_json = [&](const cvqss::RowSystemSolution& s) {
        ordered_json sj;
        sj["feasible"] = s.feasible;
        sj["certificate"] = certificate_json(s.certificate);
        return sj;
      };
      rep["position"] = system_json(fx);
      rep["momentum"] = system_json(fp);
      if (fx.feasible && fp.feasible) {
        const int k = static_cast<int>(subset.size());
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd ap = Eigen::VectorXd::Zero(n), bp = Eigen::VectorXd::Zero(n);
        for (int t = 0; t < k; ++t) {
          a[subset[static_cast<std::size_t>(t)]] = fx.y[t];
          b[subset[static_cast<std::size_t>(t)]] = fx.y[k + t];
          ap[subset[static_cast<std::size_t>(t)]] = fp.y[t];
          bp[subset[static_cast<std::size_t>(t)]] = fp.y[k + t];
        }
        ordered_json params;
        params["a"] = cvqss::to_std_vector(a);
        params["b"] = cvqss::to_std_vector(b);
        params["a_prime"] = cvqss::to_std_vector(ap);
        params["b_prime"] = cvqss::to_std_vector(bp);
        rep["params"] = std::move(params);
      }
      emit_report(rep, args.io);
      return 0;
    }
    cvqss::DualityReport d = cvqss::duality_check(graph.spec, subset);
    ordered_json rep;
    rep["scheme"] = "cpubc";
    rep["command"] = "duality";
    rep["subset"] = one_based(subset);
    rep["qpvtq_feasible"] = d.qpvtq_feasible;
    rep["cpubc_feasible"] = d.cpubc_feasible;
    rep["equivalent"] = d.equivalent;
    rep["position_negation_gap"] = d.position_negation_gap;
    rep["momentum_solution_gap"] = d.momentum_solution_gap;
    emit_report(rep, args.io);
    return d.equivalent ? 0 : 1;
  }

  // simulate: --out receives the key stream CSV.
  nlohmann::json pj = cvqss::load_json_file(args.params_path);
  cvqss::CpubcParams params = cvqss::cpubc_params_from_json(pj, n, graph.r);
  std::vector<cvqss::SiftRound> rounds;
  cvqss::CpubcSimReport sim = cvqss::simulate_cpubc(graph.spec, params,
                                                    args.rounds, args.seed,
                                                    &rounds);
  if (!args.io.out.empty()) cvqss::write_keys_csv(args.io.out, rounds);
  ordered_json rep;
  rep["scheme"] = "cpubc";
  rep["command"] = "simulate";
  rep["rounds"] = sim.rounds;
  rep["seed"] = sim.seed;
  rep["kept"] = sim.kept;
  rep["keep_rate"] = sim.keep_rate;
  rep["keep_rate_ok"] = sim.keep_rate_ok;
  rep["x_error"] = comparison_json(sim.x_error);
  rep["p_error"] = comparison_json(sim.p_error);
  rep["pass"] = sim.pass;
  if (!args.report_path.empty()) cvqss::write_json_file(args.report_path, rep);
  if (args.io.out.empty()) std::cout << rep.dump(2) << "\n";
  std::cerr << "cpubc simulate: " << (sim.pass ? "pass" : "FAIL") << ", kept "
            << sim.kept << "/" << sim.rounds << " (" << sim.runtime_seconds
            << " s)\n";
  return sim.pass ? 0 : 1;
}

struct ThresholdArgs {
  std::string scheme = "qpvtq";
  int k = 0;
  int n = 0;
  std::string strategy = "random";
  std::uint64_t seed = 0;
  std::string design_path;
  IoOptions io;
};

int run_threshold_design(const ThresholdArgs& args) {
  cvqss::CertifiedDesign certified =
      cvqss::design(cvqss::scheme_from_string(args.scheme), args.k, args.n,
                    cvqss::strategy_from_string(args.strategy), args.seed);
  ordered_json j = cvqss::design_to_json(certified);
  if (args.io.out.empty())
    std::cout << j.dump(2) << "\n";
  else
    cvqss::write_json_file(args.io.out, j);
  std::cerr << "threshold design: verified (" << args.scheme << " k=" << args.k
            << " n=" << args.n << ")\n";
  return 0;
}

int run_threshold_verify(const ThresholdArgs& args) {
  cvqss::ThresholdDesign d =
      cvqss::design_from_json(cvqss::load_json_file(args.design_path));
  cvqss::VerificationReport report = cvqss::verify(d);
  ordered_json rep;
  rep["scheme"] = cvqss::to_string(d.scheme);
  rep["k"] = d.k;
  rep["n"] = d.n;
  rep["verification"] = cvqss::verification_to_json(report, d.scheme);
  emit_report(rep, args.io);
  std::cerr << "threshold verify: " << (report.pass ? "pass" : "FAIL") << "\n";
  return report.pass ? 0 : 1;
}

int run_sweep(const std::string& config_path, const IoOptions& io) {
  nlohmann::json config = cvqss::load_json_file(config_path);
  const auto& runs_field = config.contains("runs") ? config.at("runs") : config;
  if (!runs_field.is_array())
    throw cvqss::SchemaError("sweep config must be {\"runs\": [...]} or an array");

  std::vector<std::string> ids;
  std::string csv =
      "id,scheme,metric,n_samples,analytic_mean,analytic_variance,"
      "empirical_mean,empirical_variance,z_mean,z_variance,pass\n";
  bool all_ok = true;

  auto add_row = [&](const std::string& id, const std::string& scheme,
                     const cvqss::ComparisonLine& line) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  id.c_str(), scheme.c_str(), line.label.c_str(),
                  static_cast<long long>(line.n_samples), line.analytic_mean,
                  line.analytic_variance, line.empirical_mean,
                  line.empirical_variance, line.z_mean, line.z_variance,
                  line.pass ? 1 : 0);
    csv += buf;
    all_ok = all_ok && line.pass;
  };

  for (const auto& entry : runs_field) {
    if (!entry.is_object()) throw cvqss::SchemaError("each run must be an object");
    if (!entry.contains("id") || !entry.at("id").is_string())
      throw cvqss::SchemaError("each run needs a string \"id\"");
    std::string id = entry.at("id").get<std::string>();
    for (const auto& seen : ids)
      if (seen == id) throw cvqss::SchemaError("duplicate run id: " + id);
    ids.push_back(id);

    std::string scheme = entry.value("scheme", std::string());
    if (scheme.empty()) throw cvqss::SchemaError("run " + id + " needs \"scheme\"");
    if (!entry.contains("seed") || !entry.at("seed").is_number_integer())
      throw cvqss::SchemaError("run " + id + " needs an integer \"seed\"");
    std::uint64_t seed = entry.at("seed").get<std::uint64_t>();

    auto resolve = [&](const char* key) -> nlohmann::json {
      const auto& v = entry.at(key);
      if (v.is_string()) return cvqss::load_json_file(v.get<std::string>());
      return v;
    };
    if (!entry.contains("graph"))
      throw cvqss::SchemaError("run " + id + " needs \"graph\"");
    cvqss::GraphInput graph = cvqss::graph_from_json(resolve("graph"));

    std::vector<double> ladder;
    if (entry.contains("r_ladder")) {
      for (const auto& v : entry.at("r_ladder")) {
        if (!v.is_number())
          throw cvqss::SchemaError("\"r_ladder\" entries must be numbers");
        ladder.push_back(v.get<double>());
      }
      if (ladder.empty()) throw cvqss::SchemaError("\"r_ladder\" is empty");
    }

    auto run_one = [&](const std::string& row_id, const Eigen::VectorXd& r_over) {
      if (scheme == "cpvtc") {
        const int n = graph.spec.n_modes;
        cvqss::CpvtcParams params = cvqss::cpvtc_params_from_json(
            resolve("params"), n, r_over.size() ? r_over : graph.r);
        if (r_over.size()) params.r = r_over;
        double gamma = entry.value("gamma", 1.0);
        std::int64_t shots = entry.value("shots", std::int64_t{100000});
        cvqss::CpvtcSimReport sim =
            cvqss::simulate_cpvtc(graph.spec, params, gamma, shots, seed);
        add_row(row_id, scheme, sim.error);
      } else if (scheme == "qpvtq") {
        const int n = graph.spec.n_modes - 1;
        cvqss::QpvtqParams params = cvqss::qpvtq_params_from_json(
            resolve("params"), n, r_over.size() ? r_over : graph.r);
        if (r_over.size()) params.r = r_over;
        cvqss::SecretQumode secret;
        if (entry.contains("secret"))
          secret = cvqss::secret_from_json(entry.at("secret"));
        std::int64_t shots = entry.value("shots", std::int64_t{100000});
        cvqss::QpvtqSimReport sim =
            cvqss::simulate_qpvtq(graph.spec, params, secret, shots, seed);
        add_row(row_id, scheme, sim.x_error);
        add_row(row_id, scheme, sim.p_error);
      } else if (scheme == "cpubc") {
        const int n = graph.spec.n_modes - 1;
        cvqss::CpubcParams params = cvqss::cpubc_params_from_json(
            resolve("params"), n, r_over.size() ? r_over : graph.r);
        if (r_over.size()) params.r = r_over;
        std::int64_t rounds = entry.value("rounds", std::int64_t{10000});
        cvqss::CpubcSimReport sim =
            cvqss::simulate_cpubc(graph.spec, params, rounds, seed);
        cvqss::ComparisonLine keep;
        keep.label = "keep_rate";
        keep.n_samples = sim.rounds;
        keep.analytic_mean = 0.5;
        keep.empirical_mean = sim.keep_rate;
        keep.pass = sim.keep_rate_ok;
        add_row(row_id, scheme, keep);
        add_row(row_id, scheme, sim.x_error);
        add_row(row_id, scheme, sim.p_error);
      } else {
        throw cvqss::SchemaError("run " + id + " has unknown scheme " + scheme);
      }
    };

    if (ladder.empty()) {
      run_one(id, Eigen::VectorXd());
    } else {
      const int len = graph.spec.n_modes;
      for (double rv : ladder) {
        char suffix[64];
        std::snprintf(suffix, sizeof(suffix), "%s@r=%g", id.c_str(), rv);
        run_one(suffix, Eigen::VectorXd::Constant(len, rv));
      }
    }
  }

  if (io.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(io.out);
    if (!f) throw std::runtime_error("cannot write file: " + io.out);
    f << csv;
  }
  std::cerr << "sweep: " << (all_ok ? "all rows pass" : "some rows FAIL") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-variable quantum secret sharing toolkit"};
  app.require_subcommand(1);

  CommonArgs cpvtc_args, qpvtq_args, cpubc_args;
  ThresholdArgs th_args;
  std::string sweep_config;
  IoOptions sweep_io;
  std::string cpvtc_action, qpvtq_action, cpubc_action;

  auto add_common = [](CLI::App* cmd, CommonArgs& a, bool needs_params) {
    cmd->add_option("--graph", a.graph_path, "graph JSON file")->required();
    auto* p = cmd->add_option("--params", a.params_path, "parameter JSON file");
    if (needs_params) p->required();
    cmd->add_option("--subset", a.subset_csv, "1-based player subset, e.g. 1,3,4");
    add_io_options(cmd, a.io);
  };

  // cpvtc
  auto* cpvtc = app.add_subcommand("cpvtc", "classical secret over private channels");
  cpvtc->require_subcommand(1);
  for (const char* act : {"stats", "optimize", "solve", "simulate"}) {
    auto* cmd = cpvtc->add_subcommand(act);
    add_common(cmd, cpvtc_args, true);
    if (std::string(act) == "simulate") {
      cmd->add_option("--shots", cpvtc_args.shots, "Monte Carlo shots");
      cmd->add_option("--seed", cpvtc_args.seed, "RNG seed")->required();
      cmd->add_option("--samples", cpvtc_args.samples_path, "per-shot CSV output");
    }
  }

  // qpvtq
  auto* qpvtq = app.add_subcommand("qpvtq", "quantum secret teleportation");
  qpvtq->require_subcommand(1);
  for (const char* act : {"fidelity", "solve", "simulate", "exclusivity"}) {
    auto* cmd = qpvtq->add_subcommand(act);
    std::string a(act);
    bool needs_params = a == "fidelity" || a == "simulate";
    add_common(cmd, qpvtq_args, needs_params);
    if (needs_params)
      cmd->add_option("--secret", qpvtq_args.secret_inline,
                      "secret qumode JSON, e.g. {\"var_x\":1,\"var_p\":1}");
    if (a == "simulate") {
      cmd->add_option("--shots", qpvtq_args.shots, "Monte Carlo shots");
      cmd->add_option("--seed", qpvtq_args.seed, "RNG seed")->required();
    }
  }

  // cpubc
  auto* cpubc = app.add_subcommand("cpubc", "classical key over public channels");
  cpubc->require_subcommand(1);
  for (const char* act : {"simulate", "solve", "duality"}) {
    auto* cmd = cpubc->add_subcommand(act);
    std::string a(act);
    add_common(cmd, cpubc_args, a == "simulate");
    if (a == "simulate") {
      cmd->add_option("--rounds", cpubc_args.rounds, "protocol rounds");
      cmd->add_option("--seed", cpubc_args.seed, "RNG seed")->required();
      cmd->add_option("--report", cpubc_args.report_path, "summary JSON output");
    }
  }

  // threshold
  auto* threshold = app.add_subcommand("threshold", "(k,n) design and verification");
  threshold->require_subcommand(1);
  auto* design_cmd = threshold->add_subcommand("design");
  design_cmd->add_option("--scheme", th_args.scheme, "cpvtc, qpvtq or cpubc")->required();
  design_cmd->add_option("--k", th_args.k, "threshold")->required();
  design_cmd->add_option("--n", th_args.n, "player count")->required();
  design_cmd->add_option("--strategy", th_args.strategy, "random or structured");
  design_cmd->add_option("--seed", th_args.seed, "RNG seed");
  add_io_options(design_cmd, th_args.io);
  auto* verify_cmd = threshold->add_subcommand("verify");
  verify_cmd->add_option("design", th_args.design_path, "design JSON file")->required();
  add_io_options(verify_cmd, th_args.io);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "batch runs into one CSV");
  sweep->add_option("config", sweep_config, "sweep config JSON file")->required();
  // The sweep output is already tabular; only the destination is selectable.
  sweep->add_option("--out", sweep_io.out, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto parsed_action = [](CLI::App* group) -> std::string {
      for (auto* sub : group->get_subcommands(
               [](const CLI::App* s) { return s->parsed(); }))
        return sub->get_name();
      return {};
    };
    if (cpvtc->parsed()) return run_cpvtc(parsed_action(cpvtc), cpvtc_args);
    if (qpvtq->parsed()) return run_qpvtq(parsed_action(qpvtq), qpvtq_args);
    if (cpubc->parsed()) return run_cpubc(parsed_action(cpubc), cpubc_args);
    if (threshold->parsed()) {
      if (design_cmd->parsed()) return run_threshold_design(th_args);
      return run_threshold_verify(th_args);
    }
    if (sweep->parsed()) return run_sweep(sweep_config, sweep_io);
  } catch (const cvqss::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
