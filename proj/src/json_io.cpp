#include "cvqss/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cvqss {

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(std::string("missing required field \"") + key + "\"");
  return *it;
}

double require_number(const nlohmann::json& j, const char* context) {
  if (!j.is_number())
    throw SchemaError(std::string(context) + " must be a number");
  return j.get<double>();
}

int require_int(const nlohmann::json& j, const char* context) {
  if (!j.is_number_integer())
    throw SchemaError(std::string(context) + " must be an integer");
  return j.get<int>();
}

}  // namespace

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array())
    throw SchemaError(std::string("field \"") + field + "\" must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& item : j)
    v[i++] = require_number(item, (std::string("entry of \"") + field + "\"").c_str());
  return v;
}

std::vector<double> to_std_vector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

GraphInput graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("graph must be a JSON object");
  const int n = require_int(require_field(j, "n"), "\"n\"");
  if (n < 1) throw SchemaError("\"n\" must be at least 1");

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  const auto& edges = require_field(j, "edges");
  if (!edges.is_array()) throw SchemaError("\"edges\" must be an array");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 3)
      throw SchemaError("each edge must be [i, j, gain]");
    const int i1 = require_int(e[0], "edge endpoint");
    const int j1 = require_int(e[1], "edge endpoint");
    const double gain = require_number(e[2], "edge gain");
    if (i1 < 1 || i1 > n || j1 < 1 || j1 > n)
      throw SchemaError("edge endpoint out of range (indices are 1-based)");
    if (i1 == j1) throw SchemaError("self-loops are not allowed");
    if (G(i1 - 1, j1 - 1) != 0.0)
      throw SchemaError("duplicate edge (" + std::to_string(i1) + ", " +
                        std::to_string(j1) + ")");
    G(i1 - 1, j1 - 1) = G(j1 - 1, i1 - 1) = gain;
  }

  GraphInput input;
  input.spec = GraphSpec::validated(std::move(G));
  if (j.contains("r")) {
    input.r = vector_from_json(j.at("r"), "r");
    if (input.r.size() != n)
      throw SchemaError("\"r\" length must equal \"n\"");
  } else {
    input.r = Eigen::VectorXd::Zero(n);
  }
  return input;
}

nlohmann::ordered_json graph_to_json(const GraphSpec& spec,
                                     const Eigen::VectorXd& r) {
  nlohmann::ordered_json j;
  j["n"] = spec.n_modes;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (int i = 0; i < spec.n_modes; ++i)
    for (int k = i + 1; k < spec.n_modes; ++k)
      if (spec.G(i, k) != 0.0)
        edges.push_back({i + 1, k + 1, spec.G(i, k)});
  j["edges"] = std::move(edges);
  j["r"] = to_std_vector(r);
  return j;
}

namespace {

Eigen::VectorXd coeff_vector(const nlohmann::json& j, const char* key, int n) {
  Eigen::VectorXd v = vector_from_json(require_field(j, key), key);
  if (v.size() != n)
    throw SchemaError(std::string("\"") + key + "\" must have length " +
                      std::to_string(n));
  return v;
}

Eigen::VectorXd squeezing_vector(const nlohmann::json& j, int len,
                                 const Eigen::VectorXd& default_r) {
  if (j.contains("r")) {
    Eigen::VectorXd r = vector_from_json(j.at("r"), "r");
    if (r.size() != len)
      throw SchemaError("\"r\" must have length " + std::to_string(len));
    return r;
  }
  if (default_r.size() != len)
    throw SchemaError("graph \"r\" must have length " + std::to_string(len) +
                      " when params omit \"r\"");
  return default_r;
}

}  // namespace

CpvtcParams cpvtc_params_from_json(const nlohmann::json& j, int n,
                                   const Eigen::VectorXd& default_r) {
  if (!j.is_object()) throw SchemaError("params must be a JSON object");
  try {
    return CpvtcParams::validated(coeff_vector(j, "a", n), coeff_vector(j, "b", n),
                                  coeff_vector(j, "c", n),
                                  squeezing_vector(j, n, default_r));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

QpvtqParams qpvtq_params_from_json(const nlohmann::json& j, int n,
                                   const Eigen::VectorXd& default_r) {
  if (!j.is_object()) throw SchemaError("params must be a JSON object");
  try {
    return QpvtqParams::validated(
        coeff_vector(j, "a", n), coeff_vector(j, "b", n),
        coeff_vector(j, "a_prime", n), coeff_vector(j, "b_prime", n),
        squeezing_vector(j, n + 1, default_r));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

CpubcParams cpubc_params_from_json(const nlohmann::json& j, int n,
                                   const Eigen::VectorXd& default_r) {
  QpvtqParams q = qpvtq_params_from_json(j, n, default_r);
  return CpubcParams::validated(std::move(q.a), std::move(q.b), std::move(q.ap),
                                std::move(q.bp), std::move(q.r));
}

SecretQumode secret_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("secret must be a JSON object");
  try {
    return SecretQumode::validated(
        require_number(require_field(j, "var_x"), "\"var_x\""),
        require_number(require_field(j, "var_p"), "\"var_p\""),
        j.contains("mean_x") ? require_number(j.at("mean_x"), "\"mean_x\"") : 0.0,
        j.contains("mean_p") ? require_number(j.at("mean_p"), "\"mean_p\"") : 0.0);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

namespace {

nlohmann::ordered_json certificate_to_json(const RankCertificate& c) {
  nlohmann::ordered_json j;
  j["rank"] = c.rank;
  j["rank_augmented"] = c.rank_augmented;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  return j;
}

std::vector<int> one_based(const std::vector<int>& subset) {
  std::vector<int> out;
  out.reserve(subset.size());
  for (int j : subset) out.push_back(j + 1);
  return out;
}

nlohmann::ordered_json subset_record_to_json(const SubsetRecord& rec,
                                             Scheme scheme) {
  nlohmann::ordered_json j;
  j["subset"] = one_based(rec.subset);
  j["feasible"] = rec.feasible;
  if (scheme == Scheme::cpvtc) {
    nlohmann::ordered_json sys;
    sys["feasible"] = rec.position_feasible;
    sys["certificate"] = certificate_to_json(rec.position_certificate);
    sys["solution_bnorm_sq"] = rec.position_bnorm_sq;
    j["system"] = std::move(sys);
  } else {
    nlohmann::ordered_json pos, mom;
    pos["feasible"] = rec.position_feasible;
    pos["certificate"] = certificate_to_json(rec.position_certificate);
    pos["solution_bnorm_sq"] = rec.position_bnorm_sq;
    mom["feasible"] = rec.momentum_feasible;
    mom["certificate"] = certificate_to_json(rec.momentum_certificate);
    mom["solution_bnorm_sq"] = rec.momentum_bnorm_sq;
    j["position"] = std::move(pos);
    j["momentum"] = std::move(mom);
  }
  return j;
}

}  // namespace

nlohmann::ordered_json verification_to_json(const VerificationReport& report,
                                            Scheme scheme) {
  nlohmann::ordered_json j;
  j["pass"] = report.pass;
  nlohmann::ordered_json ks = nlohmann::ordered_json::array();
  for (const auto& rec : report.k_subsets)
    ks.push_back(subset_record_to_json(rec, scheme));
  j["k_subsets"] = std::move(ks);
  nlohmann::ordered_json kms = nlohmann::ordered_json::array();
  for (const auto& rec : report.km1_subsets)
    kms.push_back(subset_record_to_json(rec, scheme));
  j["km1_subsets"] = std::move(kms);
  if (scheme == Scheme::qpvtq) {
    nlohmann::ordered_json exs = nlohmann::ordered_json::array();
    for (const auto& ex : report.exclusivity) {
      nlohmann::ordered_json e;
      e["group"] = one_based(ex.group);
      e["group_feasible"] = ex.group_feasible;
      e["complement_excluded"] = ex.complement_excluded;
      e["cross_case_impossible"] = ex.cross_case_impossible;
      e["pass"] = ex.pass;
      exs.push_back(std::move(e));
    }
    j["exclusivity"] = std::move(exs);
  }
  return j;
}

nlohmann::ordered_json design_to_json(const CertifiedDesign& certified) {
  const ThresholdDesign& d = certified.design;
  nlohmann::ordered_json j;
  j["scheme"] = to_string(d.scheme);
  j["k"] = d.k;
  j["n"] = d.n;
  j["graph"] = graph_to_json(d.graph,
                             Eigen::VectorXd::Zero(d.graph.n_modes));
  if (d.scheme == Scheme::cpvtc) j["c"] = to_std_vector(d.c);
  j["verification"] = verification_to_json(certified.report, d.scheme);
  return j;
}

ThresholdDesign design_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("design must be a JSON object");
  ThresholdDesign d;
  std::string scheme = require_field(j, "scheme").get<std::string>();
  try {
    d.scheme = scheme_from_string(scheme);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  d.k = require_int(require_field(j, "k"), "\"k\"");
  d.n = require_int(require_field(j, "n"), "\"n\"");
  GraphInput g = graph_from_json(require_field(j, "graph"));
  d.graph = std::move(g.spec);
  if (d.scheme == Scheme::cpvtc) {
    d.c = vector_from_json(require_field(j, "c"), "c");
    if (d.c.size() != d.n) throw SchemaError("\"c\" must have length n");
  }
  const int expected = d.n + (d.scheme == Scheme::cpvtc ? 0 : 1);
  if (d.graph.n_modes != expected)
    throw SchemaError("graph mode count does not match the design");
  if (d.k < 1 || d.n < d.k || d.n >= 2 * d.k)
    throw SchemaError("design requires n/2 < k <= n");
  return d;
}

std::vector<int> subset_from_string(const std::string& csv, int n) {
  std::vector<int> subset;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    int v;
    try {
      v = std::stoi(token);
    } catch (const std::exception&) {
      throw SchemaError("subset entries must be integers: " + token);
    }
    if (v < 1 || v > n)
      throw SchemaError("subset index " + std::to_string(v) +
                        " out of range 1.." + std::to_string(n));
    subset.push_back(v - 1);
  }
  if (subset.empty()) throw SchemaError("subset is empty");
  std::sort(subset.begin(), subset.end());
  for (std::size_t i = 1; i < subset.size(); ++i)
    if (subset[i] == subset[i - 1])
      throw SchemaError("duplicate subset index " +
                        std::to_string(subset[i] + 1));
  return subset;
}

}  // namespace cvqss
