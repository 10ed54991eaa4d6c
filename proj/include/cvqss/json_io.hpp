#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cvqss/cpubc.hpp"
#include "cvqss/cpvtc.hpp"
#include "cvqss/qpvtq.hpp"
#include "cvqss/threshold.hpp"

namespace cvqss {

// Malformed or missing configuration data; the CLI maps this to exit code 2.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph files: {"n": int, "edges": [[i, j, gain], ...], "r": [real, ...]}
// with 1-based mode indices. "r" may be omitted (defaults to zeros).
struct GraphInput {
  GraphSpec spec;
  Eigen::VectorXd r;
};

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

GraphInput graph_from_json(const nlohmann::json& j);
nlohmann::ordered_json graph_to_json(const GraphSpec& spec,
                                     const Eigen::VectorXd& r);

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* field);
std::vector<double> to_std_vector(const Eigen::VectorXd& v);

// Parameter files; a missing "r" falls back to the graph file's vector.
CpvtcParams cpvtc_params_from_json(const nlohmann::json& j, int n,
                                   const Eigen::VectorXd& default_r);
QpvtqParams qpvtq_params_from_json(const nlohmann::json& j, int n,
                                   const Eigen::VectorXd& default_r);
CpubcParams cpubc_params_from_json(const nlohmann::json& j, int n,
                                   const Eigen::VectorXd& default_r);

SecretQumode secret_from_json(const nlohmann::json& j);

nlohmann::ordered_json design_to_json(const CertifiedDesign& certified);
nlohmann::ordered_json verification_to_json(const VerificationReport& report,
                                            Scheme scheme);
ThresholdDesign design_from_json(const nlohmann::json& j);

std::vector<int> subset_from_string(const std::string& csv, int n);

}  // namespace cvqss
