#include <cstdio>
#include <fstream>

#include "doctest.h"

#include "cvqss/json_io.hpp"

using namespace cvqss;
using nlohmann::json;

TEST_SUITE("json_io") {

TEST_CASE("well-formed graphs parse with 1-based edges") {
  json j = json::parse(R"({"n": 3, "edges": [[1,2,0.5],[2,3,-1.25]], "r": [0.1,0.2,0.3]})");
  GraphInput g = graph_from_json(j);
  CHECK(g.spec.n_modes == 3);
  CHECK(g.spec.G(0, 1) == 0.5);
  CHECK(g.spec.G(1, 0) == 0.5);
  CHECK(g.spec.G(1, 2) == -1.25);
  CHECK(g.spec.G(0, 2) == 0.0);
  CHECK(g.r[2] == 0.3);
}

TEST_CASE("a missing r defaults to no squeezing") {
  json j = json::parse(R"({"n": 2, "edges": []})");
  GraphInput g = graph_from_json(j);
  CHECK(g.r.size() == 2);
  CHECK(g.r.norm() == 0.0);
}

TEST_CASE("graph schema violations throw SchemaError") {
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"edges": []})")), SchemaError);
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"n": 0, "edges": []})")),
                  SchemaError);
  CHECK_THROWS_AS(
      graph_from_json(json::parse(R"({"n": 2, "edges": [[1,1,0.5]]})")),
      SchemaError);
  CHECK_THROWS_AS(
      graph_from_json(json::parse(R"({"n": 2, "edges": [[1,3,0.5]]})")),
      SchemaError);
  CHECK_THROWS_AS(
      graph_from_json(json::parse(R"({"n": 2, "edges": [[0,1,0.5]]})")),
      SchemaError);
  CHECK_THROWS_AS(
      graph_from_json(
          json::parse(R"({"n": 2, "edges": [[1,2,0.5],[2,1,0.5]]})")),
      SchemaError);
  CHECK_THROWS_AS(
      graph_from_json(json::parse(R"({"n": 2, "edges": [], "r": [0.1]})")),
      SchemaError);
  CHECK_THROWS_AS(
      graph_from_json(json::parse(R"({"n": 2, "edges": [[1,2]]})")),
      SchemaError);
}

TEST_CASE("graphs round-trip through their JSON form") {
  json j = json::parse(
      R"({"n": 4, "edges": [[1,2,0.75],[1,4,-2.0],[3,4,1.5]], "r": [1,2,3,4]})");
  GraphInput g = graph_from_json(j);
  nlohmann::ordered_json out = graph_to_json(g.spec, g.r);
  GraphInput back = graph_from_json(out);
  CHECK((back.spec.G - g.spec.G).norm() == 0.0);
  CHECK((back.r - g.r).norm() == 0.0);
}

TEST_CASE("parameter files need every coefficient vector") {
  Eigen::VectorXd default_r = Eigen::VectorXd::Zero(2);
  json good = json::parse(R"({"a": [1,0], "b": [0,1], "c": [1,1]})");
  CpvtcParams p = cpvtc_params_from_json(good, 2, default_r);
  CHECK(p.a[0] == 1.0);
  CHECK(p.r.norm() == 0.0);

  CHECK_THROWS_AS(cpvtc_params_from_json(
                      json::parse(R"({"a": [1,0], "b": [0,1]})"), 2, default_r),
                  SchemaError);
  CHECK_THROWS_AS(cpvtc_params_from_json(
                      json::parse(R"({"a": [1], "b": [0,1], "c": [1,1]})"), 2,
                      default_r),
                  SchemaError);
  CHECK_THROWS_AS(cpvtc_params_from_json(json::parse("[]"), 2, default_r),
                  SchemaError);
}

TEST_CASE("params r overrides the graph default") {
  Eigen::VectorXd default_r(2);
  default_r << 9.0, 9.0;
  json j = json::parse(R"({"a": [1,0], "b": [0,1], "c": [1,1], "r": [0.5,0.25]})");
  CpvtcParams p = cpvtc_params_from_json(j, 2, default_r);
  CHECK(p.r[0] == 0.5);
  CHECK(p.r[1] == 0.25);
}

TEST_CASE("quantum params cover players plus dealer squeezing") {
  Eigen::VectorXd default_r = Eigen::VectorXd::Zero(3);
  json j = json::parse(
      R"({"a": [1,0], "b": [0,1], "a_prime": [0,0], "b_prime": [1,1]})");
  QpvtqParams p = qpvtq_params_from_json(j, 2, default_r);
  CHECK(p.r.size() == 3);
  // Wrong default length with no explicit r is a schema error.
  CHECK_THROWS_AS(qpvtq_params_from_json(j, 2, Eigen::VectorXd::Zero(2)),
                  SchemaError);
}

TEST_CASE("secret qumodes validate the uncertainty relation") {
  SecretQumode s = secret_from_json(json::parse(R"({"var_x": 2, "var_p": 1})"));
  CHECK(s.var_x == 2.0);
  CHECK(s.mean_x == 0.0);
  CHECK_THROWS_AS(secret_from_json(json::parse(R"({"var_x": 0.5, "var_p": 0.5})")),
                  SchemaError);
  CHECK_THROWS_AS(secret_from_json(json::parse(R"({"var_x": 1})")), SchemaError);
}

TEST_CASE("subset strings are 1-based, unique and bounded") {
  CHECK(subset_from_string("1,3,4", 5) == std::vector<int>({0, 2, 3}));
  CHECK(subset_from_string("3,1", 3) == std::vector<int>({0, 2}));
  CHECK_THROWS_AS(subset_from_string("0", 3), SchemaError);
  CHECK_THROWS_AS(subset_from_string("4", 3), SchemaError);
  CHECK_THROWS_AS(subset_from_string("1,1", 3), SchemaError);
  CHECK_THROWS_AS(subset_from_string("", 3), SchemaError);
  CHECK_THROWS_AS(subset_from_string("a,b", 3), SchemaError);
}

TEST_CASE("design JSON rejects shape mismatches") {
  json j = json::parse(R"({
    "scheme": "qpvtq", "k": 2, "n": 3,
    "graph": {"n": 3, "edges": []}
  })");
  // A qpvtq design needs n+1 modes.
  CHECK_THROWS_AS(design_from_json(j), SchemaError);
  j["graph"]["n"] = 4;
  ThresholdDesign d = design_from_json(j);
  CHECK(d.graph.n_modes == 4);
  j["k"] = 1;  // violates n/2 < k
  CHECK_THROWS_AS(design_from_json(j), SchemaError);
}

TEST_CASE("files round-trip on disk") {
  const std::string path = "/tmp/cvqss_json_io_test.json";
  nlohmann::ordered_json j;
  j["n"] = 2;
  j["edges"] = nlohmann::ordered_json::array({{1, 2, 0.5}});
  write_json_file(path, j);
  json loaded = load_json_file(path);
  CHECK(loaded.at("n") == 2);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_json_file(path), SchemaError);

  std::ofstream bad("/tmp/cvqss_bad_test.json");
  bad << "{ not json";
  bad.close();
  CHECK_THROWS_AS(load_json_file("/tmp/cvqss_bad_test.json"), SchemaError);
  std::remove("/tmp/cvqss_bad_test.json");
}

}  // TEST_SUITE
