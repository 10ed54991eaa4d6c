#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBinary = CVQSS_BINARY_PATH;
const std::string kDir = CVQSS_TEST_DIR;

std::string path_in_dir(const std::string& name) { return kDir + "/" + name; }

int run(const std::string& args) {
  fs::create_directories(kDir);
  std::string cmd = kBinary + " " + args + " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

void write_file(const std::string& path, const std::string& body) {
  fs::create_directories(kDir);
  std::ofstream f(path);
  REQUIRE(f.good());
  f << body;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string chain_graph() {
  std::string p = path_in_dir("chain.json");
  write_file(p, R"({"n": 2, "edges": [[1,2,1.0]], "r": [1.0, 1.0]})");
  return p;
}

std::string ladder_graph() {
  std::string p = path_in_dir("ladder.json");
  write_file(p, R"({"n": 3, "edges": [[1,2,1],[1,3,2],[2,3,1]], "r": [1,1,1]})");
  return p;
}

std::string ladder_params() {
  std::string p = path_in_dir("ladder_params.json");
  write_file(p,
             R"({"a": [0.5,-0.25,0], "b": [0.25,0.25,0], "c": [1,2,3], "gamma": 2.0})");
  return p;
}

std::string chain_qparams() {
  std::string p = path_in_dir("chain_qparams.json");
  write_file(p, R"({"a": [0], "b": [-1], "a_prime": [1], "b_prime": [0]})");
  return p;
}

std::string chain_pub_params() {
  std::string p = path_in_dir("chain_pub.json");
  write_file(p, R"({"a": [0], "b": [1], "a_prime": [1], "b_prime": [0]})");
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("binary exists") { REQUIRE(fs::exists(kBinary)); }

TEST_CASE("stats writes a report and exits 0") {
  std::string out = path_in_dir("stats.json");
  int rc = run("cpvtc stats --graph " + ladder_graph() + " --params " +
               ladder_params() + " --out " + out);
  CHECK(rc == 0);
  json rep = json::parse(read_file(out));
  CHECK(rep.at("scheme") == "cpvtc");
  CHECK(rep.at("command") == "stats");
  CHECK(std::abs(rep.at("bias_slope").get<double>() + 0.25) < 1e-12);
}

TEST_CASE("csv format flattens the report") {
  std::string out = path_in_dir("stats.csv");
  int rc = run("cpvtc stats --graph " + ladder_graph() + " --params " +
               ladder_params() + " --format csv --out " + out);
  CHECK(rc == 0);
  std::string body = read_file(out);
  CHECK(body.rfind("key,value\n", 0) == 0);
  CHECK(body.find("variance,") != std::string::npos);
}

TEST_CASE("schema problems exit 2") {
  std::string bad = path_in_dir("bad.json");
  write_file(bad, "{ not json");
  CHECK(run("cpvtc stats --graph " + bad + " --params " + ladder_params()) == 2);
  CHECK(run("cpvtc stats --graph " + path_in_dir("missing.json") +
            " --params " + ladder_params()) == 2);
  CHECK(run("cpvtc stats --params " + ladder_params()) == 2);  // no --graph
  CHECK(run("cpvtc solve --graph " + ladder_graph() + " --params " +
            ladder_params() + " --subset 0,9") == 2);
  CHECK(run("threshold design --scheme bogus --k 2 --n 3") == 2);
  CHECK(run("qpvtq simulate --graph " + chain_graph() + " --params " +
            chain_qparams() + " --seed 1 --secret not-json") == 2);
}

TEST_CASE("simulate is byte-identical for a fixed seed") {
  std::string a = path_in_dir("sim_a.json"), b = path_in_dir("sim_b.json");
  std::string base = "cpvtc simulate --graph " + ladder_graph() + " --params " +
                     ladder_params() + " --shots 20000 --seed 31 --out ";
  CHECK(run(base + a) == 0);
  CHECK(run(base + b) == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(json::parse(read_file(a)).at("pass") == true);
}

TEST_CASE("teleportation simulate passes and reports fidelity") {
  std::string out = path_in_dir("qsim.json");
  int rc = run("qpvtq simulate --graph " + chain_graph() + " --params " +
               chain_qparams() +
               " --secret '{\"var_x\":1,\"var_p\":1}'"
               " --shots 20000 --seed 8 --out " +
               out);
  CHECK(rc == 0);
  json rep = json::parse(read_file(out));
  CHECK(rep.at("pass") == true);
  CHECK(rep.at("fidelity").at("analytic").get<double>() > 0.9);
}

TEST_CASE("infeasible solves still exit 0 and say so") {
  std::string disconnected = path_in_dir("disc.json");
  write_file(disconnected, R"({"n": 2, "edges": []})");
  std::string out = path_in_dir("solve_disc.json");
  int rc = run("qpvtq solve --graph " + disconnected + " --out " + out);
  CHECK(rc == 0);
  json rep = json::parse(read_file(out));
  CHECK(rep.at("feasible") == false);
  CHECK(rep.at("position").at("feasible") == false);
}

TEST_CASE("duality reports equivalence") {
  std::string out = path_in_dir("duality.json");
  int rc = run("cpubc duality --graph " + chain_graph() + " --out " + out);
  CHECK(rc == 0);
  json rep = json::parse(read_file(out));
  CHECK(rep.at("equivalent") == true);
}

TEST_CASE("key agreement writes the round stream") {
  std::string keys = path_in_dir("keys.csv");
  std::string rep_path = path_in_dir("keys_report.json");
  int rc = run("cpubc simulate --graph " + chain_graph() + " --params " +
               chain_pub_params() + " --rounds 2000 --seed 5 --out " + keys +
               " --report " + rep_path);
  CHECK(rc == 0);
  std::string body = read_file(keys);
  CHECK(body.rfind("round,dealer_choice,players_choice,kept,dealer_key,"
                   "players_estimate,error\n",
                   0) == 0);
  long lines = std::count(body.begin(), body.end(), '\n');
  CHECK(lines == 2001);
  json rep = json::parse(read_file(rep_path));
  CHECK(rep.at("keep_rate_ok") == true);
}

TEST_CASE("design then verify round trip") {
  std::string d = path_in_dir("design.json");
  CHECK(run("threshold design --scheme qpvtq --k 2 --n 3 --strategy random"
            " --seed 42 --out " + d) == 0);
  CHECK(run("threshold verify " + d) == 0);
  json dj = json::parse(read_file(d));
  CHECK(dj.at("verification").at("pass") == true);
}

TEST_CASE("impossible design regimes exit 1") {
  CHECK(run("threshold design --scheme qpvtq --k 3 --n 3 --seed 1") == 1);
}

TEST_CASE("sweep aggregates runs into one csv") {
  json config;
  config["runs"] = json::array();
  json run1;
  run1["id"] = "classical";
  run1["scheme"] = "cpvtc";
  run1["graph"] = json::parse(read_file(ladder_graph()));
  run1["params"] = json::parse(read_file(ladder_params()));
  run1["gamma"] = 1.0;
  run1["shots"] = 20000;
  run1["seed"] = 4;
  json run2;
  run2["id"] = "quantum";
  run2["scheme"] = "qpvtq";
  run2["graph"] = json::parse(read_file(chain_graph()));
  run2["params"] = json::parse(read_file(chain_qparams()));
  run2["shots"] = 20000;
  run2["seed"] = 4;
  config["runs"] = json::array({run1, run2});
  std::string cfg = path_in_dir("sweep.json");
  write_file(cfg, config.dump());
  std::string out = path_in_dir("sweep.csv");
  CHECK(run("sweep " + cfg + " --out " + out) == 0);
  std::string body = read_file(out);
  CHECK(body.rfind("id,scheme,metric,", 0) == 0);
  CHECK(std::count(body.begin(), body.end(), '\n') == 4);  // header + 1 + 2
  CHECK(body.find("classical,cpvtc,") != std::string::npos);
  CHECK(body.find("quantum,qpvtq,") != std::string::npos);

  json dup = config;
  dup["runs"][1]["id"] = "classical";
  std::string dup_cfg = path_in_dir("sweep_dup.json");
  write_file(dup_cfg, dup.dump());
  CHECK(run("sweep " + dup_cfg + " --out " + path_in_dir("dup.csv")) == 2);
}

TEST_CASE("sweep r ladders fan out into suffixed rows") {
  json config;
  json run1;
  run1["id"] = "ladder";
  run1["scheme"] = "cpubc";
  run1["graph"] = json::parse(read_file(chain_graph()));
  run1["params"] = json::parse(read_file(chain_pub_params()));
  run1["rounds"] = 4000;
  run1["seed"] = 12;
  run1["r_ladder"] = json::array({0.0, 1.0});
  config["runs"] = json::array({run1});
  std::string cfg = path_in_dir("sweep_ladder.json");
  write_file(cfg, config.dump());
  std::string out = path_in_dir("sweep_ladder.csv");
  CHECK(run("sweep " + cfg + " --out " + out) == 0);
  std::string body = read_file(out);
  CHECK(body.find("ladder@r=0,") != std::string::npos);
  CHECK(body.find("ladder@r=1,") != std::string::npos);
  // keep_rate + two quadratures per ladder point.
  CHECK(std::count(body.begin(), body.end(), '\n') == 7);
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help") == 0);
  CHECK(run("cpvtc --help") == 0);
}

}  // TEST_SUITE
