#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using hgcs::cli::run_cli;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hgcs_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

double num(const std::string& s) { return std::stod(s); }

}  // namespace

TEST_CASE("eval") {
  const auto r = run({"eval", "--params", "/", "--x", "0,1"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"x", "F", "C", "S", "identity_residual"});
  CHECK(rows[1] == std::vector<std::string>{"0", "1", "1", "0", "0"});
  CHECK(num(rows[2][1]) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(num(rows[2][2]) == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(num(rows[2][3]) == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(std::fabs(num(rows[2][4])) <= 1e-15);

  CHECK(run({"eval", "--params", "1,x/2", "--x", "0.1"}).code == 2);
  CHECK(run({"eval", "--params", "1//2", "--x", "0.1"}).code == 2);
  CHECK(run({"eval", "--params", "-1/2", "--x", "0.1"}).code == 2);
}

TEST_CASE("grid parsing") {
  const auto r = run({"eval", "--params", "/", "--grid", "0:1:4"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1][0] == "0");
  CHECK(rows[3][0] == "0.5");
  CHECK(rows[5][0] == "1");
  CHECK(run({"eval", "--params", "/", "--grid", "0:1"}).code == 2);
  CHECK(run({"eval", "--params", "/", "--grid", "0:1:-2"}).code == 2);
  CHECK(run({"eval", "--params", "/", "--grid", "a:1:2"}).code == 2);
}

TEST_CASE("row errors do not abort the sweep") {
  const auto r = run({"eval", "--params", "1.5/", "--x", "0.5,1.5,0.25"});
  CHECK(r.code == 3);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].back() == "error");
  CHECK(rows[1].back().empty());
  CHECK_FALSE(rows[2].back().empty());
  CHECK(num(rows[3][1]) == doctest::Approx(std::pow(0.75, -1.5)).epsilon(1e-12));
  // Term cap reached just inside the unit disc.
  CHECK(run({"eval", "--params", "50/", "--x", "0.9999"}).code == 4);
}

TEST_CASE("mandel-scan") {
  const auto r = run({"mandel-scan", "--params", "1.5/", "--x", "0,1e-3,1e-2"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"x", "Q_even", "Q_odd", "N_even", "N_odd"});
  CHECK(num(rows[1][1]) == 1.0);
  CHECK(num(rows[1][2]) == -1.0);
  CHECK(std::fabs(num(rows[2][1]) - 1.0) <= 1e-5);
  CHECK(std::fabs(num(rows[2][2]) + 1.0) <= 1e-5);
  CHECK(std::fabs(num(rows[3][1]) - 1.0) > std::fabs(num(rows[2][1]) - 1.0));

  const auto c = run({"mandel-scan", "--params", "/", "--x", "1"});
  CHECK(num(csv(c.out)[1][1]) == doctest::Approx(1.0 / std::tanh(1.0) - std::tanh(1.0)).epsilon(1e-14));
  CHECK(run({"mandel-scan", "--params", "/"}).code == 2);
}

TEST_CASE("verify-moments") {
  CHECK(run({"verify-moments", "--params", "/", "--nmax", "10", "--tol", "1e-7"}).code == 0);
  const auto bad = run({"verify-moments", "--params", "0.5/"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("a > 1") != std::string::npos);
  CHECK(run({"verify-moments", "--params", "1.2/0.8", "--nmax", "8", "--tol", "1e-6"}).code == 0);
  CHECK(run({"verify-moments", "--params", "1,2,3/4,5"}).code == 2);
  CHECK(run({"verify-moments", "--params", "2.5/", "--nmax", "5", "--tol", "1e-30"}).code == 1);

  const auto j = run({"verify-moments", "--params", "2.2,3.1/1.4", "--nmax", "8", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = json::parse(j.out);
  CHECK(doc["command"] == "verify-moments");
  CHECK(doc["params"]["a"].size() == 2);
  CHECK(doc["results"].size() == 9);
  CHECK(doc["max_rel_error"].get<double>() <= 1e-7);
  CHECK(doc["results"][3]["n"] == 3);

  const auto even = run({"verify-moments", "--params", "/", "--nmax", "4", "--parity", "even"});
  const auto rows = csv(even.out);
  CHECK(rows[5][1] == "8");
  CHECK(rows[5][2] == "40320");
}

TEST_CASE("sample") {
  const auto p1 = temp_path("s1.csv"), p2 = temp_path("s2.csv");
  const auto a = run({"sample", "--params", "/", "--parity", "even", "--x", "1", "--samples", "5000", "--seed", "11",
                      "--out", p1.string()});
  const auto b = run({"sample", "--params", "/", "--parity", "even", "--x", "1", "--samples", "5000", "--seed", "11",
                      "--out", p2.string()});
  REQUIRE(a.code == 0);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(a.out == b.out);
  CHECK(slurp(p1).size() > 5000);
  const auto summary = csv(a.out);
  CHECK(summary[0][6] == "parity_violations");
  CHECK(summary[1][6] == "0");
  const auto c = run({"sample", "--params", "/", "--parity", "even", "--x", "1", "--samples", "5000", "--seed", "12",
                      "--out", p2.string()});
  CHECK(slurp(p1) != slurp(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  CHECK(run({"sample", "--params", "/", "--parity", "even", "--x", "1,2"}).code == 2);
  CHECK(run({"sample", "--params", "/", "--parity", "odd", "--x", "0"}).code == 3);
}

TEST_CASE("thermal") {
  const auto r = run({"thermal", "--beta", "0.69314718055994531", "--nmax", "4"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"r", "moment", "factorial_oracle", "rel_error", "raw_moment", "Z"});
  CHECK(num(rows[1][5]) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(num(rows[5][1]) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(num(rows[5][3]) <= 1e-12);
  const auto one = run({"thermal", "--beta", "1", "--omega", "1", "--nmax", "1", "--format", "json"});
  const auto doc = json::parse(one.out);
  CHECK(doc["results"][1]["moment"].get<double>() == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-15));
  CHECK(doc["mean_occupation"].get<double>() == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-15));
  CHECK(run({"thermal", "--beta", "-1"}).code == 2);
}

TEST_CASE("metric") {
  const auto r = run({"metric", "--params", "1.5/", "--x", "1e-4,0.3,0.5"});
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"x", "density_even", "density_odd", "fd_deviation"});
  // density_even / density_odd -> 3a/(a+2) at small x
  CHECK(num(rows[1][1]) / num(rows[1][2]) == doctest::Approx(3 * 1.5 / 3.5).epsilon(1e-3));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(num(rows[i][3]) <= 1e-6);
  CHECK(run({"metric", "--params", "1.5/", "--x", "0.5,1.0"}).code == 3);
  CHECK(run({"metric", "--params", "1.5/2", "--x", "0.5"}).code == 2);
  const auto weak = run({"metric", "--params", "0.7/", "--x", "0.5"});
  CHECK(weak.code == 0);
  CHECK(weak.err.find("warning") != std::string::npos);
}

TEST_CASE("config file with flag overrides") {
  const auto cfg = temp_path("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"params": "1.5/", "x": [0.2, 0.4], "format": "json"})";
  }
  const auto r = run({"mandel-scan", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["results"].size() == 2);
  CHECK(doc["params"]["text"] == "1.5/");

  const auto o = run({"mandel-scan", "--config", cfg.string(), "--format", "csv", "--params", "2/"});
  REQUIRE(o.code == 0);
  CHECK(o.out.rfind("x,Q_even", 0) == 0);
  {
    std::ofstream f(cfg);
    f << R"({"params": "1.5/", "colour": 3})";
  }
  CHECK(run({"mandel-scan", "--config", cfg.string(), "--x", "0.1"}).code == 2);
  {
    std::ofstream f(cfg);
    f << R"({"command": "eval", "x": [0.1]})";
  }
  CHECK(run({"mandel-scan", "--config", cfg.string()}).code == 2);
  std::filesystem::remove(cfg);
  CHECK(run({"mandel-scan", "--config", "/nonexistent/cfg.json"}).code == 2);
}

TEST_CASE("output file, determinism and parser errors") {
  const auto path = temp_path("out.json");
  const std::vector<std::string> args{"metric", "--params", "2/", "--grid", "0.1:0.9:8", "--format", "json",
                                      "--out", path.string()};
  REQUIRE(run(args).code == 0);
  const std::string first = slurp(path);
  REQUIRE(run(args).code == 0);
  CHECK(slurp(path) == first);
  CHECK(json::parse(first)["results"].size() == 9);
  std::filesystem::remove(path);

  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"eval", "--bogus"}).code == 2);
  CHECK(run({"eval", "--x", "0.1", "--format", "xml"}).code == 2);
}
