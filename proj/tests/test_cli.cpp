#include <doctest.h>

#include "dshell/cli.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace dshell;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "dshell_cli_test";
  std::filesystem::create_directories(p);
  return p;
}

} // namespace

TEST_CASE("format12 keeps twelve significant digits") {
  CHECK(format12(std::sqrt(5.0)) == "2.2360679775");
  CHECK(format12(1.0 / 3.0) == "0.333333333333");
  CHECK(format12(-0.0) == "0");
  CHECK(format12(NAN) == "nan");
}

TEST_CASE("unperturbed subcommand") {
  auto r = run({"unperturbed", "--kappa", "-1", "--omega", "1", "--nmax", "2"});
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"n", "sign", "E0_over_m"});
  CHECK(rows[1][2] == "-3");
  CHECK(rows[2][2] == "-2.2360679775");
  CHECK(rows[3][2] == "1");
  CHECK(rows[4][2] == "2.2360679775");
  CHECK(rows[5][2] == "3");

  r = run({"unperturbed", "--kappa", "1", "--omega", "1", "--nmax", "0"});
  REQUIRE(r.code == 0);
  rows = csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][2] == "-2.64575131106");
  CHECK(rows[2][2] == "2.64575131106");

  r = run({"unperturbed", "--kappa", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("kappa") != std::string::npos);
}

TEST_CASE("invalid input exits with code 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"unperturbed", "--format", "xml"}).code == 2);
  CHECK(run({"unperturbed", "--omega", "-1"}).code == 2);
  CHECK(run({"sweep-lambda", "--emin", "2", "--emax", "1"}).code == 2);
  CHECK(run({"sweep-radius", "--lambda", "0", "--points", "3"}).code == 2);
  CHECK(run({"sweep-radius", "--rmin", "2", "--rmax", "1"}).code == 2);
  CHECK(run({"density", "--lambda", "3.14159265358979"}).code == 2);
  CHECK(run({"density", "--radius", "1", "--radius", "2"}).code == 2);
  CHECK(run({"density", "--level", "99"}).code == 2);
  CHECK(run({"verify", "--check", "nothing"}).code == 2);
}

TEST_CASE("sweep-lambda: transparent column and deterministic output") {
  const std::vector<std::string> args{"sweep-lambda", "--kappa", "-1", "--radius", "1",
                                      "--points",     "11",      "--emin", "-4", "--emax", "4"};
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto rows = csv(a.out);
  CHECK(rows[0] == std::vector<std::string>{"kappa", "mR", "lambda", "branch_id", "E_over_m",
                                            "nearest_n", "residual"});
  std::vector<std::string> at_zero;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][2] == "0")
      at_zero.push_back(rows[i][4]);
  // the window (-4, 4) holds -3.6056, -3, -2.2361, 1, 2.2361, 3, 3.6056
  CHECK(at_zero == std::vector<std::string>{"-3.60555127546", "-3", "-2.2360679775", "1",
                                            "2.2360679775", "3", "3.60555127546"});
}

TEST_CASE("json mirrors the csv records") {
  const std::vector<std::string> base{"sweep-radius", "--points", "4", "--emin", "-3", "--emax", "3"};
  auto c = run(base);
  auto args = base;
  args.insert(args.end(), {"--format", "json"});
  auto j = run(args);
  REQUIRE(c.code == 0);
  REQUIRE(j.code == 0);
  const auto rows = csv(c.out);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["command"] == "sweep-radius");
  REQUIRE(doc["records"].size() == rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto &rec = doc["records"][i - 1];
    CHECK(format12(rec["mR"].get<double>()) == rows[i][0]);
    CHECK(rec["branch_id"].get<long>() == std::stol(rows[i][1]));
    CHECK(format12(rec["E_over_m"].get<double>()) == rows[i][2]);
    if (rows[i][4] == "nan")
      CHECK(rec["gap_to_next"].is_null());
    else
      CHECK(format12(rec["gap_to_next"].get<double>()) == rows[i][4]);
  }
}

TEST_CASE("density subcommand writes normalized profiles") {
  const auto dir = temp_dir();
  const auto path = (dir / "dens.csv").string();
  auto r = run({"density", "--radius", "0.5", "--radius", "2", "--level", "3", "--out", path});
  REQUIRE(r.code == 0);
  for (const char *name : {"dens_R0.5_L3.csv", "dens_R2_L3.csv"}) {
    std::ifstream f(dir / name);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    const auto rows = csv(ss.str());
    CHECK(rows[0] == std::vector<std::string>{"z", "density", "side_flag"});
    double integral = 0.0;
    int minus = 0, plus = 0;
    for (std::size_t i = 2; i < rows.size(); ++i) {
      const double z0 = std::stod(rows[i - 1][0]), z1 = std::stod(rows[i][0]);
      integral += 0.5 * (z1 - z0) * (std::stod(rows[i - 1][1]) + std::stod(rows[i][1]));
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      minus += rows[i][2] == "-1";
      plus += rows[i][2] == "1";
    }
    INFO(name);
    CHECK(std::abs(integral - 1.0) < 1e-6);
    CHECK(minus == 1);
    CHECK(plus == 1);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify subcommand") {
  auto r = run({"verify"});
  CHECK(r.code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
  r = run({"verify", "--check", "jump", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["passed"] == true);
  REQUIRE(doc["checks"].size() == 1);
  CHECK(doc["checks"][0]["name"] == "jump");
  CHECK(doc["checks"][0]["samples"] == 20);
}

TEST_CASE("default lambda sweep fits its runtime budget") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run({"sweep-lambda"});
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(r.code == 0);
  CHECK(s < 60.0);
  // four panels
  const auto rows = csv(r.out);
  std::set<std::string> panels;
  for (std::size_t i = 1; i < rows.size(); ++i)
    panels.insert(rows[i][0] + "/" + rows[i][1]);
  CHECK(panels == std::set<std::string>{"-1/0.3", "-1/1", "1/0.3", "1/1"});
}
