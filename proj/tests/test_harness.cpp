#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "chainopt/harness.hpp"
#include "chainopt/stats.hpp"

using namespace chainopt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path(std::string("/tmp/chainopt_test_") + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("log-log fit") {
  SUBCASE("noiseless quadratic") {
    std::vector<std::pair<double, double>> rows;
    for (double d : {0.1, 0.2, 0.4, 0.8}) rows.emplace_back(d, d * d);
    FitResult f = fit_scaling_exponent(rows);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("noiseless cubic with a prefactor") {
    std::vector<std::pair<double, double>> rows;
    for (double d : {0.1, 0.2, 0.4}) rows.emplace_back(d, 3.0 * d * d * d);
    FitResult f = fit_scaling_exponent(rows);
    CHECK(f.slope == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("nonpositive rows are dropped; too few rows is an error") {
    std::vector<std::pair<double, double>> rows = {
        {0.0, 0.0}, {0.1, 0.01}, {0.2, 0.04}};
    CHECK_THROWS_AS(fit_scaling_exponent(rows), std::invalid_argument);
  }
}

TEST_CASE("solve subcommand prints value and set") {
  TempFile f("inst.txt");
  {
    std::ofstream out(f.path);
    out << "3\n0.3 0.4\n";
  }
  CHECK(dispatch({"solve", f.path}) == 0);
}

TEST_CASE("unknown command fails with usage") {
  CHECK(dispatch({"frobnicate"}) != 0);
}

TEST_CASE("sweep-theta emits a deterministic self-describing csv") {
  TempFile f1("sweep1.csv"), f2("sweep2.csv");
  std::vector<std::string> args = {
      "sweep-theta", "--dist", "exp:1",   "--n",    "2000", "--reps", "6",
      "--theta",     "0.05,0.1", "--seed", "42",   "--jobs", "2",
      "--out",       f1.path};
  REQUIRE(dispatch(args) == 0);
  args.back() = f2.path;
  args[args.size() - 3] = "1";  // different job count
  REQUIRE(dispatch(args) == 0);
  std::string a = read_file(f1.path), b = read_file(f2.path);
  CHECK(a == b);
  CHECK(a.find("# chainopt") == 0);
  CHECK(a.find("seed=42") != std::string::npos);
  CHECK(a.find("theta,mean_delta") != std::string::npos);
}

TEST_CASE("config file mirrors flags and flags win") {
  TempFile cfg("sweep.cfg"), out1("cfg1.csv"), out2("cfg2.csv");
  {
    std::ofstream out(cfg.path);
    out << "dist=exp:1\nn=1500\nreps=5\ntheta=0.05\nseed=9\n";
  }
  REQUIRE(dispatch({"sweep-theta", "--config", cfg.path, "--out", out1.path}) ==
          0);
  REQUIRE(dispatch({"sweep-theta", "--config", cfg.path, "--seed", "9",
                    "--out", out2.path}) == 0);
  std::string a = read_file(out1.path), b = read_file(out2.path);
  CHECK(a == b);
  CHECK(a.find("n=1500") != std::string::npos);
}

TEST_CASE("nk subcommand writes the sweep table") {
  TempFile f("nk.csv");
  REQUIRE(dispatch({"nk", "--K", "3", "--N", "300", "--reps", "10", "--theta",
                    "0.004,0.016", "--seed", "3", "--out", f.path}) == 0);
  std::string body = read_file(f.path);
  CHECK(body.find("theta,delta,eps,eps_over_delta_sq,mean_L") !=
        std::string::npos);
  CHECK(body.find("c_hat=") != std::string::npos);
}

TEST_CASE("eps-delta subcommand") {
  TempFile f("epsd.csv");
  REQUIRE(dispatch({"eps-delta", "--dist", "exp:1", "--n", "300", "--reps",
                    "4", "--delta", "0.05,0.1", "--seed", "8", "--out",
                    f.path}) == 0);
  std::string body = read_file(f.path);
  CHECK(body.find("delta,mean_eps") != std::string::npos);
}

TEST_CASE("coupling subcommand emits json lines") {
  TempFile f("coupling.jsonl");
  REQUIRE(dispatch({"coupling", "--dist", "exp:1", "--theta", "0.05",
                    "--samples", "200", "--seed", "5", "--out", f.path}) == 0);
  std::string body = read_file(f.path);
  CHECK(body.find("{\"theta\":0.05,\"sL\":") != std::string::npos);
  CHECK(body.find("\"q_integer\":") != std::string::npos);
}

TEST_CASE("invalid distribution surfaces as a clean error") {
  TempFile f("bad.csv");
  CHECK(dispatch({"sweep-theta", "--dist", "uniform:0.6:2", "--n", "100",
                  "--reps", "2", "--theta", "0.05", "--out", f.path}) != 0);
}
