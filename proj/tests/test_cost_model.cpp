#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "chainopt/cost_model.hpp"
#include "chainopt/stats.hpp"

using namespace chainopt;

TEST_CASE("sampling determinism and parameter validation") {
  auto exp1 = CostDistribution::exponential(1.0);
  auto a = sample_costs(exp1, 3, 42);
  auto b = sample_costs(exp1, 3, 42);
  CHECK(a == b);
  for (double x : a) CHECK(x > 0.0);
  CHECK(sample_costs(exp1, 3, 43) != a);
  CHECK_THROWS_AS(CostDistribution::exponential(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(CostDistribution::uniform(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_costs(exp1, 0, 1), std::invalid_argument);
}

TEST_CASE("law of large numbers for the uniform sampler") {
  auto uni = CostDistribution::uniform(0.0, 2.0);
  auto xs = sample_costs(uni, 1000000, 7);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  CHECK(std::abs(mean - 1.0) < 0.01);
}

TEST_CASE("empirical CDF of samples stays close to G") {
  auto exp1 = CostDistribution::exponential(1.0);
  auto xs = sample_costs(exp1, 1000000, 11);
  double d = ks_distance(xs, [&](double x) { return exp1.cdf(x); });
  CHECK(d < 0.002);
}

TEST_CASE("distribution spec parsing") {
  auto d1 = CostDistribution::parse("exp:2.5");
  CHECK(d1.kind() == DistKind::Exponential);
  CHECK(d1.rate() == 2.5);
  auto d2 = CostDistribution::parse("uniform:0:2");
  CHECK(d2.kind() == DistKind::Uniform);
  CHECK(d2.cdf(1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(CostDistribution::parse("cauchy:1"), std::invalid_argument);
}

TEST_CASE("empirical distribution from a file") {
  std::string path = "/tmp/chainopt_emp_samples.txt";
  {
    std::ofstream out(path);
    out << "1.0\n2.0\n3.0\n";
  }
  auto emp = CostDistribution::parse("empirical:" + path);
  CHECK(emp.kind() == DistKind::Empirical);
  CHECK(emp.cdf(1.5) == doctest::Approx(0.25));
  std::remove(path.c_str());
  CHECK_THROWS_AS(CostDistribution::parse("empirical:/nonexistent/file"),
                  std::invalid_argument);
}

TEST_CASE("empirical distribution interpolation") {
  auto emp = CostDistribution::empirical({1.0, 2.0, 3.0});
  CHECK(emp.cdf(1.0) == 0.0);
  CHECK(emp.cdf(3.0) == 1.0);
  CHECK(emp.cdf(1.5) == doctest::Approx(0.25));
  CHECK(emp.density(1.5) == doctest::Approx(0.5));
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    double x = emp.sample(rng);
    CHECK(x >= 1.0);
    CHECK(x <= 3.0);
  }
}

TEST_CASE("stationary law boundary and closed form") {
  auto exp1 = CostDistribution::exponential(1.0);
  CHECK(stationary_cdf_F(exp1, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stationary_cdf_F(exp1, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stationary_cdf_F(exp1, 0.5) ==
        doctest::Approx((std::exp(0.5) - 1.0) / (std::exp(1.0) - 1.0))
            .epsilon(1e-12));

  SUBCASE("general formula equals exponential closed form on a grid") {
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
      auto d = CostDistribution::exponential(lambda);
      for (int i = 0; i <= 100; ++i) {
        double x = i / 100.0;
        CHECK(std::abs(stationary_cdf_F(d, x) -
                       exponential_stationary_cdf(lambda, x)) < 1e-12);
      }
    }
  }
  SUBCASE("fixed point identity F(x) = S(1-x)(1 - F(1-x))") {
    auto uni = CostDistribution::uniform(0.0, 2.0);
    for (const auto* d :
         std::initializer_list<const CostDistribution*>{&exp1, &uni}) {
      for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        double lhs = stationary_cdf_F(*d, x);
        double rhs = d->survival(1.0 - x) * (1.0 - stationary_cdf_F(*d, 1.0 - x));
        REQUIRE(std::abs(lhs - rhs) < 1e-10);
      }
    }
  }
  SUBCASE("monotone on [0,1]") {
    auto uni = CostDistribution::uniform(0.0, 2.0);
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      double f = stationary_cdf_F(uni, i / 200.0);
      REQUIRE(f >= prev - 1e-14);
      prev = f;
    }
  }
  SUBCASE("degenerate distribution is reported") {
    auto far = CostDistribution::uniform(5.0, 6.0);
    CHECK_THROWS_AS(stationary_cdf_F(far, 0.5), std::runtime_error);
  }
}

TEST_CASE("limit constant: quadrature vs closed form") {
  for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
    auto d = CostDistribution::exponential(lambda);
    CHECK(std::abs(limit_constant_c(d) - exponential_limit_constant(lambda)) <
          1e-6);
  }
  CHECK(exponential_limit_constant(1.0) ==
        doctest::Approx(0.5819767068693265).epsilon(1e-12));
  CHECK(exponential_limit_constant(10.0) ==
        doctest::Approx(0.9000454019910097).epsilon(1e-12));
  // small-rate limit approaches the alternating-set bound 1/2
  CHECK(exponential_limit_constant(1e-4) == doctest::Approx(0.5).epsilon(1e-4));

  SUBCASE("always within [1/2, 1]") {
    for (const auto& d :
         {CostDistribution::exponential(0.3), CostDistribution::exponential(3.0),
          CostDistribution::uniform(0.0, 2.0),
          CostDistribution::uniform(0.2, 1.4)}) {
      double c = limit_constant_c(d);
      CHECK(c >= 0.5);
      CHECK(c <= 1.0);
    }
  }
  SUBCASE("rejects laws violating 0 < G(1/2) < 1") {
    CHECK_THROWS_AS(limit_constant_c(CostDistribution::uniform(0.6, 2.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("assumption flags") {
  CHECK(CostDistribution::exponential(1.0).density_positive_at_half());
  CHECK(CostDistribution::uniform(0.0, 2.0).density_positive_at_half());
  CHECK_FALSE(CostDistribution::uniform(0.6, 2.0).density_positive_at_half());
  CHECK(CostDistribution::exponential(1.0).valid_for_theorems());
  CHECK_FALSE(CostDistribution::uniform(0.6, 2.0).valid_for_theorems());
}

TEST_CASE("single-item threshold band") {
  auto uni = CostDistribution::uniform(0.0, 2.0);
  SUBCASE("uniform density gives exact band") {
    auto r = iid_threshold_epsilon(uni, 0.1);
    CHECK(r.a == doctest::Approx(0.1).epsilon(1e-8));
    CHECK(r.eps == doctest::Approx(0.005).epsilon(1e-8));
  }
  SUBCASE("delta -> 0 collapses the band") {
    auto r = iid_threshold_epsilon(uni, 0.0);
    CHECK(r.a == 0.0);
    CHECK(r.eps == 0.0);
  }
  SUBCASE("quadratic small-delta behavior") {
    auto r = iid_threshold_epsilon(uni, 0.01);
    CHECK(r.eps / (0.01 * 0.01) == doctest::Approx(0.5).epsilon(0.01));
  }
  SUBCASE("asymptotics for a non-flat density") {
    auto exp1 = CostDistribution::exponential(1.0);
    double h1 = exp1.density(1.0);
    for (double delta : {0.01, 0.005}) {
      auto r = iid_threshold_epsilon(exp1, delta);
      CHECK(r.a == doctest::Approx(delta / (2.0 * h1)).epsilon(0.05));
      CHECK(r.eps ==
            doctest::Approx(delta * delta / (4.0 * h1)).epsilon(0.05));
    }
  }
  SUBCASE("delta at or above 1 is rejected") {
    CHECK_THROWS_AS(iid_threshold_epsilon(uni, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(iid_threshold_epsilon(uni, -0.1), std::invalid_argument);
  }
  SUBCASE("simulation agrees with the analytic value") {
    double sim = simulate_iid_threshold_eps(uni, 200000, 0.02, 123);
    auto r = iid_threshold_epsilon(uni, 0.02);
    CHECK(sim == doctest::Approx(r.eps).epsilon(0.1));
  }
}
