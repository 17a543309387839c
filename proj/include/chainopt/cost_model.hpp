#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainopt/rng.hpp"

namespace chainopt {

enum class DistKind { Exponential, Uniform, Empirical };

// Law G of the edge costs: density g, CDF G, survival function and sampling.
// Empirical tables use a linear-interpolated CDF through the sorted sample
// quantiles and a finite-difference density.
class CostDistribution {
 public:
  static CostDistribution exponential(double rate);
  static CostDistribution uniform(double lo, double hi);
  static CostDistribution empirical(std::vector<double> samples);

  // Spec strings: "exp:LAMBDA", "uniform:LO:HI", "empirical:PATH"
  // (PATH holds newline-separated reals).
  static CostDistribution parse(const std::string& spec);

  double cdf(double x) const;
  double survival(double x) const { return 1.0 - cdf(x); }
  double density(double x) const;
  double sample(Rng& rng) const;

  DistKind kind() const { return kind_; }
  double rate() const { return a_; }
  double lo() const { return a_; }
  double hi() const { return b_; }

  // Bounded density, positive at 1/2. Asymptotic statements about the chain
  // need this; callers only get a flag, never a rejection.
  bool density_positive_at_half() const;

  // 0 < G(1/2) < 1. Experiments that rely on the limit theorems reject
  // distributions failing this up front.
  bool valid_for_theorems() const;

  std::string spec_string() const { return spec_; }

 private:
  CostDistribution() = default;
  DistKind kind_ = DistKind::Exponential;
  double a_ = 1.0;  // rate for exponential, lo for uniform
  double b_ = 0.0;  // hi for uniform
  std::vector<double> table_;  // sorted, for empirical
  std::string spec_;
};

// count i.i.d. draws from G; bit-identical for identical (dist,count,seed).
std::vector<double> sample_costs(const CostDistribution& dist,
                                 std::size_t count, std::uint64_t seed);

// Stationary CDF of the chain x -> max(1-x, 1-xi) on [0,1]:
//   F(x) = S(1-x)G(x) / (1 - S(x)S(1-x)),  S = 1-G.
double stationary_cdf_F(const CostDistribution& dist, double x);

// Closed form of the stationary CDF for exponential(lambda) costs:
// (e^{lambda x} - 1) / (e^{lambda} - 1).
double exponential_stationary_cdf(double lambda, double x);

// Limit of the optimal benefit per item,
//   c = 1/2 + P(xi < min(XL,XR))/2 - E[xi 1(xi < min(XL,XR))],
// with XL, xi, XR independent and XL, XR ~ F. Evaluated by 1-d adaptive
// quadrature over u in (0,1) using the independence factorization.
double limit_constant_c(const CostDistribution& dist);

// Exponential closed form: 1/(1 - e^{-lambda}) - 1/lambda.
double exponential_limit_constant(double lambda);

struct IidThreshold {
  double a;    // half-width solving  delta = H(1+a) - H(1-a)
  double eps;  // integral of |x-1| over that band
};

// Single-item model: values with density h, reward (x-1)^+; the cheapest way
// to flip a delta-fraction of decisions is to flip the band around 1.
IidThreshold iid_threshold_epsilon(const CostDistribution& h, double delta);

// Monte Carlo version: draw n values, flip the ceil(delta*n) smallest |x-1|.
double simulate_iid_threshold_eps(const CostDistribution& h, std::size_t n,
                                  double delta, std::uint64_t seed);

}  // namespace chainopt
