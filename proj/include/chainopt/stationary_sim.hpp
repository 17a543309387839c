#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chainopt/cost_model.hpp"

namespace chainopt {

// One index of the stationary triple process (XL_i, xi_i, XR_{i+1}) plus the
// membership the inclusion criteria imply.
struct TripleState {
  double xl;
  double xi;
  double xr;
  bool in_a;
};

// Extension with the penalized difference processes (ZL_i, ZR_{i+1}) and the
// penalized membership.
struct QuintupleState {
  double zl;
  double xl;
  double xi;
  double xr;
  double zr;
  bool in_a;
  bool in_b;
};

// Largest tau in {0.4, 0.3, 0.2, 0.1, 0.05} with G(1/2 - tau) >= 0.05,
// falling back to the largest with positive mass. Regeneration events are
// cost pairs summing below 1 - tau.
double default_tau(const CostDistribution& dist);

// Stationary window of the triple process. Costs are drawn over an extended
// range; everything left of the first low-cost pair is discarded (the chain
// forgets its boundary value exactly at such pairs), and the right process
// is certified symmetrically.
std::vector<TripleState> simulate_triple(const CostDistribution& dist,
                                         std::size_t length,
                                         std::uint64_t seed, double tau);

// Stationary quintuple window; requires 0 <= theta < tau.
std::vector<QuintupleState> simulate_quintuple(const CostDistribution& dist,
                                               double theta, double tau,
                                               std::size_t length,
                                               std::uint64_t seed);

struct McEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Mean of M_n / n over independent instances.
McEstimate estimate_c_mc(const CostDistribution& dist, std::size_t n, int reps,
                         std::uint64_t seed, int jobs = 1);

struct RegenEstimate {
  double delta_hat = 0.0;
  double eps_hat = 0.0;
  double delta_ci = 0.0;  // 95% half-widths, batch means
  double eps_ci = 0.0;
  std::size_t cycles = 0;
  double tau = 0.0;
  double mean_t = 0.0;    // mean cycle length, always >= 6
  std::size_t d_count = 0;  // cycles where the anchor event happened
  double min_w = 0.0;     // smallest per-cycle benefit gap observed
};

// Cycle estimator: anchor event D = {xi_-1 + xi_0 < 1-tau, xi_0 + xi_1 <
// 1-tau}; T = 3j for the first j >= 1 with the same pattern centered at
// xi_{3j}. On D the window [1, T] is solved exactly and contributes
// |A ^ B|/3 and (f(A) - f(B))/3 (the anchored cycle sum covers each index
// three times in expectation); off D it contributes zero. Cycles are
// independent draws.
RegenEstimate regenerative_estimate(const CostDistribution& dist, double theta,
                                    double tau, std::size_t cycles,
                                    std::uint64_t seed, int jobs = 1);

struct AlphaEstimate {
  double alpha_hat = 0.0;
  std::vector<std::pair<double, double>> ratios;  // (theta, delta_hat/theta)
};

// delta_hat(theta)/theta per theta plus a two-point extrapolation to
// theta = 0 from the two smallest thetas. The same seed is used for every
// theta, so the cycles are common random numbers.
AlphaEstimate estimate_alpha(const CostDistribution& dist,
                             std::vector<double> thetas, double tau,
                             std::size_t cycles, std::uint64_t seed,
                             int jobs = 1);

struct CouplingCheck {
  double sl = 0.0;     // ZL_0 - theta*J_0 - XL_0
  int kl = 0;          // lookback to the pinning low-cost pair
  bool q_integer = false;  // sl/theta within 1e-9 of an integer
};

// Per sample, couples (XL, ZL) from a common regeneration and evaluates the
// drift bound |sl| <= theta * kl at index 0.
std::vector<CouplingCheck> coupling_bound_check(const CostDistribution& dist,
                                                double theta, double tau,
                                                std::size_t samples,
                                                std::uint64_t seed,
                                                int jobs = 1);

}  // namespace chainopt
