#pragma once

#include <cstdint>
#include <vector>

#include "chainopt/chain_solver.hpp"
#include "chainopt/cost_model.hpp"

namespace chainopt {

struct PenalizedResult {
  double theta = 0.0;
  Subset b_set;                 // maximizer of f(B) + theta |B ^ A|
  double penalized_value = 0.0; // f(B) + theta |B ^ A|
  double delta_n = 0.0;         // |A ^ B| / n
  double eps_n = 0.0;           // (f(A) - f(B)) / n
  std::vector<double> zl, zr;   // penalized difference processes
  std::vector<std::int8_t> j_signs;  // +1 iff item not in A
};

// Maximize f(B) + theta|B ^ a_opt| by the value recursion with a per-item
// bonus theta whenever membership differs from a_opt. On exact objective
// ties the backtracking sides with a_opt, so theta -> 0 degenerates to the
// plain optimum. The z arrays are filled independently via
//   ZL_1 = 1 + theta J_1,
//   ZL_{i+1} = 1 - min(ZL_i, xi_i) 1(ZL_i > 0) + theta J_{i+1}
// and the mirrored right recursion, for cross-validation against the
// backtracked set.
PenalizedResult penalized_solve(const Instance& inst, const Subset& a_opt,
                                double theta);

// Membership from the pairwise relative benefits
//   both: ZL_i + ZR_{i+1} - xi_i, left: ZL_i, right: ZR_{i+1}, neither: 0;
// the unique strict argmax decides each pair. Throws TieDetected on exact
// ties or vote conflicts. theta and j_signs are taken for input validation.
Subset reconstruct_penalized_from_z(const Instance& inst, const Subset& a_opt,
                                    double theta,
                                    const std::vector<double>& zl,
                                    const std::vector<double>& zr,
                                    const std::vector<std::int8_t>& j_signs);

struct ConstrainedResult {
  double delta_target = 0.0;
  double eps_exact = 0.0;  // (f(A) - f(best)) / n
  Subset achiever;
};

// Exact minimizer of the benefit gap over sets with at least ceil(delta*n)
// membership differences from a_opt; DP over (position, membership,
// capped difference count).
ConstrainedResult exact_constrained_epsilon(const Instance& inst,
                                            const Subset& a_opt, double delta);

struct PatternSwapResult {
  Subset b;
  std::size_t windows_used = 0;
  std::size_t windows_total = 0;
  double benefit_drop = 0.0;  // sum of (xi_g + xi_{g+2k-1} - 1) over swaps
};

// Scans adjacent disjoint windows of 2k+1 items. Where the local costs form
// a strictly descending run staying above 1/2 until the exit cost, whose two
// boundary sums are below 1, and whose end-cost sum lies in (1, 1+2k*alpha),
// the alternating pattern is provably optimal and gets replaced by the
// doubled-endpoint pattern, losing exactly xi_g + xi_{g+2k-1} - 1.
PatternSwapResult pattern_swap_construct(const Instance& inst,
                                         const Subset& a_opt, double alpha,
                                         int k);

struct SweepRow {
  double theta = 0.0;
  double mean_delta = 0.0;
  double se_delta = 0.0;
  double mean_eps = 0.0;
  double se_eps = 0.0;
};

// Averages penalized_solve over reps fresh instances per theta. Replicate
// seeds are shared across theta values (common random numbers), so ratio
// statistics between rows are stable.
std::vector<SweepRow> theta_sweep(const CostDistribution& dist, std::size_t n,
                                  const std::vector<double>& thetas, int reps,
                                  std::uint64_t seed, int jobs = 1);

}  // namespace chainopt
