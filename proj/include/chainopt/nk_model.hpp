#pragma once

#include <cstdint>
#include <vector>

namespace chainopt {

using BitString = std::vector<std::uint8_t>;

// Fitness landscape: minimize H(x) = sum_{i=1}^{N-K} W_i(x_i..x_{i+K}) over
// bit strings of length N. Window patterns are packed with the leftmost bit
// as the least significant one.
struct NKInstance {
  int n_bits = 0;  // N
  int k = 0;       // K >= 2
  std::vector<double> weights;  // (N-K) x 2^{K+1}

  int windows() const { return n_bits - k; }
  int patterns() const { return 1 << (k + 1); }
  // i is a 0-based window index
  double weight(int i, unsigned pattern) const {
    return weights[static_cast<std::size_t>(i) * static_cast<std::size_t>(patterns()) +
                   pattern];
  }
};

NKInstance nk_generate(int N, int K, std::uint64_t seed);

double nk_energy(const NKInstance& inst, const BitString& x);

struct NKSolve {
  BitString x;  // a minimizer; lexicographically smallest on exact ties
  double h;     // H(x)
};

// Exact minimization by DP over the 2^K sliding-window state.
NKSolve nk_solve(const NKInstance& inst);

struct NKResult {
  BitString y;
  double h_y = 0.0;
  double delta_n = 0.0;  // mismatching (K+1)-windows / N
  double eps_n = 0.0;    // (H(y) - H(x*)) / N
  std::size_t mismatch_windows = 0;
  std::vector<int> excursion_lengths;  // maximal runs of mismatching windows
  double mean_excursion = 0.0;         // 0 when there are none
};

// Exact minimization of H(y) + theta * #{i : window_i(y) == window_i(x_star)}
// by the same DP with the matching indicator folded into the window weight.
NKResult nk_penalized_solve(const NKInstance& inst, const BitString& x_star,
                            double theta);

struct NKTableRow {
  double theta = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  double eps_over_delta_sq = 0.0;
  double mean_l = 0.0;  // excursion length pooled over instances
};

struct NKTable {
  std::vector<NKTableRow> rows;
  double c_hat = 0.0;  // mean of H(x*)/N over the replicate instances
  int reps = 0;
  int n_bits = 0;
  int k = 0;
};

// Replicate instances are shared across theta values (common random
// numbers); per-instance delta and eps are averaged, excursion lengths are
// pooled.
NKTable nk_table1(int K, int N, int reps, const std::vector<double>& thetas,
                  std::uint64_t seed, int jobs = 1);

}  // namespace chainopt
