#include "chainopt/nk_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chainopt/parallel.hpp"
#include "chainopt/rng.hpp"

namespace chainopt {

NKInstance nk_generate(int N, int K, std::uint64_t seed) {
  if (K < 2 || N <= K)
    throw std::invalid_argument("nk_generate: need N > K >= 2");
  NKInstance inst;
  inst.n_bits = N;
  inst.k = K;
  std::size_t total = static_cast<std::size_t>(N - K)
                      << static_cast<unsigned>(K + 1);
  inst.weights.resize(total);
  Rng rng(seed);
  for (auto& w : inst.weights) w = -std::log(rng.uniform01());
  return inst;
}

double nk_energy(const NKInstance& inst, const BitString& x) {
  if (static_cast<int>(x.size()) != inst.n_bits)
    throw std::invalid_argument("nk_energy: bit string length mismatch");
  double h = 0.0;
  unsigned pat = 0;
  for (int j = 0; j < inst.k; ++j) pat |= (x[j] ? 1u : 0u) << j;
  for (int i = 0; i < inst.windows(); ++i) {
    unsigned full = pat | ((x[i + inst.k] ? 1u : 0u) << inst.k);
    h += inst.weight(i, full);
    pat = (full >> 1);
  }
  return h;
}

namespace {

// Suffix values suf[p][s]: cheapest completion after position p (1-based,
// p >= K) given the last K bits packed into s with the oldest bit lowest.
// A forward greedy walk over them yields the lexicographically smallest
// minimizer without storing backpointers.
struct SuffixDp {
  int n = 0, k = 0;
  std::vector<double> suf;  // (n+1) x 2^k, positions K..N

  double& at(int p, unsigned s) {
    return suf[static_cast<std::size_t>(p) * (1u << k) + s];
  }
  double at(int p, unsigned s) const {
    return suf[static_cast<std::size_t>(p) * (1u << k) + s];
  }
};

template <typename WeightFn>
SuffixDp build_suffix(const NKInstance& inst, const WeightFn& win_cost) {
  SuffixDp dp;
  dp.n = inst.n_bits;
  dp.k = inst.k;
  unsigned states = 1u << inst.k;
  dp.suf.assign(static_cast<std::size_t>(dp.n + 1) * states, 0.0);
  for (int p = dp.n - 1; p >= dp.k; --p) {
    int win = p - dp.k;  // 0-based window index completed by bit p+1
    for (unsigned s = 0; s < states; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (unsigned b = 0; b < 2; ++b) {
        unsigned full = s | (b << dp.k);
        unsigned ns = full >> 1;
        double v = win_cost(win, full) + dp.at(p + 1, ns);
        if (v < best) best = v;
      }
      dp.at(p, s) = best;
    }
  }
  return dp;
}

// lexicographic reconstruction: scan initial states in bit-string order,
// then prefer bit 0 whenever it stays on an optimal completion
template <typename WeightFn>
BitString reconstruct(const NKInstance& inst, const SuffixDp& dp,
                      const WeightFn& win_cost) {
  int n = inst.n_bits, k = inst.k;
  unsigned states = 1u << k;
  double best = std::numeric_limits<double>::infinity();
  unsigned best_s = 0;
  std::vector<unsigned> order(states);
  for (unsigned s = 0; s < states; ++s) {
    // bit-string order: x_1 (lowest packed bit) is the most significant
    unsigned key = 0;
    for (int j = 0; j < k; ++j) key |= ((s >> j) & 1u) << (k - 1 - j);
    order[key] = s;
  }
  for (unsigned key = 0; key < states; ++key) {
    unsigned s = order[key];
    if (dp.at(k, s) < best) {
      best = dp.at(k, s);
      best_s = s;
    }
  }
  BitString x(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < k; ++j) x[j] = (best_s >> j) & 1u;
  unsigned s = best_s;
  for (int p = k; p < n; ++p) {
    int win = p - k;
    double target = dp.at(p, s);
    unsigned full0 = s;  // bit 0 appended
    double v0 = win_cost(win, full0) + dp.at(p + 1, full0 >> 1);
    unsigned chosen;
    if (v0 == target) {
      chosen = 0;
    } else {
      chosen = 1;
    }
    unsigned full = s | (chosen << k);
    x[p] = static_cast<std::uint8_t>(chosen);
    s = full >> 1;
  }
  return x;
}

}  // namespace

NKSolve nk_solve(const NKInstance& inst) {
  auto cost = [&](int win, unsigned full) { return inst.weight(win, full); };
  SuffixDp dp = build_suffix(inst, cost);
  NKSolve out;
  out.x = reconstruct(inst, dp, cost);
  out.h = nk_energy(inst, out.x);
  return out;
}

NKResult nk_penalized_solve(const NKInstance& inst, const BitString& x_star,
                            double theta) {
  if (static_cast<int>(x_star.size()) != inst.n_bits)
    throw std::invalid_argument("nk_penalized_solve: x_star length mismatch");
  if (!(theta >= 0.0))
    throw std::invalid_argument("nk_penalized_solve: theta >= 0");
  // reference window patterns
  std::vector<unsigned> ref(static_cast<std::size_t>(inst.windows()));
  {
    unsigned pat = 0;
    for (int j = 0; j < inst.k; ++j) pat |= (x_star[j] ? 1u : 0u) << j;
    for (int i = 0; i < inst.windows(); ++i) {
      unsigned full = pat | ((x_star[i + inst.k] ? 1u : 0u) << inst.k);
      ref[static_cast<std::size_t>(i)] = full;
      pat = full >> 1;
    }
  }
  auto cost = [&](int win, unsigned full) {
    return inst.weight(win, full) +
           (full == ref[static_cast<std::size_t>(win)] ? theta : 0.0);
  };
  SuffixDp dp = build_suffix(inst, cost);
  NKResult res;
  res.y = reconstruct(inst, dp, cost);
  res.h_y = nk_energy(inst, res.y);
  res.eps_n = (res.h_y - nk_energy(inst, x_star)) /
              static_cast<double>(inst.n_bits);

  // excursions: maximal runs of mismatching windows
  unsigned pat = 0;
  for (int j = 0; j < inst.k; ++j) pat |= (res.y[j] ? 1u : 0u) << j;
  int run = 0;
  for (int i = 0; i < inst.windows(); ++i) {
    unsigned full = pat | ((res.y[i + inst.k] ? 1u : 0u) << inst.k);
    bool mismatch = full != ref[static_cast<std::size_t>(i)];
    if (mismatch) {
      ++run;
      ++res.mismatch_windows;
    } else if (run > 0) {
      res.excursion_lengths.push_back(run);
      run = 0;
    }
    pat = full >> 1;
  }
  if (run > 0) res.excursion_lengths.push_back(run);
  res.delta_n = static_cast<double>(res.mismatch_windows) /
                static_cast<double>(inst.n_bits);
  if (!res.excursion_lengths.empty()) {
    double s = 0.0;
    for (int l : res.excursion_lengths) s += l;
    res.mean_excursion = s / static_cast<double>(res.excursion_lengths.size());
  }
  return res;
}

NKTable nk_table1(int K, int N, int reps, const std::vector<double>& thetas,
                  std::uint64_t seed, int jobs) {
  if (reps < 2) throw std::invalid_argument("nk_table1: reps >= 2");
  NKTable table;
  table.reps = reps;
  table.n_bits = N;
  table.k = K;
  struct Rep {
    double c = 0.0;
    std::vector<double> delta, eps;
    std::vector<std::vector<int>> lengths;
  };
  std::vector<Rep> per_rep(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
    NKInstance inst = nk_generate(N, K, derive_seed(seed, "nk", r));
    NKSolve opt = nk_solve(inst);
    Rep rep;
    rep.c = opt.h / static_cast<double>(N);
    for (double th : thetas) {
      NKResult res = nk_penalized_solve(inst, opt.x, th);
      rep.delta.push_back(res.delta_n);
      rep.eps.push_back(res.eps_n);
      rep.lengths.push_back(res.excursion_lengths);
    }
    per_rep[r] = std::move(rep);
  });
  double csum = 0.0;
  for (const auto& rep : per_rep) csum += rep.c;
  table.c_hat = csum / static_cast<double>(reps);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    NKTableRow row;
    row.theta = thetas[t];
    double dsum = 0.0, esum = 0.0;
    double lsum = 0.0;
    std::size_t lcount = 0;
    for (const auto& rep : per_rep) {
      dsum += rep.delta[t];
      esum += rep.eps[t];
      for (int l : rep.lengths[t]) {
        lsum += l;
        ++lcount;
      }
    }
    row.delta = dsum / static_cast<double>(reps);
    row.eps = esum / static_cast<double>(reps);
    row.eps_over_delta_sq =
        row.delta > 0.0 ? row.eps / (row.delta * row.delta) : 0.0;
    row.mean_l = lcount ? lsum / static_cast<double>(lcount) : 0.0;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace chainopt
