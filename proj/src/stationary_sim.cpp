#include "chainopt/stationary_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chainopt/chain_solver.hpp"
#include "chainopt/near_optimal.hpp"
#include "chainopt/parallel.hpp"
#include "chainopt/stats.hpp"

namespace chainopt {

namespace {

void require_theorem_assumptions(const CostDistribution& dist) {
  if (!dist.valid_for_theorems())
    throw std::invalid_argument(
        "distribution needs 0 < G(1/2) < 1 for stationary experiments");
}

// margin sized so that missing every regeneration pair is practically
// impossible; G((1-tau)/2)^2 lower-bounds the pair probability
std::size_t regen_margin(const CostDistribution& dist, double tau) {
  double p = dist.cdf(0.5 * (1.0 - tau));
  p = p * p;
  if (p <= 0.0)
    throw std::runtime_error(
        "no regeneration possible: G((1-tau)/2) = 0 (pathological G)");
  double m = 60.0 / p;
  return static_cast<std::size_t>(std::min(1e7, std::max(64.0, m)));
}

struct ExtendedWindow {
  std::vector<double> xi;   // costs, xi[e] couples items e, e+1
  std::vector<double> xl;   // per item
  std::vector<double> xr;   // per item
  std::vector<double> zl;   // per item (quintuple only)
  std::vector<double> zr;   // per item (quintuple only)
  std::vector<std::uint8_t> in_a;  // per item
  std::size_t first;        // first emitted item
  std::size_t length;
};

// Builds the extended arrays and certifies exact stationarity on the slice
// [first, first+length). with_z adds the penalized processes.
ExtendedWindow build_window(const CostDistribution& dist, std::size_t length,
                            std::uint64_t seed, double tau, bool with_z,
                            double theta) {
  require_theorem_assumptions(dist);
  std::size_t margin = regen_margin(dist, tau);
  std::size_t tot = length + 2 * margin;
  ExtendedWindow w;
  w.first = margin;
  w.length = length;
  Rng rng(seed);
  w.xi.resize(tot - 1);
  for (auto& c : w.xi) c = dist.sample(rng);
  double thr = 1.0 - tau;

  // left pin: first pair (e-1, e) with xi sum <= 1-tau; items >= e+1 exact
  std::size_t left_pin = 0;
  bool found = false;
  for (std::size_t e = 1; e + 1 <= margin; ++e) {
    if (w.xi[e - 1] + w.xi[e] <= thr) {
      left_pin = e;
      found = true;
      break;
    }
  }
  if (!found)
    throw std::runtime_error(
        "no regeneration found in the left window (pathological G)");

  // right pins: first two pairs at or beyond the slice end
  std::size_t pin1 = 0, pin2 = 0;
  int npins = 0;
  for (std::size_t e = length + margin; e + 1 <= tot - 2; ++e) {
    if (w.xi[e] + w.xi[e + 1] <= thr) {
      if (npins == 0)
        pin1 = e;
      else
        pin2 = e;
      if (++npins == 2) break;
    }
  }
  if (npins < 2)
    throw std::runtime_error(
        "no regeneration found in the right window (pathological G)");

  w.xl.assign(tot, 0.0);
  w.xl[0] = 1.0;
  for (std::size_t i = 0; i + 1 < tot; ++i)
    w.xl[i + 1] = std::max(1.0 - w.xl[i], 1.0 - w.xi[i]);

  // the right process only needs to be exact for items <= pin2; start the
  // backward pass from the outer pin
  w.xr.assign(tot, 0.0);
  w.xr[pin2] = 1.0 - w.xi[pin2];
  for (std::size_t i = pin2; i-- > 0;)
    w.xr[i] = std::max(1.0 - w.xr[i + 1], 1.0 - w.xi[i]);

  // memberships are valid for items in [left_pin+1, pin2-1]
  w.in_a.assign(tot, 0);
  for (std::size_t i = left_pin + 1; i < pin2; ++i)
    w.in_a[i] =
        (w.xl[i] > std::min(w.xi[i], w.xr[i + 1])) ? 1 : 0;

  if (with_z) {
    auto jsign = [&](std::size_t i) { return w.in_a[i] ? -1.0 : 1.0; };
    w.zl.assign(tot, 0.0);
    std::size_t zs = left_pin + 1;  // pinned: ZL = 1 - xi + theta J
    w.zl[zs] = (1.0 - w.xi[left_pin]) + theta * jsign(zs);
    for (std::size_t i = zs; i + 1 < pin2; ++i) {
      double clip = w.zl[i] > 0.0 ? std::min(w.zl[i], w.xi[i]) : 0.0;
      w.zl[i + 1] = 1.0 - clip + theta * jsign(i + 1);
    }
    w.zr.assign(tot, 0.0);
    w.zr[pin1] = (1.0 - w.xi[pin1]) + theta * jsign(pin1);
    for (std::size_t i = pin1; i-- > zs;) {
      double clip = w.zr[i + 1] > 0.0 ? std::min(w.zr[i + 1], w.xi[i]) : 0.0;
      w.zr[i] = 1.0 - clip + theta * jsign(i);
    }
  }
  return w;
}

}  // namespace

double default_tau(const CostDistribution& dist) {
  static const double taus[] = {0.4, 0.3, 0.2, 0.1, 0.05};
  for (double t : taus)
    if (dist.cdf(0.5 - t) >= 0.05 - 1e-12) return t;
  for (double t : taus)
    if (dist.cdf(0.5 - t) > 0.0) return t;
  throw std::invalid_argument("distribution has no mass below 1/2");
}

std::vector<TripleState> simulate_triple(const CostDistribution& dist,
                                         std::size_t length,
                                         std::uint64_t seed, double tau) {
  if (length == 0) throw std::invalid_argument("simulate_triple: length >= 1");
  ExtendedWindow w = build_window(dist, length, seed, tau, false, 0.0);
  std::vector<TripleState> out;
  out.reserve(length);
  for (std::size_t i = w.first; i < w.first + w.length; ++i)
    out.push_back({w.xl[i], w.xi[i], w.xr[i + 1], w.in_a[i] != 0});
  return out;
}

std::vector<QuintupleState> simulate_quintuple(const CostDistribution& dist,
                                               double theta, double tau,
                                               std::size_t length,
                                               std::uint64_t seed) {
  if (length == 0)
    throw std::invalid_argument("simulate_quintuple: length >= 1");
  if (!(theta >= 0.0) || !(theta < tau))
    throw std::invalid_argument("simulate_quintuple: need 0 <= theta < tau");
  ExtendedWindow w = build_window(dist, length, seed, tau, true, theta);
  std::vector<QuintupleState> out;
  out.reserve(length);
  for (std::size_t i = w.first; i < w.first + w.length; ++i) {
    bool in_b =
        w.zl[i] > std::min(w.xi[i], std::max(w.zr[i + 1], 0.0));
    out.push_back({w.zl[i], w.xl[i], w.xi[i], w.xr[i + 1], w.zr[i + 1],
                   w.in_a[i] != 0, in_b});
  }
  return out;
}

McEstimate estimate_c_mc(const CostDistribution& dist, std::size_t n, int reps,
                         std::uint64_t seed, int jobs) {
  require_theorem_assumptions(dist);
  if (n < 1000) throw std::invalid_argument("estimate_c_mc: n >= 1000");
  if (reps < 2) throw std::invalid_argument("estimate_c_mc: reps >= 2");
  std::vector<double> vals(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
    std::uint64_t s = derive_seed(seed, "c_mc", r);
    Instance inst = Instance::from_costs(sample_costs(dist, n - 1, s));
    SolveResult res = dp_solve(inst);
    vals[r] = res.value / static_cast<double>(n);
  });
  MeanSe ms = mean_se(vals);
  return {ms.mean, ms.se};
}

RegenEstimate regenerative_estimate(const CostDistribution& dist, double theta,
                                    double tau, std::size_t cycles,
                                    std::uint64_t seed, int jobs) {
  require_theorem_assumptions(dist);
  if (!(theta >= 0.0) || !(theta < tau))
    throw std::invalid_argument(
        "regenerative_estimate: need 0 <= theta < tau");
  if (cycles < 30)
    throw std::invalid_argument("regenerative_estimate: cycles >= 30");
  if (dist.cdf(0.5 * (1.0 - tau)) <= 0.0)
    throw std::runtime_error("regenerative_estimate: no qualifying cycles possible");

  double thr = 1.0 - tau;
  std::vector<double> delta_c(cycles, 0.0), eps_c(cycles, 0.0), t_c(cycles, 0.0);
  std::vector<std::uint8_t> d_flag(cycles, 0);
  std::vector<double> min_w_chunk;

  const std::size_t kChunks = std::min<std::size_t>(cycles, 240);
  std::size_t per = (cycles + kChunks - 1) / kChunks;
  min_w_chunk.assign(kChunks, 0.0);
  parallel_for(kChunks, jobs, [&](std::size_t c) {
    Rng rng(derive_seed(seed, "regen_chunk", c));
    double local_min_w = 0.0;
    std::size_t lo = c * per, hi = std::min(cycles, lo + per);
    std::vector<double> xs;  // xs[i-1] = xi_i for i >= 1
    for (std::size_t cy = lo; cy < hi; ++cy) {
      // anchor pattern centered at xi_0
      double xi_m1 = dist.sample(rng);
      double xi_0 = dist.sample(rng);
      xs.clear();
      xs.push_back(dist.sample(rng));  // xi_1
      bool d = (xi_m1 + xi_0 < thr) && (xi_0 + xs[0] < thr);
      // first return of the same pattern on the 3-grid: centered at xi_{3j}
      std::size_t j = 1;
      std::size_t S = 0;
      for (;; ++j) {
        while (xs.size() < 3 * j + 1) xs.push_back(dist.sample(rng));
        // xi_{3j-1} + xi_{3j} and xi_{3j} + xi_{3j+1}
        if (xs[3 * j - 2] + xs[3 * j - 1] < thr &&
            xs[3 * j - 1] + xs[3 * j] < thr) {
          S = 3 * j;
          break;
        }
        if (j > 100000)
          throw std::runtime_error(
              "regenerative_estimate: runaway cycle (pathological G)");
      }
      t_c[cy] = static_cast<double>(S);
      if (!d) continue;
      d_flag[cy] = 1;
      // the anchor and return patterns force items 0,1 and S,S+1 into both
      // optima, so the infinite-problem restriction to [1,S] is exactly the
      // finite problem on items 1..S with costs xi_1..xi_{S-1}; the anchored
      // cycle sum counts every index 3 times in expectation
      Instance inst = Instance::from_costs(std::vector<double>(
          xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(S - 1)));
      SolveResult opt = dp_solve(inst);
      PenalizedResult pr = penalized_solve(inst, opt.optimal, theta);
      double w_gap = opt.value - benefit(inst, pr.b_set);
      if (w_gap < local_min_w) local_min_w = w_gap;
      delta_c[cy] =
          static_cast<double>(symmetric_difference(opt.optimal, pr.b_set)) /
          3.0;
      eps_c[cy] = w_gap / 3.0;
    }
    min_w_chunk[c] = local_min_w;
  });

  RegenEstimate est;
  est.cycles = cycles;
  est.tau = tau;
  MeanSe md = mean_se(delta_c), me = mean_se(eps_c), mt = mean_se(t_c);
  est.delta_hat = md.mean;
  est.eps_hat = me.mean;
  est.delta_ci = batch_means_halfwidth95(delta_c);
  est.eps_ci = batch_means_halfwidth95(eps_c);
  est.mean_t = mt.mean;
  est.d_count = 0;
  for (auto f : d_flag) est.d_count += f;
  est.min_w = *std::min_element(min_w_chunk.begin(), min_w_chunk.end());
  if (est.min_w < -1e-9)
    throw std::runtime_error(
        "regenerative_estimate: negative benefit gap in a cycle");
  return est;
}

AlphaEstimate estimate_alpha(const CostDistribution& dist,
                             std::vector<double> thetas, double tau,
                             std::size_t cycles, std::uint64_t seed,
                             int jobs) {
  if (thetas.size() < 2)
    throw std::invalid_argument("estimate_alpha: need at least 2 thetas");
  for (double th : thetas)
    if (!(th > 0.0) || !(th < tau))
      throw std::invalid_argument("estimate_alpha: thetas must lie in (0,tau)");
  AlphaEstimate out;
  for (double th : thetas) {
    RegenEstimate re = regenerative_estimate(dist, th, tau, cycles, seed, jobs);
    out.ratios.emplace_back(th, re.delta_hat / th);
  }
  // two-point linear extrapolation in theta from the two smallest thetas
  auto sorted = out.ratios;
  std::sort(sorted.begin(), sorted.end());
  double t0 = sorted[0].first, r0 = sorted[0].second;
  double t1 = sorted[1].first, r1 = sorted[1].second;
  double slope = (r1 - r0) / (t1 - t0);
  out.alpha_hat = r0 - slope * t0;
  return out;
}

std::vector<CouplingCheck> coupling_bound_check(const CostDistribution& dist,
                                                double theta, double tau,
                                                std::size_t samples,
                                                std::uint64_t seed, int jobs) {
  require_theorem_assumptions(dist);
  if (!(theta >= 0.0) || !(theta < tau))
    throw std::invalid_argument("coupling_bound_check: need 0 <= theta < tau");
  double thr = 1.0 - tau;
  std::size_t margin = regen_margin(dist, tau);
  std::vector<CouplingCheck> out(samples);

  const std::size_t kChunks = std::min<std::size_t>(std::max<std::size_t>(samples, 1), 240);
  std::size_t per = (samples + kChunks - 1) / kChunks;
  parallel_for(kChunks, jobs, [&](std::size_t c) {
    Rng rng(derive_seed(seed, "coupling_chunk", c));
    std::size_t lo = c * per, hi = std::min(samples, lo + per);
    std::vector<double> left;    // left[j] = xi_{-(j+1)}
    std::vector<double> right;   // right[j] = xi_j
    for (std::size_t s = lo; s < hi; ++s) {
      left.clear();
      right.clear();
      // lookback K = inf{i >= 2 : xi_{-i} + xi_{-i+1} < 1 - tau}
      left.push_back(dist.sample(rng));  // xi_{-1}
      std::size_t K = 0;
      for (std::size_t i = 2;; ++i) {
        left.push_back(dist.sample(rng));  // xi_{-i}
        if (left[i - 1] + left[i - 2] < thr) {
          K = i;
          break;
        }
        if (i > margin * 4 + 16)
          throw std::runtime_error(
              "coupling_bound_check: no lookback regeneration (pathological G)");
      }
      // right side: first pair (e, e+1) with e >= 1 certifies XR down to
      // item 1
      right.push_back(dist.sample(rng));  // xi_0
      std::size_t pin = 0;
      for (std::size_t e = 1;; ++e) {
        while (right.size() < e + 2) right.push_back(dist.sample(rng));
        if (right[e] + right[e + 1] <= thr) {
          pin = e;
          break;
        }
        if (e > margin * 4 + 16)
          throw std::runtime_error(
              "coupling_bound_check: no right regeneration (pathological G)");
      }
      auto xi = [&](std::ptrdiff_t i) -> double {
        return i >= 0 ? right[static_cast<std::size_t>(i)]
                      : left[static_cast<std::size_t>(-i - 1)];
      };
      // arrays over items i in [base, pin], base = -K+2
      std::ptrdiff_t base = -static_cast<std::ptrdiff_t>(K) + 2;
      std::size_t len = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(pin) - base + 1);
      auto ofs = [&](std::ptrdiff_t i) {
        return static_cast<std::size_t>(i - base);
      };
      std::vector<double> xl(len, 0.0), xr(len, 0.0), zl(len, 0.0);
      xr[ofs(pin)] = 1.0 - xi(static_cast<std::ptrdiff_t>(pin));
      for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(pin) - 1; i >= base; --i)
        xr[ofs(i)] = std::max(1.0 - xr[ofs(i + 1)], 1.0 - xi(i));
      xl[ofs(base)] = 1.0 - xi(base - 1);
      for (std::ptrdiff_t i = base; i < 0; ++i)
        xl[ofs(i + 1)] = std::max(1.0 - xl[ofs(i)], 1.0 - xi(i));
      auto jsign = [&](std::ptrdiff_t i) {
        bool in_a = xl[ofs(i)] > std::min(xi(i), xr[ofs(i + 1)]);
        return in_a ? -1.0 : 1.0;
      };
      zl[ofs(base)] = xl[ofs(base)] + theta * jsign(base);
      for (std::ptrdiff_t i = base; i < 0; ++i) {
        double z = zl[ofs(i)];
        double clip = z > 0.0 ? std::min(z, xi(i)) : 0.0;
        zl[ofs(i + 1)] = 1.0 - clip + theta * jsign(i + 1);
      }
      CouplingCheck cc;
      cc.kl = static_cast<int>(K);
      cc.sl = zl[ofs(0)] - theta * jsign(0) - xl[ofs(0)];
      if (theta > 0.0) {
        double q = cc.sl / theta;
        cc.q_integer = std::abs(q - std::round(q)) <= 1e-9;
      } else {
        cc.q_integer = cc.sl == 0.0;
      }
      out[s] = cc;
    }
  });
  return out;
}

}  // namespace chainopt
