#include "chainopt/near_optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chainopt/parallel.hpp"
#include "chainopt/stats.hpp"

namespace chainopt {

namespace {

void fill_z_processes(const Instance& inst,
                      const std::vector<std::int8_t>& j, double theta,
                      std::vector<double>& zl, std::vector<double>& zr) {
  std::size_t n = inst.n();
  zl.assign(n, 0.0);
  zr.assign(n, 0.0);
  zl[0] = 1.0 + theta * j[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double clip = zl[i] > 0.0 ? std::min(zl[i], inst.costs[i]) : 0.0;
    zl[i + 1] = 1.0 - clip + theta * j[i + 1];
  }
  zr[n - 1] = 1.0 + theta * j[n - 1];
  for (std::size_t i = n - 1; i >= 1; --i) {
    double clip = zr[i] > 0.0 ? std::min(zr[i], inst.costs[i - 1]) : 0.0;
    zr[i - 1] = 1.0 - clip + theta * j[i - 1];
  }
}

}  // namespace

PenalizedResult penalized_solve(const Instance& inst, const Subset& a_opt,
                                double theta) {
  std::size_t n = inst.n();
  if (a_opt.size() != n)
    throw std::invalid_argument("penalized_solve: a_opt length mismatch");
  if (!(theta >= 0.0))
    throw std::invalid_argument("penalized_solve: theta must be >= 0");

  PenalizedResult res;
  res.theta = theta;
  res.j_signs.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    res.j_signs[i] = a_opt[i] ? static_cast<std::int8_t>(-1)
                              : static_cast<std::int8_t>(+1);

  // per-item rewards: chosen gets 1 plus theta if a_opt omits it, excluded
  // gets theta if a_opt keeps it
  auto reward_in = [&](std::size_t i) {
    return 1.0 + (a_opt[i] ? 0.0 : theta);
  };
  auto reward_out = [&](std::size_t i) { return a_opt[i] ? theta : 0.0; };

  std::vector<std::uint8_t> back_v(n, 0), back_w(n, 0);
  double v = reward_in(0), w = reward_out(0);
  for (std::size_t i = 1; i < n; ++i) {
    double xi = inst.costs[i - 1];
    double keep = v - xi;
    double nv, nw;
    if (keep > w) {
      nv = reward_in(i) + keep;
      back_v[i] = 1;
    } else if (keep < w) {
      nv = reward_in(i) + w;
      back_v[i] = 0;
    } else {  // tie: side with a_opt's membership of item i
      nv = reward_in(i) + w;
      back_v[i] = a_opt[i - 1] ? 1 : 0;
    }
    if (v > w) {
      nw = reward_out(i) + v;
      back_w[i] = 1;
    } else if (v < w) {
      nw = reward_out(i) + w;
      back_w[i] = 0;
    } else {
      nw = reward_out(i) + w;
      back_w[i] = a_opt[i - 1] ? 1 : 0;
    }
    v = nv;
    w = nw;
  }
  res.b_set.assign(n, 0);
  bool take;
  if (v > w)
    take = true;
  else if (v < w)
    take = false;
  else
    take = a_opt[n - 1] != 0;
  for (std::size_t i = n; i-- > 0;) {
    res.b_set[i] = take ? 1 : 0;
    if (i > 0) take = (take ? back_v[i] : back_w[i]) != 0;
  }

  std::size_t diff = symmetric_difference(res.b_set, a_opt);
  double f_b = benefit(inst, res.b_set);
  double f_a = benefit(inst, a_opt);
  res.penalized_value = f_b + theta * static_cast<double>(diff);
  res.delta_n = static_cast<double>(diff) / static_cast<double>(n);
  res.eps_n = (f_a - f_b) / static_cast<double>(n);
  fill_z_processes(inst, res.j_signs, theta, res.zl, res.zr);
  return res;
}

Subset reconstruct_penalized_from_z(const Instance& inst, const Subset& a_opt,
                                    double theta,
                                    const std::vector<double>& zl,
                                    const std::vector<double>& zr,
                                    const std::vector<std::int8_t>& j_signs) {
  std::size_t n = inst.n();
  if (a_opt.size() != n || zl.size() != n || zr.size() != n ||
      j_signs.size() != n)
    throw std::invalid_argument("reconstruct_penalized_from_z: bad sizes");
  if (zl[0] != 1.0 + theta * j_signs[0])
    throw std::invalid_argument(
        "reconstruct_penalized_from_z: zl inconsistent with theta/j");
  Subset set(n, 0);
  if (n == 1) {
    // single item: chosen iff its relative benefit is positive
    double rel = zl[0];
    if (rel == 0.0) throw TieDetected("non-unique or degenerate instance");
    set[0] = rel > 0.0 ? 1 : 0;
    return set;
  }
  std::vector<int> vote(n, -1);
  auto assign = [&](std::size_t idx, int val) {
    if (vote[idx] == -1) {
      vote[idx] = val;
    } else if (vote[idx] != val) {
      throw TieDetected("non-unique or degenerate instance");
    }
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double xi = inst.costs[i];
    double rb[4] = {zl[i] + zr[i + 1] - xi,  // both chosen
                    zl[i],                   // left only
                    zr[i + 1],               // right only
                    0.0};                    // neither
    int best = 0;
    for (int c = 1; c < 4; ++c)
      if (rb[c] > rb[best]) best = c;
    for (int c = 0; c < 4; ++c)
      if (c != best && rb[c] == rb[best])
        throw TieDetected("non-unique or degenerate instance");
    int in_i = (best == 0 || best == 1) ? 1 : 0;
    int in_next = (best == 0 || best == 2) ? 1 : 0;
    assign(i, in_i);
    assign(i + 1, in_next);
  }
  for (std::size_t i = 0; i < n; ++i) set[i] = vote[i] == 1 ? 1 : 0;
  return set;
}

ConstrainedResult exact_constrained_epsilon(const Instance& inst,
                                            const Subset& a_opt,
                                            double delta) {
  std::size_t n = inst.n();
  if (a_opt.size() != n)
    throw std::invalid_argument("exact_constrained_epsilon: length mismatch");
  if (!(delta >= 0.0) || delta > 1.0)
    throw std::invalid_argument("exact_constrained_epsilon: delta in [0,1]");
  // ceil(delta*n), robust against float dust when delta is k/n exactly
  double scaled = delta * static_cast<double>(n);
  double rounded = std::round(scaled);
  std::size_t need = static_cast<std::size_t>(
      std::abs(scaled - rounded) < 1e-9 * std::max(1.0, scaled)
          ? rounded
          : std::ceil(scaled));
  ConstrainedResult res;
  res.delta_target = delta;
  if (need == 0) {
    res.achiever = a_opt;
    res.eps_exact = 0.0;
    return res;
  }
  if (need > n)
    throw std::invalid_argument("exact_constrained_epsilon: infeasible delta");

  const double ninf = -std::numeric_limits<double>::infinity();
  std::size_t d_states = need + 1;  // difference counts capped at `need`
  // value[m in {0,1}][d] for the current position
  std::vector<double> cur(2 * d_states, ninf), nxt(2 * d_states, ninf);
  // backpointer per (position, m, d): bit0 = previous membership,
  // bit1 = previous count was already at the cap
  std::vector<std::uint8_t> back(n * 2 * d_states, 0);
  auto idx = [&](std::size_t m, std::size_t d) { return m * d_states + d; };
  auto bidx = [&](std::size_t pos, std::size_t m, std::size_t d) {
    return (pos * 2 + m) * d_states + d;
  };
  auto diff_of = [&](std::size_t pos, std::size_t m) -> std::size_t {
    return (m != (a_opt[pos] ? 1u : 0u)) ? 1u : 0u;
  };

  for (std::size_t m = 0; m < 2; ++m) {
    std::size_t d = std::min<std::size_t>(diff_of(0, m), need);
    cur[idx(m, d)] = m ? 1.0 : 0.0;
  }
  for (std::size_t pos = 1; pos < n; ++pos) {
    std::fill(nxt.begin(), nxt.end(), ninf);
    double xi = inst.costs[pos - 1];
    bool prev_in_a = a_opt[pos - 1] != 0;
    for (std::size_t m = 0; m < 2; ++m) {
      double gain = m ? 1.0 : 0.0;
      std::size_t dd = diff_of(pos, m);
      for (std::size_t nd = 0; nd < d_states; ++nd) {
        // gather: possible previous counts folding into nd
        std::size_t pds[2];
        std::size_t npd = 0;
        if (nd < need) {
          if (nd >= dd) pds[npd++] = nd - dd;
        } else {
          if (need >= dd) pds[npd++] = need - dd;
          if (dd > 0) pds[npd++] = need;  // already capped
        }
        double best = ninf;
        std::uint8_t ptr = 0;
        // fixed candidate order makes tie-breaking deterministic: the
        // membership agreeing with a_opt first, uncapped count first
        for (int side = 0; side < 2; ++side) {
          std::size_t pm = side == 0 ? (prev_in_a ? 1u : 0u)
                                     : (prev_in_a ? 0u : 1u);
          for (std::size_t q = 0; q < npd; ++q) {
            double v = cur[idx(pm, pds[q])];
            if (v == ninf) continue;
            double cand = v + gain - (m && pm ? xi : 0.0);
            if (cand > best) {
              best = cand;
              ptr = static_cast<std::uint8_t>(pm |
                    ((pds[q] == need ? 1u : 0u) << 1));
            }
          }
        }
        nxt[idx(m, nd)] = best;
        back[bidx(pos, m, nd)] = ptr;
      }
    }
    std::swap(cur, nxt);
  }

  double best = ninf;
  std::size_t best_m = 0;
  for (std::size_t m = 0; m < 2; ++m) {
    double v = cur[idx(m, need)];
    if (v > best) {
      best = v;
      best_m = m;
    }
  }
  if (best == ninf)
    throw std::runtime_error("exact_constrained_epsilon: no feasible set");

  res.achiever.assign(n, 0);
  std::size_t m = best_m;
  std::size_t d = need;
  for (std::size_t pos = n; pos-- > 0;) {
    res.achiever[pos] = static_cast<std::uint8_t>(m);
    if (pos == 0) break;
    std::uint8_t ptr = back[bidx(pos, m, d)];
    std::size_t dd = diff_of(pos, m);
    std::size_t pd = (ptr & 2u) ? need : d - dd;
    m = ptr & 1u;
    d = pd;
  }
  double f_a = benefit(inst, a_opt);
  double f_b = benefit(inst, res.achiever);
  res.eps_exact = (f_a - f_b) / static_cast<double>(n);
  if (symmetric_difference(res.achiever, a_opt) < need)
    throw std::runtime_error(
        "exact_constrained_epsilon: backtrack violated the difference "
        "constraint");
  return res;
}

PatternSwapResult pattern_swap_construct(const Instance& inst,
                                         const Subset& a_opt, double alpha,
                                         int k) {
  std::size_t n = inst.n();
  if (a_opt.size() != n)
    throw std::invalid_argument("pattern_swap_construct: length mismatch");
  if (k < 2) throw std::invalid_argument("pattern_swap_construct: k >= 2");
  if (!(alpha > 0.0) || alpha * k >= 0.5)
    throw std::invalid_argument("pattern_swap_construct: need 0 < alpha*k < 1/2");

  PatternSwapResult res;
  res.b = a_opt;
  std::size_t w = 2 * static_cast<std::size_t>(k) + 1;  // window item count
  auto xi = [&](std::size_t i) { return inst.costs[i - 1]; };  // 1-based

  for (std::size_t g = 1; g + w - 1 <= n; g += w) {
    ++res.windows_total;
    std::size_t last = g + w - 1;  // item g+2k
    // all referenced costs must exist: xi_{g-1} .. xi_{g+2k}
    if (g < 2 || last > n - 1) continue;
    // strictly descending run staying above 1/2 until the exit cost drops
    // below it; this keeps the optimum alternating across the window
    bool ok = true;
    for (std::size_t j = g; j < last && ok; ++j)
      if (!(xi(j) > xi(j + 1))) ok = false;
    if (!ok) continue;
    if (!(xi(last - 1) > 0.5 && xi(last) < 0.5)) continue;
    // cheap boundary edges pin both window endpoints into the optimum
    if (!(xi(g - 1) + xi(g) < 1.0)) continue;
    if (!(xi(last - 1) + xi(last) < 1.0)) continue;
    double gap = xi(g) + xi(last - 1) - 1.0;
    if (!(gap > 0.0 && gap < 2.0 * k * alpha)) continue;
    // the optimum must hold the alternating pattern here; skip otherwise
    // (can only fail from boundary effects)
    bool pattern = true;
    for (std::size_t off = 0; off < w && pattern; ++off) {
      bool expect = (off % 2 == 0);
      if ((a_opt[g - 1 + off] != 0) != expect) pattern = false;
    }
    if (!pattern) continue;
    // swap in the doubled-endpoint pattern: offsets 0,1,3,...,2k-1,2k
    for (std::size_t off = 0; off < w; ++off) res.b[g - 1 + off] = 0;
    res.b[g - 1] = 1;
    res.b[g - 1 + w - 1] = 1;
    for (std::size_t off = 1; off + 1 < w; off += 2) res.b[g - 1 + off] = 1;
    ++res.windows_used;
    res.benefit_drop += gap;
  }
  return res;
}

std::vector<SweepRow> theta_sweep(const CostDistribution& dist, std::size_t n,
                                  const std::vector<double>& thetas, int reps,
                                  std::uint64_t seed, int jobs) {
  if (n < 2) throw std::invalid_argument("theta_sweep: n >= 2");
  if (reps < 1) throw std::invalid_argument("theta_sweep: reps >= 1");
  struct Rep {
    std::vector<double> delta, eps;  // per theta
  };
  std::vector<Rep> per_rep(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
    std::uint64_t s = derive_seed(seed, "sweep", r);
    Instance inst = Instance::from_costs(sample_costs(dist, n - 1, s));
    SolveResult opt = dp_solve(inst);
    Rep rep;
    rep.delta.reserve(thetas.size());
    rep.eps.reserve(thetas.size());
    for (double th : thetas) {
      PenalizedResult pr = penalized_solve(inst, opt.optimal, th);
      rep.delta.push_back(pr.delta_n);
      rep.eps.push_back(pr.eps_n);
    }
    per_rep[r] = std::move(rep);
  });
  std::vector<SweepRow> rows;
  rows.reserve(thetas.size());
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    std::vector<double> ds, es;
    ds.reserve(per_rep.size());
    es.reserve(per_rep.size());
    for (const auto& rep : per_rep) {
      ds.push_back(rep.delta[t]);
      es.push_back(rep.eps[t]);
    }
    MeanSe md = mean_se(ds), me = mean_se(es);
    rows.push_back({thetas[t], md.mean, md.se, me.mean, me.se});
  }
  return rows;
}

}  // namespace chainopt
