// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Criteria can be selected by number on the command line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "chainopt/chain_solver.hpp"
#include "chainopt/cost_model.hpp"
#include "chainopt/near_optimal.hpp"
#include "chainopt/nk_model.hpp"
#include "chainopt/rng.hpp"
#include "chainopt/stationary_sim.hpp"
#include "chainopt/stats.hpp"
#include "oracle_helpers.hpp"

using namespace chainopt;

namespace {

constexpr int kJobs = 8;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int number;
  const char* title;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Outcome criterion1() {
  Outcome o;
  std::ostringstream d;
  struct Case {
    double lambda, target;
  } cases[] = {{1.0, 0.581977}, {10.0, 0.899955}};
  for (auto c : cases) {
    auto dist = CostDistribution::exponential(c.lambda);
    McEstimate est = estimate_c_mc(dist, 100000, 20, 20240801, kJobs);
    double err = std::abs(est.value - c.target);
    d << "lambda=" << c.lambda << " c_hat=" << fmt(est.value)
      << " |err|=" << fmt(err) << " (tol 0.005)  ";
    if (err >= 0.005) o.pass = false;
  }
  o.detail = d.str();
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::ostringstream d;
  for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
    auto dist = CostDistribution::exponential(lambda);
    double q = limit_constant_c(dist);
    double cf = exponential_limit_constant(lambda);
    double err = std::abs(q - cf);
    d << "lambda=" << lambda << " |quad-closed|=" << fmt(err) << "  ";
    if (err >= 1e-6) o.pass = false;
  }
  o.detail = d.str() + "(tol 1e-6)";
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto dist = CostDistribution::exponential(1.0);
  double tau = default_tau(dist);
  auto stream = simulate_triple(dist, 1000000, 424242, tau);
  std::vector<double> xl, xi, xr;
  xl.reserve(stream.size());
  for (const auto& s : stream) {
    xl.push_back(s.xl);
    xi.push_back(s.xi);
    xr.push_back(s.xr);
  }
  double ks = ks_distance(
      xl, [](double x) { return exponential_stationary_cdf(1.0, x); });
  double c1 = std::abs(pearson_correlation(xl, xi));
  double c2 = std::abs(pearson_correlation(xl, xr));
  double c3 = std::abs(pearson_correlation(xi, xr));
  std::ostringstream d;
  d << "KS=" << fmt(ks) << " (tol 0.01), |corr|=(" << fmt(c1) << "," << fmt(c2)
    << "," << fmt(c3) << ") (tol 0.01)";
  o.detail = d.str();
  o.pass = ks < 0.01 && c1 < 0.01 && c2 < 0.01 && c3 < 0.01;
  return o;
}

Instance test_instance(int rep, bool uni_dist, std::size_t* n_out) {
  static auto exp1 = CostDistribution::exponential(1.0);
  static auto uni = CostDistribution::uniform(0.0, 2.0);
  std::uint64_t tag = static_cast<std::uint64_t>(rep) * 2 + (uni_dist ? 1 : 0);
  std::size_t n = 2 + (derive_seed(101, "size", tag) % 17);  // 2..18
  if (n_out) *n_out = n;
  return Instance::from_costs(sample_costs(uni_dist ? uni : exp1, n - 1,
                                           derive_seed(101, "inst", tag)));
}

Outcome criterion4() {
  Outcome o;
  std::size_t value_checked = 0, set_checked = 0, pen_checked = 0;
  for (int rep = 0; rep < 500; ++rep) {
    for (bool uni_dist : {false, true}) {
      std::size_t n = 0;
      Instance inst = test_instance(rep, uni_dist, &n);
      SolveResult dp = dp_solve(inst);
      SolveResult bf = brute_force_solve(inst);
      if (dp.value != bf.value) {
        o.pass = false;
        o.detail = "dp vs brute value mismatch";
        return o;
      }
      ++value_checked;
      if (check_uniqueness(inst)) {
        if (dp.optimal != bf.optimal) {
          o.pass = false;
          o.detail = "dp vs brute set mismatch on a unique instance";
          return o;
        }
        ++set_checked;
      }
      if (n <= 16) {
        for (double theta : {0.01, 0.1, 0.5}) {
          PenalizedResult pr = penalized_solve(inst, dp.optimal, theta);
          auto oracle = testing::brute_force_penalized(inst, dp.optimal, theta);
          if (pr.penalized_value != oracle.value) {
            o.pass = false;
            o.detail = "penalized dp vs brute mismatch";
            return o;
          }
          ++pen_checked;
        }
      }
    }
  }
  std::ostringstream d;
  d << value_checked << " value checks, " << set_checked
    << " unique set checks, " << pen_checked << " penalized checks, all exact";
  o.detail = d.str();
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t recon_pair = 0, recon_z = 0, skipped_ties = 0;
  for (int rep = 0; rep < 500; ++rep) {
    for (bool uni_dist : {false, true}) {
      std::size_t n = 0;
      Instance inst = test_instance(rep, uni_dist, &n);
      SolveResult dp = dp_solve(inst);
      if (check_uniqueness(inst)) {
        Subset rec = reconstruct_from_inclusion(inst, dp.xl, dp.xr);
        if (rec != dp.optimal) {
          o.pass = false;
          o.detail = "inclusion-criteria set mismatch";
          return o;
        }
        ++recon_pair;
      }
      if (n <= 16) {
        for (double theta : {0.01, 0.1, 0.5}) {
          PenalizedResult pr = penalized_solve(inst, dp.optimal, theta);
          try {
            Subset rec = reconstruct_penalized_from_z(inst, dp.optimal, theta,
                                                      pr.zl, pr.zr, pr.j_signs);
            if (rec != pr.b_set) {
              o.pass = false;
              o.detail = "z-criteria set mismatch";
              return o;
            }
            ++recon_z;
          } catch (const TieDetected&) {
            // not tie-free: legitimate only if the penalized optimum really
            // is non-unique
            if (testing::count_penalized_maximizers(inst, dp.optimal, theta) <
                2) {
              o.pass = false;
              o.detail = "tie reported on a uniquely-solvable instance";
              return o;
            }
            ++skipped_ties;
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << recon_pair << " pair reconstructions and " << recon_z
    << " penalized reconstructions equal the backtracked sets ("
    << skipped_ties << " verified non-unique ties skipped)";
  o.detail = d.str();
  return o;
}

Outcome criterion5() {
  Outcome o;
  auto exp1 = CostDistribution::exponential(1.0);
  auto uni = CostDistribution::uniform(0.0, 2.0);
  std::size_t interior = 0, boundary = 0, instances = 0;
  for (int rep = 0; rep < 50; ++rep) {
    for (const auto* dist : {&exp1, &uni}) {
      std::uint64_t tag = static_cast<std::uint64_t>(rep) * 2 +
                          (dist == &uni ? 1 : 0);
      Instance inst = Instance::from_costs(
          sample_costs(*dist, 10000 - 1, derive_seed(103, "inv", tag)));
      SolveResult dp = dp_solve(inst);
      for (const auto& v : verify_optimal_invariants(inst, dp.optimal))
        (v.boundary ? boundary : interior)++;
      ++instances;
    }
  }
  std::ostringstream d;
  d << instances << " instances of n=10^4, interior violations=" << interior
    << " (must be 0), boundary-exempt=" << boundary;
  o.detail = d.str();
  o.pass = interior == 0;
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto dist = CostDistribution::exponential(1.0);
  std::vector<double> thetas = {0.01, 0.02, 0.04, 0.08};
  auto rows = theta_sweep(dist, 100000, thetas, 20, 777001, kJobs);
  std::vector<std::pair<double, double>> fit_rows;
  double ratio_min = 1e300, ratio_max = 0.0;
  for (const auto& r : rows) {
    fit_rows.emplace_back(r.mean_delta, r.mean_eps);
    double ratio = r.mean_eps / (r.mean_delta * r.mean_delta);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  FitResult fit = fit_scaling_exponent(fit_rows);
  std::ostringstream d;
  d << "slope=" << fmt(fit.slope) << " (need [1.7,2.3]), eps/delta^2 spread="
    << fmt(ratio_max / ratio_min) << " (need <2)";
  o.detail = d.str();
  o.pass = fit.slope >= 1.7 && fit.slope <= 2.3 && ratio_max / ratio_min < 2.0;
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto dist = CostDistribution::exponential(1.0);
  std::size_t checks = 0;
  for (int rep = 0; rep < 10; ++rep) {
    Instance inst = Instance::from_costs(
        sample_costs(dist, 5000 - 1, derive_seed(107, "lag", rep)));
    Subset a = dp_solve(inst).optimal;
    for (double theta : {0.02, 0.05}) {
      PenalizedResult pr = penalized_solve(inst, a, theta);
      ConstrainedResult cr = exact_constrained_epsilon(inst, a, pr.delta_n);
      if (cr.eps_exact > pr.eps_n + 1e-9) {
        std::ostringstream d;
        d << "constrained gap " << cr.eps_exact << " above penalized gap "
          << pr.eps_n;
        o.pass = false;
        o.detail = d.str();
        return o;
      }
      ++checks;
    }
  }
  std::ostringstream d;
  d << checks << " instances x theta checks, constrained <= penalized on all";
  o.detail = d.str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  auto dist = CostDistribution::exponential(1.0);
  double tau = default_tau(dist);
  std::ostringstream d;
  for (double theta : {0.02, 0.05}) {
    RegenEstimate re =
        regenerative_estimate(dist, theta, tau, 200000, 909001, kJobs);
    auto stream = simulate_quintuple(dist, theta, tau, 1000000, 909777);
    std::vector<double> diff;
    diff.reserve(stream.size());
    for (const auto& s : stream) diff.push_back(s.in_a != s.in_b ? 1.0 : 0.0);
    MeanSe direct = mean_se(diff);
    double dci = batch_means_halfwidth95(diff);
    bool overlap = re.delta_hat - re.delta_ci <= direct.mean + dci &&
                   direct.mean - dci <= re.delta_hat + re.delta_ci;
    d << "theta=" << theta << ": regen=" << fmt(re.delta_hat) << "+-"
      << fmt(re.delta_ci) << " direct=" << fmt(direct.mean) << "+-" << fmt(dci)
      << (overlap ? " overlap" : " DISJOINT") << ", min cycle gap="
      << fmt(re.min_w) << "; ";
    // the estimator itself throws if any cycle gap drops below -1e-9
    if (!overlap || re.min_w < -1e-9 || re.eps_hat < 0.0) o.pass = false;
  }
  o.detail = d.str() + "W>=0 held in every cycle";
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto dist = CostDistribution::exponential(1.0);
  double tau = default_tau(dist);
  std::ostringstream d;
  for (double theta : {0.02, 0.05, 0.08}) {
    auto checks = coupling_bound_check(dist, theta, tau, 10000, 111001, kJobs);
    std::size_t ok = 0;
    for (const auto& c : checks)
      if (std::abs(c.sl) <= theta * c.kl + 1e-12) ++ok;
    d << "theta=" << theta << ": " << ok << "/" << checks.size() << " bound; ";
    if (ok != checks.size()) o.pass = false;
  }
  AlphaEstimate ae =
      estimate_alpha(dist, {0.08, 0.05, 0.02}, tau, 400000, 111002, kJobs);
  double mn = 1e300, mx = 0.0;
  for (const auto& [th, ratio] : ae.ratios) {
    mn = std::min(mn, ratio);
    mx = std::max(mx, ratio);
  }
  d << "delta_hat/theta spread=" << fmt(mx / mn) << " (need <=1.5), alpha_hat="
    << fmt(ae.alpha_hat);
  if (!(mx / mn <= 1.5)) o.pass = false;
  o.detail = d.str();
  return o;
}

Outcome criterion11() {
  Outcome o;
  std::vector<double> thetas = {0.002, 0.004, 0.008, 0.016};
  NKTable t = nk_table1(3, 2000, 200, thetas, 20240811, kJobs);
  struct Ref {
    double delta, ratio, mean_l;
  } refs[] = {{0.0397, 0.0308, 10.9},
              {0.0774, 0.0334, 11.0},
              {0.147, 0.0354, 11.3},
              {0.266, 0.0388, 11.8}};
  std::ostringstream d;
  d << "c3_hat=" << fmt(t.c_hat) << " (target 0.3065 +- 0.01); ";
  if (std::abs(t.c_hat - 0.3065) >= 0.01) o.pass = false;
  std::vector<std::pair<double, double>> fit_rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const auto& ref = refs[i];
    fit_rows.emplace_back(row.delta, row.eps);
    double e1 = std::abs(row.delta / ref.delta - 1.0);
    double e2 = std::abs(row.eps_over_delta_sq / ref.ratio - 1.0);
    double e3 = std::abs(row.mean_l / ref.mean_l - 1.0);
    d << "theta=" << row.theta << " rel.errs=(" << fmt(e1) << "," << fmt(e2)
      << "," << fmt(e3) << "); ";
    if (e1 >= 0.15 || e2 >= 0.15 || e3 >= 0.15) o.pass = false;
  }
  FitResult fit = fit_scaling_exponent(fit_rows);
  d << "slope=" << fmt(fit.slope) << " (need [1.7,2.3])";
  if (!(fit.slope >= 1.7 && fit.slope <= 2.3)) o.pass = false;
  // context for the eps/delta^2 column: the exact optimizer is tied to the
  // measured delta curve through eps(theta) = theta*delta - integral(delta)
  double integral = 0.0, prev_t = 0.0, prev_d = 0.0;
  for (const auto& row : t.rows) {
    integral += 0.5 * (row.theta - prev_t) * (row.delta + prev_d);
    prev_t = row.theta;
    prev_d = row.delta;
  }
  double eps_env = prev_t * prev_d - integral;
  d << "; envelope-identity eps at theta=" << fmt(prev_t) << ": "
    << fmt(eps_env) << " vs measured " << fmt(t.rows.back().eps);
  o.detail = d.str();
  return o;
}

Outcome criterion12() {
  Outcome o;
  auto uni = CostDistribution::uniform(0.0, 2.0);
  double sim = simulate_iid_threshold_eps(uni, 1000000, 0.01, 121001);
  double target = 5e-5;
  double rel = std::abs(sim / target - 1.0);
  std::ostringstream d;
  d << "simulated=" << fmt(sim) << " analytic=5e-05 rel.err=" << fmt(rel)
    << " (tol 0.10)";
  o.detail = d.str();
  o.pass = rel < 0.10;
  return o;
}

Outcome criterion13() {
  Outcome o;
  auto dist = CostDistribution::exponential(1.0);
  const int k = 3;
  const std::size_t n = 1000000;
  const int reps = 20;
  std::vector<double> alphas = {0.01, 0.02, 0.04};
  std::vector<double> rate(alphas.size(), 0.0), loss(alphas.size(), 0.0);
  double any_gap = 0.0;  // event count with the widest admissible gap window
  std::size_t total = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Instance inst = Instance::from_costs(
        sample_costs(dist, n - 1, derive_seed(131, "swap", rep)));
    SolveResult opt = dp_solve(inst);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      PatternSwapResult ps =
          pattern_swap_construct(inst, opt.optimal, alphas[i], k);
      rate[i] += static_cast<double>(ps.windows_used);
      loss[i] += ps.benefit_drop;
      if (i == 0) total += ps.windows_total;
    }
    any_gap += static_cast<double>(
        pattern_swap_construct(inst, opt.optimal, 0.16, k).windows_used);
  }
  std::ostringstream d;
  double rate_min = 1e300, rate_max = 0.0, loss_min = 1e300, loss_max = 0.0;
  bool measurable = true;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (rate[i] <= 0.0 || loss[i] <= 0.0) measurable = false;
    double q = rate[i] / static_cast<double>(total);
    double r = loss[i] / static_cast<double>(total);
    double qa = q / alphas[i];
    double ra = r / (alphas[i] * alphas[i]);
    rate_min = std::min(rate_min, qa);
    rate_max = std::max(rate_max, qa);
    loss_min = std::min(loss_min, ra);
    loss_max = std::max(loss_max, ra);
    d << "alpha=" << alphas[i] << " accepted=" << rate[i]
      << " rate/alpha=" << fmt(qa) << " loss/alpha^2=" << fmt(ra) << "; ";
  }
  if (measurable) {
    d << "rate drift=" << fmt(rate_max / rate_min)
      << " (need <1.3), loss drift=" << fmt(loss_max / loss_min)
      << " (need <1.7)";
    o.pass = rate_max / rate_min < 1.3 && loss_max / loss_min < 1.7;
  } else {
    d << "no measurable rates (" << fmt(any_gap) << "/" << total * reps / reps
      << " windows qualify even with the gap window at its admissible "
         "maximum 2k*alpha=0.96); the event pins all 2k run costs into a "
         "band of width 2k*alpha above 1/2, so its probability scales like "
         "alpha^(2k), not alpha";
    o.pass = false;
  }
  o.detail = d.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria = {
      {1, "limit constant via Monte Carlo (exponential rates 1 and 10)",
       criterion1},
      {2, "limit constant quadrature vs closed form", criterion2},
      {3, "stationary law: KS distance and independence", criterion3},
      {4, "oracle equivalence: plain and penalized DP vs enumeration",
       criterion4},
      {5, "local optimality checks on large random instances", criterion5},
      {6, "inclusion-criteria reconstructions equal DP sets", criterion6},
      {7, "main-model scaling exponent from the theta sweep", criterion7},
      {8, "constrained gap never exceeds the penalized gap", criterion8},
      {9, "regenerative vs direct estimates agree", criterion9},
      {10, "coupling drift bound and delta/theta stability", criterion10},
      {11, "NK sweep table at desk scale", criterion11},
      {12, "single-item model threshold simulation", criterion12},
      {13, "pattern-swap acceptance and loss scaling", criterion13},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), c.number) == wanted.end())
      continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
    std::printf("[%s] criterion %d: %s (%.1fs)\n    %s\n",
                o.pass ? "PASS" : "FAIL", c.number, c.title, dt,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
