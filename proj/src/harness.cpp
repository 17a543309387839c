#include "chainopt/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "chainopt/chain_solver.hpp"
#include "chainopt/cost_model.hpp"
#include "chainopt/csv.hpp"
#include "chainopt/near_optimal.hpp"
#include "chainopt/nk_model.hpp"
#include "chainopt/parallel.hpp"
#include "chainopt/stationary_sim.hpp"
#include "chainopt/stats.hpp"

#include "CLI11.hpp"

namespace chainopt {

namespace {

struct OutFile {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit OutFile(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);  // binary keeps bodies byte-stable
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& stream() { return *os; }
};

std::string fmt(double v) { return CsvWriter::num(v); }

void echo_config(CsvWriter& csv, const std::string& cmd, const RunConfig& cfg,
                 const std::vector<std::string>& extra = {}) {
  csv.comment(kToolVersion);
  std::ostringstream os;
  os << "cmd=" << cmd << " dist=" << cfg.dist << " seed=" << cfg.seed;
  csv.comment(os.str());
  for (const auto& e : extra) csv.comment(e);
}

std::string join_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt(xs[i]);
  }
  return s;
}

double resolve_tau(const RunConfig& cfg, const CostDistribution& dist) {
  return cfg.tau > 0.0 ? cfg.tau : default_tau(dist);
}

CostDistribution checked_dist(const RunConfig& cfg) {
  CostDistribution dist = CostDistribution::parse(cfg.dist);
  if (!dist.valid_for_theorems())
    throw std::invalid_argument(
        "distribution rejected: limit-theorem experiments need 0 < G(1/2) < "
        "1 (" + cfg.dist + ")");
  return dist;
}

void require_list(const std::vector<double>& xs, const char* what) {
  if (xs.empty())
    throw std::invalid_argument(std::string("missing required list: ") + what);
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
  Instance inst = Instance::load_file(cfg.input);
  SolveResult res = dp_solve(inst);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", res.value);
  std::cout << "M_n = " << buf << "\n";
  std::cout << "A = " << subset_to_string(res.optimal) << "\n";
  std::cout << "unique = " << (res.unique ? "true" : "false") << "\n";
  auto violations = verify_optimal_invariants(inst, res.optimal);
  std::size_t interior = 0, boundary = 0;
  for (const auto& v : violations) (v.boundary ? boundary : interior)++;
  std::cout << "invariants: " << interior << " interior violations, "
            << boundary << " boundary-exempt\n";
  for (const auto& v : violations)
    std::cout << "  [" << static_cast<char>(v.rule) << "] "
              << (v.boundary ? "(boundary) " : "") << v.detail << "\n";
  return interior == 0 ? 0 : 1;
}

int cmd_sweep_theta(const RunConfig& cfg) {
  CostDistribution dist = checked_dist(cfg);
  require_list(cfg.thetas, "--theta");
  auto rows = theta_sweep(dist, cfg.n, cfg.thetas, cfg.reps, cfg.seed, cfg.jobs);
  OutFile out(cfg.out);
  CsvWriter csv(out.stream());
  std::ostringstream oc;
  oc << "n=" << cfg.n << " reps=" << cfg.reps << " thetas=" << join_list(cfg.thetas)
     << " jobs-independent=yes";
  echo_config(csv, "sweep-theta", cfg, {oc.str()});
  std::vector<std::pair<double, double>> fit_rows;
  for (const auto& r : rows) fit_rows.emplace_back(r.mean_delta, r.mean_eps);
  try {
    FitResult fit = fit_scaling_exponent(fit_rows);
    std::ostringstream of;
    of << "fit slope=" << fmt(fit.slope) << " intercept=" << fmt(fit.intercept)
       << " r2=" << fmt(fit.r2);
    csv.comment(of.str());
    std::cout << "scaling exponent fit: slope=" << fmt(fit.slope)
              << " r2=" << fmt(fit.r2) << "\n";
  } catch (const std::exception& e) {
    csv.comment(std::string("fit unavailable: ") + e.what());
  }
  csv.header({"theta", "mean_delta", "se_delta", "mean_eps", "se_eps", "reps",
              "n", "dist", "seed"});
  for (const auto& r : rows)
    csv.row_strings({fmt(r.theta), fmt(r.mean_delta), fmt(r.se_delta),
                     fmt(r.mean_eps), fmt(r.se_eps), CsvWriter::num(cfg.reps),
                     CsvWriter::num(cfg.n), cfg.dist,
                     CsvWriter::num(cfg.seed)});
  return 0;
}

int cmd_eps_delta(const RunConfig& cfg) {
  CostDistribution dist = checked_dist(cfg);
  require_list(cfg.deltas, "--delta");
  struct Rep {
    std::vector<double> eps;
  };
  std::vector<Rep> per_rep(static_cast<std::size_t>(cfg.reps));
  parallel_for(static_cast<std::size_t>(cfg.reps), cfg.jobs, [&](std::size_t r) {
    Instance inst = Instance::from_costs(
        sample_costs(dist, cfg.n - 1, derive_seed(cfg.seed, "epsdelta", r)));
    SolveResult opt = dp_solve(inst);
    Rep rep;
    for (double d : cfg.deltas)
      rep.eps.push_back(exact_constrained_epsilon(inst, opt.optimal, d).eps_exact);
    per_rep[r] = std::move(rep);
  });
  OutFile out(cfg.out);
  CsvWriter csv(out.stream());
  std::ostringstream oc;
  oc << "n=" << cfg.n << " reps=" << cfg.reps << " deltas=" << join_list(cfg.deltas);
  echo_config(csv, "eps-delta", cfg, {oc.str()});
  csv.header({"delta", "mean_eps", "se_eps", "reps", "n", "dist", "seed"});
  for (std::size_t t = 0; t < cfg.deltas.size(); ++t) {
    std::vector<double> es;
    for (const auto& rep : per_rep) es.push_back(rep.eps[t]);
    MeanSe ms = mean_se(es);
    csv.row_strings({fmt(cfg.deltas[t]), fmt(ms.mean), fmt(ms.se),
                     CsvWriter::num(cfg.reps), CsvWriter::num(cfg.n), cfg.dist,
                     CsvWriter::num(cfg.seed)});
  }
  return 0;
}

int cmd_stationary(const RunConfig& cfg) {
  CostDistribution dist = checked_dist(cfg);
  double tau = resolve_tau(cfg, dist);
  McEstimate c = estimate_c_mc(dist, cfg.n, cfg.reps, cfg.seed, cfg.jobs);
  auto stream = simulate_triple(dist, cfg.length, derive_seed(cfg.seed, "triple", 0), tau);
  std::vector<double> xl, xi, xr;
  xl.reserve(stream.size());
  xi.reserve(stream.size());
  xr.reserve(stream.size());
  for (const auto& s : stream) {
    xl.push_back(s.xl);
    xi.push_back(s.xi);
    xr.push_back(s.xr);
  }
  double ks = ks_distance(xl, [&](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return stationary_cdf_F(dist, x);
  });
  double c_quadrature = limit_constant_c(dist);
  OutFile out(cfg.out);
  CsvWriter csv(out.stream());
  std::ostringstream oc;
  oc << "n=" << cfg.n << " reps=" << cfg.reps << " length=" << cfg.length
     << " tau=" << fmt(tau);
  echo_config(csv, "stationary", cfg, {oc.str()});
  csv.header({"quantity", "value", "se"});
  csv.row_strings({"c_hat", fmt(c.value), fmt(c.se)});
  csv.row_strings({"c_quadrature", fmt(c_quadrature), "0"});
  csv.row_strings({"ks_xl_vs_F", fmt(ks), "0"});
  csv.row_strings({"corr_xl_xi", fmt(pearson_correlation(xl, xi)), "0"});
  csv.row_strings({"corr_xl_xr", fmt(pearson_correlation(xl, xr)), "0"});
  csv.row_strings({"corr_xi_xr", fmt(pearson_correlation(xi, xr)), "0"});
  return 0;
}

int cmd_regen(const RunConfig& cfg) {
  CostDistribution dist = checked_dist(cfg);
  require_list(cfg.thetas, "--theta");
  double tau = resolve_tau(cfg, dist);
  OutFile out(cfg.out);
  CsvWriter csv(out.stream());
  std::ostringstream oc;
  oc << "cycles=" << cfg.cycles << " tau=" << fmt(tau)
     << " thetas=" << join_list(cfg.thetas);
  echo_config(csv, "regen", cfg, {oc.str()});
  csv.header({"theta", "delta_hat", "delta_ci", "eps_hat", "eps_ci", "cycles",
              "mean_T", "tau"});
  for (double th : cfg.thetas) {
    RegenEstimate re =
        regenerative_estimate(dist, th, tau, cfg.cycles, cfg.seed, cfg.jobs);
    csv.row_strings({fmt(th), fmt(re.delta_hat), fmt(re.delta_ci),
                     fmt(re.eps_hat), fmt(re.eps_ci),
                     CsvWriter::num(re.cycles), fmt(re.mean_t), fmt(re.tau)});
  }
  std::vector<double> positive;
  for (double th : cfg.thetas)
    if (th > 0.0) positive.push_back(th);
  if (positive.size() >= 2) {
    AlphaEstimate ae =
        estimate_alpha(dist, positive, tau, cfg.cycles, cfg.seed, cfg.jobs);
    std::cout << "alpha_hat = " << fmt(ae.alpha_hat) << "\n";
    for (const auto& [th, ratio] : ae.ratios)
      std::cout << "  delta_hat/theta at theta=" << fmt(th) << ": "
                << fmt(ratio) << "\n";
  }
  return 0;
}

int cmd_coupling(const RunConfig& cfg) {
  CostDistribution dist = checked_dist(cfg);
  require_list(cfg.thetas, "--theta");
  double tau = resolve_tau(cfg, dist);
  OutFile out(cfg.out);
  std::ostream& os = out.stream();
  for (double th : cfg.thetas) {
    auto checks =
        coupling_bound_check(dist, th, tau, cfg.samples, cfg.seed, cfg.jobs);
    std::size_t violations = 0, integer_q = 0;
    for (const auto& cc : checks) {
      if (std::abs(cc.sl) > th * cc.kl + 1e-12) ++violations;
      if (cc.q_integer) ++integer_q;
      char line[160];
      std::snprintf(line, sizeof(line),
                    "{\"theta\":%.10g,\"sL\":%.12g,\"kL\":%d,\"q_integer\":%s}",
                    th, cc.sl, cc.kl, cc.q_integer ? "true" : "false");
      os << line << "\n";
    }
    std::cout << "theta=" << fmt(th) << " samples=" << checks.size()
              << " bound_violations=" << violations
              << " integer_fraction="
              << fmt(static_cast<double>(integer_q) /
                     static_cast<double>(checks.size()))
              << "\n";
    if (violations) return 1;
  }
  return 0;
}

int cmd_nk(const RunConfig& cfg) {
  require_list(cfg.thetas, "--theta");
  NKTable table = nk_table1(cfg.K, cfg.N, cfg.reps, cfg.thetas, cfg.seed, cfg.jobs);
  OutFile out(cfg.out);
  CsvWriter csv(out.stream());
  std::ostringstream oc;
  oc << "K=" << cfg.K << " N=" << cfg.N << " reps=" << cfg.reps
     << " c_hat=" << fmt(table.c_hat);
  echo_config(csv, "nk", cfg, {oc.str()});
  csv.header({"theta", "delta", "eps", "eps_over_delta_sq", "mean_L", "reps",
              "N", "K", "seed"});
  for (const auto& r : table.rows)
    csv.row_strings({fmt(r.theta), fmt(r.delta), fmt(r.eps),
                     fmt(r.eps_over_delta_sq), fmt(r.mean_l),
                     CsvWriter::num(cfg.reps), CsvWriter::num(cfg.N),
                     CsvWriter::num(cfg.K), CsvWriter::num(cfg.seed)});
  std::vector<std::pair<double, double>> fit_rows;
  for (const auto& r : table.rows) fit_rows.emplace_back(r.delta, r.eps);
  try {
    FitResult fit = fit_scaling_exponent(fit_rows);
    std::cout << "c_hat = " << fmt(table.c_hat)
              << ", scaling exponent fit: slope=" << fmt(fit.slope)
              << " r2=" << fmt(fit.r2) << "\n";
  } catch (const std::exception&) {
  }
  return 0;
}

int cmd_pattern_swap(const RunConfig& cfg) {
  CostDistribution dist = checked_dist(cfg);
  std::vector<double> alphas = cfg.alphas;
  if (alphas.empty() && cfg.alpha > 0.0) alphas.push_back(cfg.alpha);
  if (alphas.empty())
    throw std::invalid_argument("pattern-swap: provide --alpha values");
  struct Rep {
    std::vector<double> used, drop, delta, eps;
    std::size_t total = 0;
  };
  std::vector<Rep> per_rep(static_cast<std::size_t>(cfg.reps));
  parallel_for(static_cast<std::size_t>(cfg.reps), cfg.jobs, [&](std::size_t r) {
    Instance inst = Instance::from_costs(
        sample_costs(dist, cfg.n - 1, derive_seed(cfg.seed, "pswap", r)));
    SolveResult opt = dp_solve(inst);
    Rep rep;
    for (double a : alphas) {
      PatternSwapResult ps = pattern_swap_construct(inst, opt.optimal, a, cfg.k);
      rep.total = ps.windows_total;
      rep.used.push_back(static_cast<double>(ps.windows_used));
      rep.drop.push_back(ps.benefit_drop);
      rep.delta.push_back(
          static_cast<double>(symmetric_difference(opt.optimal, ps.b)) /
          static_cast<double>(cfg.n));
      rep.eps.push_back((opt.value - benefit(inst, ps.b)) /
                        static_cast<double>(cfg.n));
    }
    per_rep[r] = std::move(rep);
  });
  OutFile out(cfg.out);
  CsvWriter csv(out.stream());
  std::ostringstream oc;
  oc << "n=" << cfg.n << " reps=" << cfg.reps << " k=" << cfg.k
     << " alphas=" << join_list(alphas);
  echo_config(csv, "pattern-swap", cfg, {oc.str()});
  csv.header({"alpha", "k", "windows_total", "windows_used", "accept_rate",
              "rate_over_alpha", "mean_loss_per_window", "loss_over_alpha_sq",
              "delta_n", "eps_n", "reps", "n", "dist", "seed"});
  for (std::size_t t = 0; t < alphas.size(); ++t) {
    double used = 0.0, drop = 0.0, dn = 0.0, en = 0.0;
    std::size_t total = 0;
    for (const auto& rep : per_rep) {
      used += rep.used[t];
      drop += rep.drop[t];
      dn += rep.delta[t];
      en += rep.eps[t];
      total += rep.total;
    }
    double rate = used / static_cast<double>(total);
    double loss = drop / static_cast<double>(total);
    double a = alphas[t];
    csv.row_strings({fmt(a), CsvWriter::num(cfg.k), CsvWriter::num(total),
                     fmt(used), fmt(rate), fmt(rate / a), fmt(loss),
                     fmt(loss / (a * a)),
                     fmt(dn / static_cast<double>(cfg.reps)),
                     fmt(en / static_cast<double>(cfg.reps)),
                     CsvWriter::num(cfg.reps), CsvWriter::num(cfg.n), cfg.dist,
                     CsvWriter::num(cfg.seed)});
  }
  return 0;
}

namespace {

// flat key=value config support: the file's pairs become flags placed before
// the explicit ones, and TakeLast makes explicit flags win
std::vector<std::string> splice_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::vector<std::string> out;
  if (!rest.empty()) out.push_back(rest.front());  // subcommand name first
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + line);
    out.push_back("--" + line.substr(0, eq));
    out.push_back(line.substr(eq + 1));
  }
  for (std::size_t i = 1; i < rest.size(); ++i) out.push_back(rest[i]);
  return out;
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args) {
  CLI::App app{std::string(kToolVersion) +
               " - dynamic programming on a cost chain: exact, near-optimal "
               "and stationary experiments"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string theta_list, delta_list, alpha_list;

  std::string config_doc;  // consumed before parsing; listed for --help
  auto add_common = [&](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--config", config_doc, "flat key=value config file; flags override");
    sub->add_option("--dist", cfg.dist, "cost law: exp:L, uniform:LO:HI, empirical:PATH");
    sub->add_option("--n", cfg.n, "item count per instance");
    sub->add_option("--reps", cfg.reps, "replicate count");
    sub->add_option("--theta", theta_list, "comma list of theta values");
    sub->add_option("--delta", delta_list, "comma list of delta values");
    sub->add_option("--tau", cfg.tau, "regeneration threshold (0 = auto)");
    sub->add_option("--alpha", alpha_list, "comma list of window parameters");
    sub->add_option("--k", cfg.k, "pattern-swap half-width");
    sub->add_option("--K", cfg.K, "NK interaction range");
    sub->add_option("--N", cfg.N, "NK string length");
    sub->add_option("--cycles", cfg.cycles, "regenerative cycle count");
    sub->add_option("--length", cfg.length, "stationary stream length");
    sub->add_option("--samples", cfg.samples, "coupling sample count");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--jobs", cfg.jobs, "worker threads");
  };

  auto* solve = app.add_subcommand("solve", "solve one instance file");
  solve->add_option("input", cfg.input, "instance file")->required();
  auto* sweep = app.add_subcommand("sweep-theta", "penalized sweep over theta");
  auto* epsd = app.add_subcommand("eps-delta", "exact constrained gap over a delta grid");
  auto* stat = app.add_subcommand("stationary", "limit constant and stationary-law diagnostics");
  auto* regen = app.add_subcommand("regen", "regenerative cycle estimates");
  auto* coup = app.add_subcommand("coupling", "penalized-vs-plain drift bound checks");
  auto* nk = app.add_subcommand("nk", "NK landscape sweep table");
  auto* pswap = app.add_subcommand("pattern-swap", "near-optimal sets from local pattern swaps");
  for (CLI::App* sub : {sweep, epsd, stat, regen, coup, nk, pswap})
    add_common(sub);

  std::vector<std::string> args;
  try {
    args = splice_config(raw_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto parse_list = [](const std::string& s) {
    std::vector<double> xs;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) xs.push_back(std::stod(tok));
    return xs;
  };
  cfg.thetas = parse_list(theta_list);
  cfg.deltas = parse_list(delta_list);
  cfg.alphas = parse_list(alpha_list);

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (sweep->parsed()) return cmd_sweep_theta(cfg);
    if (epsd->parsed()) return cmd_eps_delta(cfg);
    if (stat->parsed()) return cmd_stationary(cfg);
    if (regen->parsed()) return cmd_regen(cfg);
    if (coup->parsed()) return cmd_coupling(cfg);
    if (nk->parsed()) return cmd_nk(cfg);
    if (pswap->parsed()) return cmd_pattern_swap(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!cfg.out.empty()) {
      std::ofstream diag(cfg.out + ".error.txt");
      diag << kToolVersion << "\n" << e.what() << "\n";
    }
    return 1;
  }
  return 1;
}

}  // namespace chainopt
