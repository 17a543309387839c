#include "chainopt/chain_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace chainopt {

Instance Instance::from_costs(std::vector<double> costs) {
  for (double c : costs)
    if (!(c > 0.0))
      throw std::invalid_argument("instance costs must be strictly positive");
  Instance inst;
  inst.costs = std::move(costs);
  return inst;
}

Instance Instance::load(std::istream& in) {
  std::size_t n = 0;
  if (!(in >> n) || n < 1)
    throw std::invalid_argument("instance file: bad item count");
  std::vector<double> costs(n - 1);
  for (auto& c : costs)
    if (!(in >> c))
      throw std::invalid_argument("instance file: expected n-1 costs");
  return from_costs(std::move(costs));
}

Instance Instance::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  return load(in);
}

void Instance::save(std::ostream& out) const {
  out << n() << "\n";
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (i) out << ' ';
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", costs[i]);
    out << buf;
  }
  out << "\n";
}

std::string subset_to_string(const Subset& s) {
  std::string str(s.size(), '0');
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i]) str[i] = '1';
  return str;
}

std::size_t symmetric_difference(const Subset& a, const Subset& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("symmetric_difference: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] != 0) != (b[i] != 0)) ++d;
  return d;
}

double benefit(const Instance& inst, const Subset& subset) {
  if (subset.size() != inst.n())
    throw std::invalid_argument("benefit: subset length mismatch");
  double value = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i)
    if (subset[i]) value += 1.0;
  for (std::size_t i = 0; i + 1 < subset.size(); ++i)
    if (subset[i] && subset[i + 1]) value -= inst.costs[i];
  return value;
}

SolveResult brute_force_solve(const Instance& inst) {
  std::size_t n = inst.n();
  if (n > 24)
    throw std::invalid_argument("brute_force_solve: n > 24 enumeration guard");
  // lexicographic order of the printed string = item 1 bit first
  auto lex_less = [n](std::uint32_t a, std::uint32_t b) {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned ba = (a >> i) & 1u, bb = (b >> i) & 1u;
      if (ba != bb) return ba < bb;
    }
    return false;
  };
  Subset cur(n, 0);
  auto unpack = [&](std::uint32_t mask) {
    for (std::size_t i = 0; i < n; ++i) cur[i] = (mask >> i) & 1u;
  };
  double best = -1.0;
  std::uint32_t best_mask = 0;
  bool unique = true;
  bool first = true;
  std::uint32_t total = static_cast<std::uint32_t>(1u) << n;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    unpack(mask);
    double v = benefit(inst, cur);
    if (first || v > best) {
      best = v;
      best_mask = mask;
      unique = true;
      first = false;
    } else if (v == best) {
      unique = false;
      if (lex_less(mask, best_mask)) best_mask = mask;
    }
  }
  SolveResult res;
  unpack(best_mask);
  res.optimal = cur;
  res.value = best;
  res.unique = unique;
  return res;
}

namespace {

void fill_difference_processes(const Instance& inst, std::vector<double>& xl,
                               std::vector<double>& xr) {
  std::size_t n = inst.n();
  xl.assign(n, 0.0);
  xr.assign(n, 0.0);
  xl[0] = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    xl[i + 1] = std::max(1.0 - xl[i], 1.0 - inst.costs[i]);
  xr[n - 1] = 1.0;
  for (std::size_t i = n - 1; i >= 1; --i)
    xr[i - 1] = std::max(1.0 - xr[i], 1.0 - inst.costs[i - 1]);
}

}  // namespace

SolveResult dp_solve(const Instance& inst) {
  std::size_t n = inst.n();
  SolveResult res;
  // v = best with item i chosen, w = best with item i excluded;
  // back bits record whether the previous item was chosen on the best path.
  std::vector<std::uint8_t> back_v(n, 0), back_w(n, 0);
  double v = 1.0, w = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double xi = inst.costs[i - 1];
    double v_in = v - xi;  // keep previous item
    double nv, nw;
    if (v_in > w) {
      nv = 1.0 + v_in;
      back_v[i] = 1;
    } else {
      nv = 1.0 + w;  // tie prefers exclude
      back_v[i] = 0;
    }
    if (v > w) {
      nw = v;
      back_w[i] = 1;
    } else {
      nw = w;
      back_w[i] = 0;
    }
    v = nv;
    w = nw;
  }
  res.optimal.assign(n, 0);
  bool take = v > w;  // tie prefers exclude
  for (std::size_t i = n; i-- > 0;) {
    res.optimal[i] = take ? 1 : 0;
    if (i > 0) take = (take ? back_v[i] : back_w[i]) != 0;
  }
  res.value = benefit(inst, res.optimal);
  fill_difference_processes(inst, res.xl, res.xr);
  res.unique = (n >= 2) ? check_uniqueness(inst) : true;
  return res;
}

Subset reconstruct_from_inclusion(const Instance& inst,
                                  const std::vector<double>& xl,
                                  const std::vector<double>& xr) {
  std::size_t n = inst.n();
  if (xl.size() != n || xr.size() != n)
    throw std::invalid_argument("reconstruct_from_inclusion: bad array sizes");
  Subset set(n, 0);
  if (n == 1) {
    set[0] = 1;
    return set;
  }
  // -1 unknown, else 0/1
  std::vector<int> vote(n, -1);
  auto assign = [&](std::size_t idx, int val) {
    if (vote[idx] == -1) {
      vote[idx] = val;
    } else if (vote[idx] != val) {
      throw TieDetected("non-unique or degenerate instance");
    }
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double a = xl[i], c = inst.costs[i], b = xr[i + 1];
    int in_i, in_next;
    if (c < a && c < b) {
      in_i = 1;
      in_next = 1;
    } else if (b < a && b < c) {
      in_i = 1;
      in_next = 0;
    } else if (a < b && a < c) {
      in_i = 0;
      in_next = 1;
    } else {
      throw TieDetected("non-unique or degenerate instance");
    }
    assign(i, in_i);
    assign(i + 1, in_next);
  }
  for (std::size_t i = 0; i < n; ++i) set[i] = vote[i] == 1 ? 1 : 0;
  return set;
}

bool check_uniqueness(const Instance& inst) {
  std::size_t n = inst.n();
  if (n < 2) return true;
  for (std::size_t i = 0; i + 1 < inst.costs.size(); ++i)
    if (inst.costs[i] + inst.costs[i + 1] < 1.0) return true;
  // fallback: non-unique exactly when n is even and M_n = n/2, in which case
  // several zero-cost size-n/2 sets tie
  if (n % 2 != 0) return true;
  // value-only forward pass; avoid recursing through dp_solve
  double v = 1.0, w = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double xi = inst.costs[i - 1];
    double nv = 1.0 + std::max(v - xi, w);
    double nw = std::max(v, w);
    v = nv;
    w = nw;
  }
  double value = std::max(v, w);
  return value != static_cast<double>(n) / 2.0;
}

std::vector<Violation> verify_optimal_invariants(const Instance& inst,
                                                 const Subset& optimal) {
  std::size_t n = inst.n();
  if (optimal.size() != n)
    throw std::invalid_argument("verify_optimal_invariants: length mismatch");
  std::vector<Violation> out;
  auto in = [&](std::size_t item) { return optimal[item - 1] != 0; };  // 1-based
  auto xi = [&](std::size_t i) { return inst.costs[i - 1] ; };         // 1-based

  // (a) cheap neighborhood forces inclusion, valid for interior items
  for (std::size_t i = 2; i + 1 <= n; ++i) {
    if (xi(i - 1) + xi(i) <= 1.0 && !in(i)) {
      std::ostringstream os;
      os << "xi_" << (i - 1) << "+xi_" << i << "<=1 but item " << i
         << " not chosen";
      out.push_back({OptRule::ForcedInclusion, i, false, os.str()});
    }
  }
  // (c) an adjacent pair is never worth keeping at cost above 1
  for (std::size_t i = 1; i <= n - 1; ++i) {
    if (in(i) && in(i + 1) && xi(i) > 1.0) {
      std::ostringstream os;
      os << "items " << i << "," << (i + 1) << " chosen with xi_" << i << ">1";
      out.push_back({OptRule::AdjacentCostCap, i, false, os.str()});
    }
  }
  // (d) two expensive edges rule out a chosen triple
  for (std::size_t i = 1; i + 2 <= n; ++i) {
    if (xi(i) + xi(i + 1) > 1.0 && in(i) && in(i + 1) && in(i + 2)) {
      std::ostringstream os;
      os << "triple " << i << ".." << (i + 2) << " chosen with xi_" << i
         << "+xi_" << (i + 1) << ">1";
      out.push_back({OptRule::TripleExclusion, i, false, os.str()});
    }
  }
  // (e) across a strictly descending cost run with adjacent sums > 1 the
  // chosen set alternates on the first 2k items of the run
  std::size_t m = inst.costs.size();  // cost indices 1..m
  std::size_t g = 1;
  while (g + 1 <= m) {
    // maximal strictly descending run starting at g
    std::size_t end = g;
    while (end + 1 <= m && xi(end) > xi(end + 1)) ++end;
    std::size_t run_len = end - g;  // descents in the run
    if (run_len >= 4) {
      // longest prefix with adjacent sums > 1
      std::size_t sum_end = g;
      while (sum_end + 1 <= end && xi(sum_end) + xi(sum_end + 1) > 1.0)
        ++sum_end;
      for (std::size_t k = 2; g + 2 * k <= end; ++k) {
        if (g + 2 * k - 1 > sum_end) break;
        bool boundary = (g == 1) || (g + 2 * k >= m);
        bool alternates = true;
        for (std::size_t j = g; j + 1 <= g + 2 * k - 1; ++j)
          if (in(j) == in(j + 1)) {
            alternates = false;
            break;
          }
        if (!alternates) {
          std::ostringstream os;
          os << "descending run at " << g << " (k=" << k
             << ") not alternating";
          out.push_back({OptRule::DescendingAlternation, g, boundary,
                         os.str()});
        }
      }
    }
    g = (end > g) ? end : g + 1;
  }
  return out;
}

}  // namespace chainopt
