#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainopt {

// Exact ties between the compared quantities break the strict-inequality
// inclusion rules; callers get this instead of a guessed set.
struct TieDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Items 1..n on a path; cost xi_i sits on the edge (i, i+1).
struct Instance {
  std::vector<double> costs;  // xi_1..xi_{n-1}

  std::size_t n() const { return costs.size() + 1; }
  double xi(std::size_t i) const { return costs[i - 1]; }  // 1-based

  static Instance from_costs(std::vector<double> costs);
  static Instance load(std::istream& in);
  static Instance load_file(const std::string& path);
  void save(std::ostream& out) const;
};

// Chosen items as a 0/1 vector over positions 1..n (index 0 = item 1).
using Subset = std::vector<std::uint8_t>;

std::string subset_to_string(const Subset& s);
std::size_t symmetric_difference(const Subset& a, const Subset& b);

// f(A) = |A| - sum_i xi_i 1(i in A, i+1 in A), evaluated in index order so
// every caller sees the same floating-point value for the same set.
double benefit(const Instance& inst, const Subset& subset);

struct SolveResult {
  double value = 0.0;
  Subset optimal;
  bool unique = true;
  std::vector<double> xl;  // XL_1..XL_n (empty for the brute-force oracle)
  std::vector<double> xr;  // XR_1..XR_n
};

// Exhaustive oracle, n <= 24. Ties resolved to the lexicographically
// smallest 0/1 string; unique=false iff the maximum is attained twice.
SolveResult brute_force_solve(const Instance& inst);

// O(n) forward value recursion with backtracking, plus the one-sided
// difference processes
//   XL_1 = 1,  XL_{i+1} = max(1 - XL_i, 1 - xi_i)
//   XR_n = 1,  XR_{i-1} = max(1 - XR_i, 1 - xi_{i-1}).
// Backtracking prefers "exclude" on exact ties.
SolveResult dp_solve(const Instance& inst);

// Membership from the pairwise inclusion criteria: for each pair (i, i+1),
// the smallest of (XL_i, xi_i, XR_{i+1}) decides. Throws TieDetected on
// exact ties or vote conflicts.
Subset reconstruct_from_inclusion(const Instance& inst,
                                  const std::vector<double>& xl,
                                  const std::vector<double>& xr);

// True when the optimum is provably unique: some xi_i + xi_{i+1} < 1, or the
// fallback criterion (non-unique iff n even and M_n = n/2) says so.
bool check_uniqueness(const Instance& inst);

enum class OptRule : char {
  ForcedInclusion = 'a',     // xi_{i-1} + xi_i <= 1  =>  i chosen
  AdjacentCostCap = 'c',     // i, i+1 chosen          =>  xi_i <= 1
  TripleExclusion = 'd',     // xi_i + xi_{i+1} > 1    =>  not all of i,i+1,i+2
  DescendingAlternation = 'e'  // strict alternation across descending runs
};

struct Violation {
  OptRule rule;
  std::size_t index;  // leftmost item involved
  bool boundary;      // touches item 1 or n; exempt from guarantees
  std::string detail;
};

// Local optimality checks for an exact optimum. Interior violations indicate
// a bug; boundary hits are reported but carry no guarantee.
std::vector<Violation> verify_optimal_invariants(const Instance& inst,
                                                 const Subset& optimal);

}  // namespace chainopt
