#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chainopt {

inline constexpr const char* kToolVersion = "chainopt 0.1.0";

// Shared CLI/config surface; each subcommand reads the fields it needs.
struct RunConfig {
  std::string dist = "exp:1";
  std::size_t n = 100000;
  int reps = 20;
  std::vector<double> thetas;
  std::vector<double> deltas;
  double tau = 0.0;   // 0 = pick automatically
  double alpha = 0.0; // pattern-swap window parameter (0 = use alphas list)
  std::vector<double> alphas;
  int k = 3;          // pattern-swap half-width
  int K = 3;          // NK interaction range
  int N = 2000;       // NK string length
  std::size_t cycles = 200000;
  std::size_t length = 1000000;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::string out;    // empty = stdout
  int jobs = 1;
  std::string input;  // instance file for `solve`
};

int cmd_solve(const RunConfig& cfg);
int cmd_sweep_theta(const RunConfig& cfg);
int cmd_eps_delta(const RunConfig& cfg);
int cmd_stationary(const RunConfig& cfg);
int cmd_regen(const RunConfig& cfg);
int cmd_coupling(const RunConfig& cfg);
int cmd_nk(const RunConfig& cfg);
int cmd_pattern_swap(const RunConfig& cfg);

// Parses argv-style arguments (without the program name) and dispatches.
// Unknown commands print usage and return nonzero. Invariant failures write
// a diagnostic next to the output file and return nonzero.
int dispatch(const std::vector<std::string>& args);

}  // namespace chainopt
