#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace chainopt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Child stream seed from (master, label, index). Stable across platforms and
// independent of scheduling order, so parallel replicates stay reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(master ^ fnv1a64(label)) ^ index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform on the open interval (0,1); safe to pass to log()
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace chainopt
