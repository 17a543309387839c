#include "chainopt/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chainopt/quadrature.hpp"

namespace chainopt {

CostDistribution CostDistribution::exponential(double rate) {
  if (!(rate > 0.0))
    throw std::invalid_argument("exponential rate must be > 0");
  CostDistribution d;
  d.kind_ = DistKind::Exponential;
  d.a_ = rate;
  std::ostringstream os;
  os << "exp:" << rate;
  d.spec_ = os.str();
  return d;
}

CostDistribution CostDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo))
    throw std::invalid_argument("uniform needs 0 <= lo < hi");
  CostDistribution d;
  d.kind_ = DistKind::Uniform;
  d.a_ = lo;
  d.b_ = hi;
  std::ostringstream os;
  os << "uniform:" << lo << ":" << hi;
  d.spec_ = os.str();
  return d;
}

CostDistribution CostDistribution::empirical(std::vector<double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("empirical table needs at least 2 samples");
  std::sort(samples.begin(), samples.end());
  if (!(samples.front() > 0.0))
    throw std::invalid_argument("empirical samples must be positive");
  CostDistribution d;
  d.kind_ = DistKind::Empirical;
  d.table_ = std::move(samples);
  d.spec_ = "empirical:<table>";
  return d;
}

CostDistribution CostDistribution::parse(const std::string& spec) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    return parts;
  };
  auto parts = split(spec);
  if (parts.empty()) throw std::invalid_argument("empty distribution spec");
  if (parts[0] == "exp" && parts.size() == 2)
    return exponential(std::stod(parts[1]));
  if (parts[0] == "uniform" && parts.size() == 3)
    return uniform(std::stod(parts[1]), std::stod(parts[2]));
  if (parts[0] == "empirical" && parts.size() >= 2) {
    // the path itself may contain ':' on exotic systems; rejoin
    std::string path = spec.substr(std::string("empirical:").size());
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open empirical file: " + path);
    std::vector<double> xs;
    double v;
    while (in >> v) xs.push_back(v);
    auto d = empirical(std::move(xs));
    d.spec_ = "empirical:" + path;
    return d;
  }
  throw std::invalid_argument("unrecognized distribution spec: " + spec);
}

double CostDistribution::cdf(double x) const {
  switch (kind_) {
    case DistKind::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-a_ * x);
    case DistKind::Uniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
    case DistKind::Empirical: {
      const auto& t = table_;
      if (x <= t.front()) return 0.0;
      if (x >= t.back()) return 1.0;
      auto it = std::upper_bound(t.begin(), t.end(), x);
      std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
      double m1 = static_cast<double>(t.size() - 1);
      double seg = t[j + 1] - t[j];
      double frac = seg > 0.0 ? (x - t[j]) / seg : 1.0;
      return (static_cast<double>(j) + frac) / m1;
    }
  }
  return 0.0;
}

double CostDistribution::density(double x) const {
  switch (kind_) {
    case DistKind::Exponential:
      return x < 0.0 ? 0.0 : a_ * std::exp(-a_ * x);
    case DistKind::Uniform:
      return (x < a_ || x > b_) ? 0.0 : 1.0 / (b_ - a_);
    case DistKind::Empirical: {
      const auto& t = table_;
      if (x < t.front() || x > t.back()) return 0.0;
      auto it = std::upper_bound(t.begin(), t.end(), x);
      std::size_t j = static_cast<std::size_t>(it - t.begin());
      if (j == 0) j = 1;
      if (j >= t.size()) j = t.size() - 1;
      double seg = t[j] - t[j - 1];
      if (seg <= 0.0) return 0.0;
      return 1.0 / (static_cast<double>(t.size() - 1) * seg);
    }
  }
  return 0.0;
}

double CostDistribution::sample(Rng& rng) const {
  double u = rng.uniform01();
  switch (kind_) {
    case DistKind::Exponential:
      return -std::log(u) / a_;
    case DistKind::Uniform:
      return a_ + (b_ - a_) * u;
    case DistKind::Empirical: {
      const auto& t = table_;
      double pos = u * static_cast<double>(t.size() - 1);
      std::size_t j = static_cast<std::size_t>(pos);
      if (j >= t.size() - 1) j = t.size() - 2;
      double frac = pos - static_cast<double>(j);
      return t[j] + frac * (t[j + 1] - t[j]);
    }
  }
  return 0.0;
}

bool CostDistribution::density_positive_at_half() const {
  return density(0.5) > 0.0;
}

bool CostDistribution::valid_for_theorems() const {
  double g_half = cdf(0.5);
  return g_half > 0.0 && g_half < 1.0;
}

std::vector<double> sample_costs(const CostDistribution& dist,
                                 std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_costs: count must be >= 1");
  Rng rng(seed);
  std::vector<double> xs(count);
  for (auto& x : xs) x = dist.sample(rng);
  return xs;
}

double stationary_cdf_F(const CostDistribution& dist, double x) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("stationary_cdf_F: x outside [0,1]");
  // solving F(x) = S(1-x)(1 - F(1-x)) with S = 1-G gives
  //   F(x) = S(1-x) G(x) / (1 - S(x) S(1-x))
  double sx = dist.survival(x);
  double s1x = dist.survival(1.0 - x);
  double denom = 1.0 - sx * s1x;
  if (denom < 1e-14)
    throw std::runtime_error(
        "stationary_cdf_F: degenerate distribution (no mass close enough to "
        "0)");
  return s1x * dist.cdf(x) / denom;
}

double exponential_stationary_cdf(double lambda, double x) {
  return std::expm1(lambda * x) / std::expm1(lambda);
}

double limit_constant_c(const CostDistribution& dist) {
  if (!dist.valid_for_theorems())
    throw std::invalid_argument(
        "limit_constant_c: need 0 < G(1/2) < 1 for the limit constant");
  auto surv_f = [&](double u) {
    return 1.0 - stationary_cdf_F(dist, u);
  };
  // P(xi < min(XL,XR)) and E[xi 1(...)] reduce to 1-d integrals over (0,1)
  // because XL, xi, XR are independent and F puts no mass above 1.
  double p = adaptive_simpson(
      [&](double u) {
        double s = surv_f(u);
        return dist.density(u) * s * s;
      },
      0.0, 1.0, 1e-10);
  double e = adaptive_simpson(
      [&](double u) {
        double s = surv_f(u);
        return u * dist.density(u) * s * s;
      },
      0.0, 1.0, 1e-10);
  return 0.5 + 0.5 * p - e;
}

double exponential_limit_constant(double lambda) {
  return 1.0 / (-std::expm1(-lambda)) - 1.0 / lambda;
}

IidThreshold iid_threshold_epsilon(const CostDistribution& h, double delta) {
  if (!(delta >= 0.0) || delta >= 1.0)
    throw std::invalid_argument("iid_threshold_epsilon: delta must be in [0,1)");
  if (delta == 0.0) return {0.0, 0.0};
  auto band_mass = [&](double a) { return h.cdf(1.0 + a) - h.cdf(1.0 - a); };
  double hi = 1.0;
  while (band_mass(hi) < delta) {
    hi *= 2.0;
    if (hi > 1e12)
      throw std::invalid_argument(
          "iid_threshold_epsilon: delta exceeds achievable mass around 1");
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    if (band_mass(mid) < delta)
      lo = mid;
    else
      hi = mid;
  }
  double a = 0.5 * (lo + hi);
  double left = adaptive_simpson(
      [&](double x) { return (1.0 - x) * h.density(x); }, 1.0 - a, 1.0, 1e-12);
  double right = adaptive_simpson(
      [&](double x) { return (x - 1.0) * h.density(x); }, 1.0, 1.0 + a, 1e-12);
  return {a, left + right};
}

double simulate_iid_threshold_eps(const CostDistribution& h, std::size_t n,
                                  double delta, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("simulate_iid_threshold_eps: n >= 1");
  std::size_t k = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n)));
  if (k == 0) return 0.0;
  if (k > n) throw std::invalid_argument("simulate_iid_threshold_eps: delta > 1");
  Rng rng(seed);
  std::vector<double> dev(n);
  for (auto& d : dev) d = std::abs(h.sample(rng) - 1.0);
  std::nth_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   dev.end());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += dev[i];
  return s / static_cast<double>(n);
}

}  // namespace chainopt
