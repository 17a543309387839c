#include "chainopt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainopt {

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  if (xs.empty()) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) {
    double d = x - r.mean;
    ss += d * d;
  }
  double var = ss / static_cast<double>(xs.size() - 1);
  r.se = std::sqrt(var / static_cast<double>(xs.size()));
  return r;
}

double batch_means_halfwidth95(const std::vector<double>& xs, int batches) {
  if (batches < 2 || xs.size() < static_cast<std::size_t>(2 * batches))
    batches = std::max<int>(2, static_cast<int>(xs.size() / 2));
  std::size_t per = xs.size() / static_cast<std::size_t>(batches);
  if (per == 0) return 0.0;
  std::vector<double> bm;
  bm.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    std::size_t lo = static_cast<std::size_t>(b) * per;
    for (std::size_t i = lo; i < lo + per; ++i) s += xs[i];
    bm.push_back(s / static_cast<double>(per));
  }
  MeanSe ms = mean_se(bm);
  // two-sided 97.5% t quantiles for df = batches-1 (29 is the default path)
  double t;
  int df = batches - 1;
  if (df >= 29)
    t = 2.045230;
  else if (df >= 19)
    t = 2.093024;
  else if (df >= 9)
    t = 2.262157;
  else
    t = 3.0;
  return t * ms.se;
}

double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double c = cdf(sample[i]);
    double hi = (static_cast<double>(i) + 1.0) / n - c;
    double lo = c - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_distance_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson_correlation: bad input sizes");
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

FitResult fit_scaling_exponent(
    const std::vector<std::pair<double, double>>& rows) {
  FitResult fr;
  for (const auto& [d, e] : rows)
    if (d > 0.0 && e > 0.0) fr.points.emplace_back(std::log(d), std::log(e));
  if (fr.points.size() < 3)
    throw std::invalid_argument(
        "fit_scaling_exponent: need at least 3 rows with positive delta and "
        "eps");
  double n = static_cast<double>(fr.points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : fr.points) {
    sx += x;
    sy += y;
  }
  double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [x, y] : fr.points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_scaling_exponent: degenerate x values");
  fr.slope = sxy / sxx;
  fr.intercept = my - fr.slope * mx;
  fr.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fr;
}

}  // namespace chainopt
