#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace chainopt {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

MeanSe mean_se(const std::vector<double>& xs);

// 95% confidence half-width by batch means (default 30 batches). Works for
// both i.i.d. samples and autocorrelated streams.
double batch_means_halfwidth95(const std::vector<double>& xs, int batches = 30);

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
// Sorts a copy of the sample.
double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf);

// Two-sample KS distance.
double ks_distance_two_sample(std::vector<double> a, std::vector<double> b);

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<std::pair<double, double>> points;  // (log delta, log eps)
};

// OLS on (log delta, log eps); rows with delta<=0 or eps<=0 are dropped.
// Throws if fewer than 3 usable rows remain.
FitResult fit_scaling_exponent(
    const std::vector<std::pair<double, double>>& rows);

}  // namespace chainopt
