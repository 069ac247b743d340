#pragma once

#include <cstddef>
#include <vector>

namespace gf {

double mean(const std::vector<double>& v);
// Unbiased sample variance.
double variance(const std::vector<double>& v);
double standard_error(const std::vector<double>& v);
// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> v, double q);

double covariance(const std::vector<double>& x, const std::vector<double>& y);
// Standard error of the sample covariance from the spread of centered products.
double covariance_se(const std::vector<double>& x, const std::vector<double>& y);
// Standard error of the unbiased variance estimate.
double variance_se(const std::vector<double>& v);

struct Summary {
  size_t n = 0;
  double mean = 0.0, sd = 0.0, se = 0.0;
  double min = 0.0, q05 = 0.0, q50 = 0.0, q95 = 0.0, max = 0.0;
};
Summary summarize(const std::vector<double>& v);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
// Two-sample Kolmogorov–Smirnov test; asymptotic p-value with Stephens' small-sample
// correction λ = (√m + 0.12 + 0.11/√m)·D, m = n₁n₂/(n₁ + n₂).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// Kolmogorov survival function Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}.
double kolmogorov_q(double lambda);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges, first = min, last = max
  std::vector<size_t> counts;
};
// Bin width 2·IQR·n^{−1/3}; falls back to Sturges when the IQR vanishes.
Histogram histogram_fd(const std::vector<double>& v);
Histogram histogram(const std::vector<double>& v, size_t bins);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, slope_se = 0.0, r2 = 0.0;
};
LinearFit linear_regression(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gf
