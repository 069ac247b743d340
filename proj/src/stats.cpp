#include "graphfluct/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gf {

namespace {
void need(const std::vector<double>& v, size_t k, const char* what) {
  if (v.size() < k) throw std::invalid_argument(std::string(what) + ": not enough samples");
}
}  // namespace

double mean(const std::vector<double>& v) {
  need(v, 1, "mean");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  need(v, 2, "variance");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double standard_error(const std::vector<double>& v) { return std::sqrt(variance(v) / static_cast<double>(v.size())); }

double quantile(std::vector<double> v, double q) {
  need(v, 1, "quantile");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double covariance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance: size mismatch");
  need(x, 2, "covariance");
  const double mx = mean(x), my = mean(y);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double covariance_se(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance: size mismatch");
  need(x, 3, "covariance_se");
  const double mx = mean(x), my = mean(y);
  std::vector<double> prod(x.size());
  for (size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  return standard_error(prod);
}

double variance_se(const std::vector<double>& v) { return covariance_se(v, v); }

Summary summarize(const std::vector<double>& v) {
  need(v, 1, "summary");
  Summary s;
  s.n = v.size();
  s.mean = mean(v);
  if (v.size() > 1) {
    s.sd = std::sqrt(variance(v));
    s.se = s.sd / std::sqrt(static_cast<double>(v.size()));
  }
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  s.q05 = quantile(v, 0.05);
  s.q50 = quantile(v, 0.5);
  s.q95 = quantile(v, 0.95);
  return s;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // the alternating series is inaccurate here and Q = 1 − O(e^{−π²/(8λ²)})
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  need(a, 1, "ks");
  need(b, 1, "ks");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  const double m = std::sqrt(na * nb / (na + nb));
  r.p_value = kolmogorov_q((m + 0.12 + 0.11 / m) * d);
  return r;
}

Histogram histogram(const std::vector<double>& v, size_t bins) {
  need(v, 1, "histogram");
  bins = std::max<size_t>(bins, 1);
  double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (size_t k = 0; k <= bins; ++k) h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : v) {
    auto k = static_cast<size_t>((x - lo) / width);
    if (k >= bins) k = bins - 1;
    ++h.counts[k];
  }
  return h;
}

Histogram histogram_fd(const std::vector<double>& v) {
  need(v, 1, "histogram");
  const double iqr = quantile(v, 0.75) - quantile(v, 0.25);
  const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
  size_t bins;
  if (iqr > 0.0 && hi > lo) {
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(v.size()));
    bins = static_cast<size_t>(std::ceil((hi - lo) / width));
  } else {
    bins = static_cast<size_t>(std::ceil(std::log2(static_cast<double>(v.size())))) + 1;
  }
  return histogram(v, std::clamp<size_t>(bins, 1, 10000));
}

LinearFit linear_regression(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("regression: size mismatch");
  need(x, 2, "regression");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("regression: constant abscissa");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  if (x.size() > 2) f.slope_se = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  return f;
}

}  // namespace gf
