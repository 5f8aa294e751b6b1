#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes::stats {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / kSqrt2); }

double ks_pvalue(double d, std::size_t n) {
  if (n == 0) return 1.0;
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

KsResult ks_against_cdf(std::vector<double>& sample, double (*cdf)(double)) {
  if (sample.empty()) throw std::invalid_argument("ks test: empty sample");
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sample[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return {d, ks_pvalue(d, n), n};
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
double exp1_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

}  // namespace

KsResult ks_test_uniform(std::vector<double> sample) {
  return ks_against_cdf(sample, uniform_cdf);
}

KsResult ks_test_exponential(std::vector<double> sample) {
  return ks_against_cdf(sample, exp1_cdf);
}

double anderson_darling_normal(std::vector<double> sample) {
  const std::size_t n = sample.size();
  if (n < 8) throw std::invalid_argument("anderson_darling_normal: need n >= 8");
  const double m = mean(sample);
  const double s = sd(sample);
  if (s <= 0.0) throw std::invalid_argument("anderson_darling_normal: zero variance");
  std::sort(sample.begin(), sample.end());
  double a2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (sample[i] - m) / s;
    const double zr = (sample[n - 1 - i] - m) / s;
    const double fi = std::clamp(normal_cdf(zi), 1e-300, 1.0 - 1e-16);
    const double fr = std::clamp(normal_cdf(zr), 1e-300, 1.0 - 1e-16);
    a2 += (2.0 * static_cast<double>(i) + 1.0) *
          (std::log(fi) + std::log1p(-fr));
  }
  a2 = -static_cast<double>(n) - a2 / static_cast<double>(n);
  const double nn = static_cast<double>(n);
  return a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty vector");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need n >= 2");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double sd(const std::vector<double>& v) { return std::sqrt(variance(v)); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty vector");
  const std::size_t n = v.size();
  auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n);
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  return v[k - 1];
}

LinearFit linear_regression(const std::vector<double>& x,
                            const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("linear_regression: need matched n >= 3");
  const double n = static_cast<double>(x.size());
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("linear_regression: degenerate x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  const double s2 = rss / (n - 2.0);
  fit.slope_se = std::sqrt(s2 / sxx);
  fit.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return fit;
}

}  // namespace hawkes::stats
