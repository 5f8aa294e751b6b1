#pragma once

#include <cstddef>
#include <vector>

namespace hawkes::stats {

double normal_pdf(double x);
double normal_cdf(double x);
// Two-sided p-value for a standard-normal statistic.
double normal_two_sided_p(double z);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
double ks_pvalue(double d, std::size_t n);

// One-sample KS tests against fully specified references.
KsResult ks_test_uniform(std::vector<double> sample);
KsResult ks_test_exponential(std::vector<double> sample);  // unit exponential

// Anderson-Darling normality statistic A*^2 with estimated mean/variance
// (case 3), including the Stephens finite-sample correction factor.
double anderson_darling_normal(std::vector<double> sample);
// 1% critical value for the case-3 A*^2 statistic (D'Agostino & Stephens).
inline constexpr double kAdNormalCritical01 = 1.035;

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
double sd(const std::vector<double>& v);

// k-th smallest with k = ceil(q * n), clamped to [1, n]. Conservative
// order-statistic quantile used for Monte Carlo bands.
double quantile(std::vector<double> v, double q);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double r2 = 0.0;
};

LinearFit linear_regression(const std::vector<double>& x,
                            const std::vector<double>& y);

}  // namespace hawkes::stats
