#pragma once

#include <vector>

namespace hawkes::theory {

// Inputs to the closed-form bias/variance machinery for the shared
// linear-Cox background model. Rates are events/sec, timescales seconds.
struct CoxTheoryParams {
  double rho = 30.0;      // center-process rate of the Cox background
  double sigma_i = 0.1;   // background bump scale
  double alpha_i = 10.0;  // source constant baseline
  double alpha_j = 10.0;  // target constant baseline
  double sigma_h = 0.03;  // square impact width
  double horizon = 1000.0;  // total observation time T (trials x length)
  double alpha_impact = 0.0;  // impact amplitude; enters variance via lambda_j

  double lambda_bar_i() const { return alpha_i + rho; }
  double lambda_bar_j() const { return lambda_bar_i() + alpha_impact * sigma_h; }
  void validate() const;
};

// Reduced covariance density of the background intensity:
// rho * [phi_sigma * phi_sigma](u) = rho / (2 sqrt(pi) sigma_i) exp(-u^2/4sigma_i^2).
double reduced_cov_lambda(double u, const CoxTheoryParams& p);

// Reduced covariance of the counting measure carries an atom at zero.
struct ReducedCovN {
  double continuous = 0.0;
  double atom_mass = 0.0;  // lambda_bar_i, at u = 0
};
ReducedCovN reduced_cov_N(double u, const CoxTheoryParams& p);

// The five closed-form inner products per unit time.
struct InnerProducts {
  double s_ww = 0.0;
  double s_hh = 0.0;
  double s_hw = 0.0;
  double s_wl = 0.0;
  double s_hl = 0.0;
};
InnerProducts inner_products(const CoxTheoryParams& p, double sigma_w);

// Closed-form bias approximation of the impact-amplitude estimator with the
// smoothed-train nuisance at width sigma_w; independent of the amplitude.
double bias_approx(const CoxTheoryParams& p, double sigma_w);

// Bias of the no-nuisance (standard MHP) estimator; also the sigma_w -> 0
// and sigma_w -> infinity limits of bias_approx.
double bias_hawkes(const CoxTheoryParams& p);

// Estimator variance approximations; horizon enters as 1/T.
double variance_approx(const CoxTheoryParams& p, double sigma_w);
double variance_hawkes(const CoxTheoryParams& p);

struct TheoryPoint {
  double sigma_w = 0.0;
  double bias = 0.0;
  double se = 0.0;
  double rmse = 0.0;
  // Expected log-likelihood gain over the constant-only model, Laplace
  // (quadratic) approximation, aligned so the grid maximum is zero.
  double dloglik = 0.0;
};

std::vector<TheoryPoint> theory_curves(const CoxTheoryParams& p,
                                       const std::vector<double>& sigma_w_grid);

}  // namespace hawkes::theory
