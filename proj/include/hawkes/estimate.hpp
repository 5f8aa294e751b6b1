#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/bspline.hpp"
#include "hawkes/core.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

// Impact basis attached to one source process.
struct ImpactBasisSpec {
  enum class Family { square, bspline, exponential };
  Family family = Family::square;

  double sigma_h = 0.030;   // square window width, seconds
  double lag_window = 0.050;  // spline lag support [0, L]
  int spline_knots = 9;       // distinct, equally spaced on [0, L]
  int spline_degree = 3;
  double gamma = 50.0;        // exponential decay rate, 1/s

  static ImpactBasisSpec square(double width);
  static ImpactBasisSpec bspline(double lag_window, int knots, int degree = 3);
  static ImpactBasisSpec exponential(double gamma);

  int num_coeffs() const;
  double support() const;
  void validate() const;
};

struct ImpactTerm {
  std::string source_id;
  ImpactBasisSpec basis;
};

struct SigmaWSearch {
  bool grid_search = false;
  double fixed_value = 0.125;
  std::vector<double> grid;

  static SigmaWSearch fixed(double value);
  static SigmaWSearch over_grid(std::vector<double> grid);
};

// Default smoothing-width grid: 25 log-spaced points, 5 ms to 500 ms.
std::vector<double> default_sigma_w_grid();

// Regression design for one target process: constant baseline, optional
// smoothed-train nuisance regressors, optional known per-trial regressors,
// and causal impact bases.
struct DesignSpec {
  std::string target_id;
  std::vector<std::string> nuisance_sources;  // smoothed-train regressors
  std::vector<ImpactTerm> impacts;
  SigmaWSearch sigma_w = SigmaWSearch::fixed(0.125);
  bool mean_center_bases = false;  // diagnostics only; default raw bases
  // Optional known regressor, one tabulated function per trial (e.g. a
  // normalized true background in oracle studies).
  std::vector<TabulatedFn> extra_bases;
};

struct FitResult {
  std::vector<std::string> coeff_names;
  Eigen::VectorXd coeffs;
  Eigen::MatrixXd hessian;     // observed information at the optimum
  Eigen::VectorXd std_errors;  // sqrt(diag(H^-1))
  double sigma_w_selected = 0.0;
  double neg_loglik = 0.0;
  double grad_sup_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  // (sigma_w, neg_loglik) pairs visited during grid selection.
  std::vector<std::pair<double, double>> grid_profile;

  int index_of(const std::string& coeff_name) const;  // throws if missing
  double coeff(const std::string& coeff_name) const;
  double se(const std::string& coeff_name) const;
};

std::string impact_coeff_name(const std::string& source_id,
                              const std::string& target_id, int k = -1);

// Per-trial feature matrices with exact column integrals; the evaluation
// engine behind every fit. Event data is copied in, so the workspace does
// not retain references to the TrialSet.
class DesignWorkspace {
 public:
  DesignWorkspace(const DesignSpec& spec, const TrialSet& data);
  ~DesignWorkspace();
  DesignWorkspace(DesignWorkspace&&) noexcept;
  DesignWorkspace& operator=(DesignWorkspace&&) noexcept;

  int n_coeffs() const;
  const std::vector<std::string>& coeff_names() const;
  const DesignSpec& spec() const;

  void set_sigma_w(double sigma_w);  // rebuilds smoothed-train columns
  double sigma_w() const;

  // Negative log-likelihood; +infinity when some event intensity <= 0.
  double neg_loglik(const Eigen::VectorXd& beta) const;
  // Returns false when infeasible (gradient/Hessian undefined).
  bool gradient_hessian(const Eigen::VectorXd& beta, Eigen::VectorXd* grad,
                        Eigen::MatrixXd* hess) const;

  // Damped Newton with a backtracking line search that rejects any step
  // driving an event intensity non-positive.
  FitResult fit(const Eigen::VectorXd* init = nullptr) const;

  double intensity_at(int trial, double t, const Eigen::VectorXd& beta) const;
  // Exact integral of the (linear, unclipped) fitted intensity over [a, b].
  double intensity_integral(int trial, double a, double b,
                            const Eigen::VectorXd& beta) const;

  int n_trials() const;
  double horizon() const;
  double total_observation_time() const;
  long total_target_events() const;
  const std::vector<double>& target_events(int trial) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Spec-level convenience wrappers.
double neg_loglik(const DesignSpec& design, const TrialSet& data,
                  double sigma_w, const Eigen::VectorXd& params);
std::pair<Eigen::VectorXd, Eigen::MatrixXd> loglik_grad_hessian(
    const DesignSpec& design, const TrialSet& data, double sigma_w,
    const Eigen::VectorXd& params);

FitResult fit_fixed_sigma(const DesignSpec& design, const TrialSet& data,
                          double sigma_w);

// Grid search over sigma_w maximizing the log-likelihood; ties broken toward
// the larger width. Honors design.sigma_w (fixed or grid).
FitResult fit_modified_mle(const DesignSpec& design, const TrialSet& data);

// Baseline without the smoothed-train nuisance: bases {constant, impacts}.
FitResult fit_standard_mhp(DesignSpec design, const TrialSet& data);

// Spline-impact fit; same optimizer, curve reconstructable from coefficients.
FitResult fit_nonparametric(const DesignSpec& design, const TrialSet& data);

struct ImpactCurvePoint {
  double lag = 0.0;
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

// Fitted impact curve with pointwise normal CIs from the inverse Hessian.
std::vector<ImpactCurvePoint> impact_curve(const FitResult& fit,
                                           const DesignSpec& design,
                                           const std::string& source_id,
                                           int n_points = 101, double z = 1.96);

struct PairwiseOptions {
  ImpactBasisSpec impact = ImpactBasisSpec::square(0.030);
  SigmaWSearch sigma_w = SigmaWSearch::over_grid(default_sigma_w_grid());
  bool include_target_self_impact = false;
  bool nuisance_all_sources = false;  // default: the pair's source only
  bool with_nuisance = true;          // false reproduces the standard MHP
  int jobs = 0;                       // 0 = hardware concurrency
};

using PairKey = std::pair<std::string, std::string>;  // (source, target)

// Fits the bivariate reduction for every ordered pair; per-pair failures are
// recorded as non-converged results without aborting the remaining pairs.
std::map<PairKey, FitResult> fit_multivariate_pairwise(
    const TrialSet& data, const PairwiseOptions& options);

// Joint standard-MHP fit per target (constant + impacts from all other
// processes), exploded into ordered-pair results.
std::map<PairKey, FitResult> fit_standard_mhp_multivariate(
    const TrialSet& data, const ImpactBasisSpec& impact, int jobs = 0);

// Time-rescaled inter-event intervals of the target process under the fitted
// intensity, concatenated across trials with each trial's first partial
// interval discarded.
std::vector<double> rescaled_intervals(const DesignWorkspace& ws,
                                       const Eigen::VectorXd& beta);

}  // namespace hawkes
