#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "hawkes/estimate.hpp"
#include "hawkes/rng.hpp"

namespace hawkes::inference {

struct TestOutcome {
  double statistic = 0.0;
  double p_value = 1.0;
  std::map<double, bool> reject_at;  // level -> decision
  std::string method;                // "wald", "ccg_mc", "ks_rescaling"
};

// Two-sided z-test for one coefficient from asymptotic normality.
TestOutcome wald_test(const FitResult& fit, const std::string& coeff_name);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.5;
};

// Empirical ROC; scores are p-values (smaller = called positive first).
// Ties are averaged via the trapezoidal sweep.
RocCurve roc_analysis(const std::vector<double>& null_scores,
                      const std::vector<double>& alt_scores);

struct QqPoint {
  double theoretical = 0.0;  // uniform quantile after rescaling transform
  double empirical = 0.0;
};

struct KsReport {
  TestOutcome outcome;
  std::vector<QqPoint> qq;
  double band99 = 0.0;  // +-band half-width around the diagonal
  std::size_t n = 0;
};

// Time-rescaling goodness of fit: integrated fitted intensity between
// consecutive target events is unit-exponential under a correct model.
KsReport ks_rescaling_test(const DesignWorkspace& ws, const Eigen::VectorXd& beta);
KsReport ks_rescaling_test(const DesignSpec& design, const TrialSet& data,
                           const FitResult& fit);

struct NetworkEdge {
  std::string source, target;
  double alpha_hat = 0.0;
  double se = 0.0;
  double p = 1.0;
  int sign = 0;
};

struct NetworkEdges {
  std::vector<NetworkEdge> edges;  // retained, Bonferroni-corrected
  double level = 0.0;
  int tests = 0;
  double threshold = 0.0;  // level / tests
};

// Bonferroni selection over pairwise Wald tests; non-converged fits are
// skipped (they still count toward the correction denominator).
NetworkEdges extract_network(const std::map<PairKey, FitResult>& fits,
                             double level);

enum class McmcVariant { sigma_w_random, sigma_w_fixed };

struct McmcChain {
  std::vector<std::string> names;
  Eigen::MatrixXd samples;  // draws x parameters
  double acceptance_rate = 0.0;
  McmcVariant variant = McmcVariant::sigma_w_fixed;

  std::vector<double> column(const std::string& name) const;
};

struct MhOptions {
  int n_draws = 1000;
  int burn_in = 1000;
  // Proposal scales default to 0.3x the MLE standard errors and 10 ms for
  // sigma_w when left empty/zero.
  std::vector<double> coeff_scales;
  double sigma_w_scale = 0.010;
};

// Random-walk Metropolis on the regression coefficients (and sigma_w under
// Model 1) with flat priors, initialized at the modified-MLE point.
McmcChain mh_sample(const DesignSpec& design, const TrialSet& data,
                    McmcVariant variant, const MhOptions& options,
                    RngStream& rng);

}  // namespace hawkes::inference
