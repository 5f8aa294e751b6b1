#include "hawkes/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/stats.hpp"

namespace hawkes::inference {

TestOutcome wald_test(const FitResult& fit, const std::string& coeff_name) {
  if (!fit.converged)
    throw std::invalid_argument("wald_test: fit did not converge");
  const int idx = fit.index_of(coeff_name);
  const double se = fit.std_errors(idx);
  if (!(se > 0.0)) throw std::invalid_argument("wald_test: standard error not positive");
  TestOutcome out;
  out.method = "wald";
  out.statistic = fit.coeffs(idx) / se;
  out.p_value = stats::normal_two_sided_p(out.statistic);
  for (double level : {0.05, 0.01})
    out.reject_at[level] = out.p_value <= level;
  return out;
}

RocCurve roc_analysis(const std::vector<double>& null_scores,
                      const std::vector<double>& alt_scores) {
  if (null_scores.empty() || alt_scores.empty())
    throw std::invalid_argument("roc_analysis: empty score list");
  // Sweep thresholds from the smallest p upward; smaller scores are called
  // positive first.
  struct Tagged {
    double score;
    bool alt;
  };
  std::vector<Tagged> all;
  all.reserve(null_scores.size() + alt_scores.size());
  for (double s : null_scores) all.push_back({s, false});
  for (double s : alt_scores) all.push_back({s, true});
  std::sort(all.begin(), all.end(),
            [](const Tagged& a, const Tagged& b) { return a.score < b.score; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  const double n0 = static_cast<double>(null_scores.size());
  const double n1 = static_cast<double>(alt_scores.size());
  double fp = 0.0, tp = 0.0, auc = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    // Advance through all entries tied at this score together.
    const double s = all[i].score;
    double dfp = 0.0, dtp = 0.0;
    while (i < all.size() && all[i].score == s) {
      if (all[i].alt)
        dtp += 1.0;
      else
        dfp += 1.0;
      ++i;
    }
    const double fpr0 = fp / n0, tpr0 = tp / n1;
    fp += dfp;
    tp += dtp;
    const double fpr1 = fp / n0, tpr1 = tp / n1;
    auc += 0.5 * (tpr0 + tpr1) * (fpr1 - fpr0);
    curve.points.push_back({fpr1, tpr1});
  }
  curve.auc = auc;
  return curve;
}

KsReport ks_rescaling_test(const DesignWorkspace& ws, const Eigen::VectorXd& beta) {
  std::vector<double> z = rescaled_intervals(ws, beta);
  if (z.empty())
    throw std::invalid_argument("ks_rescaling_test: no complete inter-event intervals");
  KsReport report;
  report.n = z.size();
  const auto ks = stats::ks_test_exponential(z);
  report.outcome.method = "ks_rescaling";
  report.outcome.statistic = ks.statistic;
  report.outcome.p_value = ks.p_value;
  for (double level : {0.05, 0.01})
    report.outcome.reject_at[level] = ks.p_value <= level;
  // QQ data on the uniform scale u = 1 - exp(-z) with a 99% Kolmogorov band.
  std::sort(z.begin(), z.end());
  report.qq.reserve(z.size());
  const double n = static_cast<double>(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double u = -std::expm1(-z[k]);
    const double model = (static_cast<double>(k) + 0.5) / n;
    report.qq.push_back({model, u});
  }
  report.band99 = 1.628 / std::sqrt(n);
  return report;
}

KsReport ks_rescaling_test(const DesignSpec& design, const TrialSet& data,
                           const FitResult& fit) {
  DesignWorkspace ws(design, data);
  if (fit.sigma_w_selected > 0.0) ws.set_sigma_w(fit.sigma_w_selected);
  return ks_rescaling_test(ws, fit.coeffs);
}

NetworkEdges extract_network(const std::map<PairKey, FitResult>& fits,
                             double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("extract_network: level must be in (0,1)");
  NetworkEdges net;
  net.level = level;
  net.tests = static_cast<int>(fits.size());
  net.threshold = level / std::max(net.tests, 1);
  for (const auto& [key, fit] : fits) {
    if (!fit.converged) continue;
    const std::string name = impact_coeff_name(key.first, key.second);
    const int idx = fit.index_of(name);
    const double se = fit.std_errors(idx);
    if (!(se > 0.0)) continue;
    const double alpha = fit.coeffs(idx);
    const double p = stats::normal_two_sided_p(alpha / se);
    if (p <= net.threshold)
      net.edges.push_back({key.first, key.second, alpha, se, p,
                           alpha > 0.0 ? 1 : -1});
  }
  return net;
}

std::vector<double> McmcChain::column(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] != name) continue;
    std::vector<double> col(static_cast<std::size_t>(samples.rows()));
    for (long r = 0; r < samples.rows(); ++r)
      col[static_cast<std::size_t>(r)] = samples(r, static_cast<long>(k));
    return col;
  }
  throw std::invalid_argument("McmcChain: no parameter named '" + name + "'");
}

McmcChain mh_sample(const DesignSpec& design, const TrialSet& data,
                    McmcVariant variant, const MhOptions& options,
                    RngStream& rng) {
  if (options.n_draws < 100)
    throw std::invalid_argument("mh_sample: chain_length must be >= 100");

  // Initialize at the regression solution; its standard errors set the
  // default random-walk scales.
  FitResult init = fit_modified_mle(design, data);
  if (!init.converged)
    throw std::runtime_error("mh_sample: initialization fit did not converge");

  DesignWorkspace ws(design, data);
  ws.set_sigma_w(init.sigma_w_selected);
  const int kc = ws.n_coeffs();
  const bool with_sigma = variant == McmcVariant::sigma_w_random;
  const int dim = kc + (with_sigma ? 1 : 0);

  std::vector<double> scales(static_cast<std::size_t>(dim), 0.0);
  for (int k = 0; k < kc; ++k) {
    const double se = init.std_errors(k);
    scales[static_cast<std::size_t>(k)] =
        !options.coeff_scales.empty()
            ? options.coeff_scales[static_cast<std::size_t>(k)]
            : (std::isfinite(se) && se > 0.0 ? 0.3 * se : 0.01);
    if (!(scales[static_cast<std::size_t>(k)] > 0.0))
      throw std::invalid_argument("mh_sample: degenerate proposal scale");
  }
  if (with_sigma) {
    if (!(options.sigma_w_scale > 0.0))
      throw std::invalid_argument("mh_sample: degenerate sigma_w proposal scale");
    scales[static_cast<std::size_t>(kc)] = options.sigma_w_scale;
  }

  McmcChain chain;
  chain.variant = variant;
  chain.names = ws.coeff_names();
  if (with_sigma) chain.names.push_back("sigma_w");
  chain.samples.resize(options.n_draws, dim);

  Eigen::VectorXd beta = init.coeffs;
  double sigma_w = init.sigma_w_selected;
  double nll = ws.neg_loglik(beta);
  long accepted = 0;
  const long total = static_cast<long>(options.burn_in) + options.n_draws;
  for (long it = 0; it < total; ++it) {
    Eigen::VectorXd beta_prop = beta;
    for (int k = 0; k < kc; ++k)
      beta_prop(k) += scales[static_cast<std::size_t>(k)] * rng.normal();
    double sigma_prop = sigma_w;
    bool feasible = true;
    if (with_sigma) {
      sigma_prop += scales[static_cast<std::size_t>(kc)] * rng.normal();
      feasible = sigma_prop > 0.0;  // flat prior truncated at 0
    }
    double nll_prop = std::numeric_limits<double>::infinity();
    if (feasible) {
      if (with_sigma) ws.set_sigma_w(sigma_prop);
      nll_prop = ws.neg_loglik(beta_prop);
    }
    const double log_accept = nll - nll_prop;
    if (std::isfinite(nll_prop) &&
        (log_accept >= 0.0 || rng.uniform() < std::exp(log_accept))) {
      beta = beta_prop;
      sigma_w = sigma_prop;
      nll = nll_prop;
      ++accepted;
    } else if (with_sigma) {
      ws.set_sigma_w(sigma_w);  // restore cached smoothing features
    }
    if (it >= options.burn_in) {
      const long r = it - options.burn_in;
      for (int k = 0; k < kc; ++k) chain.samples(r, k) = beta(k);
      if (with_sigma) chain.samples(r, kc) = sigma_w;
    }
  }
  chain.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
  return chain;
}

}  // namespace hawkes::inference
