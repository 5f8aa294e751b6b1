#include "hawkes/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/parallel.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes::experiments {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
  return g;
}

namespace {

constexpr double kSquareWidth = 0.030;
constexpr double kTrueAmplitude = 2.0;

DesignSpec pair_modified_design(SigmaWSearch sw) {
  DesignSpec d;
  d.target_id = "j";
  d.nuisance_sources = {"i"};
  d.impacts.push_back({"i", ImpactBasisSpec::square(kSquareWidth)});
  d.sigma_w = std::move(sw);
  return d;
}

DesignSpec pair_standard_design() {
  DesignSpec d;
  d.target_id = "j";
  d.impacts.push_back({"i", ImpactBasisSpec::square(kSquareWidth)});
  return d;
}

double mean_of(const std::vector<double>& v) { return stats::mean(v); }

double se_of_mean(const std::vector<double>& v) {
  return stats::sd(v) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Sinusoid background study

SinusoidBiasResult run_sinusoid_bias(int reps, std::uint64_t seed, int jobs,
                                     int trials) {
  const std::vector<double> lags = {0.0, 0.125, 0.25, 0.375, 0.5};
  const auto grid = log_grid(0.020, 0.500, 15);

  struct RepOut {
    double standard = 0.0, modified = 0.0;
  };
  std::vector<std::vector<RepOut>> results(
      lags.size(), std::vector<RepOut>(static_cast<std::size_t>(reps)));

  std::vector<std::pair<std::size_t, int>> work;
  for (std::size_t l = 0; l < lags.size(); ++l)
    for (int r = 0; r < reps; ++r) work.emplace_back(l, r);

  parallel_for(work.size(), jobs, [&](std::size_t w) {
    const auto [l, r] = work[w];
    NetworkSpec spec = sinusoid_preset(lags[l]);
    spec.trial_count = trials;
    spec.seed = RngStream::substream(seed, 101, l, static_cast<std::uint64_t>(r)).next_u64();
    const TrialSet data = thinning_simulate(spec).trials;
    const std::string name = impact_coeff_name("i", "j");
    results[l][static_cast<std::size_t>(r)].standard =
        fit_standard_mhp(pair_standard_design(), data).coeff(name) - kTrueAmplitude;
    results[l][static_cast<std::size_t>(r)].modified =
        fit_modified_mle(pair_modified_design(SigmaWSearch::over_grid(grid)), data)
            .coeff(name) - kTrueAmplitude;
  });

  SinusoidBiasResult out;
  std::vector<double> xs, ys;
  for (std::size_t l = 0; l < lags.size(); ++l) {
    // Deterministic dot product from the tabulated backgrounds themselves.
    RngStream rng(0);
    auto spec_i = BackgroundSpec::sinusoid(5.0, 1.0, 0.0, false);
    auto spec_j = BackgroundSpec::sinusoid(5.0, 1.0, lags[l], false);
    const auto f_i = sample_background(spec_i, 5.0, rng);
    const auto f_j = sample_background(spec_j, 5.0, rng);
    SinusoidBiasRow row;
    row.phi_lag = lags[l];
    row.dot = normalized_dot(f_i, f_j, 5.0, 5.0);
    std::vector<double> std_b, mod_b;
    for (const auto& rep : results[l]) {
      std_b.push_back(rep.standard);
      mod_b.push_back(rep.modified);
    }
    row.standard_bias = mean_of(std_b);
    row.standard_se = se_of_mean(std_b);
    row.modified_bias = mean_of(mod_b);
    row.modified_se = se_of_mean(mod_b);
    out.rows.push_back(row);
    xs.push_back(row.dot);
    ys.push_back(row.standard_bias);
  }
  out.regression = stats::linear_regression(xs, ys);
  return out;
}

// ---------------------------------------------------------------------------
// Smoothing-width sweep on the linear-Cox pair

SigmaSweepResult run_sigma_w_sweep(int reps, std::uint64_t seed, int jobs,
                                   int trials, std::vector<double> eval_points) {
  if (eval_points.empty()) eval_points = log_grid(0.010, 0.320, 8);
  const auto selection_grid = default_sigma_w_grid();

  struct RepOut {
    std::vector<double> alpha_at_point;
    double selected = 0.0;
    double standard = 0.0;
  };
  std::vector<RepOut> reps_out(static_cast<std::size_t>(reps));

  parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
    NetworkSpec spec = scenario_preset("linear_cox_basic");
    spec.trial_count = trials;
    spec.seed = RngStream::substream(seed, 102, r).next_u64();
    const TrialSet data = thinning_simulate(spec).trials;
    const std::string name = impact_coeff_name("i", "j");

    DesignSpec design = pair_modified_design(SigmaWSearch::fixed(selection_grid.front()));
    DesignWorkspace ws(design, data);
    // Likelihood profile over the full selection grid, then the eval points.
    double best_nll = 0.0, best_sigma = 0.0;
    bool have = false;
    Eigen::VectorXd warm;
    for (double sw : selection_grid) {
      ws.set_sigma_w(sw);
      const FitResult f = ws.fit(warm.size() ? &warm : nullptr);
      if (!f.converged) continue;
      warm = f.coeffs;
      const double tol = 1e-9 * (1.0 + std::abs(f.neg_loglik));
      if (!have || f.neg_loglik < best_nll + tol) {
        best_nll = f.neg_loglik;
        best_sigma = sw;
        have = true;
      }
    }
    if (!have) throw std::runtime_error("sigma_w sweep: selection failed");
    auto& rep = reps_out[r];
    rep.selected = best_sigma;
    rep.alpha_at_point.reserve(eval_points.size());
    for (double sw : eval_points) {
      ws.set_sigma_w(sw);
      rep.alpha_at_point.push_back(ws.fit(warm.size() ? &warm : nullptr).coeff(name));
    }
    rep.standard = fit_standard_mhp(pair_standard_design(), data).coeff(name);
  });

  theory::CoxTheoryParams p;
  p.rho = 30.0;
  p.sigma_i = 0.100;
  p.alpha_i = p.alpha_j = 10.0;
  p.sigma_h = kSquareWidth;
  p.horizon = 5.0 * trials;
  p.alpha_impact = kTrueAmplitude;

  SigmaSweepResult out;
  for (std::size_t k = 0; k < eval_points.size(); ++k) {
    std::vector<double> biases;
    for (const auto& rep : reps_out)
      biases.push_back(rep.alpha_at_point[k] - kTrueAmplitude);
    SigmaSweepRow row;
    row.sigma_w = eval_points[k];
    row.emp_bias = mean_of(biases);
    row.emp_bias_se = se_of_mean(biases);
    row.emp_sd = stats::sd(biases);
    row.theory_bias = theory::bias_approx(p, eval_points[k]);
    row.theory_se = std::sqrt(theory::variance_approx(p, eval_points[k]));
    out.rows.push_back(row);
  }
  std::vector<double> std_b;
  for (const auto& rep : reps_out) {
    out.selected_sigma_w.push_back(rep.selected);
    std_b.push_back(rep.standard - kTrueAmplitude);
  }
  out.median_selected = stats::quantile(out.selected_sigma_w, 0.5);
  out.standard_bias_mean = mean_of(std_b);
  out.standard_bias_se = se_of_mean(std_b);
  out.theory_bias_hawkes = theory::bias_hawkes(p);
  return out;
}

// ---------------------------------------------------------------------------
// Full cross/self-connection study

FullConnectionResult run_full_connection(int reps, std::uint64_t seed, int jobs,
                                         int trials) {
  const auto grid = log_grid(0.040, 0.400, 10);
  const std::vector<std::string> ids = {"i", "j"};
  const double truth[2][2] = {{1.0, -2.0}, {-2.0, 1.0}};  // [source][target]

  struct RepOut {
    double ours[2][2];
    double standard[2][2];
  };
  std::vector<RepOut> reps_out(static_cast<std::size_t>(reps));

  parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
    NetworkSpec spec = scenario_preset("full_connection");
    spec.trial_count = trials;
    spec.seed = RngStream::substream(seed, 103, r).next_u64();
    const TrialSet data = thinning_simulate(spec).trials;
    for (int tgt = 0; tgt < 2; ++tgt) {
      const std::string& t_id = ids[static_cast<std::size_t>(tgt)];
      const std::string& s_id = ids[static_cast<std::size_t>(1 - tgt)];
      // Cross impact plus the target's self impact; the smoothed train of
      // the other process is the nuisance regressor.
      DesignSpec ours;
      ours.target_id = t_id;
      ours.nuisance_sources = {s_id};
      ours.impacts.push_back({s_id, ImpactBasisSpec::square(kSquareWidth)});
      ours.impacts.push_back({t_id, ImpactBasisSpec::square(kSquareWidth)});
      ours.sigma_w = SigmaWSearch::over_grid(grid);
      const FitResult f_ours = fit_modified_mle(ours, data);

      DesignSpec std_d = ours;
      std_d.nuisance_sources.clear();
      const FitResult f_std = fit_standard_mhp(std_d, data);

      const int s_idx = 1 - tgt, t_idx = tgt;
      reps_out[r].ours[s_idx][t_idx] = f_ours.coeff(impact_coeff_name(s_id, t_id));
      reps_out[r].ours[t_idx][t_idx] = f_ours.coeff(impact_coeff_name(t_id, t_id));
      reps_out[r].standard[s_idx][t_idx] = f_std.coeff(impact_coeff_name(s_id, t_id));
      reps_out[r].standard[t_idx][t_idx] = f_std.coeff(impact_coeff_name(t_id, t_id));
    }
  });

  FullConnectionResult out;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      std::vector<double> e_ours, e_std;
      for (const auto& rep : reps_out) {
        e_ours.push_back(std::abs(rep.ours[s][t] - truth[s][t]));
        e_std.push_back(std::abs(rep.standard[s][t] - truth[s][t]));
      }
      out.ours_mae[s][t] = mean_of(e_ours);
      out.ours_sd[s][t] = stats::sd(e_ours);
      out.standard_mae[s][t] = mean_of(e_std);
      out.standard_sd[s][t] = stats::sd(e_std);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Six-process multivariate study

Multivariate6Result run_multivariate6(int reps, std::uint64_t seed, int jobs,
                                      int trials) {
  NetworkSpec base = scenario_preset("multivariate6");
  base.trial_count = trials;
  const auto& ids = base.process_ids;

  std::vector<PairKey> pairs;
  std::vector<double> truth;
  for (const auto& s : ids) {
    for (const auto& t : ids) {
      if (s == t) continue;
      pairs.emplace_back(s, t);
      const ImpactSpec* imp = base.impact(s, t);
      truth.push_back(imp ? imp->square.amplitude : 0.0);
    }
  }

  std::vector<std::vector<double>> err_ours(
      pairs.size(), std::vector<double>(static_cast<std::size_t>(reps)));
  std::vector<std::vector<double>> err_std(
      pairs.size(), std::vector<double>(static_cast<std::size_t>(reps)));

  parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
    NetworkSpec spec = base;
    spec.seed = RngStream::substream(seed, 104, r).next_u64();
    const TrialSet data = thinning_simulate(spec).trials;

    PairwiseOptions opt;
    opt.impact = ImpactBasisSpec::square(kSquareWidth);
    opt.sigma_w = SigmaWSearch::over_grid(log_grid(0.040, 0.400, 10));
    opt.jobs = 1;  // replicates already fan out
    const auto ours = fit_multivariate_pairwise(data, opt);
    const auto standard =
        fit_standard_mhp_multivariate(data, ImpactBasisSpec::square(kSquareWidth), 1);

    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& key = pairs[k];
      const std::string name = impact_coeff_name(key.first, key.second);
      err_ours[k][r] = ours.at(key).coeff(name) - truth[k];
      err_std[k][r] = standard.at(key).coeff(name) - truth[k];
    }
  });

  Multivariate6Result out;
  std::vector<double> ours_pair_bias, std_pair_bias, ours_pair_rmse, std_pair_rmse;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    PairSummaryRow row;
    row.source = pairs[k].first;
    row.target = pairs[k].second;
    row.truth = truth[k];
    row.ours_mean = mean_of(err_ours[k]) + truth[k];
    row.standard_mean = mean_of(err_std[k]) + truth[k];
    double so = 0.0, ss = 0.0;
    for (int r = 0; r < reps; ++r) {
      so += err_ours[k][static_cast<std::size_t>(r)] * err_ours[k][static_cast<std::size_t>(r)];
      ss += err_std[k][static_cast<std::size_t>(r)] * err_std[k][static_cast<std::size_t>(r)];
    }
    row.ours_rmse = std::sqrt(so / reps);
    row.standard_rmse = std::sqrt(ss / reps);
    out.pairs.push_back(row);
    ours_pair_bias.push_back(mean_of(err_ours[k]));
    std_pair_bias.push_back(mean_of(err_std[k]));
    ours_pair_rmse.push_back(row.ours_rmse);
    std_pair_rmse.push_back(row.standard_rmse);
  }
  out.ours_mean_bias = mean_of(ours_pair_bias);
  out.ours_bias_sd = stats::sd(ours_pair_bias);
  out.ours_rmse = mean_of(ours_pair_rmse);
  out.ours_rmse_sd = stats::sd(ours_pair_rmse);
  out.standard_mean_bias = mean_of(std_pair_bias);
  out.standard_bias_sd = stats::sd(std_pair_bias);
  out.standard_rmse = mean_of(std_pair_rmse);
  out.standard_rmse_sd = stats::sd(std_pair_rmse);
  return out;
}

// ---------------------------------------------------------------------------
// Hypothesis-testing harness

namespace {

struct TestScaleDataset {
  TrialSet data;
};

TestScaleDataset make_test_scale_dataset(double amplitude, std::uint64_t seed) {
  NetworkSpec spec = scenario_preset("linear_cox_basic");
  spec.trial_count = 10;
  spec.impacts.clear();
  if (amplitude != 0.0)
    spec.add_impact("i", "j", ImpactSpec::square_impact(kSquareWidth, amplitude));
  spec.seed = seed;
  return {thinning_simulate(spec).trials};
}

struct TestPvalues {
  double modified = 1.0, ccg = 1.0, standard = 1.0;
};

TestPvalues pvalues_for_dataset(const TrialSet& data, std::uint64_t ccg_seed) {
  TestPvalues out;
  // Wald tests at the likelihood-chosen smoothing width of this scenario.
  DesignSpec mod = pair_modified_design(SigmaWSearch::fixed(0.125));
  const std::string name = impact_coeff_name("i", "j");
  out.modified = inference::wald_test(fit_modified_mle(mod, data), name).p_value;
  out.standard =
      inference::wald_test(fit_standard_mhp(pair_standard_design(), data), name).p_value;

  ccg::CcgConfig cfg;
  cfg.bin_width = 0.002;
  cfg.max_lag = 0.030;
  cfg.jitter_window = 0.100;
  cfg.n_mc = 1000;
  cfg.combined_range = {0.0, kSquareWidth};
  RngStream rng(ccg_seed);
  out.ccg = ccg::mc_null_inference(data.trials("i"), data.trials("j"), cfg, rng).combined_p;
  return out;
}

}  // namespace

PvalueUniformityResult run_pvalue_uniformity(int n_datasets, std::uint64_t seed,
                                             int jobs) {
  std::vector<TestPvalues> ps(static_cast<std::size_t>(n_datasets));
  parallel_for(static_cast<std::size_t>(n_datasets), jobs, [&](std::size_t k) {
    const auto ds = make_test_scale_dataset(
        0.0, RngStream::substream(seed, 105, k).next_u64());
    ps[k] = pvalues_for_dataset(ds.data, RngStream::substream(seed, 106, k).next_u64());
  });
  PvalueUniformityResult out;
  for (const auto& p : ps) {
    out.p_modified.push_back(p.modified);
    out.p_ccg.push_back(p.ccg);
    out.p_standard.push_back(p.standard);
  }
  out.ks_modified = stats::ks_test_uniform(out.p_modified);
  out.ks_ccg = stats::ks_test_uniform(out.p_ccg);
  out.ks_standard = stats::ks_test_uniform(out.p_standard);
  return out;
}

RocStudyResult run_roc(double amplitude, int reps, std::uint64_t seed, int jobs) {
  std::vector<TestPvalues> null_ps(static_cast<std::size_t>(reps));
  std::vector<TestPvalues> alt_ps(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(2 * reps), jobs, [&](std::size_t k) {
    const bool alt = k >= static_cast<std::size_t>(reps);
    const std::size_t r = alt ? k - static_cast<std::size_t>(reps) : k;
    const auto ds = make_test_scale_dataset(
        alt ? amplitude : 0.0, RngStream::substream(seed, 107 + (alt ? 1 : 0), r).next_u64());
    auto& slot = alt ? alt_ps[r] : null_ps[r];
    slot = pvalues_for_dataset(ds.data, RngStream::substream(seed, 109, k).next_u64());
  });
  auto collect = [&](auto member) {
    std::pair<std::vector<double>, std::vector<double>> lists;
    for (const auto& p : null_ps) lists.first.push_back(p.*member);
    for (const auto& p : alt_ps) lists.second.push_back(p.*member);
    return lists;
  };
  RocStudyResult out;
  out.amplitude = amplitude;
  auto [n0, a0] = collect(&TestPvalues::modified);
  out.modified = inference::roc_analysis(n0, a0);
  auto [n1, a1] = collect(&TestPvalues::ccg);
  out.ccg_curve = inference::roc_analysis(n1, a1);
  auto [n2, a2] = collect(&TestPvalues::standard);
  out.standard = inference::roc_analysis(n2, a2);
  return out;
}

// ---------------------------------------------------------------------------
// Goodness-of-fit self-consistency

namespace {

// Sound upper bound for the fitted pair intensity on [a, b]: positive parts
// of the coefficients against per-term suprema.
double fitted_intensity_bound(const DesignWorkspace& ws, double a,
                              double b, const Eigen::VectorXd& beta,
                              const std::vector<double>& src_events,
                              double sigma_w) {
  double bound = std::max(beta(0), 0.0);
  const auto& names = ws.coeff_names();
  for (int k = 1; k < ws.n_coeffs(); ++k) {
    const double c = beta(k);
    if (c <= 0.0) continue;  // columns are non-negative
    if (names[static_cast<std::size_t>(k)].rfind("w:", 0) == 0) {
      // Each event's Gaussian is maximized at its distance to [a, b].
      const double cut = kGaussianSupportSigmas * sigma_w;
      double s = 0.0;
      for (double tm : src_events) {
        if (tm < a - cut || tm > b + cut) continue;
        const double d = tm < a ? a - tm : (tm > b ? tm - b : 0.0);
        s += gaussian_eval(d, sigma_w);
      }
      bound += c * s;
    } else {
      // Square impact column: count of events that can be active on [a, b].
      long cnt = 0;
      for (double tm : src_events)
        if (tm > a - kSquareWidth && tm < b) ++cnt;
      bound += c * static_cast<double>(cnt);
    }
  }
  return bound;
}

}  // namespace

GofResult run_gof_selfconsistency(int reps, std::uint64_t seed, int jobs) {
  std::vector<int> pass(static_cast<std::size_t>(reps), 0);
  std::vector<int> reject(static_cast<std::size_t>(reps), 0);

  parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t r) {
    NetworkSpec spec = scenario_preset("linear_cox_basic");
    spec.seed = RngStream::substream(seed, 110, r).next_u64();
    const TrialSet data = thinning_simulate(spec).trials;

    DesignSpec design = pair_modified_design(SigmaWSearch::fixed(0.125));
    DesignWorkspace ws(design, data);
    const FitResult fit = ws.fit();

    // Simulate fresh target trains from the fitted intensity, conditioning
    // on the observed source trains.
    TrialSet refit_data = data;
    const int tgt_idx = data.index_of("j");
    const int src_idx = data.index_of("i");
    RngStream sim_rng = RngStream::substream(seed, 111, r);
    for (int tr = 0; tr < data.trial_count; ++tr) {
      const auto& src = data.trials_by_process[static_cast<std::size_t>(src_idx)]
                            [static_cast<std::size_t>(tr)].timestamps;
      auto intensity = [&](double t) {
        return std::max(ws.intensity_at(tr, t, fit.coeffs), 0.0);
      };
      auto bound = [&](double a, double b) {
        return fitted_intensity_bound(ws, a, b, fit.coeffs, src, 0.125);
      };
      refit_data.trials_by_process[static_cast<std::size_t>(tgt_idx)]
          [static_cast<std::size_t>(tr)] =
          thinning_simulate_custom(data.horizon, intensity, bound, sim_rng);
    }

    DesignWorkspace ws_new(design, refit_data);
    const auto report = inference::ks_rescaling_test(ws_new, fit.coeffs);
    pass[r] = report.outcome.p_value > 0.01 ? 1 : 0;

    // Impact-free misspecification on the original data: constant plus the
    // smoothed nuisance, no coupling term.
    DesignSpec misspec;
    misspec.target_id = "j";
    misspec.nuisance_sources = {"i"};
    misspec.sigma_w = SigmaWSearch::fixed(0.125);
    DesignWorkspace ws_mis(misspec, data);
    const FitResult fit_mis = ws_mis.fit();
    const auto report_mis = inference::ks_rescaling_test(ws_mis, fit_mis.coeffs);
    reject[r] = report_mis.outcome.p_value <= 0.01 ? 1 : 0;
  });

  GofResult out;
  out.n = reps;
  for (int v : pass) out.correct_pass += v;
  for (int v : reject) out.misspec_reject += v;
  return out;
}

// ---------------------------------------------------------------------------
// Bayesian cross-check

BayesCheckResult run_bayesian_check(std::uint64_t seed, int draws, int burn_in) {
  NetworkSpec spec = scenario_preset("linear_cox_basic");
  spec.seed = RngStream::substream(seed, 112, 0).next_u64();
  const TrialSet data = thinning_simulate(spec).trials;

  DesignSpec design = pair_modified_design(SigmaWSearch::over_grid(default_sigma_w_grid()));
  const FitResult mle = fit_modified_mle(design, data);
  const std::string name = impact_coeff_name("i", "j");

  BayesCheckResult out;
  out.mle = mle.coeff(name);
  out.mle_se = mle.se(name);
  out.mle_sigma_w = mle.sigma_w_selected;

  inference::MhOptions opt;
  opt.n_draws = draws;
  opt.burn_in = burn_in;

  // Model 2: sigma_w fixed at the likelihood-selected width.
  DesignSpec d2 = pair_modified_design(SigmaWSearch::fixed(mle.sigma_w_selected));
  RngStream rng2 = RngStream::substream(seed, 113, 0);
  const auto chain2 =
      inference::mh_sample(d2, data, inference::McmcVariant::sigma_w_fixed, opt, rng2);
  const auto alpha2 = chain2.column(name);
  out.m2_post_mean = stats::mean(alpha2);
  out.m2_post_sd = stats::sd(alpha2);
  out.m2_acceptance = chain2.acceptance_rate;

  // Model 1: sigma_w is a parameter with a flat prior on (0, inf).
  RngStream rng1 = RngStream::substream(seed, 114, 0);
  const auto chain1 =
      inference::mh_sample(d2, data, inference::McmcVariant::sigma_w_random, opt, rng1);
  const auto sigma_draws = chain1.column("sigma_w");
  const auto alpha1 = chain1.column(name);
  out.m1_post_mean = stats::mean(alpha1);
  out.m1_post_sd = stats::sd(alpha1);
  out.m1_acceptance = chain1.acceptance_rate;
  out.m1_sigma_lo = stats::quantile(sigma_draws, 0.025);
  out.m1_sigma_hi = stats::quantile(sigma_draws, 0.975);
  // Posterior mode from a coarse histogram over the central range.
  std::vector<double> sorted = sigma_draws;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  const int nbins = 30;
  std::vector<int> counts(nbins, 0);
  for (double v : sorted) {
    int b = static_cast<int>((v - lo) / (hi - lo + 1e-12) * nbins);
    counts[std::clamp(b, 0, nbins - 1)]++;
  }
  const int best = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                    counts.begin());
  out.m1_sigma_mode = lo + (best + 0.5) * (hi - lo) / nbins;
  return out;
}

}  // namespace hawkes::experiments
