// Command-line experiment runner: simulation, fitting, conditional CCG
// inference, closed-form theory curves, goodness of fit, network extraction,
// and the canned simulation studies. Times are reported in milliseconds and
// rates in spikes/sec at this surface; files store seconds.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hawkes/ccg.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/experiments.hpp"
#include "hawkes/inference.hpp"
#include "hawkes/io.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/theory.hpp"

namespace {

using namespace hawkes;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
  if (flag_seed.has_value()) return *flag_seed;
  if (const char* env = std::getenv("HAWKES_HETERO_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

double ms_to_s(double ms) { return ms / 1000.0; }

std::vector<double> parse_grid_ms(const std::string& text) {
  // "lo:hi:n" in milliseconds, log-spaced.
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("--sigma-w-grid", "expected lo:hi:n (ms)");
  const double lo = std::stod(text.substr(0, c1));
  const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const int n = std::stoi(text.substr(c2 + 1));
  if (!(lo > 0.0 && hi > lo && n >= 2))
    throw CLI::ValidationError("--sigma-w-grid", "need 0 < lo < hi and n >= 2");
  return experiments::log_grid(ms_to_s(lo), ms_to_s(hi), n);
}

struct SimulateArgs {
  std::string preset;
  std::string config_path;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  bool keep_backgrounds = false;
};

int cmd_simulate(const SimulateArgs& args) {
  NetworkSpec spec;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error(args.config_path + ": cannot open");
    spec = io::network_spec_from_json(nlohmann::json::parse(in));
  } else {
    spec = scenario_preset(args.preset);
  }
  if (args.trials) spec.trial_count = *args.trials;
  spec.seed = resolve_seed(args.seed);

  const auto sim = thinning_simulate(spec, args.keep_backgrounds);
  io::ArtifactWriter writer(args.out);
  io::write_spikes_jsonl(sim.trials, (writer.dir() / "spikes.jsonl").string());
  writer.note_artifact("spikes.jsonl", "spikes", writer.dir() / "spikes.jsonl");
  writer.write_json("network.json", io::network_spec_to_json(spec));
  if (args.keep_backgrounds) {
    std::vector<std::string> header = {"trial", "process", "t", "f"};
    std::vector<std::vector<double>> rows;
    for (std::size_t p = 0; p < sim.realized_backgrounds.size(); ++p) {
      for (std::size_t tr = 0; tr < sim.realized_backgrounds[p].size(); ++tr) {
        const auto& f = sim.realized_backgrounds[p][tr];
        for (std::size_t k = 0; k < f.size(); ++k)
          rows.push_back({static_cast<double>(tr), static_cast<double>(p),
                          f.t0 + f.dt * static_cast<double>(k), f.values[k]});
      }
    }
    writer.write_csv("backgrounds.csv", header, rows);
  }
  writer.finalize(io::network_spec_to_json(spec), spec.seed);
  std::size_t n_events = sim.trials.total_events();
  std::cout << "simulated " << spec.process_ids.size() << " processes x "
            << spec.trial_count << " trials (" << n_events << " events) -> "
            << args.out << "\n";
  return 0;
}

struct FitArgs {
  std::string data_path;
  std::string method = "modified";  // modified | standard | spline | fixed
  std::string source = "i", target = "j";
  double sigma_h_ms = 30.0;
  double sigma_w_ms = 125.0;
  std::string grid_spec;  // lo:hi:n ms
  double lag_window_ms = 50.0;
  int knots = 9;
  bool self_impact = false;
  std::optional<double> horizon;
  std::string out = "out";
};

int cmd_fit(const FitArgs& args) {
  const TrialSet data = io::read_spikes(args.data_path, "auto", args.horizon);
  if (!data.has_process(args.source) || !data.has_process(args.target)) {
    std::string known;
    for (const auto& id : data.process_ids) known += " " + id;
    throw std::runtime_error("unknown unit id; available units:" + known);
  }

  DesignSpec design;
  design.target_id = args.target;
  const bool spline = args.method == "spline";
  ImpactBasisSpec impact =
      spline ? ImpactBasisSpec::bspline(ms_to_s(args.lag_window_ms), args.knots)
             : ImpactBasisSpec::square(ms_to_s(args.sigma_h_ms));
  design.impacts.push_back({args.source, impact});
  if (args.self_impact && args.source != args.target)
    design.impacts.push_back({args.target, ImpactBasisSpec::square(ms_to_s(args.sigma_h_ms))});

  FitResult fit;
  if (args.method == "standard") {
    fit = fit_standard_mhp(design, data);
  } else {
    design.nuisance_sources = {args.source};
    if (args.method == "fixed") {
      design.sigma_w = SigmaWSearch::fixed(ms_to_s(args.sigma_w_ms));
    } else {
      design.sigma_w = SigmaWSearch::over_grid(
          args.grid_spec.empty() ? default_sigma_w_grid() : parse_grid_ms(args.grid_spec));
    }
    fit = spline ? fit_nonparametric(design, data) : fit_modified_mle(design, data);
  }

  io::ArtifactWriter writer(args.out);
  writer.write_json("fit.json", io::fit_result_to_json(fit));
  const auto curve = impact_curve(fit, design, args.source);
  std::vector<std::vector<double>> rows;
  for (const auto& pt : curve)
    rows.push_back({pt.lag * 1000.0, pt.value, pt.ci_lo, pt.ci_hi});
  writer.write_csv("impact.csv", {"lag_ms", "value", "ci_lo", "ci_hi"}, rows);
  nlohmann::json cfg;
  cfg["method"] = args.method;
  cfg["source"] = args.source;
  cfg["target"] = args.target;
  writer.finalize(cfg, 0);

  if (!spline) {
    const std::string name = impact_coeff_name(args.source, args.target);
    std::cout << "alpha_hat(" << args.source << "->" << args.target << ") = "
              << fit.coeff(name) << " +- " << fit.se(name) << " spikes/sec";
  } else {
    std::cout << "spline impact with " << impact.num_coeffs() << " coefficients";
  }
  if (!design.nuisance_sources.empty())
    std::cout << ", sigma_w = " << fit.sigma_w_selected * 1000.0 << " ms";
  std::cout << (fit.converged ? "" : "  [NOT CONVERGED]") << "\n";
  return fit.converged ? 0 : 1;
}

struct CcgArgs {
  std::string data_path;
  std::string source = "i", target = "j";
  double bin_ms = 2.0, max_lag_ms = 50.0, jitter_ms = 120.0;
  int n_mc = 1000;
  double confidence = 0.95;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

int cmd_ccg(const CcgArgs& args) {
  const TrialSet data = io::read_spikes(args.data_path, "auto", args.horizon);
  ccg::CcgConfig cfg;
  cfg.bin_width = ms_to_s(args.bin_ms);
  cfg.max_lag = ms_to_s(args.max_lag_ms);
  cfg.jitter_window = ms_to_s(args.jitter_ms);
  cfg.n_mc = args.n_mc;
  cfg.confidence = args.confidence;
  cfg.combined_range = {0.0, cfg.max_lag};
  RngStream rng(resolve_seed(args.seed));
  const auto res = ccg::mc_null_inference(data.trials(args.source),
                                          data.trials(args.target), cfg, rng);

  io::ArtifactWriter writer(args.out);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < res.lags.size(); ++k) {
    rows.push_back({res.lags[k] * 1000.0, res.ccg[k], res.null_mean[k],
                    res.ccg[k] - res.null_mean[k], res.pointwise_lo[k],
                    res.pointwise_hi[k], res.simultaneous_lo[k],
                    res.simultaneous_hi[k], res.p_values[k]});
  }
  writer.write_csv("ccg.csv",
                   {"lag_ms", "ccg", "null_mean", "ccg_centered", "pw_lo",
                    "pw_hi", "sim_lo", "sim_hi", "p"},
                   rows);
  nlohmann::json cfg_json;
  cfg_json["bin_ms"] = args.bin_ms;
  cfg_json["jitter_ms"] = args.jitter_ms;
  cfg_json["n_mc"] = args.n_mc;
  writer.finalize(cfg_json, resolve_seed(args.seed));
  std::cout << "combined p (lags 0.." << args.max_lag_ms << " ms) = "
            << res.combined_p << "\n";
  return 0;
}

struct TheoryArgs {
  double rho = 30.0, sigma_i_ms = 100.0, alpha_i = 10.0, alpha_j = 10.0;
  double sigma_h_ms = 30.0, amplitude = 2.0, horizon_s = 1000.0;
  std::string grid_spec = "5:500:25";
  std::string out = "out";
};

int cmd_theory(const TheoryArgs& args) {
  theory::CoxTheoryParams p;
  p.rho = args.rho;
  p.sigma_i = ms_to_s(args.sigma_i_ms);
  p.alpha_i = args.alpha_i;
  p.alpha_j = args.alpha_j;
  p.sigma_h = ms_to_s(args.sigma_h_ms);
  p.horizon = args.horizon_s;
  p.alpha_impact = args.amplitude;
  const auto curves = theory::theory_curves(p, parse_grid_ms(args.grid_spec));
  io::ArtifactWriter writer(args.out);
  std::vector<std::vector<double>> rows;
  for (const auto& pt : curves)
    rows.push_back({pt.sigma_w * 1000.0, pt.bias, pt.se, pt.rmse, pt.dloglik});
  writer.write_csv("theory.csv", {"sigma_w_ms", "bias", "se", "rmse", "dloglik"}, rows);
  nlohmann::json cfg;
  cfg["rho"] = args.rho;
  cfg["sigma_i_ms"] = args.sigma_i_ms;
  writer.finalize(cfg, 0);
  std::cout << "bias_hawkes (no nuisance) = " << theory::bias_hawkes(p)
            << " spikes/sec\n";
  return 0;
}

struct GofArgs {
  std::string data_path;
  std::string source = "i", target = "j";
  double sigma_h_ms = 30.0, sigma_w_ms = 125.0;
  std::optional<double> horizon;
  std::string out = "out";
};

int cmd_gof(const GofArgs& args) {
  const TrialSet data = io::read_spikes(args.data_path, "auto", args.horizon);
  DesignSpec design;
  design.target_id = args.target;
  design.nuisance_sources = {args.source};
  design.impacts.push_back({args.source, ImpactBasisSpec::square(ms_to_s(args.sigma_h_ms))});
  design.sigma_w = SigmaWSearch::fixed(ms_to_s(args.sigma_w_ms));
  const FitResult fit = fit_modified_mle(design, data);
  const auto report = inference::ks_rescaling_test(design, data, fit);

  io::ArtifactWriter writer(args.out);
  std::vector<std::vector<double>> rows;
  for (const auto& q : report.qq)
    rows.push_back({q.theoretical, q.empirical, q.theoretical - report.band99,
                    q.theoretical + report.band99});
  writer.write_csv("qq.csv", {"model", "empirical", "band_lo", "band_hi"}, rows);
  nlohmann::json cfg;
  cfg["sigma_w_ms"] = args.sigma_w_ms;
  writer.finalize(cfg, 0);
  std::cout << "time-rescaling KS: D = " << report.outcome.statistic
            << ", p = " << report.outcome.p_value << " (n = " << report.n << ")\n";
  return 0;
}

struct NetworkArgs {
  std::string data_path;
  double sigma_h_ms = 30.0;
  std::string grid_spec = "40:400:10";
  double level = 0.01;
  int jobs = 0;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

int cmd_network(const NetworkArgs& args) {
  const TrialSet data = io::read_spikes(args.data_path, "auto", args.horizon);
  PairwiseOptions opt;
  opt.impact = ImpactBasisSpec::square(ms_to_s(args.sigma_h_ms));
  opt.sigma_w = SigmaWSearch::over_grid(parse_grid_ms(args.grid_spec));
  opt.jobs = args.jobs;
  const auto fits = fit_multivariate_pairwise(data, opt);
  const auto net = inference::extract_network(fits, args.level);

  io::ArtifactWriter writer(args.out);
  std::string csv = "source,target,alpha_hat,se,p,sign\n";
  for (const auto& e : net.edges) {
    csv += e.source + "," + e.target + "," + io::format_double(e.alpha_hat) +
           "," + io::format_double(e.se) + "," + io::format_double(e.p) + "," +
           std::to_string(e.sign) + "\n";
  }
  writer.write_text("edges.csv", "csv", csv);
  writer.write_json("network.json", io::network_edges_to_json(net, data.process_ids));
  nlohmann::json cfg;
  cfg["level"] = args.level;
  writer.finalize(cfg, 0);
  std::cout << net.edges.size() << " edges at Bonferroni level " << args.level
            << " (threshold " << net.threshold << " over " << net.tests
            << " ordered pairs)\n";
  return 0;
}

struct ExperimentArgs {
  std::string name;
  int reps = 20;
  int jobs = 0;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

int cmd_experiment(const ExperimentArgs& args) {
  const std::uint64_t seed = resolve_seed(args.seed);
  io::ArtifactWriter writer(args.out);
  nlohmann::json cfg;
  cfg["experiment"] = args.name;
  cfg["reps"] = args.reps;

  if (args.name == "sinusoid_bias") {
    const auto res = experiments::run_sinusoid_bias(args.reps, seed, args.jobs);
    std::vector<std::vector<double>> rows;
    for (const auto& r : res.rows)
      rows.push_back({r.phi_lag, r.dot, r.standard_bias, r.standard_se,
                      r.modified_bias, r.modified_se});
    writer.write_csv("sinusoid_bias.csv",
                     {"phi_lag", "dot", "standard_bias", "standard_se",
                      "modified_bias", "modified_se"},
                     rows);
    std::cout << "standard-MHP bias vs dot product: slope = "
              << res.regression.slope << ", R^2 = " << res.regression.r2 << "\n";
  } else if (args.name == "sigma_w_sweep") {
    const auto res = experiments::run_sigma_w_sweep(args.reps, seed, args.jobs);
    std::vector<std::vector<double>> rows;
    for (const auto& r : res.rows)
      rows.push_back({r.sigma_w * 1000.0, r.emp_bias, r.emp_bias_se, r.emp_sd,
                      r.theory_bias, r.theory_se});
    writer.write_csv("sigma_w_sweep.csv",
                     {"sigma_w_ms", "emp_bias", "emp_bias_se", "emp_sd",
                      "theory_bias", "theory_se"},
                     rows);
    std::cout << "median selected sigma_w = " << res.median_selected * 1000.0
              << " ms; standard-MHP bias = " << res.standard_bias_mean
              << " (theory " << res.theory_bias_hawkes << ")\n";
  } else if (args.name == "full_connection") {
    const auto res = experiments::run_full_connection(args.reps, seed, args.jobs);
    std::vector<std::vector<double>> rows;
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        rows.push_back({static_cast<double>(s), static_cast<double>(t),
                        res.ours_mae[s][t], res.ours_sd[s][t],
                        res.standard_mae[s][t], res.standard_sd[s][t]});
    writer.write_csv("full_connection.csv",
                     {"source", "target", "ours_mae", "ours_sd", "standard_mae",
                      "standard_sd"},
                     rows);
    std::cout << "cross-impact MAE: ours = " << res.ours_cross_mae()
              << ", standard = " << res.standard_cross_mae() << "\n";
  } else if (args.name == "multivariate6") {
    const auto res = experiments::run_multivariate6(args.reps, seed, args.jobs);
    std::vector<std::vector<double>> rows;
    for (const auto& p : res.pairs)
      rows.push_back({p.truth, p.ours_mean, p.ours_rmse, p.standard_mean,
                      p.standard_rmse});
    writer.write_csv("multivariate6_pairs.csv",
                     {"truth", "ours_mean", "ours_rmse", "standard_mean",
                      "standard_rmse"},
                     rows);
    writer.write_csv("multivariate6_summary.csv",
                     {"ours_bias", "ours_bias_sd", "ours_rmse", "ours_rmse_sd",
                      "standard_bias", "standard_bias_sd", "standard_rmse",
                      "standard_rmse_sd"},
                     {{res.ours_mean_bias, res.ours_bias_sd, res.ours_rmse,
                       res.ours_rmse_sd, res.standard_mean_bias,
                       res.standard_bias_sd, res.standard_rmse,
                       res.standard_rmse_sd}});
    std::cout << "bias: ours = " << res.ours_mean_bias << ", standard = "
              << res.standard_mean_bias << "; RMSE: ours = " << res.ours_rmse
              << ", standard = " << res.standard_rmse << "\n";
  } else if (args.name == "pvalue_uniformity") {
    const auto res = experiments::run_pvalue_uniformity(args.reps, seed, args.jobs);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < res.p_modified.size(); ++k)
      rows.push_back({res.p_modified[k], res.p_ccg[k], res.p_standard[k]});
    writer.write_csv("pvalues.csv", {"modified", "ccg", "standard"}, rows);
    std::cout << "KS vs U(0,1): modified p = " << res.ks_modified.p_value
              << ", ccg p = " << res.ks_ccg.p_value
              << ", standard p = " << res.ks_standard.p_value << "\n";
  } else if (args.name == "roc") {
    const auto res = experiments::run_roc(2.0, args.reps, seed, args.jobs);
    auto dump = [&](const std::string& name, const inference::RocCurve& c) {
      std::vector<std::vector<double>> rows;
      for (const auto& pt : c.points) rows.push_back({pt.fpr, pt.tpr});
      writer.write_csv(name, {"fpr", "tpr"}, rows);
    };
    dump("roc_modified.csv", res.modified);
    dump("roc_ccg.csv", res.ccg_curve);
    dump("roc_standard.csv", res.standard);
    std::cout << "AUC: modified = " << res.modified.auc
              << ", ccg = " << res.ccg_curve.auc
              << ", standard = " << res.standard.auc << "\n";
  } else {
    throw std::runtime_error("unknown experiment '" + args.name + "'");
  }
  writer.finalize(cfg, seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hawkes-process coupling estimation under heterogeneous background"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate spike data from a scenario");
  sim_cmd->add_option("--preset", sim.preset, "Scenario preset name");
  sim_cmd->add_option("--config", sim.config_path, "Network spec JSON file");
  sim_cmd->add_option("--trials", sim.trials, "Override trial count");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed (fallback: HAWKES_HETERO_SEED)");
  sim_cmd->add_option("--out", sim.out, "Output directory");
  sim_cmd->add_flag("--keep-backgrounds", sim.keep_backgrounds,
                    "Also write realized background tables");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a coupling model to spike data");
  fit_cmd->add_option("--data", fit.data_path, "Spike file (jsonl or csv)")->required();
  fit_cmd->add_option("--method", fit.method, "modified | standard | spline | fixed");
  fit_cmd->add_option("--source", fit.source, "Source unit id");
  fit_cmd->add_option("--target", fit.target, "Target unit id");
  fit_cmd->add_option("--sigma-h", fit.sigma_h_ms, "Square impact width (ms)");
  fit_cmd->add_option("--sigma-w", fit.sigma_w_ms, "Fixed smoothing width (ms)");
  fit_cmd->add_option("--sigma-w-grid", fit.grid_spec, "Grid lo:hi:n (ms, log-spaced)");
  fit_cmd->add_option("--lag-window", fit.lag_window_ms, "Spline lag window (ms)");
  fit_cmd->add_option("--knots", fit.knots, "Spline distinct knots");
  fit_cmd->add_flag("--self-impact", fit.self_impact, "Also fit the target's self impact");
  fit_cmd->add_option("--horizon", fit.horizon, "Horizon override (s), for CSV input");
  fit_cmd->add_option("--out", fit.out, "Output directory");

  CcgArgs ccg_args;
  auto* ccg_cmd = app.add_subcommand("ccg", "Jitter-based cross-correlogram inference");
  ccg_cmd->add_option("--data", ccg_args.data_path, "Spike file")->required();
  ccg_cmd->add_option("--source", ccg_args.source, "Source unit id");
  ccg_cmd->add_option("--target", ccg_args.target, "Target unit id");
  ccg_cmd->add_option("--bin", ccg_args.bin_ms, "Bin width (ms)");
  ccg_cmd->add_option("--max-lag", ccg_args.max_lag_ms, "Max lag (ms)");
  ccg_cmd->add_option("--jitter", ccg_args.jitter_ms, "Jitter window (ms)");
  ccg_cmd->add_option("--mc", ccg_args.n_mc, "Monte Carlo surrogates");
  ccg_cmd->add_option("--confidence", ccg_args.confidence, "Band confidence");
  ccg_cmd->add_option("--horizon", ccg_args.horizon, "Horizon override (s)");
  ccg_cmd->add_option("--seed", ccg_args.seed, "RNG seed");
  ccg_cmd->add_option("--out", ccg_args.out, "Output directory");

  TheoryArgs theory_args;
  auto* th_cmd = app.add_subcommand("theory", "Closed-form bias/SE/RMSE curves");
  th_cmd->add_option("--rho", theory_args.rho, "Background center rate (spikes/s)");
  th_cmd->add_option("--sigma-i", theory_args.sigma_i_ms, "Background timescale (ms)");
  th_cmd->add_option("--alpha-i", theory_args.alpha_i, "Source baseline (spikes/s)");
  th_cmd->add_option("--alpha-j", theory_args.alpha_j, "Target baseline (spikes/s)");
  th_cmd->add_option("--sigma-h", theory_args.sigma_h_ms, "Impact width (ms)");
  th_cmd->add_option("--amplitude", theory_args.amplitude, "Impact amplitude (spikes/s)");
  th_cmd->add_option("--horizon", theory_args.horizon_s, "Total time T (s)");
  th_cmd->add_option("--grid", theory_args.grid_spec, "sigma_w grid lo:hi:n (ms)");
  th_cmd->add_option("--out", theory_args.out, "Output directory");

  GofArgs gof;
  auto* gof_cmd = app.add_subcommand("gof", "Time-rescaling goodness of fit");
  gof_cmd->add_option("--data", gof.data_path, "Spike file")->required();
  gof_cmd->add_option("--source", gof.source, "Source unit id");
  gof_cmd->add_option("--target", gof.target, "Target unit id");
  gof_cmd->add_option("--sigma-h", gof.sigma_h_ms, "Impact width (ms)");
  gof_cmd->add_option("--sigma-w", gof.sigma_w_ms, "Smoothing width (ms)");
  gof_cmd->add_option("--horizon", gof.horizon, "Horizon override (s)");
  gof_cmd->add_option("--out", gof.out, "Output directory");

  NetworkArgs net;
  auto* net_cmd = app.add_subcommand("network", "Pairwise fits + Bonferroni edges");
  net_cmd->add_option("--data", net.data_path, "Spike file")->required();
  net_cmd->add_option("--sigma-h", net.sigma_h_ms, "Impact width (ms)");
  net_cmd->add_option("--sigma-w-grid", net.grid_spec, "Grid lo:hi:n (ms)");
  net_cmd->add_option("--level", net.level, "Bonferroni level");
  net_cmd->add_option("--jobs", net.jobs, "Worker threads (0 = all cores)");
  net_cmd->add_option("--horizon", net.horizon, "Horizon override (s)");
  net_cmd->add_option("--out", net.out, "Output directory");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand(
      "experiment",
      "Canned studies: sinusoid_bias, sigma_w_sweep, full_connection, "
      "multivariate6, pvalue_uniformity, roc");
  exp_cmd->add_option("name", exp.name, "Experiment name")->required();
  exp_cmd->add_option("--reps", exp.reps, "Replications");
  exp_cmd->add_option("--jobs", exp.jobs, "Worker threads (0 = all cores)");
  exp_cmd->add_option("--seed", exp.seed, "RNG seed");
  exp_cmd->add_option("--out", exp.out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (ccg_cmd->parsed()) return cmd_ccg(ccg_args);
    if (th_cmd->parsed()) return cmd_theory(theory_args);
    if (gof_cmd->parsed()) return cmd_gof(gof);
    if (net_cmd->parsed()) return cmd_network(net);
    if (exp_cmd->parsed()) return cmd_experiment(exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
