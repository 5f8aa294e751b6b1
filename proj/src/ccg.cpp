#include "hawkes/ccg.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "hawkes/stats.hpp"

namespace hawkes::ccg {

int CcgConfig::n_lags() const {
  return 2 * static_cast<int>(std::round(max_lag / bin_width)) + 1;
}

void CcgConfig::validate() const {
  if (!(bin_width > 0.0) || !(max_lag >= bin_width))
    throw std::invalid_argument("CcgConfig: need 0 < bin_width <= max_lag");
  if (!(bin_width <= jitter_window))
    throw std::invalid_argument("CcgConfig: bin_width must not exceed jitter window");
  if (n_mc < 19)
    throw std::invalid_argument("CcgConfig: n_mc >= 19 required for a meaningful band");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("CcgConfig: confidence must be in (0,1)");
}

namespace {

long bin_of(double t, double width) {
  return static_cast<long>(std::floor(t / width));
}

// Coincidence counting over sorted event vectors; equal to the binned sum
// sum_n X_i(n - tau) X_j(n) because pairs factor through bin products.
void accumulate_ccg(const std::vector<double>& src, const std::vector<double>& tgt,
                    double bin_width, int half_lags, std::vector<double>& acc) {
  std::size_t lo = 0;
  const double window = (half_lags + 1) * bin_width;
  for (const double ts : src) {
    while (lo < tgt.size() && tgt[lo] < ts - window) ++lo;
    for (std::size_t k = lo; k < tgt.size(); ++k) {
      const double tt = tgt[k];
      if (tt > ts + window) break;
      const long lag = bin_of(tt, bin_width) - bin_of(ts, bin_width);
      if (lag < -half_lags || lag > half_lags) continue;
      acc[static_cast<std::size_t>(lag + half_lags)] += 1.0;
    }
  }
}

double mean_event_spacing(const std::vector<EventSequence>& seqs) {
  std::size_t n = 0;
  double t = 0.0;
  for (const auto& s : seqs) {
    n += s.size();
    t += s.horizon;
  }
  return n > 0 ? t / static_cast<double>(n) : 1e300;
}

}  // namespace

std::vector<double> compute_ccg(const std::vector<EventSequence>& source,
                                const std::vector<EventSequence>& target,
                                const CcgConfig& cfg) {
  cfg.validate();
  if (source.size() != target.size())
    throw std::invalid_argument("compute_ccg: trial count mismatch");
  const int half = (cfg.n_lags() - 1) / 2;
  std::vector<double> acc(static_cast<std::size_t>(cfg.n_lags()), 0.0);
  if (source.empty()) {
    std::cerr << "compute_ccg: empty data, returning zero correlogram\n";
    return acc;
  }
  // The binned statistic assumes bins rarely hold more than one event.
  if (cfg.bin_width > 0.5 * std::min(mean_event_spacing(source),
                                     mean_event_spacing(target)))
    std::cerr << "compute_ccg: bin width is coarse relative to event rate; "
                 "bins may hold multiple events\n";
  for (std::size_t tr = 0; tr < source.size(); ++tr)
    accumulate_ccg(source[tr].timestamps, target[tr].timestamps, cfg.bin_width,
                   half, acc);
  return acc;
}

EventSequence jitter_resample(const EventSequence& events, double delta,
                              RngStream& rng) {
  if (!(delta > 0.0))
    throw std::invalid_argument("jitter_resample: delta must be > 0");
  std::vector<double> out;
  out.reserve(events.size());
  for (const double t : events.timestamps) {
    const double w = std::floor(t / delta);
    const double lo = w * delta;
    const double hi = std::min(lo + delta, events.horizon);
    out.push_back(lo + rng.uniform() * (hi - lo));
  }
  std::sort(out.begin(), out.end());
  // Exact collisions have probability zero but would violate strict
  // monotonicity; nudge by one ulp.
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k] <= out[k - 1])
      out[k] = std::nextafter(out[k - 1], events.horizon);
  return EventSequence(std::move(out), events.horizon);
}

CcgResult mc_null_inference(const std::vector<EventSequence>& source,
                            const std::vector<EventSequence>& target,
                            const CcgConfig& cfg, RngStream& rng) {
  cfg.validate();
  const int n_lags = cfg.n_lags();
  const int half = (n_lags - 1) / 2;

  CcgResult res;
  res.lags.resize(static_cast<std::size_t>(n_lags));
  for (int k = 0; k < n_lags; ++k)
    res.lags[static_cast<std::size_t>(k)] = (k - half) * cfg.bin_width;
  res.ccg = compute_ccg(source, target, cfg);

  // Null ensemble from jittered surrogates.
  std::vector<std::vector<double>> null_ccg(
      static_cast<std::size_t>(cfg.n_mc));
  for (int m = 0; m < cfg.n_mc; ++m) {
    std::vector<EventSequence> src_m, tgt_m;
    const bool jit_src = cfg.jitter_target != CcgConfig::JitterTarget::target;
    const bool jit_tgt = cfg.jitter_target != CcgConfig::JitterTarget::source;
    src_m.reserve(source.size());
    tgt_m.reserve(target.size());
    for (std::size_t tr = 0; tr < source.size(); ++tr) {
      src_m.push_back(jit_src ? jitter_resample(source[tr], cfg.jitter_window, rng)
                              : source[tr]);
      tgt_m.push_back(jit_tgt ? jitter_resample(target[tr], cfg.jitter_window, rng)
                              : target[tr]);
    }
    null_ccg[static_cast<std::size_t>(m)] = compute_ccg(src_m, tgt_m, cfg);
  }

  res.null_mean.assign(static_cast<std::size_t>(n_lags), 0.0);
  for (const auto& row : null_ccg)
    for (int k = 0; k < n_lags; ++k)
      res.null_mean[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k)];
  for (auto& v : res.null_mean) v /= cfg.n_mc;

  // Pointwise band from per-lag null quantiles.
  res.pointwise_lo.resize(static_cast<std::size_t>(n_lags));
  res.pointwise_hi.resize(static_cast<std::size_t>(n_lags));
  res.p_values.resize(static_cast<std::size_t>(n_lags));
  std::vector<double> column(static_cast<std::size_t>(cfg.n_mc));
  const double tail = 0.5 * (1.0 - cfg.confidence);
  for (int k = 0; k < n_lags; ++k) {
    for (int m = 0; m < cfg.n_mc; ++m)
      column[static_cast<std::size_t>(m)] =
          null_ccg[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
    res.pointwise_lo[static_cast<std::size_t>(k)] = stats::quantile(column, tail);
    res.pointwise_hi[static_cast<std::size_t>(k)] = stats::quantile(column, 1.0 - tail);
    // Add-one Monte Carlo p-value, one-sided on the observed tail.
    const double obs = res.ccg[static_cast<std::size_t>(k)];
    const double center = res.null_mean[static_cast<std::size_t>(k)];
    long extreme = 0;
    if (obs >= center) {
      for (double v : column) extreme += v >= obs;
    } else {
      for (double v : column) extreme += v <= obs;
    }
    res.p_values[static_cast<std::size_t>(k)] =
        static_cast<double>(extreme + 1) / static_cast<double>(cfg.n_mc + 1);
  }

  // Simultaneous band and combined test from the max deviation across lags.
  auto max_dev = [&](const std::vector<double>& row, int k_lo, int k_hi) {
    double d = 0.0;
    for (int k = k_lo; k <= k_hi; ++k)
      d = std::max(d, std::abs(row[static_cast<std::size_t>(k)] -
                               res.null_mean[static_cast<std::size_t>(k)]));
    return d;
  };
  std::vector<double> dev_all(static_cast<std::size_t>(cfg.n_mc));
  for (int m = 0; m < cfg.n_mc; ++m)
    dev_all[static_cast<std::size_t>(m)] =
        max_dev(null_ccg[static_cast<std::size_t>(m)], 0, n_lags - 1);
  const double q_all = stats::quantile(dev_all, cfg.confidence);
  res.simultaneous_lo.resize(static_cast<std::size_t>(n_lags));
  res.simultaneous_hi.resize(static_cast<std::size_t>(n_lags));
  for (int k = 0; k < n_lags; ++k) {
    res.simultaneous_lo[static_cast<std::size_t>(k)] =
        res.null_mean[static_cast<std::size_t>(k)] - q_all;
    res.simultaneous_hi[static_cast<std::size_t>(k)] =
        res.null_mean[static_cast<std::size_t>(k)] + q_all;
  }

  int k_lo = std::clamp(half + static_cast<int>(std::round(cfg.combined_range.first / cfg.bin_width)),
                        0, n_lags - 1);
  int k_hi = std::clamp(half + static_cast<int>(std::round(cfg.combined_range.second / cfg.bin_width)),
                        0, n_lags - 1);
  const double d_obs = max_dev(res.ccg, k_lo, k_hi);
  long extreme = 0;
  for (int m = 0; m < cfg.n_mc; ++m)
    extreme += max_dev(null_ccg[static_cast<std::size_t>(m)], k_lo, k_hi) >= d_obs;
  res.combined_p = static_cast<double>(extreme + 1) / static_cast<double>(cfg.n_mc + 1);
  return res;
}

}  // namespace hawkes::ccg
