#pragma once

#include <utility>
#include <vector>

#include "hawkes/core.hpp"
#include "hawkes/rng.hpp"

namespace hawkes::ccg {

struct CcgConfig {
  double bin_width = 0.002;     // seconds
  double max_lag = 0.050;       // seconds; lags span [-max_lag, max_lag]
  double jitter_window = 0.120;  // seconds
  int n_mc = 1000;
  enum class JitterTarget { source, target, both };
  JitterTarget jitter_target = JitterTarget::source;
  double confidence = 0.95;
  // Lag range (seconds) combined into the max-deviation statistic.
  std::pair<double, double> combined_range = {0.0, 0.030};

  int n_lags() const;  // 2 * (max_lag / bin_width) + 1
  void validate() const;
};

struct CcgResult {
  std::vector<double> lags;  // seconds, bin centers
  std::vector<double> ccg;   // raw coincidence counts
  std::vector<double> null_mean;
  std::vector<double> pointwise_lo, pointwise_hi;
  std::vector<double> simultaneous_lo, simultaneous_hi;
  std::vector<double> p_values;  // per lag, add-one Monte Carlo
  // Combined p-value over combined_range via the max-deviation statistic.
  double combined_p = 1.0;
};

// Lagged coincidence counts between binned trains, summed across trials.
// Positive lag means the source leads the target.
std::vector<double> compute_ccg(const std::vector<EventSequence>& source,
                                const std::vector<EventSequence>& target,
                                const CcgConfig& cfg);

// Redraws each event uniformly within its jitter window (window index
// floor(t/delta) is preserved; the last window is clipped at the horizon).
EventSequence jitter_resample(const EventSequence& events, double delta,
                              RngStream& rng);

// Monte Carlo conditional inference: n_mc jittered surrogates build the
// null distribution, pointwise and simultaneous acceptance bands, and
// add-one p-values per lag.
CcgResult mc_null_inference(const std::vector<EventSequence>& source,
                            const std::vector<EventSequence>& target,
                            const CcgConfig& cfg, RngStream& rng);

}  // namespace hawkes::ccg
