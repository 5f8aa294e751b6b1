#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hawkes {

// Event timestamps of one process on one trial, strictly increasing and
// contained in [0, horizon]. Horizon is the observation length in seconds;
// all library-internal times are seconds.
struct EventSequence {
  std::vector<double> timestamps;
  double horizon = 0.0;

  EventSequence() = default;
  EventSequence(std::vector<double> ts, double horizon_t);

  std::size_t size() const { return timestamps.size(); }
  bool empty() const { return timestamps.empty(); }
  void validate() const;  // throws std::invalid_argument on violation
};

// Repeated-trial dataset: every process has exactly trial_count sequences,
// all with the same horizon.
struct TrialSet {
  std::vector<std::string> process_ids;
  std::vector<std::vector<EventSequence>> trials_by_process;  // [process][trial]
  int trial_count = 0;
  double horizon = 0.0;

  int index_of(const std::string& process_id) const;  // throws if unknown
  bool has_process(const std::string& process_id) const;
  const std::vector<EventSequence>& trials(const std::string& process_id) const;
  std::size_t total_events() const;
  void validate() const;
};

struct GaussianKernel {
  double sigma_w = 0.0;
  explicit GaussianKernel(double sigma);
  double operator()(double tau) const;
};

// Causal square impact: amplitude on [0, width], zero elsewhere.
// Amplitude is in events/sec and may be negative (inhibition).
struct SquareWindow {
  double width = 0.0;
  double amplitude = 0.0;
  double operator()(double lag) const {
    return (lag >= 0.0 && lag <= width) ? amplitude : 0.0;
  }
};

// Contributions beyond this many standard deviations are below double
// round-off relative to the kernel peak and are skipped.
inline constexpr double kGaussianSupportSigmas = 8.5;

// Normalized Gaussian density (2*pi*sigma^2)^(-1/2) exp(-tau^2 / 2 sigma^2).
double gaussian_eval(double tau, double sigma_w);

// Smoothed (coarsened) train: sum over all events of W(t - t_m; sigma_w).
// Two-sided by construction; causality is a property of impact bases only.
double smoothed_train(const EventSequence& events, double sigma_w, double t);

// Exact integral of the smoothed train over [0, horizon], boundary-corrected
// through the normal CDF.
double smoothed_train_integral(const EventSequence& events, double sigma_w);

// Exact integral of the smoothed train over [a, b].
double smoothed_train_integral(const EventSequence& events, double sigma_w,
                               double a, double b);

}  // namespace hawkes
