#include "hawkes/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/stats.hpp"

namespace hawkes {

EventSequence::EventSequence(std::vector<double> ts, double horizon_t)
    : timestamps(std::move(ts)), horizon(horizon_t) {
  validate();
}

void EventSequence::validate() const {
  if (!(horizon > 0.0))
    throw std::invalid_argument("EventSequence: horizon must be positive");
  double prev = -1.0;
  for (double t : timestamps) {
    if (!(t >= 0.0 && t <= horizon))
      throw std::invalid_argument("EventSequence: timestamp outside [0, horizon]");
    if (!(t > prev))
      throw std::invalid_argument("EventSequence: timestamps not strictly increasing");
    prev = t;
  }
}

int TrialSet::index_of(const std::string& process_id) const {
  for (std::size_t i = 0; i < process_ids.size(); ++i)
    if (process_ids[i] == process_id) return static_cast<int>(i);
  throw std::invalid_argument("TrialSet: unknown process id '" + process_id + "'");
}

bool TrialSet::has_process(const std::string& process_id) const {
  for (const auto& id : process_ids)
    if (id == process_id) return true;
  return false;
}

const std::vector<EventSequence>& TrialSet::trials(
    const std::string& process_id) const {
  return trials_by_process[static_cast<std::size_t>(index_of(process_id))];
}

std::size_t TrialSet::total_events() const {
  std::size_t n = 0;
  for (const auto& proc : trials_by_process)
    for (const auto& seq : proc) n += seq.size();
  return n;
}

void TrialSet::validate() const {
  if (process_ids.size() != trials_by_process.size())
    throw std::invalid_argument("TrialSet: id/sequence count mismatch");
  if (trial_count < 0) throw std::invalid_argument("TrialSet: negative trial count");
  for (const auto& proc : trials_by_process) {
    if (static_cast<int>(proc.size()) != trial_count)
      throw std::invalid_argument("TrialSet: process missing trials");
    for (const auto& seq : proc) {
      if (seq.horizon != horizon)
        throw std::invalid_argument("TrialSet: trial horizon mismatch");
      seq.validate();
    }
  }
}

GaussianKernel::GaussianKernel(double sigma) : sigma_w(sigma) {
  if (!(sigma_w > 0.0))
    throw std::domain_error("GaussianKernel: sigma_w must be positive");
}

double GaussianKernel::operator()(double tau) const {
  return gaussian_eval(tau, sigma_w);
}

double gaussian_eval(double tau, double sigma_w) {
  if (!(sigma_w > 0.0))
    throw std::domain_error("gaussian_eval: sigma_w must be positive");
  static constexpr double kInvSqrt2Pi = 0.3989422804014327;
  const double z = tau / sigma_w;
  return kInvSqrt2Pi / sigma_w * std::exp(-0.5 * z * z);
}

double smoothed_train(const EventSequence& events, double sigma_w, double t) {
  if (!(sigma_w > 0.0))
    throw std::domain_error("smoothed_train: sigma_w must be positive");
  const double cut = kGaussianSupportSigmas * sigma_w;
  const auto& ts = events.timestamps;
  auto lo = std::lower_bound(ts.begin(), ts.end(), t - cut);
  auto hi = std::upper_bound(ts.begin(), ts.end(), t + cut);
  double s = 0.0;
  for (auto it = lo; it != hi; ++it) s += gaussian_eval(t - *it, sigma_w);
  return s;
}

double smoothed_train_integral(const EventSequence& events, double sigma_w) {
  return smoothed_train_integral(events, sigma_w, 0.0, events.horizon);
}

double smoothed_train_integral(const EventSequence& events, double sigma_w,
                               double a, double b) {
  if (!(sigma_w > 0.0))
    throw std::domain_error("smoothed_train_integral: sigma_w must be positive");
  if (b < a) throw std::invalid_argument("smoothed_train_integral: b < a");
  const double cut = kGaussianSupportSigmas * sigma_w;
  const auto& ts = events.timestamps;
  // Events left of a-cut have both CDF terms ~1 and events right of b+cut
  // have both ~0, so their differences vanish below double round-off.
  auto lo = std::lower_bound(ts.begin(), ts.end(), a - cut);
  auto hi = std::upper_bound(ts.begin(), ts.end(), b + cut);
  double s = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double tm = *it;
    s += stats::normal_cdf((b - tm) / sigma_w) - stats::normal_cdf((a - tm) / sigma_w);
  }
  return s;
}

}  // namespace hawkes
