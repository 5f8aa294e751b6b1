#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/bspline.hpp"
#include "hawkes/core.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

// Piecewise-linear function on a uniform grid. Realized backgrounds are
// represented this way; the interpolant itself is the ground-truth intensity
// component used during simulation, so window bounds and integrals computed
// from the nodes are exact rather than approximate.
struct TabulatedFn {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;

  static TabulatedFn constant(double level, double lo, double hi);
  static TabulatedFn from_samples(double t0, double dt, std::vector<double> v);

  double t_end() const;
  std::size_t size() const { return values.size(); }
  double operator()(double t) const;           // clamped linear interpolation
  double max_on(double a, double b) const;     // node max covering [a, b]
  double integral(double a, double b) const;   // exact for the interpolant
  double mean_value() const;                   // integral over span / span
  bool same_grid(const TabulatedFn& other) const;
};

// Generative description of the fluctuating baseline f(t).
struct BackgroundSpec {
  enum class Kind { constant, sinusoid, linear_cox, varying_cox, tabulated };
  Kind kind = Kind::constant;

  double level = 0.0;  // constant

  // sinusoid: A * sin(2*pi*(t/period - phase_rnd - phase_lag)); phase units
  // are periods and phase_rnd ~ Unif(0,1) fresh per trial when randomized.
  double amplitude = 0.0;
  double period = 1.0;
  double phase_lag = 0.0;
  bool randomize_phase = true;

  // linear Cox: Gaussian bumps of scale sigma_i at Poisson(rho) centers.
  double rho = 0.0;
  double sigma_i = 0.0;

  // varying Cox: per-center scale drawn Uniform(sigma_i_lo, sigma_i_hi).
  double sigma_i_lo = 0.0;
  double sigma_i_hi = 0.0;

  TabulatedFn table;  // tabulated

  static BackgroundSpec constant_level(double level);
  static BackgroundSpec sinusoid(double amplitude, double period,
                                 double phase_lag, bool randomize_phase = true);
  static BackgroundSpec linear_cox(double rho, double sigma_i);
  static BackgroundSpec varying_cox(double rho, double sigma_i_lo,
                                    double sigma_i_hi);
  static BackgroundSpec tabulated(TabulatedFn f);
  void validate() const;
};

// Draws one realization of the background on [0, horizon]. Streams are the
// caller's responsibility: passing identically derived streams to several
// processes realizes a shared background (identical Cox centers / phase).
TabulatedFn sample_background(const BackgroundSpec& spec, double horizon,
                              RngStream& rng);

// (1 / (T A^2)) * integral of f_i * f_j over [0, T], trapezoidal on the
// common grid. Mismatched grids are a domain error.
double normalized_dot(const TabulatedFn& f_i, const TabulatedFn& f_j,
                      double amplitude, double horizon);

// Parametric or spline impact function h_{source->target} with bounded
// causal support.
struct ImpactSpec {
  enum class Kind { square, spline };
  Kind kind = Kind::square;
  SquareWindow square;
  std::optional<BSplineBasis> basis;  // lag-domain basis for spline impacts
  std::vector<double> coeffs;

  static ImpactSpec square_impact(double width, double amplitude);
  static ImpactSpec spline_impact(BSplineBasis basis, std::vector<double> coeffs);

  double support() const;
  double eval(double lag) const;
  double positive_peak() const;  // sup of max(h, 0); used for thinning bounds
  void validate() const;
};

struct NetworkSpec {
  std::vector<std::string> process_ids;
  std::vector<double> baselines;             // alpha_j, events/sec
  std::vector<BackgroundSpec> backgrounds;   // one per process
  bool shared_background = true;
  std::map<std::pair<int, int>, ImpactSpec> impacts;  // (source, target)
  double horizon = 5.0;
  int trial_count = 200;
  std::uint64_t seed = 0;

  int process_index(const std::string& id) const;
  void add_impact(const std::string& source, const std::string& target,
                  ImpactSpec impact);
  const ImpactSpec* impact(const std::string& source,
                           const std::string& target) const;
  void validate() const;
};

struct SimulationOutput {
  TrialSet trials;
  // realized_backgrounds[process][trial]; filled when requested.
  std::vector<std::vector<TabulatedFn>> realized_backgrounds;
  std::uint64_t seed_used = 0;
};

// Joint forward generation of all processes by thinning with a
// piecewise-constant majorant refreshed after every accepted event and
// every 10 ms of proposal time. Deterministic given spec.seed.
SimulationOutput thinning_simulate(const NetworkSpec& spec,
                                   bool keep_backgrounds = false);

// Single-process thinning against a caller-supplied intensity. upper_bound_on
// must dominate the intensity on [a, b]; used by goodness-of-fit checks.
EventSequence thinning_simulate_custom(
    double horizon, const std::function<double(double)>& intensity,
    const std::function<double(double, double)>& upper_bound_on,
    RngStream& rng);

// Paper-parameterized scenario presets; names:
//   sinusoid, linear_cox_basic, full_connection, varying_sigma,
//   fast_changing, multivariate6
NetworkSpec scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();

// Sinusoid pair scenario with an explicit background phase lag (in periods).
NetworkSpec sinusoid_preset(double phase_lag);

}  // namespace hawkes
