#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {
constexpr double kMajorantRefresh = 0.010;  // seconds of proposal lookahead
constexpr double kCoxExtensionSigmas = 5.0;
}  // namespace

// ---------------------------------------------------------------------------
// TabulatedFn

TabulatedFn TabulatedFn::constant(double level, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("TabulatedFn: hi must exceed lo");
  TabulatedFn f;
  f.t0 = lo;
  f.dt = hi - lo;
  f.values = {level, level};
  return f;
}

TabulatedFn TabulatedFn::from_samples(double t0, double dt,
                                      std::vector<double> v) {
  if (!(dt > 0.0) || v.size() < 2)
    throw std::invalid_argument("TabulatedFn: need dt > 0 and >= 2 samples");
  TabulatedFn f;
  f.t0 = t0;
  f.dt = dt;
  f.values = std::move(v);
  return f;
}

double TabulatedFn::t_end() const {
  return t0 + dt * static_cast<double>(values.size() - 1);
}

double TabulatedFn::operator()(double t) const {
  if (values.empty()) return 0.0;
  const double x = (t - t0) / dt;
  if (x <= 0.0) return values.front();
  const auto last = static_cast<double>(values.size() - 1);
  if (x >= last) return values.back();
  const auto k = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(k);
  return values[k] * (1.0 - w) + values[k + 1] * w;
}

double TabulatedFn::max_on(double a, double b) const {
  if (values.empty()) return 0.0;
  const auto last = static_cast<long>(values.size()) - 1;
  auto i0 = static_cast<long>(std::floor((a - t0) / dt));
  auto i1 = static_cast<long>(std::ceil((b - t0) / dt));
  i0 = std::clamp<long>(i0, 0, last);
  i1 = std::clamp<long>(i1, 0, last);
  double m = values[static_cast<std::size_t>(i0)];
  for (long k = i0; k <= i1; ++k)
    m = std::max(m, values[static_cast<std::size_t>(k)]);
  return m;
}

double TabulatedFn::integral(double a, double b) const {
  if (b < a) throw std::invalid_argument("TabulatedFn::integral: b < a");
  if (values.empty() || a == b) return 0.0;
  // Clamped extension: constant value outside the tabulated span.
  double acc = 0.0;
  const double span_lo = t0;
  const double span_hi = t_end();
  if (a < span_lo) {
    acc += (std::min(b, span_lo) - a) * values.front();
    a = span_lo;
    if (a >= b) return acc;
  }
  if (b > span_hi) {
    acc += (b - std::max(a, span_hi)) * values.back();
    b = span_hi;
    if (a >= b) return acc;
  }
  const auto last = static_cast<long>(values.size()) - 1;
  auto seg = [&](long k, double x0, double x1) {
    // exact integral of the linear segment on [t0+k*dt, t0+(k+1)*dt]
    const double v0 = values[static_cast<std::size_t>(k)];
    const double v1 = values[static_cast<std::size_t>(k + 1)];
    const double u0 = (x0 - (t0 + static_cast<double>(k) * dt)) / dt;
    const double u1 = (x1 - (t0 + static_cast<double>(k) * dt)) / dt;
    const double f0 = v0 + (v1 - v0) * u0;
    const double f1 = v0 + (v1 - v0) * u1;
    return 0.5 * (f0 + f1) * (x1 - x0);
  };
  auto k0 = static_cast<long>(std::floor((a - t0) / dt));
  k0 = std::clamp<long>(k0, 0, last - 1);
  for (long k = k0; k < last; ++k) {
    const double seg_lo = t0 + static_cast<double>(k) * dt;
    const double seg_hi = seg_lo + dt;
    if (seg_lo >= b) break;
    const double x0 = std::max(a, seg_lo);
    const double x1 = std::min(b, seg_hi);
    if (x1 > x0) acc += seg(k, x0, x1);
  }
  return acc;
}

double TabulatedFn::mean_value() const {
  const double span = t_end() - t0;
  if (!(span > 0.0)) return values.empty() ? 0.0 : values.front();
  return integral(t0, t_end()) / span;
}

bool TabulatedFn::same_grid(const TabulatedFn& other) const {
  return t0 == other.t0 && dt == other.dt && values.size() == other.values.size();
}

// ---------------------------------------------------------------------------
// BackgroundSpec

BackgroundSpec BackgroundSpec::constant_level(double level) {
  BackgroundSpec s;
  s.kind = Kind::constant;
  s.level = level;
  return s;
}

BackgroundSpec BackgroundSpec::sinusoid(double amplitude, double period,
                                        double phase_lag, bool randomize_phase) {
  BackgroundSpec s;
  s.kind = Kind::sinusoid;
  s.amplitude = amplitude;
  s.period = period;
  s.phase_lag = phase_lag;
  s.randomize_phase = randomize_phase;
  return s;
}

BackgroundSpec BackgroundSpec::linear_cox(double rho, double sigma_i) {
  BackgroundSpec s;
  s.kind = Kind::linear_cox;
  s.rho = rho;
  s.sigma_i = sigma_i;
  return s;
}

BackgroundSpec BackgroundSpec::varying_cox(double rho, double sigma_i_lo,
                                           double sigma_i_hi) {
  BackgroundSpec s;
  s.kind = Kind::varying_cox;
  s.rho = rho;
  s.sigma_i_lo = sigma_i_lo;
  s.sigma_i_hi = sigma_i_hi;
  return s;
}

BackgroundSpec BackgroundSpec::tabulated(TabulatedFn f) {
  BackgroundSpec s;
  s.kind = Kind::tabulated;
  s.table = std::move(f);
  return s;
}

void BackgroundSpec::validate() const {
  switch (kind) {
    case Kind::constant:
      break;
    case Kind::sinusoid:
      if (!(period > 0.0))
        throw std::invalid_argument("BackgroundSpec: sinusoid period must be > 0");
      break;
    case Kind::linear_cox:
      if (!(rho >= 0.0) || !(sigma_i > 0.0))
        throw std::invalid_argument("BackgroundSpec: linear_cox needs rho >= 0, sigma_i > 0");
      break;
    case Kind::varying_cox:
      if (!(rho >= 0.0) || !(sigma_i_lo > 0.0) || !(sigma_i_hi >= sigma_i_lo))
        throw std::invalid_argument("BackgroundSpec: varying_cox needs 0 < lo <= hi");
      break;
    case Kind::tabulated:
      if (table.values.size() < 2)
        throw std::invalid_argument("BackgroundSpec: tabulated table too short");
      break;
  }
}

namespace {

TabulatedFn sample_cox_background(double rho, double sigma_lo, double sigma_hi,
                                  double horizon, RngStream& rng) {
  // Center process extends beyond [0, T] so f is stationary at the edges.
  const double ext = kCoxExtensionSigmas * sigma_hi;
  const double lo = -ext, hi = horizon + ext;
  std::vector<std::pair<double, double>> centers;  // (position, scale)
  if (rho > 0.0) {
    double t = lo;
    while (true) {
      t += rng.exponential(rho);
      if (t >= hi) break;
      const double s =
          sigma_lo == sigma_hi ? sigma_lo : rng.uniform(sigma_lo, sigma_hi);
      centers.emplace_back(t, s);
    }
  }
  const double dt = std::min(1e-3, sigma_lo / 5.0);
  const auto n = static_cast<std::size_t>(std::ceil(horizon / dt)) + 1;
  std::vector<double> v(n, 0.0);
  for (const auto& [c, s] : centers) {
    const double cut = kGaussianSupportSigmas * s;
    auto k0 = static_cast<long>(std::floor((c - cut) / dt));
    auto k1 = static_cast<long>(std::ceil((c + cut) / dt));
    k0 = std::clamp<long>(k0, 0, static_cast<long>(n) - 1);
    k1 = std::clamp<long>(k1, 0, static_cast<long>(n) - 1);
    for (long k = k0; k <= k1; ++k) {
      const double t = static_cast<double>(k) * dt;
      v[static_cast<std::size_t>(k)] += gaussian_eval(t - c, s);
    }
  }
  return TabulatedFn::from_samples(0.0, dt, std::move(v));
}

}  // namespace

TabulatedFn sample_background(const BackgroundSpec& spec, double horizon,
                              RngStream& rng) {
  spec.validate();
  if (!(horizon > 0.0))
    throw std::invalid_argument("sample_background: horizon must be > 0");
  switch (spec.kind) {
    case BackgroundSpec::Kind::constant:
      return TabulatedFn::constant(spec.level, 0.0, horizon);
    case BackgroundSpec::Kind::sinusoid: {
      const double phase = spec.randomize_phase ? rng.uniform() : 0.0;
      const double dt = std::min(spec.period / 1000.0, horizon / 100.0);
      const auto n = static_cast<std::size_t>(std::ceil(horizon / dt)) + 1;
      std::vector<double> v(n);
      constexpr double kTwoPi = 6.283185307179586;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        v[k] = spec.amplitude *
               std::sin(kTwoPi * (t / spec.period - phase - spec.phase_lag));
      }
      return TabulatedFn::from_samples(0.0, dt, std::move(v));
    }
    case BackgroundSpec::Kind::linear_cox:
      return sample_cox_background(spec.rho, spec.sigma_i, spec.sigma_i, horizon, rng);
    case BackgroundSpec::Kind::varying_cox:
      return sample_cox_background(spec.rho, spec.sigma_i_lo, spec.sigma_i_hi,
                                   horizon, rng);
    case BackgroundSpec::Kind::tabulated:
      if (spec.table.t0 > 0.0 || spec.table.t_end() < horizon)
        throw std::invalid_argument("sample_background: table does not cover [0, horizon]");
      return spec.table;
  }
  throw std::logic_error("sample_background: unreachable");
}

double normalized_dot(const TabulatedFn& f_i, const TabulatedFn& f_j,
                      double amplitude, double horizon) {
  if (!f_i.same_grid(f_j))
    throw std::domain_error("normalized_dot: mismatched grids");
  if (!(amplitude != 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("normalized_dot: need amplitude != 0, horizon > 0");
  // Trapezoid over grid nodes within [0, horizon].
  const std::size_t n = f_i.size();
  double acc = 0.0;
  double prev_t = f_i.t0;
  double prev_v = f_i.values[0] * f_j.values[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double t = f_i.t0 + static_cast<double>(k) * f_i.dt;
    const double v = f_i.values[k] * f_j.values[k];
    const double a = std::max(prev_t, 0.0);
    const double b = std::min(t, horizon);
    if (b > a) acc += 0.5 * (prev_v + v) * (b - a);
    prev_t = t;
    prev_v = v;
    if (t >= horizon) break;
  }
  return acc / (horizon * amplitude * amplitude);
}

// ---------------------------------------------------------------------------
// ImpactSpec

ImpactSpec ImpactSpec::square_impact(double width, double amplitude) {
  ImpactSpec s;
  s.kind = Kind::square;
  s.square = {width, amplitude};
  s.validate();
  return s;
}

ImpactSpec ImpactSpec::spline_impact(BSplineBasis basis,
                                     std::vector<double> coeffs) {
  ImpactSpec s;
  s.kind = Kind::spline;
  s.basis = std::move(basis);
  s.coeffs = std::move(coeffs);
  s.validate();
  return s;
}

void ImpactSpec::validate() const {
  if (kind == Kind::square) {
    if (!(square.width > 0.0))
      throw std::invalid_argument("ImpactSpec: square width must be > 0");
  } else {
    if (!basis.has_value() ||
        coeffs.size() != static_cast<std::size_t>(basis->num_bases()))
      throw std::invalid_argument("ImpactSpec: spline coeff/basis mismatch");
    if (basis->lo() != 0.0)
      throw std::invalid_argument("ImpactSpec: spline lag support must start at 0");
  }
}

double ImpactSpec::support() const {
  return kind == Kind::square ? square.width : basis->hi();
}

double ImpactSpec::eval(double lag) const {
  if (kind == Kind::square) return square(lag);
  if (lag < 0.0 || lag >= basis->hi()) return 0.0;
  double v = 0.0;
  for (int k = 0; k < basis->num_bases(); ++k)
    v += coeffs[static_cast<std::size_t>(k)] * basis->eval(k, lag);
  return v;
}

double ImpactSpec::positive_peak() const {
  if (kind == Kind::square) return std::max(square.amplitude, 0.0);
  // Spline values are convex combinations of coefficients on each span.
  double m = 0.0;
  for (double c : coeffs) m = std::max(m, c);
  return m;
}

// ---------------------------------------------------------------------------
// NetworkSpec

int NetworkSpec::process_index(const std::string& id) const {
  for (std::size_t i = 0; i < process_ids.size(); ++i)
    if (process_ids[i] == id) return static_cast<int>(i);
  throw std::invalid_argument("NetworkSpec: unknown process id '" + id + "'");
}

void NetworkSpec::add_impact(const std::string& source, const std::string& target,
                             ImpactSpec impact) {
  impacts[{process_index(source), process_index(target)}] = std::move(impact);
}

const ImpactSpec* NetworkSpec::impact(const std::string& source,
                                      const std::string& target) const {
  const auto it = impacts.find({process_index(source), process_index(target)});
  return it == impacts.end() ? nullptr : &it->second;
}

void NetworkSpec::validate() const {
  const auto d = process_ids.size();
  if (d == 0) throw std::invalid_argument("NetworkSpec: no processes");
  if (baselines.size() != d || backgrounds.size() != d)
    throw std::invalid_argument("NetworkSpec: baselines/backgrounds size mismatch");
  for (double a : baselines)
    if (!(a >= 0.0)) throw std::invalid_argument("NetworkSpec: negative baseline");
  for (const auto& b : backgrounds) b.validate();
  for (const auto& [key, imp] : impacts) {
    if (key.first < 0 || key.first >= static_cast<int>(d) || key.second < 0 ||
        key.second >= static_cast<int>(d))
      throw std::invalid_argument("NetworkSpec: impact endpoint out of range");
    imp.validate();
    if (!(imp.support() > 0.0) || !std::isfinite(imp.support()))
      throw std::invalid_argument("NetworkSpec: impact support must be bounded");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("NetworkSpec: horizon must be > 0");
  if (trial_count < 1) throw std::invalid_argument("NetworkSpec: trial_count < 1");
}

// ---------------------------------------------------------------------------
// Thinning

namespace {

struct ImpactEdge {
  int source = 0;
  const ImpactSpec* impact = nullptr;
};

// One trial of joint multivariate thinning. Background functions are the
// realized tabulated interpolants, so the majorant from node maxima is sound.
std::vector<std::vector<double>> simulate_trial(
    const NetworkSpec& spec, const std::vector<TabulatedFn>& f, RngStream& rng) {
  const auto d = spec.process_ids.size();
  std::vector<std::vector<double>> events(d);
  std::vector<std::vector<ImpactEdge>> into(d);  // impacts feeding each target
  for (const auto& [key, imp] : spec.impacts)
    into[static_cast<std::size_t>(key.second)].push_back({key.first, &imp});

  auto intensity = [&](std::size_t j, double t) {
    double lam = spec.baselines[j] + f[j](t);
    for (const auto& e : into[j]) {
      const auto& src = events[static_cast<std::size_t>(e.source)];
      const double sup = e.impact->support();
      for (auto it = src.rbegin(); it != src.rend(); ++it) {
        const double lag = t - *it;
        if (lag > sup) break;
        if (lag > 0.0) lam += e.impact->eval(lag);
      }
    }
    return std::max(lam, 0.0);
  };

  // Upper bound for sum_j lambda_j on (t, t + window]; inhibitory impacts are
  // ignored and each excitatory event contributes its positive peak.
  auto majorant = [&](double t, double window_end) {
    double m = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double mj = spec.baselines[j] + f[j].max_on(t, window_end);
      for (const auto& e : into[j]) {
        const double peak = e.impact->positive_peak();
        if (peak <= 0.0) continue;
        const auto& src = events[static_cast<std::size_t>(e.source)];
        const double sup = e.impact->support();
        long cnt = 0;
        for (auto it = src.rbegin(); it != src.rend(); ++it) {
          if (t - *it > sup) break;
          ++cnt;
        }
        mj += peak * static_cast<double>(cnt);
      }
      m += std::max(mj, 0.0);
    }
    return m;
  };

  const double horizon = spec.horizon;
  double t = 0.0;
  double window_end = std::min(t + kMajorantRefresh, horizon);
  double bound = majorant(t, window_end);
  std::vector<double> lambdas(d);
  while (t < horizon) {
    if (bound <= 0.0) {
      t = window_end;
      window_end = std::min(t + kMajorantRefresh, horizon);
      bound = majorant(t, window_end);
      continue;
    }
    const double t_prop = t + rng.exponential(bound);
    if (t_prop > window_end) {
      t = window_end;
      window_end = std::min(t + kMajorantRefresh, horizon);
      bound = majorant(t, window_end);
      continue;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      lambdas[j] = intensity(j, t_prop);
      total += lambdas[j];
    }
    if (total > bound * (1.0 + 1e-9))
      throw std::logic_error("thinning_simulate: majorant violated");
    const double u = rng.uniform() * bound;
    if (u < total) {
      double acc = 0.0;
      std::size_t pick = d - 1;
      for (std::size_t j = 0; j < d; ++j) {
        acc += lambdas[j];
        if (u < acc) {
          pick = j;
          break;
        }
      }
      events[pick].push_back(t_prop);
      t = t_prop;
      window_end = std::min(t + kMajorantRefresh, horizon);
      bound = majorant(t, window_end);
    } else {
      t = t_prop;  // bound still valid within the current window
    }
  }
  return events;
}

}  // namespace

SimulationOutput thinning_simulate(const NetworkSpec& spec, bool keep_backgrounds) {
  spec.validate();
  const auto d = spec.process_ids.size();
  SimulationOutput out;
  out.seed_used = spec.seed;
  out.trials.process_ids = spec.process_ids;
  out.trials.trial_count = spec.trial_count;
  out.trials.horizon = spec.horizon;
  out.trials.trials_by_process.assign(d, {});
  for (auto& v : out.trials.trials_by_process)
    v.reserve(static_cast<std::size_t>(spec.trial_count));
  if (keep_backgrounds) out.realized_backgrounds.assign(d, {});

  for (int trial = 0; trial < spec.trial_count; ++trial) {
    // Per-trial substreams: background role 1, event role 2. Shared
    // backgrounds give every process an identically derived stream, so
    // identical specs realize identical draws.
    std::vector<TabulatedFn> f;
    f.reserve(d);
    for (std::size_t p = 0; p < d; ++p) {
      RngStream bg = spec.shared_background
                         ? RngStream::substream(spec.seed, static_cast<std::uint64_t>(trial), 1, 0)
                         : RngStream::substream(spec.seed, static_cast<std::uint64_t>(trial), 1, p + 1);
      f.push_back(sample_background(spec.backgrounds[p], spec.horizon, bg));
    }
    RngStream ev = RngStream::substream(spec.seed, static_cast<std::uint64_t>(trial), 2, 0);
    auto events = simulate_trial(spec, f, ev);
    for (std::size_t p = 0; p < d; ++p) {
      out.trials.trials_by_process[p].emplace_back(std::move(events[p]), spec.horizon);
      if (keep_backgrounds) out.realized_backgrounds[p].push_back(f[p]);
    }
  }
  out.trials.validate();
  return out;
}

EventSequence thinning_simulate_custom(
    double horizon, const std::function<double(double)>& intensity,
    const std::function<double(double, double)>& upper_bound_on,
    RngStream& rng) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("thinning_simulate_custom: horizon must be > 0");
  std::vector<double> events;
  double t = 0.0;
  double window_end = std::min(t + kMajorantRefresh, horizon);
  double bound = upper_bound_on(t, window_end);
  while (t < horizon) {
    if (bound <= 0.0) {
      t = window_end;
      window_end = std::min(t + kMajorantRefresh, horizon);
      bound = upper_bound_on(t, window_end);
      continue;
    }
    const double t_prop = t + rng.exponential(bound);
    if (t_prop > window_end) {
      t = window_end;
      window_end = std::min(t + kMajorantRefresh, horizon);
      bound = upper_bound_on(t, window_end);
      continue;
    }
    const double lam = std::max(intensity(t_prop), 0.0);
    if (lam > bound * (1.0 + 1e-9))
      throw std::logic_error("thinning_simulate_custom: bound violated");
    if (rng.uniform() * bound < lam) {
      events.push_back(t_prop);
      window_end = std::min(t_prop + kMajorantRefresh, horizon);
      bound = upper_bound_on(t_prop, window_end);
    }
    t = t_prop;
  }
  return EventSequence(std::move(events), horizon);
}

// ---------------------------------------------------------------------------
// Presets (parameterizations from the simulation studies)

namespace {

NetworkSpec pair_cox_spec(double rho, double sigma_i, double baseline,
                          double sigma_h, double amplitude) {
  NetworkSpec s;
  s.process_ids = {"i", "j"};
  s.baselines = {baseline, baseline};
  s.backgrounds = {BackgroundSpec::linear_cox(rho, sigma_i),
                   BackgroundSpec::linear_cox(rho, sigma_i)};
  s.shared_background = true;
  s.horizon = 5.0;
  s.trial_count = 200;
  s.add_impact("i", "j", ImpactSpec::square_impact(sigma_h, amplitude));
  return s;
}

}  // namespace

NetworkSpec sinusoid_preset(double phase_lag) {
  NetworkSpec s;
  s.process_ids = {"i", "j"};
  s.baselines = {30.0, 30.0};
  s.backgrounds = {BackgroundSpec::sinusoid(5.0, 1.0, 0.0, true),
                   BackgroundSpec::sinusoid(5.0, 1.0, phase_lag, true)};
  s.shared_background = true;  // shared random phase, per-process lag
  s.horizon = 5.0;
  s.trial_count = 200;
  s.add_impact("i", "j", ImpactSpec::square_impact(0.030, 2.0));
  return s;
}

NetworkSpec scenario_preset(const std::string& name) {
  if (name == "sinusoid") return sinusoid_preset(0.25);
  if (name == "linear_cox_basic") return pair_cox_spec(30.0, 0.100, 10.0, 0.030, 2.0);
  if (name == "full_connection") {
    NetworkSpec s = pair_cox_spec(30.0, 0.100, 10.0, 0.030, -2.0);
    s.add_impact("j", "i", ImpactSpec::square_impact(0.030, -2.0));
    s.add_impact("i", "i", ImpactSpec::square_impact(0.030, 1.0));
    s.add_impact("j", "j", ImpactSpec::square_impact(0.030, 1.0));
    return s;
  }
  if (name == "varying_sigma") {
    NetworkSpec s = pair_cox_spec(30.0, 0.100, 10.0, 0.030, 2.0);
    s.backgrounds = {BackgroundSpec::varying_cox(30.0, 0.080, 0.140),
                     BackgroundSpec::varying_cox(30.0, 0.080, 0.140)};
    return s;
  }
  if (name == "fast_changing") return pair_cox_spec(30.0, 0.020, 10.0, 0.030, 2.0);
  if (name == "multivariate6") {
    NetworkSpec s;
    const int d = 6;
    for (int p = 0; p < d; ++p) s.process_ids.push_back("p" + std::to_string(p));
    s.baselines.assign(d, 10.0);
    s.backgrounds.assign(d, BackgroundSpec::linear_cox(20.0, 0.100));
    s.shared_background = true;
    s.horizon = 5.0;
    s.trial_count = 200;
    // Directed ring with alternating excitation/inhibition; the remaining
    // ordered pairs have zero coupling.
    const double amps[d] = {2.0, -2.0, 2.0, -2.0, 2.0, -2.0};
    for (int p = 0; p < d; ++p) {
      s.add_impact("p" + std::to_string(p), "p" + std::to_string((p + 1) % d),
                   ImpactSpec::square_impact(0.030, amps[p]));
    }
    return s;
  }
  throw std::invalid_argument("scenario_preset: unknown preset '" + name + "'");
}

std::vector<std::string> scenario_preset_names() {
  return {"sinusoid",      "linear_cox_basic", "full_connection",
          "varying_sigma", "fast_changing",    "multivariate6"};
}

}  // namespace hawkes
