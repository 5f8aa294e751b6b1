#include "hawkes/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hawkes/parallel.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2Pi = 0.3989422804014327;

// e^{-x} below double round-off past this point.
double exp_cut(double gamma) { return 37.0 / gamma; }

double phi_cdf(double x) { return stats::normal_cdf(x); }

// Integral over [a, b] of the smoothed train of a raw event vector.
double smooth_integral(const std::vector<double>& ts, double sigma, double a,
                       double b) {
  const double cut = kGaussianSupportSigmas * sigma;
  auto lo = std::lower_bound(ts.begin(), ts.end(), a - cut);
  auto hi = std::upper_bound(ts.begin(), ts.end(), b + cut);
  double s = 0.0;
  for (auto it = lo; it != hi; ++it)
    s += phi_cdf((b - *it) / sigma) - phi_cdf((a - *it) / sigma);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spec types

ImpactBasisSpec ImpactBasisSpec::square(double width) {
  ImpactBasisSpec s;
  s.family = Family::square;
  s.sigma_h = width;
  s.validate();
  return s;
}

ImpactBasisSpec ImpactBasisSpec::bspline(double lag_window, int knots, int degree) {
  ImpactBasisSpec s;
  s.family = Family::bspline;
  s.lag_window = lag_window;
  s.spline_knots = knots;
  s.spline_degree = degree;
  s.validate();
  return s;
}

ImpactBasisSpec ImpactBasisSpec::exponential(double gamma) {
  ImpactBasisSpec s;
  s.family = Family::exponential;
  s.gamma = gamma;
  s.validate();
  return s;
}

void ImpactBasisSpec::validate() const {
  switch (family) {
    case Family::square:
      if (!(sigma_h > 0.0))
        throw std::invalid_argument("ImpactBasisSpec: sigma_h must be > 0");
      break;
    case Family::bspline:
      if (!(lag_window > 0.0) || spline_knots < 2 || spline_degree < 0)
        throw std::invalid_argument("ImpactBasisSpec: bad spline settings");
      break;
    case Family::exponential:
      if (!(gamma > 0.0))
        throw std::invalid_argument("ImpactBasisSpec: gamma must be > 0");
      break;
  }
}

int ImpactBasisSpec::num_coeffs() const {
  if (family == Family::bspline) return spline_knots + spline_degree - 1;
  return 1;
}

double ImpactBasisSpec::support() const {
  switch (family) {
    case Family::square:
      return sigma_h;
    case Family::bspline:
      return lag_window;
    case Family::exponential:
      return exp_cut(gamma);
  }
  return 0.0;
}

SigmaWSearch SigmaWSearch::fixed(double value) {
  SigmaWSearch s;
  s.grid_search = false;
  s.fixed_value = value;
  return s;
}

SigmaWSearch SigmaWSearch::over_grid(std::vector<double> grid) {
  SigmaWSearch s;
  s.grid_search = true;
  s.grid = std::move(grid);
  return s;
}

std::vector<double> default_sigma_w_grid() {
  std::vector<double> g;
  const int n = 25;
  const double lo = 0.005, hi = 0.500;
  for (int k = 0; k < n; ++k)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
  return g;
}

std::string impact_coeff_name(const std::string& source_id,
                              const std::string& target_id, int k) {
  std::string name = "h:" + source_id + "->" + target_id;
  if (k >= 0) name += "[" + std::to_string(k) + "]";
  return name;
}

int FitResult::index_of(const std::string& coeff_name) const {
  for (std::size_t i = 0; i < coeff_names.size(); ++i)
    if (coeff_names[i] == coeff_name) return static_cast<int>(i);
  throw std::invalid_argument("FitResult: no coefficient named '" + coeff_name + "'");
}

double FitResult::coeff(const std::string& coeff_name) const {
  return coeffs[index_of(coeff_name)];
}

double FitResult::se(const std::string& coeff_name) const {
  return std_errors[index_of(coeff_name)];
}

// ---------------------------------------------------------------------------
// DesignWorkspace

struct TermSpec {
  enum class Kind { baseline, smooth, extra, impact };
  Kind kind = Kind::baseline;
  ImpactBasisSpec::Family family = ImpactBasisSpec::Family::square;
  int source_slot = -1;
  int first_col = 0;
  int n_cols = 1;
  double sigma_h = 0.0;
  double gamma = 0.0;
  double lag_window = 0.0;
  int basis_index = -1;
};

struct TrialFeatures {
  Eigen::MatrixXd X;
  Eigen::VectorXd integrals;
};

struct DesignWorkspace::Impl {
  DesignSpec spec;
  double horizon = 0.0;
  int n_trials = 0;
  long total_events = 0;
  std::vector<std::vector<double>> target;             // [trial]
  std::vector<std::vector<std::vector<double>>> srcs;  // [slot][trial]
  std::vector<std::string> slot_ids;
  std::vector<TermSpec> terms;
  std::vector<BSplineBasis> bases;
  std::vector<std::string> names;
  int n_cols = 0;
  double sigma_w = 0.0;
  std::vector<TrialFeatures> feats;

  int slot_for(const std::string& id, const TrialSet& data) {
    for (std::size_t s = 0; s < slot_ids.size(); ++s)
      if (slot_ids[s] == id) return static_cast<int>(s);
    slot_ids.push_back(id);
    const auto& seqs = data.trials(id);
    std::vector<std::vector<double>> per_trial;
    per_trial.reserve(seqs.size());
    for (const auto& seq : seqs) per_trial.push_back(seq.timestamps);
    srcs.push_back(std::move(per_trial));
    return static_cast<int>(slot_ids.size()) - 1;
  }

  double src_rate(int slot, int trial) const {
    return static_cast<double>(srcs[slot][trial].size()) / horizon;
  }

  void build_static_columns();
  void build_smooth_columns(double sw);
  void fill_impact(const TermSpec& term, int trial);
  double column_value(const TermSpec& term, int col_in_term, int trial,
                      double t) const;
  double column_integral_between(const TermSpec& term, int col_in_term,
                                 int trial, double a, double b) const;
};

DesignWorkspace::DesignWorkspace(const DesignSpec& spec, const TrialSet& data)
    : impl_(std::make_unique<Impl>()) {
  data.validate();
  auto& im = *impl_;
  im.spec = spec;
  im.horizon = data.horizon;
  im.n_trials = data.trial_count;

  const auto& tgt_seqs = data.trials(spec.target_id);
  im.target.reserve(tgt_seqs.size());
  for (const auto& seq : tgt_seqs) {
    im.total_events += static_cast<long>(seq.size());
    im.target.push_back(seq.timestamps);
  }

  if (!spec.extra_bases.empty() &&
      spec.extra_bases.size() != static_cast<std::size_t>(im.n_trials))
    throw std::invalid_argument("DesignSpec: extra_bases must have one entry per trial");

  // Column layout: baseline, smoothed nuisances, extra regressor, impacts.
  TermSpec base;
  base.kind = TermSpec::Kind::baseline;
  base.first_col = 0;
  im.terms.push_back(base);
  im.names.emplace_back("beta0");
  int col = 1;
  for (const auto& src : spec.nuisance_sources) {
    TermSpec t;
    t.kind = TermSpec::Kind::smooth;
    t.source_slot = im.slot_for(src, data);
    t.first_col = col++;
    im.terms.push_back(t);
    im.names.push_back("w:" + src);
  }
  if (!spec.extra_bases.empty()) {
    TermSpec t;
    t.kind = TermSpec::Kind::extra;
    t.first_col = col++;
    im.terms.push_back(t);
    im.names.emplace_back("extra");
  }
  for (const auto& term : spec.impacts) {
    term.basis.validate();
    TermSpec t;
    t.kind = TermSpec::Kind::impact;
    t.family = term.basis.family;
    t.source_slot = im.slot_for(term.source_id, data);
    t.first_col = col;
    t.n_cols = term.basis.num_coeffs();
    t.sigma_h = term.basis.sigma_h;
    t.gamma = term.basis.gamma;
    t.lag_window = term.basis.lag_window;
    if (term.basis.family == ImpactBasisSpec::Family::bspline) {
      std::vector<double> knots;
      for (int k = 0; k < term.basis.spline_knots; ++k)
        knots.push_back(term.basis.lag_window * static_cast<double>(k) /
                        (term.basis.spline_knots - 1));
      im.bases.emplace_back(term.basis.spline_degree, std::move(knots));
      t.basis_index = static_cast<int>(im.bases.size()) - 1;
    }
    col += t.n_cols;
    im.terms.push_back(t);
    for (int k = 0; k < t.n_cols; ++k)
      im.names.push_back(impact_coeff_name(term.source_id, spec.target_id,
                                           t.n_cols > 1 ? k : -1));
  }
  im.n_cols = col;

  im.feats.resize(static_cast<std::size_t>(im.n_trials));
  for (int tr = 0; tr < im.n_trials; ++tr) {
    auto& f = im.feats[static_cast<std::size_t>(tr)];
    f.X = Eigen::MatrixXd::Zero(static_cast<long>(im.target[tr].size()), im.n_cols);
    f.integrals = Eigen::VectorXd::Zero(im.n_cols);
  }
  im.build_static_columns();
  im.build_smooth_columns(spec.sigma_w.grid_search && !spec.sigma_w.grid.empty()
                              ? spec.sigma_w.grid.front()
                              : spec.sigma_w.fixed_value);
}

DesignWorkspace::~DesignWorkspace() = default;
DesignWorkspace::DesignWorkspace(DesignWorkspace&&) noexcept = default;
DesignWorkspace& DesignWorkspace::operator=(DesignWorkspace&&) noexcept = default;

void DesignWorkspace::Impl::fill_impact(const TermSpec& term, int trial) {
  auto& f = feats[static_cast<std::size_t>(trial)];
  const auto& tt = target[static_cast<std::size_t>(trial)];
  const auto& ss = srcs[term.source_slot][static_cast<std::size_t>(trial)];
  const double T = horizon;
  const double rate = src_rate(term.source_slot, trial);
  const bool center = spec.mean_center_bases;

  if (term.family == ImpactBasisSpec::Family::square) {
    const double w = term.sigma_h;
    std::size_t lo = 0, hi = 0;
    for (std::size_t r = 0; r < tt.size(); ++r) {
      const double t = tt[r];
      while (lo < ss.size() && ss[lo] < t - w) ++lo;
      if (hi < lo) hi = lo;
      while (hi < ss.size() && ss[hi] < t) ++hi;
      double v = static_cast<double>(hi - lo);
      if (center) v -= rate * std::min(t, w);
      f.X(static_cast<long>(r), term.first_col) = v;
    }
    double integ = 0.0;
    for (double tm : ss) integ += std::min(w, T - tm);
    if (center) integ -= rate * (w <= T ? w * T - 0.5 * w * w : 0.5 * T * T);
    f.integrals(term.first_col) = integ;
    return;
  }

  if (term.family == ImpactBasisSpec::Family::exponential) {
    const double g = term.gamma;
    const double cut = exp_cut(g);
    std::size_t hi = 0;
    for (std::size_t r = 0; r < tt.size(); ++r) {
      const double t = tt[r];
      while (hi < ss.size() && ss[hi] < t) ++hi;
      double v = 0.0;
      for (std::size_t k = hi; k-- > 0;) {
        const double lag = t - ss[k];
        if (lag > cut) break;
        v += std::exp(-g * lag);
      }
      if (center) v -= rate * (1.0 - std::exp(-g * std::min(t, cut))) / g;
      f.X(static_cast<long>(r), term.first_col) = v;
    }
    double integ = 0.0;
    for (double tm : ss) integ += (1.0 - std::exp(-g * std::min(T - tm, cut))) / g;
    if (center) integ -= rate * (T / g - (1.0 - std::exp(-g * std::min(T, cut))) / (g * g));
    f.integrals(term.first_col) = integ;
    return;
  }

  // B-spline impact: one column per basis function.
  const BSplineBasis& basis = bases[static_cast<std::size_t>(term.basis_index)];
  const double L = term.lag_window;
  std::vector<double> vals;
  std::size_t lo = 0, hi = 0;
  for (std::size_t r = 0; r < tt.size(); ++r) {
    const double t = tt[r];
    while (lo < ss.size() && ss[lo] <= t - L) ++lo;
    if (hi < lo) hi = lo;
    while (hi < ss.size() && ss[hi] < t) ++hi;
    for (std::size_t k = lo; k < hi; ++k) {
      basis.eval_all(t - ss[k], vals);
      for (int c = 0; c < term.n_cols; ++c)
        f.X(static_cast<long>(r), term.first_col + c) += vals[static_cast<std::size_t>(c)];
    }
    if (center) {
      const double x = std::min(t, L);
      for (int c = 0; c < term.n_cols; ++c)
        f.X(static_cast<long>(r), term.first_col + c) -= rate * basis.partial_integral(c, x);
    }
  }
  for (int c = 0; c < term.n_cols; ++c) {
    double integ = 0.0;
    const double mass = basis.integral(c);
    for (double tm : ss) {
      const double rem = T - tm;
      integ += rem >= L ? mass : basis.partial_integral(c, rem);
    }
    if (center) {
      // int_0^T P_c(min(s, L)) ds = (T - L) * mass + int_0^L B_c(u) (L - u) du
      double tail = 0.0;
      const auto& kn = basis.padded_knots();
      for (int span = c; span <= c + basis.degree(); ++span) {
        const double a = kn[static_cast<std::size_t>(span)];
        const double b = kn[static_cast<std::size_t>(span) + 1];
        if (!(b > a)) continue;
        // 3-point Gauss-Legendre, exact for degree + 1 <= 5
        static constexpr double n3[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
        static constexpr double w3[3] = {0.5555555555555556, 0.8888888888888888,
                                         0.5555555555555556};
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (int q = 0; q < 3; ++q) {
          const double u = mid + half * n3[q];
          tail += half * w3[q] * basis.eval(c, u) * (L - u);
        }
      }
      integ -= rate * ((T - L) * mass + tail);
    }
    f.integrals(term.first_col + c) = integ;
  }
}

void DesignWorkspace::Impl::build_static_columns() {
  for (int tr = 0; tr < n_trials; ++tr) {
    auto& f = feats[static_cast<std::size_t>(tr)];
    const auto& tt = target[static_cast<std::size_t>(tr)];
    for (const auto& term : terms) {
      switch (term.kind) {
        case TermSpec::Kind::baseline:
          f.X.col(0).setOnes();
          f.integrals(0) = horizon;
          break;
        case TermSpec::Kind::extra: {
          const auto& table = spec.extra_bases[static_cast<std::size_t>(tr)];
          for (std::size_t r = 0; r < tt.size(); ++r)
            f.X(static_cast<long>(r), term.first_col) = table(tt[r]);
          f.integrals(term.first_col) = table.integral(0.0, horizon);
          break;
        }
        case TermSpec::Kind::impact:
          fill_impact(term, tr);
          break;
        case TermSpec::Kind::smooth:
          break;  // rebuilt per sigma_w
      }
    }
  }
}

void DesignWorkspace::Impl::build_smooth_columns(double sw) {
  if (!(sw > 0.0))
    throw std::domain_error("DesignWorkspace: sigma_w must be positive");
  sigma_w = sw;
  const double cut = kGaussianSupportSigmas * sw;
  const double inv_s = 1.0 / sw;
  const double coef = kInvSqrt2Pi * inv_s;
  const double T = horizon;
  for (const auto& term : terms) {
    if (term.kind != TermSpec::Kind::smooth) continue;
    for (int tr = 0; tr < n_trials; ++tr) {
      auto& f = feats[static_cast<std::size_t>(tr)];
      const auto& tt = target[static_cast<std::size_t>(tr)];
      const auto& ss = srcs[term.source_slot][static_cast<std::size_t>(tr)];
      const double rate = src_rate(term.source_slot, tr);
      const bool center = spec.mean_center_bases;
      std::size_t lo = 0, hi = 0;
      for (std::size_t r = 0; r < tt.size(); ++r) {
        const double t = tt[r];
        while (lo < ss.size() && ss[lo] < t - cut) ++lo;
        if (hi < lo) hi = lo;
        while (hi < ss.size() && ss[hi] <= t + cut) ++hi;
        double v = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
          const double z = (t - ss[k]) * inv_s;
          v += coef * std::exp(-0.5 * z * z);
        }
        if (center)
          v -= rate * (phi_cdf(t * inv_s) + phi_cdf((T - t) * inv_s) - 1.0);
        f.X(static_cast<long>(r), term.first_col) = v;
      }
      double integ = 0.0;
      for (double tm : ss)
        integ += phi_cdf((T - tm) * inv_s) - phi_cdf(-tm * inv_s);
      if (center) {
        const double a = T * phi_cdf(T * inv_s) + sw * stats::normal_pdf(T * inv_s) -
                         sw * stats::normal_pdf(0.0);
        integ -= rate * (2.0 * a - T);
      }
      f.integrals(term.first_col) = integ;
    }
  }
}

int DesignWorkspace::n_coeffs() const { return impl_->n_cols; }
const std::vector<std::string>& DesignWorkspace::coeff_names() const {
  return impl_->names;
}
const DesignSpec& DesignWorkspace::spec() const { return impl_->spec; }
void DesignWorkspace::set_sigma_w(double sigma_w) {
  if (sigma_w == impl_->sigma_w) return;
  impl_->build_smooth_columns(sigma_w);
}
double DesignWorkspace::sigma_w() const { return impl_->sigma_w; }
int DesignWorkspace::n_trials() const { return impl_->n_trials; }
double DesignWorkspace::horizon() const { return impl_->horizon; }
double DesignWorkspace::total_observation_time() const {
  return impl_->horizon * impl_->n_trials;
}
long DesignWorkspace::total_target_events() const { return impl_->total_events; }
const std::vector<double>& DesignWorkspace::target_events(int trial) const {
  return impl_->target[static_cast<std::size_t>(trial)];
}

double DesignWorkspace::neg_loglik(const Eigen::VectorXd& beta) const {
  const auto& im = *impl_;
  if (beta.size() != im.n_cols)
    throw std::invalid_argument("neg_loglik: coefficient size mismatch");
  double acc = 0.0;
  for (const auto& f : im.feats) {
    acc += f.integrals.dot(beta);
    if (f.X.rows() == 0) continue;
    const Eigen::VectorXd v = f.X * beta;
    for (long r = 0; r < v.size(); ++r) {
      if (!(v(r) > 0.0)) return kInf;  // barrier: event intensity must be > 0
      acc -= std::log(v(r));
    }
  }
  return acc;
}

bool DesignWorkspace::gradient_hessian(const Eigen::VectorXd& beta,
                                       Eigen::VectorXd* grad,
                                       Eigen::MatrixXd* hess) const {
  const auto& im = *impl_;
  if (beta.size() != im.n_cols)
    throw std::invalid_argument("gradient_hessian: coefficient size mismatch");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(im.n_cols);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(im.n_cols, im.n_cols);
  for (const auto& f : im.feats) {
    g += f.integrals;
    if (f.X.rows() == 0) continue;
    const Eigen::VectorXd v = f.X * beta;
    for (long r = 0; r < v.size(); ++r)
      if (!(v(r) > 0.0)) return false;
    const Eigen::ArrayXd inv = v.array().inverse();
    g.noalias() -= f.X.transpose() * inv.matrix();
    h.noalias() += f.X.transpose() *
                   (f.X.array().colwise() * (inv * inv)).matrix();
  }
  if (grad) *grad = std::move(g);
  if (hess) *hess = std::move(h);
  return true;
}

FitResult DesignWorkspace::fit(const Eigen::VectorXd* init) const {
  const auto& im = *impl_;
  const int K = im.n_cols;
  FitResult result;
  result.coeff_names = im.names;
  result.sigma_w_selected = im.sigma_w;
  result.coeffs = Eigen::VectorXd::Zero(K);
  result.hessian = Eigen::MatrixXd::Zero(K, K);
  result.std_errors = Eigen::VectorXd::Constant(K, std::numeric_limits<double>::quiet_NaN());

  if (im.total_events == 0) {
    // Degenerate data: the objective is linear and has no interior optimum.
    result.neg_loglik = 0.0;
    return result;
  }

  Eigen::VectorXd beta;
  if (init && init->size() == K && std::isfinite(neg_loglik(*init))) {
    beta = *init;
  } else {
    // Feasible by construction: positive constant intensity.
    beta = Eigen::VectorXd::Zero(K);
    beta(0) = static_cast<double>(im.total_events) / total_observation_time();
  }
  double f = neg_loglik(beta);

  Eigen::VectorXd g(K);
  Eigen::MatrixXd h(K, K);
  const int max_iter = 100;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (!gradient_hessian(beta, &g, &h))
      throw std::logic_error("fit: infeasible iterate");
    if (g.lpNorm<Eigen::Infinity>() < 1e-8 * (1.0 + std::abs(f))) break;
    Eigen::VectorXd dir;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() == Eigen::Success) dir = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !dir.allFinite() || dir.dot(g) >= 0.0) {
      // Singular or indefinite curvature: fall back to steepest descent
      // scaled to a conservative step.
      dir = -g / std::max(1.0, g.norm());
    }
    double step = 1.0;
    bool accepted = false;
    while (step >= 1e-14) {
      const Eigen::VectorXd cand = beta + step * dir;
      const double fc = neg_loglik(cand);
      if (fc < f) {  // any strict decrease; the objective is convex
        beta = cand;
        f = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // descent exhausted at this floating-point scale
  }

  gradient_hessian(beta, &g, &h);
  result.grad_sup_norm = g.lpNorm<Eigen::Infinity>();
  result.converged = result.grad_sup_norm < 1e-8 * (1.0 + std::abs(f));
  result.coeffs = beta;
  result.hessian = h;
  result.neg_loglik = f;
  result.iterations = iter;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() == Eigen::Success) {
    const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(K, K));
    for (int k = 0; k < K; ++k)
      result.std_errors(k) = cov(k, k) > 0.0 ? std::sqrt(cov(k, k))
                                             : std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

double DesignWorkspace::Impl::column_value(const TermSpec& term, int c,
                                           int trial, double t) const {
  const double T = horizon;
  switch (term.kind) {
    case TermSpec::Kind::baseline:
      return 1.0;
    case TermSpec::Kind::extra:
      return spec.extra_bases[static_cast<std::size_t>(trial)](t);
    case TermSpec::Kind::smooth: {
      const auto& ss = srcs[term.source_slot][static_cast<std::size_t>(trial)];
      const double cut = kGaussianSupportSigmas * sigma_w;
      auto lo = std::lower_bound(ss.begin(), ss.end(), t - cut);
      auto hi = std::upper_bound(ss.begin(), ss.end(), t + cut);
      double v = 0.0;
      for (auto it = lo; it != hi; ++it) v += gaussian_eval(t - *it, sigma_w);
      if (spec.mean_center_bases)
        v -= src_rate(term.source_slot, trial) *
             (phi_cdf(t / sigma_w) + phi_cdf((T - t) / sigma_w) - 1.0);
      return v;
    }
    case TermSpec::Kind::impact: {
      const auto& ss = srcs[term.source_slot][static_cast<std::size_t>(trial)];
      const double rate = src_rate(term.source_slot, trial);
      double v = 0.0;
      if (term.family == ImpactBasisSpec::Family::square) {
        const double w = term.sigma_h;
        auto lo = std::lower_bound(ss.begin(), ss.end(), t - w);
        auto hi = std::lower_bound(ss.begin(), ss.end(), t);
        v = static_cast<double>(hi - lo);
        if (spec.mean_center_bases) v -= rate * std::min(t, w);
      } else if (term.family == ImpactBasisSpec::Family::exponential) {
        const double g = term.gamma;
        const double cut = exp_cut(g);
        auto hi = std::lower_bound(ss.begin(), ss.end(), t);
        for (auto it = std::make_reverse_iterator(hi); it != ss.rend(); ++it) {
          const double lag = t - *it;
          if (lag > cut) break;
          v += std::exp(-g * lag);
        }
        if (spec.mean_center_bases)
          v -= rate * (1.0 - std::exp(-g * std::min(t, cut))) / g;
      } else {
        const BSplineBasis& basis = bases[static_cast<std::size_t>(term.basis_index)];
        const double L = term.lag_window;
        auto lo = std::upper_bound(ss.begin(), ss.end(), t - L);
        auto hi = std::lower_bound(ss.begin(), ss.end(), t);
        for (auto it = lo; it != hi; ++it) v += basis.eval(c, t - *it);
        if (spec.mean_center_bases)
          v -= rate * basis.partial_integral(c, std::min(t, L));
      }
      return v;
    }
  }
  return 0.0;
}

double DesignWorkspace::Impl::column_integral_between(const TermSpec& term,
                                                      int c, int trial,
                                                      double a, double b) const {
  if (spec.mean_center_bases)
    throw std::logic_error("interval integrals unsupported with mean-centered bases");
  switch (term.kind) {
    case TermSpec::Kind::baseline:
      return b - a;
    case TermSpec::Kind::extra:
      return spec.extra_bases[static_cast<std::size_t>(trial)].integral(a, b);
    case TermSpec::Kind::smooth:
      return smooth_integral(srcs[term.source_slot][static_cast<std::size_t>(trial)],
                             sigma_w, a, b);
    case TermSpec::Kind::impact: {
      const auto& ss = srcs[term.source_slot][static_cast<std::size_t>(trial)];
      double acc = 0.0;
      if (term.family == ImpactBasisSpec::Family::square) {
        const double w = term.sigma_h;
        auto lo = std::lower_bound(ss.begin(), ss.end(), a - w);
        auto hi = std::lower_bound(ss.begin(), ss.end(), b);
        for (auto it = lo; it != hi; ++it) {
          const double x0 = std::max(a, *it);
          const double x1 = std::min(b, *it + w);
          if (x1 > x0) acc += x1 - x0;
        }
      } else if (term.family == ImpactBasisSpec::Family::exponential) {
        const double g = term.gamma;
        const double cut = exp_cut(g);
        auto lo = std::lower_bound(ss.begin(), ss.end(), a - cut);
        auto hi = std::lower_bound(ss.begin(), ss.end(), b);
        for (auto it = lo; it != hi; ++it) {
          const double la = std::max(a - *it, 0.0);
          const double lb = b - *it;
          acc += (std::exp(-g * la) - std::exp(-g * lb)) / g;
        }
      } else {
        const BSplineBasis& basis = bases[static_cast<std::size_t>(term.basis_index)];
        const double L = term.lag_window;
        auto lo = std::upper_bound(ss.begin(), ss.end(), a - L);
        auto hi = std::lower_bound(ss.begin(), ss.end(), b);
        for (auto it = lo; it != hi; ++it) {
          const double la = std::clamp(a - *it, 0.0, L);
          const double lb = std::clamp(b - *it, 0.0, L);
          if (lb > la)
            acc += basis.partial_integral(c, lb) - basis.partial_integral(c, la);
        }
      }
      return acc;
    }
  }
  return 0.0;
}

double DesignWorkspace::intensity_at(int trial, double t,
                                     const Eigen::VectorXd& beta) const {
  const auto& im = *impl_;
  double v = 0.0;
  for (const auto& term : im.terms)
    for (int c = 0; c < term.n_cols; ++c)
      v += beta(term.first_col + c) * im.column_value(term, c, trial, t);
  return v;
}

double DesignWorkspace::intensity_integral(int trial, double a, double b,
                                           const Eigen::VectorXd& beta) const {
  const auto& im = *impl_;
  if (b < a) throw std::invalid_argument("intensity_integral: b < a");
  double v = 0.0;
  for (const auto& term : im.terms)
    for (int c = 0; c < term.n_cols; ++c)
      v += beta(term.first_col + c) *
           im.column_integral_between(term, c, trial, a, b);
  return v;
}

// ---------------------------------------------------------------------------
// Free-function fits

double neg_loglik(const DesignSpec& design, const TrialSet& data,
                  double sigma_w, const Eigen::VectorXd& params) {
  DesignWorkspace ws(design, data);
  ws.set_sigma_w(sigma_w);
  return ws.neg_loglik(params);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> loglik_grad_hessian(
    const DesignSpec& design, const TrialSet& data, double sigma_w,
    const Eigen::VectorXd& params) {
  DesignWorkspace ws(design, data);
  ws.set_sigma_w(sigma_w);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  if (!ws.gradient_hessian(params, &g, &h))
    throw std::domain_error("loglik_grad_hessian: non-positive event intensity");
  return {std::move(g), std::move(h)};
}

FitResult fit_fixed_sigma(const DesignSpec& design, const TrialSet& data,
                          double sigma_w) {
  DesignWorkspace ws(design, data);
  ws.set_sigma_w(sigma_w);
  return ws.fit();
}

FitResult fit_modified_mle(const DesignSpec& design, const TrialSet& data) {
  DesignWorkspace ws(design, data);
  const bool has_smooth = !design.nuisance_sources.empty();
  if (!design.sigma_w.grid_search || !has_smooth) {
    ws.set_sigma_w(design.sigma_w.grid_search && !design.sigma_w.grid.empty()
                       ? design.sigma_w.grid.front()
                       : design.sigma_w.fixed_value);
    return ws.fit();
  }
  std::vector<double> grid = design.sigma_w.grid;
  if (grid.empty()) throw std::invalid_argument("fit_modified_mle: empty grid");
  std::sort(grid.begin(), grid.end());

  FitResult best;
  bool have_best = false;
  Eigen::VectorXd warm;
  std::vector<std::pair<double, double>> profile;
  for (double sw : grid) {
    ws.set_sigma_w(sw);
    FitResult r = ws.fit(warm.size() ? &warm : nullptr);
    profile.emplace_back(sw, r.neg_loglik);
    if (!r.converged) continue;
    warm = r.coeffs;
    // Maximize the likelihood; ties break toward the larger width, which is
    // the flatter basin of the risk curve.
    const double tol = 1e-9 * (1.0 + std::abs(r.neg_loglik));
    if (!have_best || r.neg_loglik < best.neg_loglik + tol) {
      best = std::move(r);
      have_best = true;
    }
  }
  if (!have_best)
    throw std::runtime_error("fit_modified_mle: no grid point converged");
  best.grid_profile = std::move(profile);
  return best;
}

FitResult fit_standard_mhp(DesignSpec design, const TrialSet& data) {
  design.nuisance_sources.clear();
  design.extra_bases.clear();
  design.sigma_w = SigmaWSearch::fixed(0.125);  // irrelevant without nuisance
  DesignWorkspace ws(design, data);
  return ws.fit();
}

FitResult fit_nonparametric(const DesignSpec& design, const TrialSet& data) {
  bool has_spline = false;
  for (const auto& t : design.impacts)
    has_spline |= t.basis.family == ImpactBasisSpec::Family::bspline;
  if (!has_spline)
    throw std::invalid_argument("fit_nonparametric: design has no spline impact");
  return fit_modified_mle(design, data);
}

std::vector<ImpactCurvePoint> impact_curve(const FitResult& fit,
                                           const DesignSpec& design,
                                           const std::string& source_id,
                                           int n_points, double z) {
  const ImpactTerm* term = nullptr;
  for (const auto& t : design.impacts)
    if (t.source_id == source_id) term = &t;
  if (!term) throw std::invalid_argument("impact_curve: no impact for source");
  const int nc = term->basis.num_coeffs();
  const int first =
      fit.index_of(impact_coeff_name(source_id, design.target_id, nc > 1 ? 0 : -1));

  Eigen::MatrixXd cov;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(fit.hessian);
  if (ldlt.info() == Eigen::Success)
    cov = ldlt.solve(Eigen::MatrixXd::Identity(fit.hessian.rows(), fit.hessian.cols()));
  else
    cov = Eigen::MatrixXd::Constant(fit.hessian.rows(), fit.hessian.cols(),
                                    std::numeric_limits<double>::quiet_NaN());

  const double L = term->basis.support();
  std::optional<BSplineBasis> basis;
  if (term->basis.family == ImpactBasisSpec::Family::bspline) {
    std::vector<double> knots;
    for (int k = 0; k < term->basis.spline_knots; ++k)
      knots.push_back(term->basis.lag_window * static_cast<double>(k) /
                      (term->basis.spline_knots - 1));
    basis.emplace(term->basis.spline_degree, std::move(knots));
  }

  std::vector<ImpactCurvePoint> curve;
  std::vector<double> b(static_cast<std::size_t>(nc));
  for (int p = 0; p < n_points; ++p) {
    const double lag = L * static_cast<double>(p) / (n_points - 1);
    double value = 0.0, var = 0.0;
    if (basis) {
      for (int k = 0; k < nc; ++k) b[static_cast<std::size_t>(k)] = basis->eval(k, lag);
    } else if (term->basis.family == ImpactBasisSpec::Family::square) {
      b[0] = lag <= term->basis.sigma_h ? 1.0 : 0.0;
    } else {
      b[0] = std::exp(-term->basis.gamma * lag);
    }
    for (int k = 0; k < nc; ++k) {
      value += b[static_cast<std::size_t>(k)] * fit.coeffs(first + k);
      for (int l = 0; l < nc; ++l)
        var += b[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(l)] *
               cov(first + k, first + l);
    }
    const double hw = var > 0.0 ? z * std::sqrt(var) : 0.0;
    curve.push_back({lag, value, value - hw, value + hw});
  }
  return curve;
}

std::map<PairKey, FitResult> fit_multivariate_pairwise(
    const TrialSet& data, const PairwiseOptions& options) {
  const auto& ids = data.process_ids;
  std::vector<PairKey> pairs;
  for (const auto& src : ids)
    for (const auto& tgt : ids)
      if (src != tgt) pairs.emplace_back(src, tgt);
  std::vector<FitResult> results(pairs.size());

  parallel_for(pairs.size(), options.jobs, [&](std::size_t k) {
    const auto& [src, tgt] = pairs[k];
    DesignSpec d;
    d.target_id = tgt;
    if (options.with_nuisance) {
      if (options.nuisance_all_sources) {
        for (const auto& id : ids)
          if (id != tgt) d.nuisance_sources.push_back(id);
      } else {
        d.nuisance_sources.push_back(src);
      }
    }
    d.impacts.push_back({src, options.impact});
    if (options.include_target_self_impact)
      d.impacts.push_back({tgt, options.impact});
    d.sigma_w = options.sigma_w;
    try {
      results[k] = fit_modified_mle(d, data);
    } catch (const std::exception&) {
      results[k] = FitResult{};  // failure recorded as non-converged
    }
  });

  std::map<PairKey, FitResult> out;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out[pairs[k]] = std::move(results[k]);
  return out;
}

std::map<PairKey, FitResult> fit_standard_mhp_multivariate(
    const TrialSet& data, const ImpactBasisSpec& impact, int jobs) {
  const auto& ids = data.process_ids;
  std::vector<FitResult> per_target(ids.size());
  parallel_for(ids.size(), jobs, [&](std::size_t j) {
    DesignSpec d;
    d.target_id = ids[j];
    for (const auto& src : ids)
      if (src != ids[j]) d.impacts.push_back({src, impact});
    per_target[j] = fit_standard_mhp(std::move(d), data);
  });
  std::map<PairKey, FitResult> out;
  for (std::size_t j = 0; j < ids.size(); ++j)
    for (const auto& src : ids)
      if (src != ids[j]) out[{src, ids[j]}] = per_target[j];
  return out;
}

std::vector<double> rescaled_intervals(const DesignWorkspace& ws,
                                       const Eigen::VectorXd& beta) {
  std::vector<double> z;
  for (int tr = 0; tr < ws.n_trials(); ++tr) {
    const auto& tt = ws.target_events(tr);
    for (std::size_t k = 1; k < tt.size(); ++k) {
      const double a = tt[k - 1], b = tt[k];
      double zi = ws.intensity_integral(tr, a, b, beta);
      // The linear predictor can dip negative between events for strongly
      // inhibitory fits; integrate the clipped intensity numerically then.
      const bool dip = ws.intensity_at(tr, a, beta) < 0.0 ||
                       ws.intensity_at(tr, 0.5 * (a + b), beta) < 0.0 ||
                       ws.intensity_at(tr, b, beta) < 0.0 || zi < 0.0;
      if (dip) {
        const int m = std::max(2, static_cast<int>(std::ceil((b - a) / 2e-4)));
        const double h = (b - a) / m;
        zi = 0.0;
        for (int q = 0; q < m; ++q)
          zi += h * std::max(0.0, ws.intensity_at(tr, a + (q + 0.5) * h, beta));
      }
      if (!(zi > 0.0))
        throw std::runtime_error("rescaled_intervals: non-positive integrated intensity segment");
      z.push_back(zi);
    }
  }
  return z;
}

}  // namespace hawkes
