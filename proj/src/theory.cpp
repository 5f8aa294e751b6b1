#include "hawkes/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes::theory {

namespace {
constexpr double kSqrtPi = 1.7724538509055160;
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

void CoxTheoryParams::validate() const {
  if (!(rho >= 0.0) || !(sigma_i > 0.0) || !(alpha_i >= 0.0) ||
      !(alpha_j >= 0.0) || !(sigma_h > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("CoxTheoryParams: invalid parameter");
}

double reduced_cov_lambda(double u, const CoxTheoryParams& p) {
  p.validate();
  const double s = p.sigma_i;
  return p.rho / (2.0 * kSqrtPi * s) * std::exp(-u * u / (4.0 * s * s));
}

ReducedCovN reduced_cov_N(double u, const CoxTheoryParams& p) {
  return {reduced_cov_lambda(u, p), p.lambda_bar_i()};
}

InnerProducts inner_products(const CoxTheoryParams& p, double sigma_w) {
  p.validate();
  if (!(sigma_w > 0.0))
    throw std::invalid_argument("inner_products: sigma_w must be > 0");
  const double rho = p.rho, si = p.sigma_i, sh = p.sigma_h, sw = sigma_w;
  const double li = p.lambda_bar_i();
  InnerProducts s;
  s.s_ww = rho / (2.0 * kSqrtPi * std::sqrt(sw * sw + si * si)) +
           li / (2.0 * kSqrtPi * sw);
  s.s_hh = rho * (sh * std::erf(sh / (2.0 * si)) -
                  (2.0 * si / kSqrtPi) * (1.0 - std::exp(-sh * sh / (4.0 * si * si)))) +
           li * sh;
  // The two printed forms of the first erf argument are algebraically equal:
  // sh / (2 sqrt(sw^2/2 + si^2)) == sh / sqrt(2 sw^2 + 4 si^2).
  s.s_hw = 0.5 * rho * std::erf(sh / std::sqrt(2.0 * sw * sw + 4.0 * si * si)) +
           0.5 * li * std::erf(sh / (kSqrt2 * sw));
  s.s_wl = rho / (kSqrtPi * std::sqrt(2.0 * sw * sw + 4.0 * si * si));
  s.s_hl = 0.5 * rho * std::erf(sh / (2.0 * si));
  return s;
}

double bias_approx(const CoxTheoryParams& p, double sigma_w) {
  const InnerProducts s = inner_products(p, sigma_w);
  const double den = s.s_ww * s.s_hh - s.s_hw * s.s_hw;
  if (!(den > 0.0))
    throw std::domain_error("bias_approx: degenerate configuration (denominator <= 0)");
  return (s.s_ww * s.s_hl - s.s_hw * s.s_wl) / den;
}

double bias_hawkes(const CoxTheoryParams& p) {
  p.validate();
  const double rho = p.rho, si = p.sigma_i, sh = p.sigma_h;
  const double li = p.lambda_bar_i();
  const double num = 0.5 * rho * std::erf(sh / (2.0 * si));
  const double den =
      rho * (sh * std::erf(sh / (2.0 * si)) -
             (2.0 * si / kSqrtPi) * (1.0 - std::exp(-sh * sh / (4.0 * si * si)))) +
      li * sh;
  return num / den;
}

double variance_approx(const CoxTheoryParams& p, double sigma_w) {
  const InnerProducts s = inner_products(p, sigma_w);
  const double den = s.s_ww * s.s_hh - s.s_hw * s.s_hw;
  if (!(den > 0.0))
    throw std::domain_error("variance_approx: degenerate configuration");
  return p.lambda_bar_j() / p.horizon * s.s_ww / den;
}

double variance_hawkes(const CoxTheoryParams& p) {
  const InnerProducts s = inner_products(p, p.sigma_i);  // s_hh is sigma_w-free
  return p.lambda_bar_j() / p.horizon / s.s_hh;
}

std::vector<TheoryPoint> theory_curves(const CoxTheoryParams& p,
                                       const std::vector<double>& sigma_w_grid) {
  if (sigma_w_grid.empty())
    throw std::invalid_argument("theory_curves: empty grid");
  std::vector<TheoryPoint> out;
  out.reserve(sigma_w_grid.size());
  double peak = -1e300;
  for (double sw : sigma_w_grid) {
    TheoryPoint pt;
    pt.sigma_w = sw;
    pt.bias = bias_approx(p, sw);
    const double v = variance_approx(p, sw);
    pt.se = std::sqrt(v);
    pt.rmse = std::sqrt(pt.bias * pt.bias + v);
    // Laplace expansion of the expected profile likelihood: gain of the
    // {smooth, impact} model over the constant-only fit.
    const InnerProducts s = inner_products(p, sw);
    const double a = p.alpha_impact;
    const double v_w = s.s_wl + a * s.s_hw;
    const double v_h = s.s_hl + a * s.s_hh;
    const double det = s.s_ww * s.s_hh - s.s_hw * s.s_hw;
    const double quad = (v_w * (s.s_hh * v_w - s.s_hw * v_h) +
                         v_h * (s.s_ww * v_h - s.s_hw * v_w)) / det;
    pt.dloglik = 0.5 * p.horizon * quad / p.lambda_bar_j();
    peak = std::max(peak, pt.dloglik);
    out.push_back(pt);
  }
  for (auto& pt : out) pt.dloglik -= peak;  // align grid maximum to zero
  return out;
}

}  // namespace hawkes::theory
