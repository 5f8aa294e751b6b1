#pragma once

#include <vector>

namespace hawkes {

// B-spline basis on a padded knot vector built from distinct knots.
// For K distinct knots and degree p, p repeats are added at each end and the
// basis count is K + p - 1. Degenerate spans in the recursion follow the
// 0/0 -> 0 convention.
class BSplineBasis {
 public:
  BSplineBasis(int degree, std::vector<double> distinct_knots);

  int degree() const { return degree_; }
  int num_bases() const { return num_bases_; }
  const std::vector<double>& padded_knots() const { return knots_; }
  const std::vector<double>& distinct_knots() const { return distinct_; }
  double lo() const { return distinct_.front(); }
  double hi() const { return distinct_.back(); }

  // B_{i,p}(x); zero outside [t_i, t_{i+p+1}).
  double eval(int basis_index, double x) const;

  // Evaluates every basis at x into out (resized to num_bases()).
  void eval_all(double x, std::vector<double>& out) const;

  // Closed-form total mass (t_{i+p+1} - t_i) / (p + 1).
  double integral(int basis_index) const;

  // Integral from -inf to x; exact per-span Gauss-Legendre accumulation.
  double partial_integral(int basis_index, double x) const;

  // Direct Cox-de Boor recursion on an arbitrary padded knot vector.
  static double cox_de_boor(const std::vector<double>& padded_knots, int i,
                            int p, double x);

 private:
  void check_index(int i) const;

  int degree_ = 0;
  int num_bases_ = 0;
  std::vector<double> distinct_;
  std::vector<double> knots_;
};

}  // namespace hawkes
