#include "hawkes/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

// 5-point Gauss-Legendre on [-1, 1]; exact for polynomials to degree 9,
// which covers spline degrees up to 9 for the per-span integrals below.
constexpr double kGlNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
constexpr double kGlWeights[5] = {0.2369268850561891, 0.4786286704993665,
                                  0.5688888888888889, 0.4786286704993665,
                                  0.2369268850561891};

constexpr int kMaxDegree = 10;

}  // namespace

BSplineBasis::BSplineBasis(int degree, std::vector<double> distinct_knots)
    : degree_(degree), distinct_(std::move(distinct_knots)) {
  if (degree_ < 0) throw std::invalid_argument("BSplineBasis: degree must be >= 0");
  if (degree_ > kMaxDegree)
    throw std::invalid_argument("BSplineBasis: degree too large");
  if (distinct_.size() < 2)
    throw std::invalid_argument("BSplineBasis: need at least 2 distinct knots");
  for (std::size_t k = 1; k < distinct_.size(); ++k)
    if (!(distinct_[k] > distinct_[k - 1]))
      throw std::invalid_argument("BSplineBasis: distinct knots must increase");
  knots_.reserve(distinct_.size() + 2 * static_cast<std::size_t>(degree_));
  for (int r = 0; r < degree_; ++r) knots_.push_back(distinct_.front());
  knots_.insert(knots_.end(), distinct_.begin(), distinct_.end());
  for (int r = 0; r < degree_; ++r) knots_.push_back(distinct_.back());
  num_bases_ = static_cast<int>(knots_.size()) - degree_ - 1;
}

void BSplineBasis::check_index(int i) const {
  if (i < 0 || i >= num_bases_)
    throw std::domain_error("BSplineBasis: basis index out of range");
}

double BSplineBasis::cox_de_boor(const std::vector<double>& padded_knots,
                                 int i, int p, double x) {
  const auto& t = padded_knots;
  if (i < 0 || i + p + 1 >= static_cast<int>(t.size()))
    throw std::domain_error("cox_de_boor: index out of range");
  if (p == 0) return (x >= t[i] && x < t[i + 1]) ? 1.0 : 0.0;
  double left = 0.0;
  if (t[i + p] > t[i])
    left = (x - t[i]) / (t[i + p] - t[i]) * cox_de_boor(t, i, p - 1, x);
  double right = 0.0;
  if (t[i + p + 1] > t[i + 1])
    right = (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) *
            cox_de_boor(t, i + 1, p - 1, x);
  return left + right;
}

double BSplineBasis::eval(int basis_index, double x) const {
  check_index(basis_index);
  const auto& t = knots_;
  if (x < t[basis_index] || x >= t[basis_index + degree_ + 1]) return 0.0;
  return cox_de_boor(t, basis_index, degree_, x);
}

void BSplineBasis::eval_all(double x, std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(num_bases_), 0.0);
  if (x < lo() || x >= hi()) return;
  const auto& t = knots_;
  const int p = degree_;
  // Locate the knot span [t_k, t_{k+1}) containing x.
  const int first = p;
  const int last = static_cast<int>(t.size()) - p - 1;  // t[last] == hi
  int k = static_cast<int>(std::upper_bound(t.begin() + first, t.begin() + last, x) -
                           t.begin()) - 1;
  // Triangular recurrence; vals[j] becomes B_{k-p+j, p}(x).
  double vals[kMaxDegree + 1] = {0.0};
  vals[0] = 1.0;
  for (int d = 1; d <= p; ++d) {
    double saved = 0.0;
    for (int r = 0; r < d; ++r) {
      const int i = k - d + 1 + r;
      const double den = t[i + d] - t[i];
      const double term = den > 0.0 ? vals[r] / den : 0.0;
      vals[r] = saved + (t[i + d] - x) * term;
      saved = (x - t[i]) * term;
    }
    vals[d] = saved;
  }
  for (int j = 0; j <= p; ++j) {
    const int idx = k - p + j;
    if (idx >= 0 && idx < num_bases_) out[static_cast<std::size_t>(idx)] = vals[j];
  }
}

double BSplineBasis::integral(int basis_index) const {
  check_index(basis_index);
  return (knots_[basis_index + degree_ + 1] - knots_[basis_index]) /
         static_cast<double>(degree_ + 1);
}

double BSplineBasis::partial_integral(int basis_index, double x) const {
  check_index(basis_index);
  const double support_lo = knots_[basis_index];
  const double support_hi = knots_[basis_index + degree_ + 1];
  if (x <= support_lo) return 0.0;
  if (x >= support_hi) return integral(basis_index);
  double acc = 0.0;
  // The basis is a polynomial on each knot span, so fixed-order quadrature
  // per span is exact.
  for (int k = basis_index; k <= basis_index + degree_; ++k) {
    const double a = knots_[k];
    const double b = std::min(knots_[k + 1], x);
    if (!(b > a)) {
      if (knots_[k + 1] > x) break;
      continue;
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double span_sum = 0.0;
    for (int g = 0; g < 5; ++g)
      span_sum += kGlWeights[g] * eval(basis_index, mid + half * kGlNodes[g]);
    acc += half * span_sum;
    if (knots_[k + 1] >= x) break;
  }
  return acc;
}

}  // namespace hawkes
