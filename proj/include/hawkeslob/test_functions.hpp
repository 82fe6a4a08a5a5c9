#pragma once

#include "hawkeslob/types.hpp"

#include <functional>
#include <vector>

namespace hawkeslob {

/// Natural cubic spline through (x_i, y_i), linear extrapolation outside.
class CubicSpline {
 public:
  CubicSpline(Vector x, Vector y);
  double value(double x) const;

 private:
  Vector x_, y_, m_;  // m_ holds second derivatives at the knots
};

/// Scalar test function on the non-negative orthant with evaluable first and
/// second partial derivatives, the evaluation class for the generators.
class TestFunction {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using PartialFn = std::function<double(const Vector&, Index)>;

  TestFunction(Index dim, ValueFn value, PartialFn d1, PartialFn d2);

  static TestFunction constant(Index dim, double c);
  /// F(x) = sum_k w_k x_k^2
  static TestFunction quadratic_bump(Vector weights);
  /// F(x) = sum_k a_k cos(omega_k x_k); satisfies the Neumann condition.
  static TestFunction neumann_cosine(Vector amplitude, Vector omega);
  /// F(x) = sum_k phi_k(x_k) with each phi_k a natural cubic spline through
  /// tabulated values; derivatives by central differences with step 1e-5.
  static TestFunction tabulated(std::vector<CubicSpline> tables);

  Index dim() const { return dim_; }
  double value(const Vector& x) const { return value_(x); }
  double d1(const Vector& x, Index k) const { return d1_(x, k); }
  double d2(const Vector& x, Index k) const { return d2_(x, k); }

 private:
  Index dim_;
  ValueFn value_;
  PartialFn d1_, d2_;
};

/// Max |dF/dx_k| over sampled points of each face {x_k = 0}; the Neumann
/// class requires this to vanish (tolerance 1e-12 in the checks).
double max_neumann_violation(const TestFunction& f, const std::vector<Vector>& interior_points);

}  // namespace hawkeslob
