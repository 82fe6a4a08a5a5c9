#pragma once

#include "hawkeslob/types.hpp"

#include <vector>

namespace hawkeslob {

/// Scalar map on [0, inf): either affine x -> c0 + c1*x or piecewise-linear
/// interpolation on a strictly increasing grid (linear extrapolation with
/// the end-segment slopes outside the grid).
class ScalarMap {
 public:
  static ScalarMap affine(double c0, double c1);
  static ScalarMap constant(double c) { return affine(c, 0.0); }
  static ScalarMap piecewise_linear(Vector x, Vector v);

  double operator()(double x) const;
  bool is_affine() const { return grid_.size() == 0; }
  double affine_c0() const { return c0_; }
  double affine_c1() const { return c1_; }
  const Vector& grid() const { return grid_; }
  const Vector& values() const { return values_; }

 private:
  ScalarMap() = default;
  double c0_ = 0.0, c1_ = 0.0;
  Vector grid_, values_;
};

/// The per-level effective rate coefficients: sigma_k^2, f_k, g_k and the
/// per-unit migration coefficient alpha_b. h_k := f_k - g_k. sigma^2 is
/// clamped at zero on evaluation. Coordinates k are 0-based; coordinate k
/// is price level k+1.
class EffectiveCoefficients {
 public:
  EffectiveCoefficients(int depth, std::vector<ScalarMap> sigma_sq, std::vector<ScalarMap> f,
                        std::vector<ScalarMap> g, double alpha_b);
  static EffectiveCoefficients uniform(int depth, ScalarMap sigma_sq, ScalarMap f, ScalarMap g,
                                       double alpha_b);

  int depth() const { return depth_; }          // N
  Index levels() const { return depth_ - 1; }   // N-1 tracked levels

  double sigma_sq(Index k, double x) const;
  double f(Index k, double x) const { return f_[static_cast<std::size_t>(k)](x); }
  double g(Index k, double x) const { return g_[static_cast<std::size_t>(k)](x); }
  double h(Index k, double x) const { return f(k, x) - g(k, x); }
  double alpha_b() const { return alpha_b_; }

  const std::vector<ScalarMap>& sigma_sq_maps() const { return sigma_sq_; }
  const std::vector<ScalarMap>& f_maps() const { return f_; }
  const std::vector<ScalarMap>& g_maps() const { return g_; }

 private:
  int depth_;
  std::vector<ScalarMap> sigma_sq_, f_, g_;
  double alpha_b_;
};

}  // namespace hawkeslob
