#include "hawkeslob/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace hawkeslob {

ScalarMap ScalarMap::affine(double c0, double c1) {
  if (!std::isfinite(c0) || !std::isfinite(c1))
    throw std::invalid_argument("ScalarMap: affine coefficients must be finite");
  ScalarMap m;
  m.c0_ = c0;
  m.c1_ = c1;
  return m;
}

ScalarMap ScalarMap::piecewise_linear(Vector x, Vector v) {
  if (x.size() < 2) throw std::invalid_argument("ScalarMap: grid needs >= 2 points");
  if (x.size() != v.size()) throw std::invalid_argument("ScalarMap: grid/value size mismatch");
  for (Index i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      throw std::invalid_argument("ScalarMap: grid must be strictly increasing");
  ScalarMap m;
  m.grid_ = std::move(x);
  m.values_ = std::move(v);
  return m;
}

double ScalarMap::operator()(double x) const {
  if (is_affine()) return c0_ + c1_ * x;
  const Index n = grid_.size();
  Index hi = 1;
  if (x >= grid_[n - 1]) {
    hi = n - 1;
  } else if (x > grid_[0]) {
    hi = static_cast<Index>(
        std::upper_bound(grid_.data(), grid_.data() + n, x) - grid_.data());
  }
  const Index lo = hi - 1;
  const double w = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

EffectiveCoefficients::EffectiveCoefficients(int depth, std::vector<ScalarMap> sigma_sq,
                                             std::vector<ScalarMap> f, std::vector<ScalarMap> g,
                                             double alpha_b)
    : depth_(depth),
      sigma_sq_(std::move(sigma_sq)),
      f_(std::move(f)),
      g_(std::move(g)),
      alpha_b_(alpha_b) {
  if (depth_ < 2) throw std::invalid_argument("EffectiveCoefficients: depth must be >= 2");
  const std::size_t levels = static_cast<std::size_t>(depth_ - 1);
  if (sigma_sq_.size() != levels || f_.size() != levels || g_.size() != levels)
    throw std::invalid_argument("EffectiveCoefficients: need one map per level (N-1)");
  if (!(alpha_b_ >= 0.0) || !std::isfinite(alpha_b_))
    throw std::invalid_argument("EffectiveCoefficients: alpha_b must be finite and >= 0");
}

EffectiveCoefficients EffectiveCoefficients::uniform(int depth, ScalarMap sigma_sq, ScalarMap f,
                                                     ScalarMap g, double alpha_b) {
  const std::size_t levels = depth < 2 ? 0 : static_cast<std::size_t>(depth - 1);
  return EffectiveCoefficients(depth, std::vector<ScalarMap>(levels, sigma_sq),
                               std::vector<ScalarMap>(levels, f),
                               std::vector<ScalarMap>(levels, g), alpha_b);
}

double EffectiveCoefficients::sigma_sq(Index k, double x) const {
  return std::max(0.0, sigma_sq_[static_cast<std::size_t>(k)](x));
}

}  // namespace hawkeslob
