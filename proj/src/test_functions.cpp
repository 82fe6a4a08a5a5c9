#include "hawkeslob/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace hawkeslob {

CubicSpline::CubicSpline(Vector x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
  const Index n = x_.size();
  if (n < 3) throw std::invalid_argument("CubicSpline: need >= 3 knots");
  if (y_.size() != n) throw std::invalid_argument("CubicSpline: knot/value size mismatch");
  for (Index i = 0; i + 1 < n; ++i)
    if (!(x_[i] < x_[i + 1]))
      throw std::invalid_argument("CubicSpline: knots must be strictly increasing");

  // natural spline: tridiagonal system for interior second derivatives
  m_ = Vector::Zero(n);
  Matrix a = Matrix::Zero(n - 2, n - 2);
  Vector rhs(n - 2);
  for (Index i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    const Index r = i - 1;
    if (r > 0) a(r, r - 1) = hl / 6.0;
    a(r, r) = (hl + hr) / 3.0;
    if (r + 1 < n - 2) a(r, r + 1) = hr / 6.0;
    rhs[r] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  m_.segment(1, n - 2) = a.partialPivLu().solve(rhs);
}

double CubicSpline::value(double x) const {
  const Index n = x_.size();
  if (x <= x_[0]) {
    const double h = x_[1] - x_[0];
    const double slope = (y_[1] - y_[0]) / h - h * (2.0 * m_[0] + m_[1]) / 6.0;
    return y_[0] + slope * (x - x_[0]);
  }
  if (x >= x_[n - 1]) {
    const double h = x_[n - 1] - x_[n - 2];
    const double slope = (y_[n - 1] - y_[n - 2]) / h + h * (m_[n - 2] + 2.0 * m_[n - 1]) / 6.0;
    return y_[n - 1] + slope * (x - x_[n - 1]);
  }
  const Index hi = static_cast<Index>(
      std::upper_bound(x_.data(), x_.data() + n, x) - x_.data());
  const Index lo = hi - 1;
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / h;
  const double b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] +
         ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

TestFunction::TestFunction(Index dim, ValueFn value, PartialFn d1, PartialFn d2)
    : dim_(dim), value_(std::move(value)), d1_(std::move(d1)), d2_(std::move(d2)) {
  if (dim_ < 1) throw std::invalid_argument("TestFunction: dim must be >= 1");
  if (!value_ || !d1_ || !d2_)
    throw std::invalid_argument("TestFunction: value and derivative callables required");
}

TestFunction TestFunction::constant(Index dim, double c) {
  return TestFunction(
      dim, [c](const Vector&) { return c; }, [](const Vector&, Index) { return 0.0; },
      [](const Vector&, Index) { return 0.0; });
}

TestFunction TestFunction::quadratic_bump(Vector weights) {
  const Index dim = weights.size();
  return TestFunction(
      dim,
      [weights](const Vector& x) { return (weights.array() * x.array().square()).sum(); },
      [weights](const Vector& x, Index k) { return 2.0 * weights[k] * x[k]; },
      [weights](const Vector&, Index k) { return 2.0 * weights[k]; });
}

TestFunction TestFunction::neumann_cosine(Vector amplitude, Vector omega) {
  if (amplitude.size() != omega.size())
    throw std::invalid_argument("neumann_cosine: amplitude/omega size mismatch");
  const Index dim = amplitude.size();
  return TestFunction(
      dim,
      [amplitude, omega](const Vector& x) {
        return (amplitude.array() * (omega.array() * x.array()).cos()).sum();
      },
      [amplitude, omega](const Vector& x, Index k) {
        return -amplitude[k] * omega[k] * std::sin(omega[k] * x[k]);
      },
      [amplitude, omega](const Vector& x, Index k) {
        return -amplitude[k] * omega[k] * omega[k] * std::cos(omega[k] * x[k]);
      });
}

TestFunction TestFunction::tabulated(std::vector<CubicSpline> tables) {
  const Index dim = static_cast<Index>(tables.size());
  constexpr double kStep = 1e-5;
  auto shared = std::make_shared<std::vector<CubicSpline>>(std::move(tables));
  auto value = [shared](const Vector& x) {
    double acc = 0.0;
    for (Index k = 0; k < x.size(); ++k) acc += (*shared)[static_cast<std::size_t>(k)].value(x[k]);
    return acc;
  };
  auto d1 = [shared](const Vector& x, Index k) {
    const auto& s = (*shared)[static_cast<std::size_t>(k)];
    return (s.value(x[k] + kStep) - s.value(x[k] - kStep)) / (2.0 * kStep);
  };
  auto d2 = [shared](const Vector& x, Index k) {
    const auto& s = (*shared)[static_cast<std::size_t>(k)];
    return (s.value(x[k] + kStep) + s.value(x[k] - kStep) - 2.0 * s.value(x[k])) /
           (kStep * kStep);
  };
  return TestFunction(dim, std::move(value), std::move(d1), std::move(d2));
}

double max_neumann_violation(const TestFunction& f, const std::vector<Vector>& interior_points) {
  double worst = 0.0;
  for (const Vector& p : interior_points) {
    for (Index k = 0; k < f.dim(); ++k) {
      Vector q = p;
      q[k] = 0.0;
      worst = std::max(worst, std::abs(f.d1(q, k)));
    }
  }
  return worst;
}

}  // namespace hawkeslob
