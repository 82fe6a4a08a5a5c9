#include "hawkeslob/generator.hpp"

#include <cmath>
#include <limits>

namespace hawkeslob {

namespace {

long long lattice_index(double y, double sqrt_n) { return std::llround(y * sqrt_n); }

}  // namespace

FiniteDiffs finite_diffs(const TestFunction& f, const Vector& y, double n, Index k) {
  const double sqrt_n = std::sqrt(n);
  const double h = 1.0 / sqrt_n;
  const double f0 = f.value(y);

  Vector yp = y;
  yp[k] += h;
  const double right = sqrt_n * (f.value(yp) - f0);

  Vector ym = y;
  ym[k] -= h;
  bool clamped = false;
  if (ym[k] < 0.0) {
    ym[k] = 0.0;
    clamped = true;
  }
  const double left = sqrt_n * (f0 - f.value(ym));

  return FiniteDiffs{right, left, sqrt_n * (right - left), clamped};
}

double generator_micro(const TestFunction& f, const Vector& y, double n,
                       const EffectiveCoefficients& coeffs) {
  if (y.size() != coeffs.levels())
    throw std::invalid_argument("generator_micro: state dimension != N-1");
  const Index d = y.size();
  const double sqrt_n = std::sqrt(n);
  const double h = 1.0 / sqrt_n;
  const double alpha_b = coeffs.alpha_b();
  double acc = 0.0;

  for (Index k = 0; k < d; ++k) {
    const long long m = lattice_index(y[k], sqrt_n);
    const FiniteDiffs fd = finite_diffs(f, y, n, k);
    const double s2 = coeffs.sigma_sq(k, y[k]);

    if (m >= 1)
      acc += 0.5 * fd.second * s2;
    else
      acc += fd.right * s2 / sqrt_n;

    acc += fd.right * coeffs.f(k, y[k]);
    if (m >= 1) acc -= fd.left * coeffs.g(k, y[k]);

    if (alpha_b != 0.0 && m >= 1) {
      Vector shifted = y;
      shifted[k] -= h;
      const double dr_lo = k > 0 ? finite_diffs(f, shifted, n, k - 1).right : 0.0;
      const double dr_hi = k + 1 < d ? finite_diffs(f, shifted, n, k + 1).right : 0.0;
      acc += alpha_b * y[k] * (dr_lo + dr_hi - 2.0 * fd.left);
    }
  }
  return acc;
}

double generator_limit(const TestFunction& f, const Vector& x,
                       const EffectiveCoefficients& coeffs) {
  if (x.size() != coeffs.levels())
    throw std::invalid_argument("generator_limit: state dimension != N-1");
  const Index d = x.size();
  const double alpha_b = coeffs.alpha_b();
  double acc = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double lo = k > 0 ? x[k - 1] : 0.0;
    const double hi = k + 1 < d ? x[k + 1] : 0.0;
    acc += 0.5 * coeffs.sigma_sq(k, x[k]) * f.d2(x, k);
    acc += (coeffs.h(k, x[k]) + alpha_b * (hi + lo - 2.0 * x[k])) * f.d1(x, k);
  }
  return acc;
}

Vector snap_to_lattice(const Vector& y, double n) {
  const double sqrt_n = std::sqrt(n);
  Vector snapped(y.size());
  for (Index k = 0; k < y.size(); ++k) {
    const long long m = std::max(0ll, lattice_index(y[k], sqrt_n));
    snapped[k] = static_cast<double>(m) / sqrt_n;
  }
  return snapped;
}

std::vector<Vector> default_probe_points(Index dim, double lo, double hi, int count,
                                         std::uint64_t seed) {
  std::vector<Vector> probes;
  // tensor grid of 5 points per axis while it stays small
  const double per_axis = 5.0;
  if (std::pow(per_axis, static_cast<double>(dim)) <= 2.0 * count) {
    const int g = static_cast<int>(per_axis);
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
      Vector p(dim);
      for (Index k = 0; k < dim; ++k)
        p[k] = lo + (hi - lo) * idx[static_cast<std::size_t>(k)] / (g - 1.0);
      probes.push_back(p);
      Index k = 0;
      while (k < dim && ++idx[static_cast<std::size_t>(k)] == g) {
        idx[static_cast<std::size_t>(k)] = 0;
        ++k;
      }
      if (k == dim) break;
    }
    return probes;
  }
  SplitRng rng(seed, 0);
  probes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector p(dim);
    for (Index k = 0; k < dim; ++k) p[k] = lo + (hi - lo) * rng.uniform01();
    probes.push_back(p);
  }
  return probes;
}

std::vector<double> GeneratorConvergenceReport::ratios() const {
  std::vector<double> r;
  for (std::size_t i = 0; i + 1 < sup_errors.size(); ++i)
    r.push_back(sup_errors[i + 1] > 0.0 ? sup_errors[i] / sup_errors[i + 1]
                                        : std::numeric_limits<double>::infinity());
  return r;
}

bool GeneratorConvergenceReport::decay_ok(double lo_frac, double hi_frac) const {
  const std::vector<double> r = ratios();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ideal = std::sqrt(n_values[i + 1] / n_values[i]);
    if (!(r[i] >= lo_frac * ideal && r[i] <= hi_frac * ideal)) return false;
  }
  return !r.empty();
}

GeneratorConvergenceReport generator_convergence_report(const TestFunction& f,
                                                        const EffectiveCoefficients& coeffs,
                                                        const std::vector<double>& n_list,
                                                        const std::vector<Vector>& probes) {
  GeneratorConvergenceReport report;
  for (const double n : n_list) {
    double sup = 0.0;
    for (const Vector& p : probes) {
      const Vector y = snap_to_lattice(p, n);
      const double err = std::abs(generator_micro(f, y, n, coeffs) - generator_limit(f, y, coeffs));
      sup = std::max(sup, err);
    }
    report.n_values.push_back(n);
    report.sup_errors.push_back(sup);
  }
  return report;
}

}  // namespace hawkeslob
