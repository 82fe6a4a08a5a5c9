#pragma once

#include "hawkeslob/coefficients.hpp"
#include "hawkeslob/rng.hpp"
#include "hawkeslob/test_functions.hpp"
#include "hawkeslob/types.hpp"

#include <vector>

namespace hawkeslob {

struct FiniteDiffs {
  double right;   // sqrt(n) * (F(y + e_k/sqrt(n)) - F(y))
  double left;    // sqrt(n) * (F(y) - F(y - e_k/sqrt(n)))
  double second;  // n * (F(y+e_k/sqrt(n)) + F(y-e_k/sqrt(n)) - 2 F(y)), computed
                  // as sqrt(n)*(right - left) so the identity holds bit-exactly
  bool clamped;   // left difference was evaluated at a clamped argument (y_k = 0)
};

FiniteDiffs finite_diffs(const TestFunction& f, const Vector& y, double n, Index k);

/// Discrete generator of the rescaled queue process evaluated on the
/// 1/sqrt(n) lattice: second-difference volatility term gated on
/// {y_k >= 1/sqrt(n)}, the boundary right-difference term gated on
/// {y_k = 0}, the up/down drift pair with the down gate, and the migration
/// combination with the convention that right differences past either end
/// of the book vanish.
double generator_micro(const TestFunction& f, const Vector& y, double n,
                       const EffectiveCoefficients& coeffs);

/// Candidate limit generator:
///   A F(x) = sum_k [ sigma_k^2(x_k)/2 * d2F + (h_k(x_k)
///            + alpha_b (x_{k+1} + x_{k-1} - 2 x_k)) * d1F ],
/// ghost values x_0 = x_N = 0.
double generator_limit(const TestFunction& f, const Vector& x,
                       const EffectiveCoefficients& coeffs);

Vector snap_to_lattice(const Vector& y, double n);

/// Deterministic probe set inside [lo, hi]^dim: the full tensor grid when it
/// is small, otherwise `count` seeded uniform draws.
std::vector<Vector> default_probe_points(Index dim, double lo = 0.25, double hi = 4.0,
                                         int count = 128, std::uint64_t seed = 17);

struct GeneratorConvergenceReport {
  std::vector<double> n_values;
  std::vector<double> sup_errors;  // max |A_n F - A F| over snapped probes

  // err(n_i)/err(n_{i+1}); the ideal value is sqrt(n_{i+1}/n_i)
  std::vector<double> ratios() const;
  // every successive ratio within [lo_frac, hi_frac] of its ideal value
  bool decay_ok(double lo_frac = 0.8, double hi_frac = 1.25) const;
};

GeneratorConvergenceReport generator_convergence_report(const TestFunction& f,
                                                        const EffectiveCoefficients& coeffs,
                                                        const std::vector<double>& n_list,
                                                        const std::vector<Vector>& probes);

}  // namespace hawkeslob
