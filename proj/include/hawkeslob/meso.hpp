#pragma once

#include "hawkeslob/coefficients.hpp"
#include "hawkeslob/rng.hpp"
#include "hawkeslob/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace hawkeslob {

/// Rescaled queue volumes X >= 0 with per-level reflection accumulators eta
/// (non-decreasing; eta grows only on steps that project to the boundary).
struct MesoState {
  Vector x;
  Vector eta;
  double t = 0.0;
};

struct MesoConfig {
  enum class NoiseMode { diagonal, correlated };

  EffectiveCoefficients coeffs;
  NoiseMode noise_mode = NoiseMode::diagonal;
  std::optional<Matrix> gamma;    // required in correlated mode
  std::optional<Matrix> sigma_x;  // when present, gamma*gamma^T must match it
  double dt = 1e-3;
  Vector x0;

  void validate() const;
};

/// drift_i = h_i(x_i) + alpha_b * (x_{i+1} + x_{i-1} - 2 x_i), ghosts x_0 = x_N = 0.
Vector drift(const Vector& x, const EffectiveCoefficients& coeffs);

/// One reflected Euler step: proposal P = X + drift*dt + noise, new X =
/// max(P, 0), delta eta = max(-P, 0). Noise is sigma_i(X_i) dW_i in diagonal
/// mode and (gamma dW)_i in correlated mode, evaluated at the pre-step state.
MesoState step_reflected_euler(const MesoState& state, double dt, const Vector& dw,
                               const MesoConfig& config);

struct MesoEnsemble {
  Vector grid;             // output times (every output_stride-th step, plus t=0)
  Matrix mean;             // grid x levels
  Matrix variance;         // grid x levels, unbiased
  Matrix terminal_x;       // paths x levels
  Matrix terminal_eta;     // paths x levels
  long negativity_violations = 0;
  long complementarity_violations = 0;
  long eta_decrease_violations = 0;
};

MesoEnsemble simulate_meso(const MesoConfig& config, double horizon, int paths,
                           std::uint64_t seed, int threads = 1, int output_stride = 1,
                           std::vector<Matrix>* dumped_paths = nullptr, int dump_count = 0);

struct HeatRelaxation {
  Vector grid;
  Matrix numeric;      // grid x levels, classic RK4 on dx/dt = alpha_b * L x
  Matrix closed_form;  // grid x levels, Dirichlet sine-mode expansion
  double max_rel_err = 0.0;  // 2-norm relative error over the grid
};

/// Pure Laplacian relaxation with pinned (Dirichlet) ghost ends.
HeatRelaxation heat_relaxation(double alpha_b, const Vector& x0, double dt, double horizon,
                               int output_stride = 1);

/// (lambda_m, v_m) of the Dirichlet path-graph Laplacian: -L v = lambda v with
/// v_m(i) = sin(pi m i / N), lambda_m = 2 (1 - cos(pi m / N)); v has unit 2-norm.
std::pair<double, Vector> dirichlet_mode(Index levels, int mode);

}  // namespace hawkeslob
