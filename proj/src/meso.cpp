#include "hawkeslob/meso.hpp"

#include "hawkeslob/parallel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hawkeslob {

void MesoConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("MesoConfig: dt must be > 0");
  const Index levels = coeffs.levels();
  if (x0.size() != levels) throw std::invalid_argument("MesoConfig: x0 must have length N-1");
  if ((x0.array() < 0.0).any())
    throw std::invalid_argument("MesoConfig: x0 must be entrywise non-negative");
  if (noise_mode == NoiseMode::correlated) {
    if (!gamma) throw std::invalid_argument("MesoConfig: correlated mode requires gamma");
    if (gamma->rows() != levels || gamma->cols() != levels)
      throw std::invalid_argument("MesoConfig: gamma must be (N-1) x (N-1)");
    if (sigma_x) {
      const double err = ((*gamma) * gamma->transpose() - *sigma_x).norm();
      if (err > 1e-10 * std::max(1.0, sigma_x->norm()))
        throw std::invalid_argument(
            "MesoConfig: gamma * gamma^T does not reproduce sigma_x within 1e-10");
    }
  }
}

Vector drift(const Vector& x, const EffectiveCoefficients& coeffs) {
  const Index d = x.size();
  if (d != coeffs.levels()) throw std::invalid_argument("drift: state dimension != N-1");
  const double alpha_b = coeffs.alpha_b();
  Vector out(d);
  for (Index i = 0; i < d; ++i) {
    const double lo = i > 0 ? x[i - 1] : 0.0;
    const double hi = i + 1 < d ? x[i + 1] : 0.0;
    out[i] = coeffs.h(i, x[i]) + alpha_b * (hi + lo - 2.0 * x[i]);
  }
  return out;
}

MesoState step_reflected_euler(const MesoState& state, double dt, const Vector& dw,
                               const MesoConfig& config) {
  const Index d = state.x.size();
  if (dw.size() != d) throw std::invalid_argument("step_reflected_euler: bad increment length");

  Vector proposal = state.x + drift(state.x, config.coeffs) * dt;
  if (config.noise_mode == MesoConfig::NoiseMode::correlated) {
    proposal += (*config.gamma) * dw;
  } else {
    for (Index i = 0; i < d; ++i)
      proposal[i] += std::sqrt(config.coeffs.sigma_sq(i, state.x[i])) * dw[i];
  }

  MesoState next;
  next.t = state.t + dt;
  next.x = proposal.cwiseMax(0.0);
  next.eta = state.eta + (-proposal).cwiseMax(0.0);
  for (Index i = 0; i < d; ++i) {
    if (!std::isfinite(next.x[i]))
      throw NumericalError("step_reflected_euler: non-finite value at level " +
                           std::to_string(i + 1) + ", t = " + std::to_string(next.t));
  }
  return next;
}

MesoEnsemble simulate_meso(const MesoConfig& config, double horizon, int paths,
                           std::uint64_t seed, int threads, int output_stride,
                           std::vector<Matrix>* dumped_paths, int dump_count) {
  config.validate();
  if (paths < 1) throw std::invalid_argument("simulate_meso: paths must be >= 1");
  if (output_stride < 1) throw std::invalid_argument("simulate_meso: output_stride must be >= 1");
  const long steps = std::lround(std::floor(horizon / config.dt + 1e-9));
  const Index d = config.coeffs.levels();
  const long n_out = steps / output_stride + 1;

  MesoEnsemble out;
  out.grid = Vector(n_out);
  for (long s = 0; s < n_out; ++s) out.grid[s] = static_cast<double>(s * output_stride) * config.dt;
  out.terminal_x = Matrix(paths, d);
  out.terminal_eta = Matrix(paths, d);
  if (dumped_paths) dumped_paths->assign(static_cast<std::size_t>(std::min(dump_count, paths)),
                                         Matrix(n_out, d));

  const std::size_t n_chunks =
      threads <= 1 ? 1
                   : std::min<std::size_t>(static_cast<std::size_t>(threads),
                                           static_cast<std::size_t>(paths));
  std::vector<Matrix> chunk_sum(n_chunks, Matrix::Zero(n_out, d));
  std::vector<Matrix> chunk_sum_sq(n_chunks, Matrix::Zero(n_out, d));
  std::vector<long> chunk_nonneg(n_chunks, 0), chunk_compl(n_chunks, 0), chunk_eta(n_chunks, 0);

  parallel_chunks(static_cast<std::size_t>(paths), threads,
                  [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                    Matrix& sum = chunk_sum[chunk];
                    Matrix& sum_sq = chunk_sum_sq[chunk];
                    for (std::size_t p = begin; p < end; ++p) {
                      SplitRng rng(seed, p);
                      MesoState state{config.x0, Vector::Zero(d), 0.0};
                      Vector dw(d);
                      const double sqrt_dt = std::sqrt(config.dt);
                      long out_row = 0;
                      auto record = [&](const MesoState& s) {
                        sum.row(out_row) += s.x.transpose();
                        sum_sq.row(out_row) += s.x.array().square().matrix().transpose();
                        if (dumped_paths && p < dumped_paths->size())
                          (*dumped_paths)[p].row(out_row) = s.x.transpose();
                        ++out_row;
                      };
                      record(state);
                      for (long step = 1; step <= steps; ++step) {
                        for (Index i = 0; i < d; ++i) dw[i] = sqrt_dt * rng.normal();
                        MesoState next = step_reflected_euler(state, config.dt, dw, config);
                        // invariant counters (structurally zero for the projection step)
                        if ((next.x.array() < 0.0).any()) ++chunk_nonneg[chunk];
                        for (Index i = 0; i < d; ++i) {
                          const double d_eta = next.eta[i] - state.eta[i];
                          if (d_eta < 0.0) ++chunk_eta[chunk];
                          if (d_eta > 0.0 && next.x[i] != 0.0) ++chunk_compl[chunk];
                        }
                        state = std::move(next);
                        if (step % output_stride == 0) record(state);
                      }
                      out.terminal_x.row(static_cast<Index>(p)) = state.x.transpose();
                      out.terminal_eta.row(static_cast<Index>(p)) = state.eta.transpose();
                    }
                  });

  Matrix sum = Matrix::Zero(n_out, d), sum_sq = Matrix::Zero(n_out, d);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    sum += chunk_sum[c];
    sum_sq += chunk_sum_sq[c];
    out.negativity_violations += chunk_nonneg[c];
    out.complementarity_violations += chunk_compl[c];
    out.eta_decrease_violations += chunk_eta[c];
  }
  const double np = static_cast<double>(paths);
  out.mean = sum / np;
  if (paths > 1)
    out.variance = ((sum_sq - np * out.mean.array().square().matrix()) / (np - 1.0))
                       .cwiseMax(0.0);
  else
    out.variance = Matrix::Zero(n_out, d);
  return out;
}

HeatRelaxation heat_relaxation(double alpha_b, const Vector& x0, double dt, double horizon,
                               int output_stride) {
  if (!(alpha_b > 0.0)) throw std::invalid_argument("heat_relaxation: alpha_b must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("heat_relaxation: dt must be > 0");
  const Index d = x0.size();
  const long steps = std::lround(std::floor(horizon / dt + 1e-9));
  const long n_out = steps / output_stride + 1;

  auto laplacian = [d](const Vector& x) {
    Vector out(d);
    for (Index i = 0; i < d; ++i) {
      const double lo = i > 0 ? x[i - 1] : 0.0;
      const double hi = i + 1 < d ? x[i + 1] : 0.0;
      out[i] = hi + lo - 2.0 * x[i];
    }
    return out;
  };

  // closed form: expand x0 in the Dirichlet sine modes
  const Index n_modes = d;
  Matrix modes(d, n_modes);
  Vector rates(n_modes);
  for (int m = 1; m <= n_modes; ++m) {
    auto [lambda, v] = dirichlet_mode(d, m);
    modes.col(m - 1) = v;
    rates[m - 1] = lambda;
  }
  const Vector weights = modes.transpose() * x0;  // modes are orthonormal

  HeatRelaxation out;
  out.grid = Vector(n_out);
  out.numeric = Matrix(n_out, d);
  out.closed_form = Matrix(n_out, d);

  Vector x = x0;
  long out_row = 0;
  auto record = [&](long step) {
    const double t = static_cast<double>(step) * dt;
    out.grid[out_row] = t;
    out.numeric.row(out_row) = x.transpose();
    Vector exact = Vector::Zero(d);
    for (Index m = 0; m < n_modes; ++m)
      exact += weights[m] * std::exp(-alpha_b * rates[m] * t) * modes.col(m);
    out.closed_form.row(out_row) = exact.transpose();
    const double ref = exact.norm();
    if (ref > 0.0)
      out.max_rel_err =
          std::max(out.max_rel_err, (x - exact).norm() / ref);
    ++out_row;
  };
  record(0);
  for (long step = 1; step <= steps; ++step) {
    const Vector k1 = alpha_b * laplacian(x);
    const Vector k2 = alpha_b * laplacian(x + 0.5 * dt * k1);
    const Vector k3 = alpha_b * laplacian(x + 0.5 * dt * k2);
    const Vector k4 = alpha_b * laplacian(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % output_stride == 0) record(step);
  }
  return out;
}

std::pair<double, Vector> dirichlet_mode(Index levels, int mode) {
  if (levels < 1) throw std::invalid_argument("dirichlet_mode: levels must be >= 1");
  if (mode < 1 || mode > levels) throw std::invalid_argument("dirichlet_mode: mode out of range");
  const double n = static_cast<double>(levels + 1);
  Vector v(levels);
  for (Index i = 0; i < levels; ++i)
    v[i] = std::sin(std::numbers::pi * mode * (static_cast<double>(i) + 1.0) / n);
  v.normalize();
  const double lambda = 2.0 * (1.0 - std::cos(std::numbers::pi * mode / n));
  return {lambda, v};
}

}  // namespace hawkeslob
