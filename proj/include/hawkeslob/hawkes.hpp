#pragma once

#include "hawkeslob/rng.hpp"
#include "hawkeslob/types.hpp"

#include <cstdint>
#include <vector>

namespace hawkeslob {

/// Multivariate Hawkes process with exponential kernels,
///   lambda_i(t) = mu_i + sum_j sum_{s<t, type j} alpha(i,j) * exp(-beta(i,j) * (t-s)).
/// Construction validates parameter signs and the stability condition
/// rho(alpha ./ beta) < 1; an unstable spec is rejected with StabilityError.
class HawkesSpec {
 public:
  HawkesSpec(Vector mu, Matrix alpha, Matrix beta);

  Index size() const { return mu_.size(); }
  const Vector& mu() const { return mu_; }
  const Matrix& alpha() const { return alpha_; }
  const Matrix& beta() const { return beta_; }

 private:
  Vector mu_;
  Matrix alpha_;
  Matrix beta_;
};

struct HawkesEvent {
  double time;
  int type;
};

/// Time-ordered event record. Times strictly increasing, types in [0, M).
class EventLog {
 public:
  EventLog() = default;
  EventLog(std::vector<HawkesEvent> events, int num_types);

  const std::vector<HawkesEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  int num_types() const { return num_types_; }

  Vector counts() const;

 private:
  std::vector<HawkesEvent> events_;
  int num_types_ = 0;
};

/// Recursive intensity state: s(i,j) accumulates the excitation of type-j
/// events onto the type-i intensity; advancing by dt with no events decays
/// s entrywise by exp(-beta*dt).
class IntensityState {
 public:
  explicit IntensityState(const HawkesSpec& spec);

  double t() const { return t_; }
  const Matrix& excitation() const { return s_; }

  void advance_to(double t);
  void apply_event(int type);

  Vector intensities() const { return spec_->mu() + s_.rowwise().sum(); }
  double total_intensity() const { return spec_->mu().sum() + s_.sum(); }

  // integral of the total intensity over [t, t+dt], closed form
  double integrated_total(double dt) const;

 private:
  const HawkesSpec* spec_;
  double t_ = 0.0;
  Matrix s_;
};

/// K(i,j) = alpha(i,j)/beta(i,j), the exact integral of the exponential kernel.
Matrix branching_matrix(const HawkesSpec& spec);

/// Perron root of an entrywise non-negative square matrix by power iteration
/// (all-ones start, absolute tolerance 1e-10, cap 1e5 iterations).
double spectral_radius(const Matrix& k);

/// Solves (I - K) lambda = mu by dense LU with partial pivoting.
Vector stationary_intensity(const HawkesSpec& spec);

/// Exact left-limit intensity vector at time t from the full log
/// (events strictly before t contribute).
Vector intensity_at(const HawkesSpec& spec, const EventLog& log, double t);

/// Exact draw of the process on [0, horizon] by thinning: between events
/// every component intensity is non-increasing, so the total intensity at
/// the last accepted or rejected candidate bounds the current total.
EventLog simulate_hawkes(const HawkesSpec& spec, double horizon, SplitRng& rng);
EventLog simulate_hawkes(const HawkesSpec& spec, double horizon, std::uint64_t seed);

}  // namespace hawkeslob
