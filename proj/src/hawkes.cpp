#include "hawkeslob/hawkes.hpp"

#include <cmath>
#include <string>

namespace hawkeslob {

namespace {

Matrix branching_from(const Matrix& alpha, const Matrix& beta) {
  return (alpha.array() > 0.0).select(alpha.array() / beta.array(), 0.0);
}

}  // namespace

HawkesSpec::HawkesSpec(Vector mu, Matrix alpha, Matrix beta)
    : mu_(std::move(mu)), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  const Index m = mu_.size();
  if (m == 0) throw std::invalid_argument("HawkesSpec: mu must be non-empty");
  if (alpha_.rows() != m || alpha_.cols() != m)
    throw std::invalid_argument("HawkesSpec: alpha must be M x M");
  if (beta_.rows() != m || beta_.cols() != m)
    throw std::invalid_argument("HawkesSpec: beta must be M x M");
  for (Index i = 0; i < m; ++i) {
    if (!std::isfinite(mu_[i]) || mu_[i] < 0.0)
      throw std::invalid_argument("HawkesSpec: mu[" + std::to_string(i) +
                                  "] must be finite and >= 0");
    for (Index j = 0; j < m; ++j) {
      const double a = alpha_(i, j);
      const double b = beta_(i, j);
      if (!std::isfinite(a) || a < 0.0)
        throw std::invalid_argument("HawkesSpec: alpha entries must be finite and >= 0");
      if (!std::isfinite(b))
        throw std::invalid_argument("HawkesSpec: beta entries must be finite");
      if (a > 0.0 && b <= 0.0)
        throw std::invalid_argument("HawkesSpec: beta must be > 0 wherever alpha > 0");
    }
  }
  const double rho = spectral_radius(branching_from(alpha_, beta_));
  if (rho >= 1.0)
    throw StabilityError("HawkesSpec: unstable, spectral radius " + std::to_string(rho) +
                         " >= 1");
}

EventLog::EventLog(std::vector<HawkesEvent> events, int num_types)
    : events_(std::move(events)), num_types_(num_types) {
  if (num_types_ <= 0) throw std::invalid_argument("EventLog: num_types must be positive");
  double last = -1.0;
  for (const auto& ev : events_) {
    if (!(ev.time >= 0.0) || !std::isfinite(ev.time))
      throw std::invalid_argument("EventLog: times must be finite and non-negative");
    if (ev.time <= last)
      throw std::invalid_argument("EventLog: times must be strictly increasing");
    if (ev.type < 0 || ev.type >= num_types_)
      throw std::invalid_argument("EventLog: type out of range");
    last = ev.time;
  }
}

Vector EventLog::counts() const {
  Vector c = Vector::Zero(num_types_);
  for (const auto& ev : events_) c[ev.type] += 1.0;
  return c;
}

IntensityState::IntensityState(const HawkesSpec& spec)
    : spec_(&spec), s_(Matrix::Zero(spec.size(), spec.size())) {}

void IntensityState::advance_to(double t) {
  if (t < t_) throw std::invalid_argument("IntensityState: cannot advance backwards");
  const double dt = t - t_;
  if (dt > 0.0) {
    s_ = s_.array() * (-spec_->beta().array() * dt).exp();
    t_ = t;
  }
}

void IntensityState::apply_event(int type) {
  s_.col(type) += spec_->alpha().col(type);
}

double IntensityState::integrated_total(double dt) const {
  double acc = spec_->mu().sum() * dt;
  const Index m = spec_->size();
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      const double s = s_(i, j);
      if (s != 0.0) {
        const double b = spec_->beta()(i, j);
        acc += s * (1.0 - std::exp(-b * dt)) / b;
      }
    }
  }
  return acc;
}

Matrix branching_matrix(const HawkesSpec& spec) {
  return branching_from(spec.alpha(), spec.beta());
}

double spectral_radius(const Matrix& k) {
  if (k.rows() != k.cols()) throw std::invalid_argument("spectral_radius: matrix not square");
  if ((k.array() < 0.0).any())
    throw std::invalid_argument("spectral_radius: matrix must be entrywise non-negative");
  const Index m = k.rows();
  // Shift by the identity: K + I has a strictly dominant eigenvalue rho(K) + 1
  // for non-negative K, which removes the oscillation of periodic matrices.
  Vector x = Vector::Ones(m) / std::sqrt(static_cast<double>(m));
  double estimate = 0.0;
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 100000;
  for (int it = 0; it < kMaxIter; ++it) {
    Vector y = k * x + x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    y /= norm;
    const double next = y.dot(k * y + y);
    if (std::abs(next - estimate) < kTol) return std::max(0.0, next - 1.0);
    estimate = next;
    x = std::move(y);
  }
  throw NumericalError("spectral_radius: power iteration did not converge");
}

Vector stationary_intensity(const HawkesSpec& spec) {
  const Matrix k = branching_matrix(spec);
  if (spectral_radius(k) >= 1.0)
    throw StabilityError("stationary_intensity: spectral radius >= 1");
  const Matrix a = Matrix::Identity(k.rows(), k.cols()) - k;
  return a.partialPivLu().solve(spec.mu());
}

Vector intensity_at(const HawkesSpec& spec, const EventLog& log, double t) {
  if (t < 0.0) throw std::invalid_argument("intensity_at: t must be >= 0");
  Vector lambda = spec.mu();
  for (const auto& ev : log.events()) {
    if (ev.time >= t) break;
    const double dt = t - ev.time;
    lambda += (spec.alpha().col(ev.type).array() *
               (-spec.beta().col(ev.type).array() * dt).exp())
                  .matrix();
  }
  return lambda;
}

EventLog simulate_hawkes(const HawkesSpec& spec, double horizon, SplitRng& rng) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_hawkes: horizon must be > 0");
  IntensityState state(spec);
  std::vector<HawkesEvent> events;
  double bound = state.total_intensity();
  while (bound > 0.0) {
    const double wait = rng.exponential(bound);
    const double candidate = state.t() + wait;
    if (candidate > horizon) break;
    state.advance_to(candidate);
    const Vector lambda = state.intensities();
    const double total = lambda.sum();
    // v is uniform on (0, bound); conditioned on acceptance it is uniform on
    // (0, total), so it doubles as the type selector.
    const double v = rng.uniform01() * bound;
    if (v <= total) {
      int type = static_cast<int>(spec.size()) - 1;
      double acc = 0.0;
      for (Index i = 0; i < spec.size(); ++i) {
        acc += lambda[i];
        if (v <= acc) {
          type = static_cast<int>(i);
          break;
        }
      }
      state.apply_event(type);
      events.push_back({candidate, type});
      bound = state.total_intensity();
    } else {
      bound = total;
    }
  }
  return EventLog(std::move(events), static_cast<int>(spec.size()));
}

EventLog simulate_hawkes(const HawkesSpec& spec, double horizon, std::uint64_t seed) {
  SplitRng rng(seed, 0);
  return simulate_hawkes(spec, horizon, rng);
}

}  // namespace hawkeslob
