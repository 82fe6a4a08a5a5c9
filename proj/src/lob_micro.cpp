#include "hawkeslob/lob_micro.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace hawkeslob {

namespace {

void check_level_vector(const Vector& v, Index levels, const char* name, bool allow_negative) {
  if (v.size() != levels)
    throw std::invalid_argument(std::string("MicroConfig: ") + name + " must have length N-1");
  for (Index i = 0; i < levels; ++i) {
    if (!std::isfinite(v[i]))
      throw std::invalid_argument(std::string("MicroConfig: ") + name + " must be finite");
    if (!allow_negative && v[i] < 0.0)
      throw std::invalid_argument(std::string("MicroConfig: ") + name + " must be >= 0");
  }
}

void check_kernel_block(const KernelBlock& block, Index levels, const char* name) {
  check_level_vector(block.jump, levels, name, false);
  if (block.decay.size() != levels)
    throw std::invalid_argument(std::string("MicroConfig: ") + name + " decay length mismatch");
  for (Index i = 0; i < levels; ++i) {
    if (!std::isfinite(block.decay[i]))
      throw std::invalid_argument(std::string("MicroConfig: ") + name + " decay must be finite");
    if (block.jump[i] > 0.0 && block.decay[i] <= 0.0)
      throw std::invalid_argument(std::string("MicroConfig: ") + name +
                                  " decay must be > 0 where the jump is > 0");
  }
}

double block_ratio(const KernelBlock& block, Index k) {
  return block.jump[k] > 0.0 ? block.jump[k] / block.decay[k] : 0.0;
}

}  // namespace

std::string to_string(Side side) { return side == Side::bid ? "bid" : "ask"; }

std::string to_string(MicroEventKind kind) {
  switch (kind) {
    case MicroEventKind::arrival: return "arrival";
    case MicroEventKind::removal: return "removal";
    case MicroEventKind::migrate_in: return "migrate_in";
    case MicroEventKind::migrate_out: return "migrate_out";
  }
  return "?";
}

BookState::BookState(int depth, IntVector bid, IntVector ask, double t)
    : depth_(depth), bid_(std::move(bid)), ask_(std::move(ask)), t_(t) {
  if (depth_ < 2) throw std::invalid_argument("BookState: depth must be >= 2");
  if (bid_.size() != depth_ - 1 || ask_.size() != depth_ - 1)
    throw std::invalid_argument("BookState: queue vectors must have length N-1");
  if ((bid_.array() < 0).any() || (ask_.array() < 0).any())
    throw std::invalid_argument("BookState: volumes must be non-negative");
}

BookState BookState::zero(int depth) {
  return BookState(depth, IntVector::Zero(depth - 1), IntVector::Zero(depth - 1));
}

int BookState::volume(Side s, int level) const {
  if (level <= 0 || level >= depth_) return 0;
  return side(s)[level - 1];
}

void BookState::add(Side s, int level, int delta) {
  IntVector& q = s == Side::bid ? bid_ : ask_;
  q[level - 1] += delta;
}

void MicroConfig::validate() const {
  if (depth < 2) throw std::invalid_argument("MicroConfig: depth must be >= 2");
  if (scale < 1) throw std::invalid_argument("MicroConfig: scale must be >= 1");
  if (!(rate_cap > 0.0)) throw std::invalid_argument("MicroConfig: rate_cap must be > 0");
  const Index levels = depth - 1;
  if (initial_bid.size() != levels || initial_ask.size() != levels)
    throw std::invalid_argument("MicroConfig: initial volumes must have length N-1");
  if ((initial_bid.array() < 0).any() || (initial_ask.array() < 0).any())
    throw std::invalid_argument("MicroConfig: initial volumes must be >= 0");

  if (mode == Mode::hawkes) {
    if (!hawkes) throw std::invalid_argument("MicroConfig: hawkes mode needs hawkes params");
    const HawkesModeParams& p = *hawkes;
    check_level_vector(p.arrival_baseline.c0, levels, "arrival c0", true);
    check_level_vector(p.arrival_baseline.c1, levels, "arrival c1", true);
    check_level_vector(p.removal_baseline.c0, levels, "removal c0", true);
    check_level_vector(p.removal_baseline.c1, levels, "removal c1", true);
    check_kernel_block(p.arrival_from_arrival, levels, "arrival_from_arrival");
    check_kernel_block(p.arrival_from_removal, levels, "arrival_from_removal");
    check_kernel_block(p.arrival_from_migration, levels, "arrival_from_migration");
    check_kernel_block(p.removal_from_arrival, levels, "removal_from_arrival");
    check_kernel_block(p.removal_from_removal, levels, "removal_from_removal");
    check_level_vector(p.migration.eta, levels, "migration eta", false);
    check_kernel_block({p.migration.kappa_arrival, p.migration.rho_arrival}, levels,
                       "migration kappa_arrival");
    check_kernel_block({p.migration.kappa_removal, p.migration.rho_removal}, levels,
                       "migration kappa_removal");
    check_kernel_block({p.migration.kappa_migration, p.migration.rho_migration}, levels,
                       "migration kappa_migration");
    // Stability of the per-level (arrival, removal) Hawkes block. The
    // state-dependent migration loop has no linear stability criterion and
    // is guarded by rate_cap at run time instead.
    for (Index k = 0; k < levels; ++k) {
      Matrix block(2, 2);
      block << block_ratio(p.arrival_from_arrival, k), block_ratio(p.arrival_from_removal, k),
          block_ratio(p.removal_from_arrival, k), block_ratio(p.removal_from_removal, k);
      const double trace = block(0, 0) + block(1, 1);
      const double det = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
      const double rho = 0.5 * (trace + std::sqrt(std::max(0.0, trace * trace - 4.0 * det)));
      if (rho >= 1.0)
        throw StabilityError("MicroConfig: level " + std::to_string(k + 1) +
                             " arrival/removal block has spectral radius >= 1");
    }
  } else {
    if (!coeffs) throw std::invalid_argument("MicroConfig: expansion mode needs coefficients");
    if (coeffs->depth() != depth)
      throw std::invalid_argument("MicroConfig: coefficients depth != book depth");
  }
}

MicroExcitation::MicroExcitation(const MicroConfig& config) : config_(&config) {
  if (config.mode == MicroConfig::Mode::hawkes) {
    const Index levels = config.depth - 1;
    for (auto& s : sides_) {
      s.s11 = s.s12 = s.s14 = s.s21 = s.s22 = Eigen::ArrayXd::Zero(levels);
      s.m_arr = s.m_rem = s.m_mig = Eigen::ArrayXd::Zero(levels);
    }
  }
}

void MicroExcitation::advance_to(double t) {
  if (t < t_) throw std::invalid_argument("MicroExcitation: cannot advance backwards");
  const double dt = t - t_;
  t_ = t;
  if (dt <= 0.0 || config_->mode != MicroConfig::Mode::hawkes) return;
  const HawkesModeParams& p = *config_->hawkes;
  for (auto& s : sides_) {
    s.s11 *= (-p.arrival_from_arrival.decay.array() * dt).exp();
    s.s12 *= (-p.arrival_from_removal.decay.array() * dt).exp();
    s.s14 *= (-p.arrival_from_migration.decay.array() * dt).exp();
    s.s21 *= (-p.removal_from_arrival.decay.array() * dt).exp();
    s.s22 *= (-p.removal_from_removal.decay.array() * dt).exp();
    s.m_arr *= (-p.migration.rho_arrival.array() * dt).exp();
    s.m_rem *= (-p.migration.rho_removal.array() * dt).exp();
    s.m_mig *= (-p.migration.rho_migration.array() * dt).exp();
  }
}

void MicroExcitation::apply_event(const MicroEvent& ev) {
  if (config_->mode != MicroConfig::Mode::hawkes) return;
  const HawkesModeParams& p = *config_->hawkes;
  SideState& s = sides_[static_cast<int>(ev.side)];
  const Index k = ev.level - 1;
  switch (ev.kind) {
    case MicroEventKind::arrival:
      s.s11[k] += p.arrival_from_arrival.jump[k];
      s.s21[k] += p.removal_from_arrival.jump[k];
      s.m_arr[k] += p.migration.kappa_arrival[k];
      break;
    case MicroEventKind::removal:
      s.s12[k] += p.arrival_from_removal.jump[k];
      s.s22[k] += p.removal_from_removal.jump[k];
      s.m_rem[k] += p.migration.kappa_removal[k];
      break;
    case MicroEventKind::migrate_in:
    case MicroEventKind::migrate_out:
      // migrations feed the pooled migration kernels regardless of direction
      s.s14[k] += p.arrival_from_migration.jump[k];
      s.m_mig[k] += p.migration.kappa_migration[k];
      break;
  }
}

double MicroExcitation::arrival_excitation(Side side, Index k) const {
  const SideState& s = sides_[static_cast<int>(side)];
  return s.s11[k] + s.s12[k] + s.s14[k];
}

double MicroExcitation::removal_excitation(Side side, Index k) const {
  const SideState& s = sides_[static_cast<int>(side)];
  return s.s21[k] + s.s22[k];
}

double MicroExcitation::migration_excitation(Side side, Index k) const {
  const SideState& s = sides_[static_cast<int>(side)];
  return s.m_arr[k] + s.m_rem[k] + s.m_mig[k];
}

double MicroRates::total() const {
  double acc = 0.0;
  for (int s = 0; s < 2; ++s)
    acc += arrival[s].sum() + removal[s].sum() + migrate_in[s].sum() + migrate_out[s].sum();
  return acc;
}

MicroRates micro_rates(const BookState& state, const MicroExcitation& excitation,
                       const MicroConfig& config) {
  const Index levels = state.levels();
  MicroRates rates;
  for (int s = 0; s < 2; ++s) {
    rates.arrival[s] = Eigen::ArrayXd::Zero(levels);
    rates.removal[s] = Eigen::ArrayXd::Zero(levels);
    rates.migrate_in[s] = Eigen::ArrayXd::Zero(levels);
    rates.migrate_out[s] = Eigen::ArrayXd::Zero(levels);
  }

  if (config.mode == MicroConfig::Mode::hawkes) {
    const HawkesModeParams& p = *config.hawkes;
    for (int s = 0; s < 2; ++s) {
      const Side side = static_cast<Side>(s);
      for (Index k = 0; k < levels; ++k) {
        const int z = state.volume(side, static_cast<int>(k) + 1);
        rates.arrival[s][k] =
            p.arrival_baseline(k, z) + excitation.arrival_excitation(side, k);
        rates.removal[s][k] =
            z > 0 ? p.removal_baseline(k, z) + excitation.removal_excitation(side, k) : 0.0;
        const double per_unit = p.migration.eta[k] + excitation.migration_excitation(side, k);
        const double mig = per_unit * z;
        rates.migrate_in[s][k] =
            (config.block_boundary_migration && k == 0) ? 0.0 : mig;
        rates.migrate_out[s][k] =
            (config.block_boundary_migration && k == levels - 1) ? 0.0 : mig;
      }
    }
    return rates;
  }

  const EffectiveCoefficients& coeffs = *config.coeffs;
  const double n = static_cast<double>(config.scale);
  const double sqrt_n = std::sqrt(n);
  for (int s = 0; s < 2; ++s) {
    for (Index k = 0; k < levels; ++k) {
      const int z = state.volume(static_cast<Side>(s), static_cast<int>(k) + 1);
      const double zt = static_cast<double>(z) / sqrt_n;
      const double up = 0.5 * n * coeffs.sigma_sq(k, zt) + sqrt_n * coeffs.f(k, zt);
      if (up < 0.0) ++rates.clamped;
      rates.arrival[s][k] = std::max(0.0, up);
      if (z > 0) {
        const double down = 0.5 * n * coeffs.sigma_sq(k, zt) + sqrt_n * coeffs.g(k, zt);
        if (down < 0.0) ++rates.clamped;
        rates.removal[s][k] = std::max(0.0, down);
      }
      const double mig = sqrt_n * coeffs.alpha_b() * zt;
      rates.migrate_in[s][k] = (config.block_boundary_migration && k == 0) ? 0.0 : mig;
      rates.migrate_out[s][k] =
          (config.block_boundary_migration && k == levels - 1) ? 0.0 : mig;
    }
  }
  return rates;
}

BookState apply_event(BookState state, const MicroEvent& ev) {
  const int levels = state.depth() - 1;
  if (ev.level < 1 || ev.level > levels)
    throw std::invalid_argument("apply_event: level out of range");
  switch (ev.kind) {
    case MicroEventKind::arrival:
      state.add(ev.side, ev.level, 1);
      break;
    case MicroEventKind::removal:
      if (state.volume(ev.side, ev.level) < 1)
        throw std::invalid_argument("apply_event: removal from empty queue at level " +
                                    std::to_string(ev.level));
      state.add(ev.side, ev.level, -1);
      break;
    case MicroEventKind::migrate_in:
      if (state.volume(ev.side, ev.level) < 1)
        throw std::invalid_argument("apply_event: migration from empty queue at level " +
                                    std::to_string(ev.level));
      state.add(ev.side, ev.level, -1);
      if (ev.level - 1 >= 1) state.add(ev.side, ev.level - 1, 1);
      break;
    case MicroEventKind::migrate_out:
      if (state.volume(ev.side, ev.level) < 1)
        throw std::invalid_argument("apply_event: migration from empty queue at level " +
                                    std::to_string(ev.level));
      state.add(ev.side, ev.level, -1);
      if (ev.level + 1 <= levels) state.add(ev.side, ev.level + 1, 1);
      break;
  }
  state.set_time(ev.time);
  return state;
}

BookState MicroPath::state_at(double t_micro) const {
  BookState state = initial;
  for (const MicroEvent& ev : events) {
    if (ev.time > t_micro) break;
    state = apply_event(std::move(state), ev);
  }
  state.set_time(t_micro);
  return state;
}

MicroPath simulate_micro(const MicroConfig& config, double horizon, SplitRng& rng,
                         MicroDiagnostics* diagnostics) {
  config.validate();
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_micro: horizon must be > 0");

  const bool expansion = config.mode == MicroConfig::Mode::expansion;
  // expansion mode runs on the rescaled clock; event stamps are converted
  // back to the microscopic clock (t_micro = n * t_meso)
  const double clock_factor = expansion ? static_cast<double>(config.scale) : 1.0;

  BookState state(config.depth, config.initial_bid, config.initial_ask);
  MicroExcitation excitation(config);
  MicroPath path{state, {}, horizon * clock_factor, config.scale};
  MicroDiagnostics diag;

  MicroRates rates = micro_rates(state, excitation, config);
  diag.clamped += rates.clamped;
  double bound = rates.total();
  diag.max_total_rate = bound;
  double t_sim = 0.0;

  const Index levels = state.levels();
  while (bound > 0.0) {
    const double wait = rng.exponential(bound);
    const double candidate = t_sim + wait;
    if (candidate > horizon) break;
    excitation.advance_to(candidate);
    state.set_time(candidate * clock_factor);
    const MicroRates current = micro_rates(state, excitation, config);
    diag.clamped += current.clamped;
    const double total = current.total();
    if (total > config.rate_cap)
      throw NumericalError("simulate_micro: total rate " + std::to_string(total) +
                           " exceeds the cap at t = " + std::to_string(candidate));
    diag.max_total_rate = std::max(diag.max_total_rate, total);

    const double v = rng.uniform01() * bound;
    if (v <= total) {
      // v is uniform on (0, total) given acceptance: scan in fixed order
      MicroEvent ev{candidate * clock_factor, Side::bid, MicroEventKind::arrival, 1};
      MicroEvent last_positive = ev;
      double acc = 0.0;
      bool found = false;
      for (int s = 0; s < 2 && !found; ++s) {
        const std::pair<const Eigen::ArrayXd*, MicroEventKind> groups[] = {
            {&current.arrival[s], MicroEventKind::arrival},
            {&current.removal[s], MicroEventKind::removal},
            {&current.migrate_in[s], MicroEventKind::migrate_in},
            {&current.migrate_out[s], MicroEventKind::migrate_out},
        };
        for (const auto& [row, kind] : groups) {
          for (Index k = 0; k < levels && !found; ++k) {
            const double r = (*row)[k];
            if (r <= 0.0) continue;
            last_positive = {ev.time, static_cast<Side>(s), kind, static_cast<int>(k) + 1};
            acc += r;
            if (v <= acc) {
              ev = last_positive;
              found = true;
            }
          }
          if (found) break;
        }
      }
      // a rounding sliver above the scanned sum falls to the last category
      if (!found) ev = last_positive;
      state = apply_event(std::move(state), ev);
      excitation.apply_event(ev);
      path.events.push_back(ev);
      ++diag.events;
      rates = micro_rates(state, excitation, config);
      diag.clamped += rates.clamped;
      bound = rates.total();
      diag.max_total_rate = std::max(diag.max_total_rate, bound);
    } else {
      bound = total;
    }
    t_sim = candidate;
  }
  if (diagnostics) *diagnostics = diag;
  return path;
}

MicroPath simulate_micro(const MicroConfig& config, double horizon, std::uint64_t seed,
                         MicroDiagnostics* diagnostics) {
  SplitRng rng(seed, 0);
  return simulate_micro(config, horizon, rng, diagnostics);
}

}  // namespace hawkeslob
