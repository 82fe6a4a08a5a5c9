#pragma once

#include "hawkeslob/coefficients.hpp"
#include "hawkeslob/rng.hpp"
#include "hawkeslob/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hawkeslob {

enum class Side : int { bid = 0, ask = 1 };

enum class MicroEventKind : int {
  arrival = 0,      // +e_i
  removal = 1,      // -e_i
  migrate_in = 2,   // e_{i-1} - e_i (one unit toward the mid)
  migrate_out = 3,  // e_{i+1} - e_i (one unit away from the mid)
};

std::string to_string(Side side);
std::string to_string(MicroEventKind kind);

/// One elementary book transition. `level` is 1-based in [1, N-1].
struct MicroEvent {
  double time;
  Side side;
  MicroEventKind kind;
  int level;
};

/// Integer queue volumes for both sides at the N-1 tracked tick levels.
/// Levels 0 and N are ghost levels, never stored and always read as zero.
class BookState {
 public:
  BookState(int depth, IntVector bid, IntVector ask, double t = 0.0);
  static BookState zero(int depth);

  int depth() const { return depth_; }
  Index levels() const { return depth_ - 1; }
  double t() const { return t_; }
  void set_time(double t) { t_ = t; }

  const IntVector& side(Side s) const { return s == Side::bid ? bid_ : ask_; }
  /// Volume at a 1-based level; ghost levels 0 and N read as 0.
  int volume(Side s, int level) const;
  void add(Side s, int level, int delta);

 private:
  int depth_;
  IntVector bid_, ask_;
  double t_;
};

/// Per-level baseline + excitation parameters of the migration intensity
/// a_i(t) = eta_i + decaying kicks from arrival, removal and (pooled)
/// migration events at the same level. All vectors have length N-1.
struct MigrationSpec {
  Vector eta;
  Vector kappa_arrival, rho_arrival;
  Vector kappa_removal, rho_removal;
  Vector kappa_migration, rho_migration;
};

/// Baseline rate z -> max(0, c0 + c1 z), one coefficient pair per level.
struct AffineBaseline {
  Vector c0, c1;
  double operator()(Index k, double z) const {
    return std::max(0.0, c0[k] + c1[k] * z);
  }
};

/// Exponential-kernel excitation block: per-level jump and decay.
struct KernelBlock {
  Vector jump, decay;
};

struct HawkesModeParams {
  AffineBaseline arrival_baseline, removal_baseline;
  KernelBlock arrival_from_arrival;    // arrivals exciting the arrival rate
  KernelBlock arrival_from_removal;    // removals exciting the arrival rate
  KernelBlock arrival_from_migration;  // pooled migrations exciting the arrival rate
  KernelBlock removal_from_arrival;
  KernelBlock removal_from_removal;
  MigrationSpec migration;
};

struct MicroConfig {
  enum class Mode { hawkes, expansion };

  Mode mode = Mode::expansion;
  int depth = 4;
  long scale = 1;  // n
  bool block_boundary_migration = true;
  double rate_cap = 1e9;
  IntVector initial_bid, initial_ask;
  std::optional<HawkesModeParams> hawkes;
  std::optional<EffectiveCoefficients> coeffs;

  void validate() const;
};

/// Decaying excitation scalars per (side, level) for every kernel block of
/// the hawkes mode. Expansion mode keeps no excitation state.
class MicroExcitation {
 public:
  explicit MicroExcitation(const MicroConfig& config);

  double t() const { return t_; }
  void advance_to(double t);
  void apply_event(const MicroEvent& ev);

  // accumulated excitation by target rate, side s, 0-based level k
  double arrival_excitation(Side s, Index k) const;
  double removal_excitation(Side s, Index k) const;
  double migration_excitation(Side s, Index k) const;

 private:
  struct SideState {
    Eigen::ArrayXd s11, s12, s14, s21, s22, m_arr, m_rem, m_mig;
  };
  const MicroConfig* config_;
  double t_ = 0.0;
  std::array<SideState, 2> sides_;
};

/// Event rates indexed by (side, kind, 0-based level). In expansion mode
/// these are the rates of the rescaled clock; in hawkes mode, of the
/// microscopic clock.
struct MicroRates {
  std::array<Eigen::ArrayXd, 2> arrival, removal, migrate_in, migrate_out;
  int clamped = 0;  // negative expansion-mode rates clamped to zero

  double total() const;
};

MicroRates micro_rates(const BookState& state, const MicroExcitation& excitation,
                       const MicroConfig& config);

/// Applies one event; throws on an illegal event (removal or migration from
/// an empty queue). Migration at the innermost/outermost level sends the
/// unit to a ghost level: the volume leaves the tracked book.
BookState apply_event(BookState state, const MicroEvent& ev);

/// Piecewise-constant path: initial state plus the event sequence, with
/// event times on the microscopic clock.
struct MicroPath {
  BookState initial;
  std::vector<MicroEvent> events;
  double horizon_micro = 0.0;
  long scale = 1;

  BookState state_at(double t_micro) const;
  BookState terminal() const { return state_at(horizon_micro); }
};

struct MicroDiagnostics {
  long clamped = 0;
  double max_total_rate = 0.0;
  long events = 0;
};

/// Exact event-driven simulation by thinning. `horizon` is on the rescaled
/// clock in expansion mode (the microscopic path covers [0, n * horizon])
/// and on the microscopic clock in hawkes mode.
MicroPath simulate_micro(const MicroConfig& config, double horizon, SplitRng& rng,
                         MicroDiagnostics* diagnostics = nullptr);
MicroPath simulate_micro(const MicroConfig& config, double horizon, std::uint64_t seed,
                         MicroDiagnostics* diagnostics = nullptr);

}  // namespace hawkeslob
