#pragma once

#include "hawkeslob/hawkes.hpp"
#include "hawkeslob/lob_micro.hpp"
#include "hawkeslob/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hawkeslob {

enum class FlowKind { up, down, migrate_out, migrate_in };

std::string to_string(FlowKind kind);
FlowKind flow_kind_from_string(const std::string& s);

/// Flat indexing of the microscopic event types of one book side:
/// each entry tags one (kind, level) mechanism, levels 1-based in [1, N-1].
struct EventTaxonomy {
  struct Entry {
    FlowKind kind;
    int level;
  };

  int depth = 0;  // N
  std::vector<Entry> entries;

  EventTaxonomy(int depth_, std::vector<Entry> entries_);
  static EventTaxonomy full(int depth);  // all four kinds at every level

  Index size() const { return static_cast<Index>(entries.size()); }
  Index levels() const { return depth - 1; }
};

struct CovarianceBundle {
  Matrix k;           // integrated kernel, M x M
  Vector lambda_bar;  // stationary intensities, length M
  Matrix sigma_n;     // count covariance, M x M
  Matrix incidence;   // (N-1) x M, entries in {-1, 0, +1}
  Matrix sigma_x;     // queue-volume covariance, (N-1) x (N-1)
  Matrix gamma;       // lower-triangular factor, gamma * gamma^T = sigma_x
};

/// Sigma_N = (I-K)^{-1} diag(lambda_bar) (I-K)^{-T} with lambda_bar = (I-K)^{-1} mu.
Matrix sigma_n_matrix(const HawkesSpec& spec);

/// Column for (up, i) is +e_i; (down, i) is -e_i; (migrate_out, i) is
/// -e_i + e_{i+1}; (migrate_in, i) is -e_i + e_{i-1}; ghost parts beyond
/// levels 1..N-1 are dropped.
Matrix build_incidence(const EventTaxonomy& taxonomy);

Matrix sigma_x_matrix(const Matrix& incidence, const Matrix& sigma_n);

struct FactorDiagnostics {
  double shift = 0.0;  // total diagonal shift applied before factoring
  int attempts = 1;
};

/// Lower-triangular gamma with gamma * gamma^T = sigma within 1e-10 Frobenius
/// for non-degenerate input. Singular matrices get a diagonal shift of
/// 1e-12 * trace/dim (escalated tenfold while Cholesky keeps failing, up to
/// the PSD tolerance), recorded in diagnostics. Indefinite input beyond
/// eigenvalue -1e-10 is rejected.
Matrix factor_psd(const Matrix& sigma, FactorDiagnostics* diagnostics = nullptr);

CovarianceBundle covariance_bundle(const HawkesSpec& spec, const EventTaxonomy& taxonomy);

struct FcltReport {
  Matrix empirical;    // covariance of normalized terminal counts
  Matrix theoretical;  // T * Sigma_N
  double frobenius_rel_err = 0.0;
  Vector mean_rate;      // empirical per-type event rate over [0, n*T]
  Vector lambda_bar;     // stationary rate
  double rate_rel_err = 0.0;  // max over types of |mean_rate - lambda_bar| / lambda_bar
  int replicates = 0;
};

/// Simulates `replicates` logs on [0, n*T] and compares the covariance of
/// (counts - n*T*lambda_bar)/sqrt(n) against T * Sigma_N.
FcltReport empirical_fclt(const HawkesSpec& spec, double n, double t_end, int replicates,
                          std::uint64_t seed, int threads = 1);

struct AssembledCovarianceInput {
  EventTaxonomy taxonomy;
  HawkesSpec spec;
  double x_ref = 1.0;
};

/// Flattens per-level hawkes-mode book parameters into one autonomous
/// M-type process with M = 4(N-1): each (kind, level) pair becomes one
/// event type, cross-level excitation is zero, queue-proportional rates
/// are frozen at the reference queue size x_ref (baselines evaluated at
/// x_ref, migration baselines and excitation jumps multiplied by x_ref).
/// Migration excitations are fed by the pooled in/out migration counts.
AssembledCovarianceInput assemble_covariance_input(const HawkesModeParams& params, int depth,
                                                   double x_ref);

}  // namespace hawkeslob
