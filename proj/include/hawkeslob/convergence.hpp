#pragma once

#include "hawkeslob/lob_micro.hpp"
#include "hawkeslob/meso.hpp"
#include "hawkeslob/types.hpp"

#include <cstdint>
#include <vector>

namespace hawkeslob {

/// Diffusive rescaling of a microscopic path: the event at micro time s
/// appears at time s/n with queue values divided by sqrt(n).
class RescaledPath {
 public:
  RescaledPath(MicroPath path, double n);

  double n() const { return n_; }
  double horizon() const { return path_.horizon_micro / n_; }
  const MicroPath& micro() const { return path_; }

  std::vector<double> event_times() const;    // rescaled
  Vector value_at(double t, Side side) const; // rescaled volumes
  Vector terminal(Side side) const { return value_at(horizon(), side); }

 private:
  MicroPath path_;
  double n_;
};

RescaledPath rescale_path(MicroPath path, double n);

struct MomentComparisonRow {
  long n;
  int level;  // 1-based
  double micro_mean, micro_var;
  double meso_mean, meso_var;
  double mean_rel_err, var_rel_err;
};

struct MomentComparisonReport {
  std::vector<long> n_list;
  std::vector<MomentComparisonRow> rows;
  double horizon = 0.0;
  int replicates = 0;

  double avg_err(long n, bool variance) const;  // level-averaged
  double max_err_at(long n) const;              // max over levels and both moments
  // level-averaged errors at the largest n do not exceed those at the smallest
  bool errors_decrease() const;
};

/// Runs `replicates` expansion-mode micro paths per scale, rescales them and
/// compares per-level terminal means/variances against a diagonal-noise meso
/// ensemble of the same size driven by the same coefficients.
MomentComparisonReport micro_meso_moment_comparison(const EffectiveCoefficients& coeffs,
                                                    const Vector& x0,
                                                    const std::vector<long>& n_list,
                                                    double horizon, int replicates,
                                                    std::uint64_t seed, int threads = 1,
                                                    double meso_dt = 1e-3,
                                                    bool block_boundary_migration = false);

}  // namespace hawkeslob
