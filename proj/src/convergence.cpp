#include "hawkeslob/convergence.hpp"

#include "hawkeslob/parallel.hpp"
#include "hawkeslob/stats.hpp"

#include <cmath>
#include <utility>

namespace hawkeslob {

RescaledPath::RescaledPath(MicroPath path, double n) : path_(std::move(path)), n_(n) {
  if (!(n_ >= 1.0)) throw std::invalid_argument("RescaledPath: n must be >= 1");
}

RescaledPath rescale_path(MicroPath path, double n) { return RescaledPath(std::move(path), n); }

std::vector<double> RescaledPath::event_times() const {
  std::vector<double> times;
  times.reserve(path_.events.size());
  for (const MicroEvent& ev : path_.events) times.push_back(ev.time / n_);
  return times;
}

Vector RescaledPath::value_at(double t, Side side) const {
  const BookState state = path_.state_at(t * n_);
  return state.side(side).cast<double>() / std::sqrt(n_);
}

double MomentComparisonReport::avg_err(long n, bool variance) const {
  double acc = 0.0;
  int count = 0;
  for (const auto& row : rows) {
    if (row.n != n) continue;
    acc += variance ? row.var_rel_err : row.mean_rel_err;
    ++count;
  }
  return count == 0 ? 0.0 : acc / count;
}

double MomentComparisonReport::max_err_at(long n) const {
  double worst = 0.0;
  for (const auto& row : rows)
    if (row.n == n) worst = std::max(worst, std::max(row.mean_rel_err, row.var_rel_err));
  return worst;
}

bool MomentComparisonReport::errors_decrease() const {
  if (n_list.size() < 2) return true;
  const long first = n_list.front(), last = n_list.back();
  return avg_err(last, false) <= avg_err(first, false) &&
         avg_err(last, true) <= avg_err(first, true);
}

namespace {

constexpr std::uint64_t kMesoStreamBase = 1ull << 40;

double rel_err(double value, double reference) {
  const double denom = std::max(std::abs(reference), 1e-12);
  return std::abs(value - reference) / denom;
}

}  // namespace

MomentComparisonReport micro_meso_moment_comparison(const EffectiveCoefficients& coeffs,
                                                    const Vector& x0,
                                                    const std::vector<long>& n_list,
                                                    double horizon, int replicates,
                                                    std::uint64_t seed, int threads,
                                                    double meso_dt,
                                                    bool block_boundary_migration) {
  if (x0.size() != coeffs.levels())
    throw std::invalid_argument("micro_meso_moment_comparison: x0 must have length N-1");
  if (replicates < 2)
    throw std::invalid_argument("micro_meso_moment_comparison: need >= 2 replicates");
  const Index levels = coeffs.levels();

  // shared meso reference ensemble (diagonal noise, Eq.-style drift)
  MesoConfig meso{coeffs, MesoConfig::NoiseMode::diagonal, std::nullopt, std::nullopt, meso_dt,
                  x0};
  MesoEnsemble meso_out;
  {
    std::vector<Matrix>* no_dump = nullptr;
    meso_out = simulate_meso(meso, horizon, replicates, seed + kMesoStreamBase, threads,
                             1 << 20, no_dump, 0);
  }
  Vector meso_mean(levels), meso_var(levels);
  for (Index k = 0; k < levels; ++k) {
    MomentAccumulator acc;
    for (Index p = 0; p < meso_out.terminal_x.rows(); ++p) acc.add(meso_out.terminal_x(p, k));
    meso_mean[k] = acc.mean();
    meso_var[k] = acc.variance();
  }

  MomentComparisonReport report;
  report.n_list = n_list;
  report.horizon = horizon;
  report.replicates = replicates;

  for (const long n : n_list) {
    MicroConfig config;
    config.mode = MicroConfig::Mode::expansion;
    config.depth = coeffs.depth();
    config.scale = n;
    config.block_boundary_migration = block_boundary_migration;
    config.coeffs = coeffs;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    config.initial_bid = IntVector(levels);
    for (Index k = 0; k < levels; ++k)
      config.initial_bid[k] = static_cast<int>(std::llround(x0[k] * sqrt_n));
    config.initial_ask = config.initial_bid;

    Matrix terminal(replicates, levels);
    parallel_chunks(static_cast<std::size_t>(replicates), threads,
                    [&](std::size_t begin, std::size_t end, std::size_t) {
                      for (std::size_t r = begin; r < end; ++r) {
                        SplitRng rng(seed, r);
                        const MicroPath path = simulate_micro(config, horizon, rng);
                        const RescaledPath rescaled(path, static_cast<double>(n));
                        terminal.row(static_cast<Index>(r)) =
                            rescaled.terminal(Side::bid).transpose();
                      }
                    });

    for (Index k = 0; k < levels; ++k) {
      MomentAccumulator acc;
      for (Index r = 0; r < replicates; ++r) acc.add(terminal(r, k));
      MomentComparisonRow row;
      row.n = n;
      row.level = static_cast<int>(k) + 1;
      row.micro_mean = acc.mean();
      row.micro_var = acc.variance();
      row.meso_mean = meso_mean[k];
      row.meso_var = meso_var[k];
      row.mean_rel_err = rel_err(row.micro_mean, row.meso_mean);
      row.var_rel_err = rel_err(row.micro_var, row.meso_var);
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace hawkeslob
