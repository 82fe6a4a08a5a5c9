#include "hawkeslob/covariance.hpp"

#include "hawkeslob/parallel.hpp"
#include "hawkeslob/stats.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>
#include <utility>

namespace hawkeslob {

std::string to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::up: return "up";
    case FlowKind::down: return "down";
    case FlowKind::migrate_out: return "migrate_out";
    case FlowKind::migrate_in: return "migrate_in";
  }
  return "?";
}

FlowKind flow_kind_from_string(const std::string& s) {
  if (s == "up") return FlowKind::up;
  if (s == "down") return FlowKind::down;
  if (s == "migrate_out") return FlowKind::migrate_out;
  if (s == "migrate_in") return FlowKind::migrate_in;
  throw std::invalid_argument("unknown event kind '" + s + "'");
}

EventTaxonomy::EventTaxonomy(int depth_, std::vector<Entry> entries_)
    : depth(depth_), entries(std::move(entries_)) {
  if (depth < 2) throw std::invalid_argument("EventTaxonomy: depth must be >= 2");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : entries) {
    if (e.level < 1 || e.level > depth - 1)
      throw std::invalid_argument("EventTaxonomy: level out of range [1, N-1]");
    if (!seen.insert({static_cast<int>(e.kind), e.level}).second)
      throw std::invalid_argument("EventTaxonomy: duplicate (kind, level) entry");
  }
}

EventTaxonomy EventTaxonomy::full(int depth) {
  std::vector<Entry> entries;
  for (int level = 1; level <= depth - 1; ++level) {
    entries.push_back({FlowKind::up, level});
    entries.push_back({FlowKind::down, level});
    entries.push_back({FlowKind::migrate_out, level});
    entries.push_back({FlowKind::migrate_in, level});
  }
  return EventTaxonomy(depth, std::move(entries));
}

Matrix sigma_n_matrix(const HawkesSpec& spec) {
  const Matrix k = branching_matrix(spec);
  if (spectral_radius(k) >= 1.0) throw StabilityError("sigma_n: spectral radius >= 1");
  const Index m = spec.size();
  const Matrix a = Matrix::Identity(m, m) - k;
  const auto lu = a.partialPivLu();
  const Vector lambda_bar = lu.solve(spec.mu());
  const Matrix inner = lu.solve(Matrix(lambda_bar.asDiagonal()));
  Matrix sigma = lu.solve(inner.transpose());
  return 0.5 * (sigma + sigma.transpose());
}

Matrix build_incidence(const EventTaxonomy& taxonomy) {
  const Index levels = taxonomy.levels();
  Matrix c = Matrix::Zero(levels, taxonomy.size());
  for (Index a = 0; a < taxonomy.size(); ++a) {
    const auto& e = taxonomy.entries[static_cast<std::size_t>(a)];
    const Index row = e.level - 1;
    switch (e.kind) {
      case FlowKind::up:
        c(row, a) = 1.0;
        break;
      case FlowKind::down:
        c(row, a) = -1.0;
        break;
      case FlowKind::migrate_out:
        c(row, a) = -1.0;
        if (e.level + 1 <= levels) c(row + 1, a) = 1.0;
        break;
      case FlowKind::migrate_in:
        c(row, a) = -1.0;
        if (e.level - 1 >= 1) c(row - 1, a) = 1.0;
        break;
    }
  }
  return c;
}

Matrix sigma_x_matrix(const Matrix& incidence, const Matrix& sigma_n) {
  if (incidence.cols() != sigma_n.rows() || sigma_n.rows() != sigma_n.cols())
    throw std::invalid_argument("sigma_x: shape mismatch");
  Matrix sigma = incidence * sigma_n * incidence.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

Matrix factor_psd(const Matrix& sigma, FactorDiagnostics* diagnostics) {
  if (sigma.rows() != sigma.cols()) throw std::invalid_argument("factor_psd: matrix not square");
  if (!sigma.isApprox(sigma.transpose(), 1e-12) &&
      (sigma - sigma.transpose()).norm() > 1e-10 * std::max(1.0, sigma.norm()))
    throw std::invalid_argument("factor_psd: matrix not symmetric");
  const Index dim = sigma.rows();
  constexpr double kEigTol = -1e-10;

  FactorDiagnostics local;
  Matrix shifted = sigma;
  double shift = 0.0;
  const double base_shift = 1e-12 * std::abs(sigma.trace()) / static_cast<double>(dim);
  for (int attempt = 0;; ++attempt) {
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() == Eigen::Success) {
      local.shift = shift;
      local.attempts = attempt + 1;
      if (diagnostics) *diagnostics = local;
      return llt.matrixL();
    }
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Matrix>(sigma, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (min_eig < kEigTol)
      throw std::invalid_argument("factor_psd: matrix is not positive semi-definite (min eig " +
                                  std::to_string(min_eig) + ")");
    const double step =
        (base_shift > 0.0 ? base_shift : 1e-12) * std::pow(10.0, attempt);
    if (step > 1e-6)
      throw NumericalError("factor_psd: could not stabilize Cholesky factorization");
    shifted = sigma + step * Matrix::Identity(dim, dim);
    shift = step;
  }
}

CovarianceBundle covariance_bundle(const HawkesSpec& spec, const EventTaxonomy& taxonomy) {
  if (spec.size() != taxonomy.size())
    throw std::invalid_argument("covariance_bundle: spec dimension != taxonomy size");
  CovarianceBundle bundle;
  bundle.k = branching_matrix(spec);
  bundle.lambda_bar = stationary_intensity(spec);
  bundle.sigma_n = sigma_n_matrix(spec);
  bundle.incidence = build_incidence(taxonomy);
  bundle.sigma_x = sigma_x_matrix(bundle.incidence, bundle.sigma_n);
  bundle.gamma = factor_psd(bundle.sigma_x);
  return bundle;
}

AssembledCovarianceInput assemble_covariance_input(const HawkesModeParams& params, int depth,
                                                   double x_ref) {
  if (!(x_ref >= 0.0)) throw std::invalid_argument("assemble_covariance_input: x_ref must be >= 0");
  const EventTaxonomy taxonomy = EventTaxonomy::full(depth);
  const Index m = taxonomy.size();
  Vector mu = Vector::Zero(m);
  Matrix alpha = Matrix::Zero(m, m);
  Matrix beta = Matrix::Ones(m, m);

  // flat index of (kind, level) in EventTaxonomy::full ordering
  auto idx = [&](FlowKind kind, Index k) {
    return 4 * k + static_cast<Index>(kind);
  };

  const Index levels = depth - 1;
  for (Index k = 0; k < levels; ++k) {
    const Index up = idx(FlowKind::up, k);
    const Index down = idx(FlowKind::down, k);
    const Index mig_out = idx(FlowKind::migrate_out, k);
    const Index mig_in = idx(FlowKind::migrate_in, k);

    mu[up] = params.arrival_baseline(k, x_ref);
    mu[down] = params.removal_baseline(k, x_ref);
    mu[mig_out] = params.migration.eta[k] * x_ref;
    mu[mig_in] = params.migration.eta[k] * x_ref;

    auto set = [&](Index target, Index source, double jump, double decay) {
      alpha(target, source) = jump;
      if (jump > 0.0) beta(target, source) = decay;
    };
    set(up, up, params.arrival_from_arrival.jump[k], params.arrival_from_arrival.decay[k]);
    set(up, down, params.arrival_from_removal.jump[k], params.arrival_from_removal.decay[k]);
    set(up, mig_out, params.arrival_from_migration.jump[k],
        params.arrival_from_migration.decay[k]);
    set(up, mig_in, params.arrival_from_migration.jump[k],
        params.arrival_from_migration.decay[k]);
    set(down, up, params.removal_from_arrival.jump[k], params.removal_from_arrival.decay[k]);
    set(down, down, params.removal_from_removal.jump[k], params.removal_from_removal.decay[k]);
    for (const Index mig : {mig_out, mig_in}) {
      set(mig, up, params.migration.kappa_arrival[k] * x_ref, params.migration.rho_arrival[k]);
      set(mig, down, params.migration.kappa_removal[k] * x_ref, params.migration.rho_removal[k]);
      set(mig, mig_out, params.migration.kappa_migration[k] * x_ref,
          params.migration.rho_migration[k]);
      set(mig, mig_in, params.migration.kappa_migration[k] * x_ref,
          params.migration.rho_migration[k]);
    }
  }
  return AssembledCovarianceInput{taxonomy, HawkesSpec(std::move(mu), std::move(alpha),
                                                       std::move(beta)),
                                  x_ref};
}

FcltReport empirical_fclt(const HawkesSpec& spec, double n, double t_end, int replicates,
                          std::uint64_t seed, int threads) {
  if (!(n > 0.0)) throw std::invalid_argument("empirical_fclt: n must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("empirical_fclt: T must be > 0");
  if (replicates < 2) throw std::invalid_argument("empirical_fclt: need >= 2 replicates");

  const Index m = spec.size();
  const Vector lambda_bar = stationary_intensity(spec);
  const double horizon = n * t_end;
  const double sqrt_n = std::sqrt(n);

  Matrix normalized(replicates, m);
  Matrix counts(replicates, m);
  parallel_chunks(static_cast<std::size_t>(replicates), threads,
                  [&](std::size_t begin, std::size_t end, std::size_t) {
                    for (std::size_t r = begin; r < end; ++r) {
                      SplitRng rng(seed, r);
                      const EventLog log = simulate_hawkes(spec, horizon, rng);
                      const Vector c = log.counts();
                      counts.row(static_cast<Index>(r)) = c.transpose();
                      normalized.row(static_cast<Index>(r)) =
                          ((c - horizon * lambda_bar) / sqrt_n).transpose();
                    }
                  });

  FcltReport report;
  report.replicates = replicates;
  report.lambda_bar = lambda_bar;
  report.empirical = sample_covariance(normalized);
  report.theoretical = t_end * sigma_n_matrix(spec);
  report.frobenius_rel_err = frobenius_relative_error(report.empirical, report.theoretical);
  report.mean_rate = counts.colwise().mean().transpose() / horizon;
  double rate_err = 0.0;
  for (Index i = 0; i < m; ++i) {
    if (lambda_bar[i] > 0.0)
      rate_err = std::max(rate_err, std::abs(report.mean_rate[i] - lambda_bar[i]) / lambda_bar[i]);
    else if (report.mean_rate[i] != 0.0)
      rate_err = std::numeric_limits<double>::infinity();
  }
  report.rate_rel_err = rate_err;
  return report;
}

}  // namespace hawkeslob
