#include "hawkeslob/covariance.hpp"
#include "hawkeslob/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace hawkeslob;

namespace {

HawkesSpec scalar_spec(double mu, double alpha, double beta) {
  Vector m(1);
  m << mu;
  Matrix a(1, 1), b(1, 1);
  a << alpha;
  b << beta;
  return HawkesSpec(m, a, b);
}

Matrix random_psd(Index dim, std::uint64_t seed) {
  SplitRng rng(seed, 0);
  Matrix a(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) a(i, j) = 2.0 * rng.uniform01() - 1.0;
  return a * a.transpose();
}

}  // namespace

TEST_CASE("sigma_n: Poisson case is diag(mu)") {
  Vector mu(3);
  mu << 1.0, 2.5, 0.3;
  const HawkesSpec spec(mu, Matrix::Zero(3, 3), Matrix::Ones(3, 3));
  const Matrix sigma = sigma_n_matrix(spec);
  CHECK((sigma - Matrix(mu.asDiagonal())).norm() == doctest::Approx(0.0));
}

TEST_CASE("sigma_n: scalar closed form") {
  const HawkesSpec spec = scalar_spec(1.0, 0.5, 1.0);
  // lambda_bar = 2, sigma = 2 * 2 * 2 = 8
  CHECK(sigma_n_matrix(spec)(0, 0) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("sigma_n is symmetric positive semi-definite") {
  Matrix alpha(3, 3), beta(3, 3);
  alpha << 0.2, 0.1, 0.0, 0.05, 0.3, 0.1, 0.0, 0.2, 0.25;
  beta = Matrix::Ones(3, 3) * 1.3;
  Vector mu(3);
  mu << 0.5, 1.0, 0.7;
  const HawkesSpec spec(mu, alpha, beta);
  const Matrix sigma = sigma_n_matrix(spec);
  CHECK((sigma - sigma.transpose()).norm() < 1e-12);
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(sigma, Eigen::EigenvaluesOnly);
  CHECK(solver.eigenvalues()(0) >= -1e-10);
}

TEST_CASE("incidence matrix columns") {
  SUBCASE("up and down") {
    const EventTaxonomy tax(4, {{FlowKind::up, 2}, {FlowKind::down, 1}});
    const Matrix c = build_incidence(tax);
    Vector up(3), down(3);
    up << 0, 1, 0;
    down << -1, 0, 0;
    CHECK((c.col(0) - up).norm() == doctest::Approx(0.0));
    CHECK((c.col(1) - down).norm() == doctest::Approx(0.0));
  }
  SUBCASE("interior migration moves one unit up a level") {
    const EventTaxonomy tax(4, {{FlowKind::migrate_out, 2}});
    Vector expected(3);
    expected << 0, -1, 1;
    CHECK((build_incidence(tax).col(0) - expected).norm() == doctest::Approx(0.0));
  }
  SUBCASE("migration at the outermost level drops into the ghost") {
    const EventTaxonomy tax(4, {{FlowKind::migrate_out, 3}});
    Vector expected(3);
    expected << 0, 0, -1;
    CHECK((build_incidence(tax).col(0) - expected).norm() == doctest::Approx(0.0));
  }
  SUBCASE("migration at level one absorbs toward the mid") {
    const EventTaxonomy tax(4, {{FlowKind::migrate_in, 1}});
    Vector expected(3);
    expected << -1, 0, 0;
    CHECK((build_incidence(tax).col(0) - expected).norm() == doctest::Approx(0.0));
  }
  SUBCASE("duplicates are rejected") {
    CHECK_THROWS_AS(EventTaxonomy(4, {{FlowKind::up, 1}, {FlowKind::up, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(EventTaxonomy(4, {{FlowKind::up, 4}}), std::invalid_argument);
  }
}

TEST_CASE("sigma_x examples") {
  SUBCASE("identity incidence passes sigma_n through") {
    const Matrix sigma_n = random_psd(3, 5);
    CHECK((sigma_x_matrix(Matrix::Identity(3, 3), sigma_n) - sigma_n).norm() < 1e-12);
  }
  SUBCASE("single level with up/down Poisson rates") {
    const EventTaxonomy tax(2, {{FlowKind::up, 1}, {FlowKind::down, 1}});
    const Matrix c = build_incidence(tax);
    Matrix sigma_n = Matrix::Zero(2, 2);
    sigma_n(0, 0) = 1.7;  // lambda_u
    sigma_n(1, 1) = 0.6;  // lambda_d
    const Matrix sigma_x = sigma_x_matrix(c, sigma_n);
    CHECK(sigma_x(0, 0) == doctest::Approx(2.3).epsilon(1e-14));
  }
  SUBCASE("one interior migration type gives the rank-1 form") {
    const EventTaxonomy tax(3, {{FlowKind::migrate_out, 1}});
    const Matrix c = build_incidence(tax);
    Matrix sigma_n = Matrix::Zero(1, 1);
    sigma_n(0, 0) = 0.9;  // stationary rate nu
    const Matrix sigma_x = sigma_x_matrix(c, sigma_n);
    Matrix expected(2, 2);
    expected << 0.9, -0.9, -0.9, 0.9;
    CHECK((sigma_x - expected).norm() < 1e-12);
  }
  SUBCASE("shape mismatch is rejected") {
    CHECK_THROWS_AS(sigma_x_matrix(Matrix::Ones(2, 3), Matrix::Ones(2, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("migration-only sigma_x annihilates the all-ones vector") {
  // interior migrations only: every incidence column sums to zero
  const EventTaxonomy tax(5, {{FlowKind::migrate_out, 1},
                              {FlowKind::migrate_out, 2},
                              {FlowKind::migrate_out, 3},
                              {FlowKind::migrate_in, 2},
                              {FlowKind::migrate_in, 3},
                              {FlowKind::migrate_in, 4}});
  const Matrix c = build_incidence(tax);
  CHECK(c.colwise().sum().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  const Matrix sigma_x = sigma_x_matrix(c, random_psd(tax.size(), 8));
  CHECK((sigma_x * Vector::Ones(4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("factor_psd") {
  SUBCASE("identity") {
    CHECK((factor_psd(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() <
          1e-14);
  }
  SUBCASE("hand Cholesky") {
    Matrix sigma(2, 2);
    sigma << 4.0, 2.0, 2.0, 3.0;
    const Matrix gamma = factor_psd(sigma);
    CHECK(gamma(0, 0) == doctest::Approx(2.0));
    CHECK(gamma(1, 0) == doctest::Approx(1.0));
    CHECK(gamma(1, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(gamma(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("singular matrix is shifted and factors within 1e-10") {
    Matrix sigma(2, 2);
    sigma << 1.0, 1.0, 1.0, 1.0;
    FactorDiagnostics diag;
    const Matrix gamma = factor_psd(sigma, &diag);
    CHECK((gamma * gamma.transpose() - sigma).norm() <= 1e-10);
    CHECK(diag.shift > 0.0);
  }
  SUBCASE("round-trip property on random PSD matrices") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const Matrix sigma = random_psd(4, seed);
      const Matrix gamma = factor_psd(sigma);
      CHECK(frobenius_relative_error(gamma * gamma.transpose(), sigma) <= 1e-10);
      // lower-triangular
      for (Index i = 0; i < 4; ++i)
        for (Index j = i + 1; j < 4; ++j) CHECK(gamma(i, j) == 0.0);
    }
  }
  SUBCASE("indefinite input is rejected") {
    Matrix sigma(2, 2);
    sigma << 1.0, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(factor_psd(sigma), std::invalid_argument);
  }
}

TEST_CASE("covariance_bundle ties the pieces together") {
  Matrix alpha(2, 2), beta(2, 2);
  alpha << 0.2, 0.1, 0.05, 0.3;
  beta = Matrix::Ones(2, 2);
  const HawkesSpec spec(Vector::Ones(2), alpha, beta);
  const EventTaxonomy tax(2, {{FlowKind::up, 1}, {FlowKind::down, 1}});
  const CovarianceBundle bundle = covariance_bundle(spec, tax);
  CHECK(bundle.sigma_x.rows() == 1);
  CHECK(frobenius_relative_error(bundle.gamma * bundle.gamma.transpose(), bundle.sigma_x) <=
        1e-10);
  CHECK((bundle.k - alpha).norm() < 1e-14);
  CHECK_THROWS_AS(covariance_bundle(spec, EventTaxonomy::full(2)), std::invalid_argument);
}

TEST_CASE("empirical_fclt: deterministic zero baseline") {
  const HawkesSpec spec(Vector::Zero(1), Matrix::Zero(1, 1), Matrix::Ones(1, 1));
  const FcltReport report = empirical_fclt(spec, 100.0, 1.0, 16, 3, 1);
  CHECK(report.empirical.norm() == doctest::Approx(0.0));
  CHECK(report.theoretical.norm() == doctest::Approx(0.0));
}

TEST_CASE("empirical_fclt: Poisson variance at moderate scale") {
  const HawkesSpec spec = scalar_spec(1.0, 0.0, 1.0);
  const FcltReport report = empirical_fclt(spec, 1e3, 1.0, 400, 21, 2);
  // theoretical variance is T * mu = 1
  CHECK(report.theoretical(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(report.empirical(0, 0) - 1.0) < 0.15);
}

TEST_CASE("empirical_fclt error shrinks from n=100 to n=10000") {
  const HawkesSpec spec = scalar_spec(1.0, 0.5, 1.0);
  const FcltReport coarse = empirical_fclt(spec, 1e2, 1.0, 400, 97, 2);
  const FcltReport fine = empirical_fclt(spec, 1e4, 1.0, 400, 97, 2);
  CHECK(fine.frobenius_rel_err < coarse.frobenius_rel_err);
}

TEST_CASE("assemble_covariance_input flattens per-level book parameters") {
  const Index levels = 2;
  HawkesModeParams p;
  p.arrival_baseline = {Vector::Constant(levels, 0.8), Vector::Constant(levels, 0.1)};
  p.removal_baseline = {Vector::Constant(levels, 0.5), Vector::Constant(levels, 0.2)};
  p.arrival_from_arrival = {Vector::Constant(levels, 0.3), Vector::Constant(levels, 2.0)};
  p.arrival_from_removal = {Vector::Constant(levels, 0.1), Vector::Constant(levels, 1.0)};
  p.arrival_from_migration = {Vector::Constant(levels, 0.05), Vector::Constant(levels, 1.0)};
  p.removal_from_arrival = {Vector::Constant(levels, 0.2), Vector::Constant(levels, 1.5)};
  p.removal_from_removal = {Vector::Constant(levels, 0.25), Vector::Constant(levels, 1.0)};
  p.migration.eta = Vector::Constant(levels, 0.4);
  p.migration.kappa_arrival = Vector::Constant(levels, 0.02);
  p.migration.rho_arrival = Vector::Constant(levels, 1.0);
  p.migration.kappa_removal = Vector::Zero(levels);
  p.migration.rho_removal = Vector::Ones(levels);
  p.migration.kappa_migration = Vector::Constant(levels, 0.01);
  p.migration.rho_migration = Vector::Constant(levels, 2.0);

  const double x_ref = 2.0;
  const AssembledCovarianceInput assembled = assemble_covariance_input(p, 3, x_ref);
  CHECK(assembled.taxonomy.size() == 8);
  CHECK(assembled.spec.size() == 8);
  // type 0 is (up, level 1): baseline evaluated at the reference queue
  CHECK(assembled.spec.mu()[0] == doctest::Approx(0.8 + 0.1 * x_ref));
  // type 2 is (migrate_out, level 1): eta * x_ref
  CHECK(assembled.spec.mu()[2] == doctest::Approx(0.4 * x_ref));
  // arrivals excite arrivals within the level, zero across levels
  CHECK(assembled.spec.alpha()(0, 0) == doctest::Approx(0.3));
  CHECK(assembled.spec.alpha()(0, 4) == doctest::Approx(0.0));
  // pooled migrations excite the arrival rate through both migration types
  CHECK(assembled.spec.alpha()(0, 2) == doctest::Approx(0.05));
  CHECK(assembled.spec.alpha()(0, 3) == doctest::Approx(0.05));
  // migration excitation jumps are frozen at kappa * x_ref
  CHECK(assembled.spec.alpha()(2, 0) == doctest::Approx(0.02 * x_ref));
  const CovarianceBundle bundle = covariance_bundle(assembled.spec, assembled.taxonomy);
  CHECK(bundle.sigma_x.rows() == 2);
}
