#include "hawkeslob/generator.hpp"
#include "hawkeslob/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace hawkeslob;

namespace {

EffectiveCoefficients constant_coeffs(int depth, double sigma_sq, double f, double g,
                                      double alpha_b) {
  return EffectiveCoefficients::uniform(depth, ScalarMap::constant(sigma_sq),
                                        ScalarMap::constant(f), ScalarMap::constant(g), alpha_b);
}

}  // namespace

TEST_CASE("scalar maps evaluate affine and piecewise-linear forms") {
  const ScalarMap affine = ScalarMap::affine(0.5, 2.0);
  CHECK(affine(0.0) == doctest::Approx(0.5));
  CHECK(affine(1.5) == doctest::Approx(3.5));

  Vector grid(3), values(3);
  grid << 0.0, 1.0, 3.0;
  values << 1.0, 2.0, 0.0;
  const ScalarMap pwl = ScalarMap::piecewise_linear(grid, values);
  CHECK(pwl(0.5) == doctest::Approx(1.5));
  CHECK(pwl(2.0) == doctest::Approx(1.0));
  CHECK(pwl(4.0) == doctest::Approx(-1.0));  // end-segment extrapolation
  CHECK(pwl(-1.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(ScalarMap::piecewise_linear(values, grid), std::invalid_argument);
}

TEST_CASE("effective coefficients clamp sigma^2 at zero") {
  const EffectiveCoefficients coeffs =
      EffectiveCoefficients::uniform(3, ScalarMap::affine(1.0, -2.0), ScalarMap::constant(0.3),
                                     ScalarMap::constant(0.1), 0.4);
  CHECK(coeffs.sigma_sq(0, 0.0) == doctest::Approx(1.0));
  CHECK(coeffs.sigma_sq(1, 10.0) == doctest::Approx(0.0));
  CHECK(coeffs.h(0, 2.0) == doctest::Approx(0.2));
  CHECK_THROWS_AS(EffectiveCoefficients::uniform(1, ScalarMap::constant(1.0),
                                                 ScalarMap::constant(0.0),
                                                 ScalarMap::constant(0.0), 0.0),
                  std::invalid_argument);
}

TEST_CASE("built-in test functions satisfy the Neumann condition") {
  const TestFunction quad = TestFunction::quadratic_bump(Vector::Ones(3));
  const TestFunction cosine =
      TestFunction::neumann_cosine(Vector::Ones(3), Vector::Constant(3, 1.3));
  const std::vector<Vector> probes = default_probe_points(3, 0.25, 4.0, 32, 5);
  CHECK(max_neumann_violation(quad, probes) < 1e-12);
  CHECK(max_neumann_violation(cosine, probes) < 1e-12);
}

TEST_CASE("tabulated test function reproduces a smooth profile") {
  // phi(x) = cos(x) sampled on a fine grid; spline + FD derivatives
  const Index knots_n = 60;
  Vector knots(knots_n), values(knots_n);
  for (Index i = 0; i < knots_n; ++i) {
    knots[i] = -0.5 + 6.0 * static_cast<double>(i) / (knots_n - 1);
    values[i] = std::cos(knots[i]);
  }
  std::vector<CubicSpline> tables;
  tables.emplace_back(knots, values);
  const TestFunction f = TestFunction::tabulated(std::move(tables));

  Vector x(1);
  x << 1.7;
  CHECK(f.value(x) == doctest::Approx(std::cos(1.7)).epsilon(1e-5));
  CHECK(f.d1(x, 0) == doctest::Approx(-std::sin(1.7)).epsilon(1e-3));
  CHECK(f.d2(x, 0) == doctest::Approx(-std::cos(1.7)).epsilon(2e-2));
}

TEST_CASE("finite differences: exact algebra on simple functions") {
  const double n = 16.0;  // 1/sqrt(n) = 0.25, exact in binary
  Vector y(2);
  y << 1.0, 2.0;

  SUBCASE("linear function") {
    auto f = TestFunction(
        2, [](const Vector& x) { return 3.0 * x[0]; },
        [](const Vector&, Index k) { return k == 0 ? 3.0 : 0.0; },
        [](const Vector&, Index) { return 0.0; });
    const FiniteDiffs fd = finite_diffs(f, y, n, 0);
    CHECK(fd.right == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fd.left == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fd.second == doctest::Approx(0.0));
  }
  SUBCASE("quadratic function") {
    const TestFunction f = TestFunction::quadratic_bump((Vector(2) << 1.0, 0.0).finished());
    const FiniteDiffs fd = finite_diffs(f, y, n, 0);
    CHECK(fd.right == doctest::Approx(2.0 * y[0] + 0.25).epsilon(1e-14));
    CHECK(fd.left == doctest::Approx(2.0 * y[0] - 0.25).epsilon(1e-14));
    CHECK(fd.second == doctest::Approx(2.0).epsilon(1e-13));
  }
  SUBCASE("constant function") {
    const TestFunction f = TestFunction::constant(2, 4.2);
    const FiniteDiffs fd = finite_diffs(f, y, n, 0);
    CHECK(fd.right == 0.0);
    CHECK(fd.left == 0.0);
    CHECK(fd.second == 0.0);
  }
  SUBCASE("boundary clamps the left difference") {
    Vector origin = Vector::Zero(2);
    const TestFunction f = TestFunction::quadratic_bump(Vector::Ones(2));
    const FiniteDiffs fd = finite_diffs(f, origin, n, 0);
    CHECK(fd.clamped);
    CHECK(fd.left == 0.0);
  }
}

TEST_CASE("second difference identity holds bit-exactly") {
  const TestFunction cosine =
      TestFunction::neumann_cosine(Vector::Ones(3), Vector::Constant(3, 0.9));
  SplitRng rng(12, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double n = std::pow(4.0, 1 + trial % 5);
    Vector y(3);
    for (Index k = 0; k < 3; ++k) y[k] = 4.0 * rng.uniform01();
    y = snap_to_lattice(y, n);
    for (Index k = 0; k < 3; ++k) {
      const FiniteDiffs fd = finite_diffs(cosine, y, n, k);
      CHECK(fd.second == std::sqrt(n) * (fd.right - fd.left));
    }
  }
}

TEST_CASE("generator_micro: trivial cases") {
  SUBCASE("constant test function gives zero") {
    const EffectiveCoefficients coeffs = constant_coeffs(4, 1.3, 0.4, 0.2, 0.7);
    const TestFunction f = TestFunction::constant(3, 2.0);
    for (const Vector& p : default_probe_points(3, 0.0, 4.0, 16, 3))
      CHECK(generator_micro(f, snap_to_lattice(p, 64.0), 64.0, coeffs) ==
            doctest::Approx(0.0));
  }
  SUBCASE("zero coefficients give zero") {
    const EffectiveCoefficients coeffs = constant_coeffs(4, 0.0, 0.0, 0.0, 0.0);
    const TestFunction f =
        TestFunction::neumann_cosine(Vector::Ones(3), Vector::Constant(3, 1.1));
    for (const Vector& p : default_probe_points(3, 0.0, 4.0, 16, 4))
      CHECK(generator_micro(f, snap_to_lattice(p, 256.0), 256.0, coeffs) ==
            doctest::Approx(0.0));
  }
  SUBCASE("single level, quadratic F, constant sigma^2: A_n F = sigma^2 exactly") {
    const double s = 1.7;
    const EffectiveCoefficients coeffs = constant_coeffs(2, s, 0.0, 0.0, 0.0);
    const TestFunction f = TestFunction::quadratic_bump(Vector::Ones(1));
    for (const double n : {16.0, 256.0, 1024.0}) {
      Vector y(1);
      y << 2.0;  // >= 1/sqrt(n)
      CHECK(generator_micro(f, y, n, coeffs) == doctest::Approx(s).epsilon(1e-10));
    }
  }
}

TEST_CASE("generator_limit: trivial cases") {
  const EffectiveCoefficients coeffs =
      EffectiveCoefficients::uniform(5, ScalarMap::constant(0.9), ScalarMap::affine(0.3, 0.1),
                                     ScalarMap::affine(0.1, 0.05), 0.8);
  SUBCASE("constant function") {
    const TestFunction f = TestFunction::constant(4, 1.0);
    Vector x = Vector::Ones(4);
    CHECK(generator_limit(f, x, coeffs) == doctest::Approx(0.0));
  }
  SUBCASE("coordinate function at an interior level") {
    // F(x) = x_1 (0-based k = 1): AF = h_1(x_1) + alpha_b (x_2 + x_0 - 2 x_1)
    auto f = TestFunction(
        4, [](const Vector& x) { return x[1]; },
        [](const Vector&, Index k) { return k == 1 ? 1.0 : 0.0; },
        [](const Vector&, Index) { return 0.0; });
    Vector x(4);
    x << 1.0, 2.0, 0.5, 1.5;
    const double expected = coeffs.h(1, 2.0) + 0.8 * (0.5 + 1.0 - 4.0);
    CHECK(generator_limit(f, x, coeffs) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("uniform interior profile kills the Laplacian term") {
    auto f = TestFunction(
        4, [](const Vector& x) { return x[1]; },
        [](const Vector&, Index k) { return k == 1 ? 1.0 : 0.0; },
        [](const Vector&, Index) { return 0.0; });
    Vector x = Vector::Constant(4, 0.7);
    CHECK(generator_limit(f, x, coeffs) == doctest::Approx(coeffs.h(1, 0.7)).epsilon(1e-14));
  }
}

TEST_CASE("generator convergence: constant F has zero discrepancy") {
  const EffectiveCoefficients coeffs = constant_coeffs(4, 1.0, 0.2, 0.1, 0.5);
  const TestFunction f = TestFunction::constant(3, 3.0);
  const auto report = generator_convergence_report(f, coeffs, {64.0, 256.0},
                                                   default_probe_points(3, 0.25, 4.0, 32, 6));
  CHECK(report.sup_errors[0] == doctest::Approx(0.0));
  CHECK(report.sup_errors[1] == doctest::Approx(0.0));
}

TEST_CASE("generator convergence: quadratic F with constant coefficients decays at the ideal rate") {
  // alpha_b = 0: the discrepancy comes from the drift terms alone and halves
  // exactly when n quadruples
  const EffectiveCoefficients coeffs = constant_coeffs(3, 1.1, 0.4, 0.15, 0.0);
  const TestFunction f = TestFunction::quadratic_bump((Vector(2) << 0.8, 1.2).finished());
  const std::vector<double> n_list{64.0, 256.0, 1024.0};
  const auto report =
      generator_convergence_report(f, coeffs, n_list, default_probe_points(2, 0.25, 4.0, 64, 7));
  const auto ratios = report.ratios();
  REQUIRE(ratios.size() == 2);
  CHECK(ratios[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(ratios[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(report.decay_ok(0.8, 1.25));
}

TEST_CASE("generator convergence: Neumann cosine with generic affine coefficients") {
  const EffectiveCoefficients coeffs = EffectiveCoefficients::uniform(
      4, ScalarMap::affine(0.8, 0.3), ScalarMap::affine(0.4, -0.25), ScalarMap::affine(0.1, 0.2),
      0.6);
  const TestFunction f =
      TestFunction::neumann_cosine(Vector::Ones(3), Vector::Constant(3, 1.0));
  const std::vector<double> n_list{256.0, 1024.0, 4096.0};
  const auto report =
      generator_convergence_report(f, coeffs, n_list, default_probe_points(3, 0.25, 4.0, 128, 17));
  CHECK(report.decay_ok(0.8, 1.25));
  for (const double r : report.ratios()) {
    CHECK(r >= 1.6);
    CHECK(r <= 2.5);
  }
}

TEST_CASE("generator convergence: cosine discrepancy drops by 4x from n=256 to n=4096") {
  const EffectiveCoefficients coeffs = EffectiveCoefficients::uniform(
      4, ScalarMap::affine(0.7, 0.3), ScalarMap::affine(0.35, -0.45),
      ScalarMap::affine(0.05, 0.15), 0.0);
  const TestFunction f =
      TestFunction::neumann_cosine(Vector::Ones(3), Vector::Constant(3, 2.0));
  const auto report = generator_convergence_report(
      f, coeffs, {256.0, 4096.0}, default_probe_points(3, 0.25, 4.0, 128, 17));
  CHECK(report.sup_errors[1] <= 0.25 * report.sup_errors[0]);
}
