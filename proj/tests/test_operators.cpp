#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mnlab/kernels.hpp"
#include "mnlab/operators.hpp"
#include "mnlab/quadrature.hpp"
#include "support.hpp"

#include <numbers>

using namespace mnlab;
using testing::rel_err;
using std::numbers::pi;

namespace {

RadialGrid grid(int n, std::vector<double> breaks, double lo = 1e-8, double hi = 1e2, int ppd = 16) {
  RadialGridSpec spec;
  spec.rho_min = lo;
  spec.rho_max = hi;
  spec.panels_per_decade = ppd;
  spec.breaks = std::move(breaks);
  return make_radial_grid(n, spec);
}

GridFunction unit_ball(int n, int angular) {
  return GridFunction::sample_radial(grid(n, {1.0}), make_angular_quadrature(n, angular),
                                     [](double r) { return r <= 1.0 ? 1.0 : 0.0; });
}

double riesz_at(const GridFunction& phi, double gamma, const Vec3& x) {
  const std::vector<Vec3> t{x};
  return riesz_potential_direct(phi, gamma, t).values[0];
}

Vec3 rotate(const Vec3& x, double angle) {
  return {std::cos(angle) * x[0] - std::sin(angle) * x[1],
          std::sin(angle) * x[0] + std::cos(angle) * x[1], 0.0};
}

}  // namespace

TEST_CASE("riesz potential of the unit ball at the origin") {
  for (int n : {2, 3}) {
    const GridFunction ball = unit_ball(n, n == 2 ? 64 : 8);
    for (double gamma : {0.5, 1.0, 1.5}) {
      const double exact = sphere_area(n - 1) / (n - gamma);
      CHECK(rel_err(riesz_at(ball, gamma, {0, 0, 0}), exact) < 1e-3);
    }
  }
}

TEST_CASE("far field of the unit disc") {
  const GridFunction ball = unit_ball(2, 64);
  CHECK(rel_err(riesz_at(ball, 1.0, {10, 0, 0}), pi / 10) < 0.02);
  // Independent oracle: int_0^1 rho I_1(10 / rho) rho^{-1} d rho by adaptive quadrature.
  const auto r = integrate_adaptive(
      [](double rho) { return rho * std::pow(rho, -1.0) * i_nu_quadrature(2, 1.0, 10.0 / rho); },
      std::vector<double>{0.0, 0.5, 1.0});
  CHECK(rel_err(riesz_at(ball, 1.0, {10, 0, 0}), r.value) < 1e-6);
}

TEST_CASE("direct evaluation agrees with the radial reduction") {
  const GridFunction ball3 = unit_ball(3, 8);
  const RadialProfile profile3 = RadialProfile::from_radial(ball3);
  CHECK(rel_err(riesz_at(ball3, 1.0, {2, 0, 0}), riesz_potential_radial_reduced(profile3, 1.0, 2.0)) < 1e-3);
  CHECK(rel_err(riesz_potential_radial_reduced(profile3, 1.0, 0.0), 2 * pi) < 1e-3);
  // gamma > n - 1 needs a finer angular rule for the far part.
  const GridFunction fine3 = unit_ball(3, 16);
  for (double r : {0.5, 0.9, 1.1, 1.6}) {
    CHECK(rel_err(riesz_at(fine3, 2.5, {0, r, 0}), riesz_potential_radial_reduced(profile3, 2.5, r)) < 1e-3);
  }
  const GridFunction ball2 = unit_ball(2, 64);
  const RadialProfile profile2 = RadialProfile::from_radial(ball2);
  for (double r : {0.01, 0.3, 0.8, 1.3, 5.0}) {
    CHECK(rel_err(riesz_at(ball2, 1.5, {r, 0, 0}), riesz_potential_radial_reduced(profile2, 1.5, r)) < 1e-3);
  }
}

TEST_CASE("bessel-like potential") {
  const GridFunction ball = unit_ball(3, 8);
  const std::vector<Vec3> origin{{0, 0, 0}};
  const double s4 = bessel_like_potential(ball, 4.0, origin).values[0];
  CHECK(rel_err(s4, 4 * pi * (pi / 8 - 0.25)) < 1e-3);
  CHECK_THROWS_AS(bessel_like_potential(ball, 0.0, origin), std::invalid_argument);
  CHECK_THROWS_AS(riesz_potential_direct(ball, 3.0, origin), std::invalid_argument);
}

TEST_CASE("domination and positivity") {
  const AngularQuadrature c = make_angular_quadrature(2, 64);
  const GridFunction phi = GridFunction::sample(grid(2, {0.2, 1.5}), c, [](double r, const Vec3& t) {
    return r >= 0.2 && r <= 1.5 ? (1.0 + t[0]) * (1.0 + t[1] * t[1]) : 0.0;
  });
  std::vector<Vec3> targets;
  for (double r : {0.0, 0.05, 0.5, 1.0, 1.49, 3.0, 40.0}) {
    for (double a : {0.0, 1.0, 2.5}) targets.push_back(rotate({r, 0, 0}, a));
  }
  for (double gamma : {0.5, 1.0, 1.9}) {
    const auto t = riesz_potential_direct(phi, gamma, targets);
    const auto s = bessel_like_potential(phi, gamma, targets);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      CHECK(s.values[k] >= 0.0);
      CHECK(t.values[k] > 0.0);
      CHECK(s.values[k] <= t.values[k] + 1e-10);
    }
  }
}

TEST_CASE("linearity") {
  const AngularQuadrature c = make_angular_quadrature(2, 32);
  const RadialGrid g = grid(2, {1.0});
  const GridFunction f1 = GridFunction::sample(g, c, [](double r, const Vec3& t) { return r < 1 ? 1 + t[0] : 0.0; });
  const GridFunction f2 = GridFunction::sample(g, c, [](double r, const Vec3& t) { return r < 1 ? r * t[1] * t[1] : 0.0; });
  const std::vector<Vec3> targets{{0.3, 0.1, 0}, {2, -1, 0}, {0, 0, 0}};
  const auto a = riesz_potential_direct(f1, 1.2, targets).values;
  const auto b = riesz_potential_direct(f2, 1.2, targets).values;
  const auto ab = riesz_potential_direct(combine(2.0, f1, -3.0, f2), 1.2, targets).values;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    CHECK(std::abs(ab[k] - (2 * a[k] - 3 * b[k])) < 1e-10 * (std::abs(a[k]) + std::abs(b[k])));
  }
}

TEST_CASE("parallel and serial evaluation agree exactly") {
  const GridFunction phi = unit_ball(2, 32);
  std::vector<Vec3> targets;
  for (int k = 0; k < 24; ++k) targets.push_back(rotate({0.1 + 0.2 * k, 0, 0}, 0.3 * k));
  CHECK(riesz_potential_direct(phi, 1.3, targets).values ==
        riesz_potential_direct_serial(phi, 1.3, targets).values);
  CHECK(bessel_like_potential(phi, 2.5, targets).values ==
        bessel_like_potential_serial(phi, 2.5, targets).values);
}

TEST_CASE("radial input gives radial output") {
  const GridFunction phi = unit_ball(2, 256);
  const double base = riesz_at(phi, 1.0, {0.7, 0, 0});
  // Rotations in the common symmetry group of the grid and the ray rule.
  for (int k : {1, 5, 64}) {
    CHECK(rel_err(riesz_at(phi, 1.0, rotate({0.7, 0, 0}, 2 * pi * k / 128)), base) < 1e-10);
  }
  // Any other angle: quadrature tolerance.
  for (double a : {0.1, 1.0, 2.0}) {
    CHECK(rel_err(riesz_at(phi, 1.0, rotate({0.7, 0, 0}, a)), base) < 1e-4);
  }
}

TEST_CASE("rotation equivariance") {
  const int N = 128;
  const AngularQuadrature c = make_angular_quadrature(2, N);
  auto f = [](double r, const Vec3& t) { return r < 1 ? std::exp(2 * t[0]) * (1 - r * r) : 0.0; };
  const RadialGrid g = grid(2, {1.0});
  const GridFunction phi = GridFunction::sample(g, c, f);
  for (int shift : {3, 40}) {
    const double angle = 2 * pi * shift / N;
    // phi o R^T on the grid: the angular index moves by `shift`.
    const GridFunction rotated = GridFunction::sample(g, c, [&](double r, const Vec3& t) {
      return f(r, rotate(t, -angle));
    });
    for (const Vec3& x : {Vec3{0.4, 0.2, 0}, Vec3{1.7, -0.3, 0}}) {
      CHECK(rel_err(riesz_at(rotated, 1.4, rotate(x, angle)), riesz_at(phi, 1.4, x)) < 1e-3);
    }
  }
}

TEST_CASE("scaling covariance on power spikes") {
  const double s = 0.5, gamma = 1.2, lambda = 4.0;
  const AngularQuadrature c = make_angular_quadrature(2, 64);
  TestFamily fam;
  fam.kind = TestFamilyKind::power_spike;
  fam.exponent = s;
  fam.eps = 1e-2;
  fam.R = 1.0;
  const GridFunction phi = make_test_function(fam, grid(2, fam.cutoffs(), 1e-4), c);
  // phi(lambda x) = lambda^{-s} times the spike cut at [eps, R] / lambda.
  TestFamily small = fam;
  small.eps /= lambda;
  small.R /= lambda;
  const GridFunction phi_l = make_test_function(small, grid(2, small.cutoffs(), 1e-4), c).scaled(std::pow(lambda, -s));
  for (const Vec3& x : {Vec3{0.05, 0.01, 0}, Vec3{0.12, -0.07, 0}, Vec3{0.6, 0.0, 0}}) {
    const Vec3 lx{lambda * x[0], lambda * x[1], 0};
    CHECK(rel_err(riesz_at(phi_l, gamma, x), std::pow(lambda, gamma - 2) * riesz_at(phi, gamma, lx)) < 1e-3);
  }
}

TEST_CASE("potential on a grid matches pointwise evaluation") {
  const AngularQuadrature c = make_angular_quadrature(2, 32);
  const RadialGrid g = grid(2, {0.1, 1.0}, 1e-3, 1e1, 4);
  const GridFunction phi = GridFunction::sample(g, c, [](double r, const Vec3& t) {
    return r >= 0.1 && r <= 1 ? 1 + 0.5 * t[1] : 0.0;
  });
  const GridFunction u = potential_on_grid(KernelKind::riesz, phi, 1.1, g, c);
  std::vector<Vec3> targets;
  std::vector<double> expected;
  for (std::size_t i = 0; i < g.size(); i += 7) {
    for (std::size_t j = 0; j < c.size(); j += 5) {
      targets.push_back(u.position(i, j));
      expected.push_back(u.at(i, j));
    }
  }
  const auto direct = riesz_potential_direct(phi, 1.1, targets).values;
  for (std::size_t k = 0; k < targets.size(); ++k) CHECK(rel_err(direct[k], expected[k]) < 1e-9);

  // Radial input takes the per-radius path.
  const GridFunction ball = GridFunction::sample_radial(g, c, [](double r) { return r <= 1 ? 1.0 : 0.0; });
  const GridFunction v = potential_on_grid(KernelKind::bessel_like, ball, 2.0, g, c);
  CHECK(v.is_radial());
  const std::vector<Vec3> one{v.position(40, 3)};
  CHECK(rel_err(bessel_like_potential(ball, 2.0, one).values[0], v.at(40, 3)) < 1e-12);
}

TEST_CASE("targets off the grid are flagged") {
  const GridFunction ball = unit_ball(2, 32);
  const std::vector<Vec3> targets{{0, 0, 0}, {0.5, 0, 0}, {500, 0, 0}};
  const auto r = riesz_potential_direct(ball, 1.0, targets);
  CHECK(r.accurate == std::vector<char>{1, 1, 0});
  const std::vector<Vec3> lifted{{0.5, 0, 0.1}};
  CHECK_THROWS_AS(riesz_potential_direct(ball, 1.0, lifted), std::invalid_argument);
}

TEST_CASE("test families") {
  const AngularQuadrature c = make_angular_quadrature(2, 64);
  const RadialGrid g = grid(2, {1e-3, 0.5, 1.0}, 1e-4, 1e1, 8);

  TestFamily spike;
  spike.exponent = 0.0;
  const GridFunction ind = make_test_function(spike, g, c);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes[i];
    CHECK(ind.at(i, 5) == (r >= 1e-3 && r <= 1.0 ? 1.0 : 0.0));
  }

  TestFamily log_spike;
  log_spike.kind = TestFamilyKind::ckn_log_spike;
  log_spike.exponent = -0.5;
  log_spike.R = 0.5;
  const RadialGrid g3 = grid(3, {std::exp(-1.0), 1e-3, 0.5}, 1e-4, 1e1, 8);
  const GridFunction lf = make_test_function(log_spike, g3, make_angular_quadrature(3, 8));
  // The node at exactly e^{-1} is not on the grid; compare through the formula.
  for (std::size_t i = 0; i < g3.size(); ++i) {
    const double r = g3.nodes[i];
    const double want = r >= 1e-3 && r <= 0.5 ? std::pow(r, -0.5) * std::log(1 / r) : 0.0;
    CHECK(lf.at(i, 0) == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK(std::pow(std::exp(-1.0), -0.5) * std::log(std::exp(1.0)) == doctest::Approx(1.6487212707));

  TestFamily flat;
  flat.kind = TestFamilyKind::angular_bump;
  flat.m = 0.0;
  CHECK(make_test_function(flat, g, c).is_radial());

  TestFamily bump = flat;
  bump.kappa = 30;
  bump.m = 2;
  const GridFunction b = make_test_function(bump, g, c);
  CHECK_FALSE(b.is_radial());
  const std::size_t row = static_cast<std::size_t>(g.panel_of(0.7)) * static_cast<std::size_t>(g.order());
  double mean = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) mean += b.at(row, j) * c.weights[j];
  CHECK(mean / c.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

  TestFamily bad;
  bad.eps = 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = TestFamily{};
  bad.kappa = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = log_spike;
  bad.R = 0.9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  for (auto k : {TestFamilyKind::power_spike, TestFamilyKind::ckn_log_spike,
                 TestFamilyKind::angular_bump, TestFamilyKind::tensor_spike_bump}) {
    CHECK(parse_test_family(to_string(k)) == k);
  }
}
