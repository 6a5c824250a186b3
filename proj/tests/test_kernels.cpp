#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mnlab/discretization.hpp"
#include "mnlab/kernels.hpp"
#include "mnlab/quadrature.hpp"
#include "mnlab/weak_norm.hpp"
#include "support.hpp"

#include <numbers>

using namespace mnlab;
using testing::rel_err;
using std::numbers::pi;

TEST_CASE("gauss-legendre rules") {
  for (int order : {1, 2, 5, 16, 64}) {
    const GaussRule& g = gauss_legendre_cached(order);
    double sum = 0.0, moment = 0.0;
    for (int i = 0; i < order; ++i) {
      sum += g.weights[i];
      moment += g.weights[i] * std::pow(g.nodes[i], 2 * order - 2);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(moment == doctest::Approx(2.0 / (2 * order - 1)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive integration") {
  const std::vector<double> breaks{0.0, 1.0};
  const auto r = integrate_adaptive([](double t) { return std::pow(t, -0.5); },
                                    graded_breakpoints(0.0, 1.0, 1e-14));
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  const auto smooth = integrate_adaptive([](double t) { return std::exp(t); }, breaks);
  CHECK(smooth.converged);
  CHECK(smooth.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  AdaptiveOptions tight;
  tight.max_evaluations = 50;
  tight.rel_tol = 1e-15;
  const auto capped = integrate_adaptive([](double t) { return std::sin(200 * t); }, breaks, tight);
  CHECK_FALSE(capped.converged);
}

TEST_CASE("slope fit") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  CHECK(fit_slope(x, y) == doctest::Approx(2.0));
  CHECK(sphere_area(1) == doctest::Approx(2 * pi));
  CHECK(sphere_area(2) == doctest::Approx(4 * pi));
}

TEST_CASE("I_nu envelope values") {
  CHECK(i_nu_envelope(3, 1, 10) == doctest::Approx(1 / std::sqrt(101.0)));
  CHECK(i_nu_envelope(3, 3, 1.5) == doctest::Approx(2.0));
  CHECK(i_nu_envelope(3, 1, 0.25) == 1.0);
  CHECK(i_nu_envelope(2, 1, 1.5) == doctest::Approx(std::abs(std::log(0.5)) + 1));
  CHECK_THROWS_AS(i_nu_envelope(3, 2, 1.0), SingularLocation);
  CHECK_NOTHROW(i_nu_envelope(3, 1, 1.0));
  CHECK(i_nu_regime(3, 3, 2.0) == KernelRegime::far);
  CHECK(i_nu_regime(3, 3, 0.5) == KernelRegime::near_origin);
  CHECK(i_nu_regime(3, 2, 1.2) == KernelRegime::annulus_log);
  CHECK(i_nu_regime(2, 0.5, 1.2) == KernelRegime::annulus_sub);
}

TEST_CASE("I_nu quadrature examples") {
  CHECK(i_nu_quadrature(3, 1, 0) == doctest::Approx(4 * pi));
  CHECK(i_nu_quadrature(2, 1.5, 0) == doctest::Approx(2 * pi));
  CHECK(rel_err(i_nu_quadrature(3, 1, 2), 2 * pi) < 1e-10);
  CHECK(rel_err(i_nu_quadrature(3, 3, 1.5), 2 * pi * 16.0 / 15.0) < 1e-10);
  CHECK(rel_err(i_nu_closed_form_n3(2, 2), pi * std::log(3.0)) < 1e-14);
  CHECK(rel_err(i_nu_closed_form_n3(1.3, 1e-9), 4 * pi) < 1e-8);
  CHECK_THROWS_AS(i_nu_quadrature(3, 2, 1.0), DivergentIntegral);
  CHECK_THROWS_AS(i_nu_closed_form_n3(2.5, 1.0), DivergentIntegral);
}

TEST_CASE("n = 3 quadrature matches the closed form") {
  double worst = 0.0;
  for (double nu : {0.5, 1.0, 1.7, 2.0, 2.5, 3.0}) {
    for (double r = 1e-2; r < 1e2; r *= 1.31) {
      worst = std::max(worst, rel_err(i_nu_quadrature(3, nu, r), i_nu_closed_form_n3(nu, r)));
    }
  }
  CHECK(worst < 1e-6);
  CHECK(rel_err(i_nu_quadrature(3, 1.5, 1.0), i_nu_closed_form_n3(1.5, 1.0)) < 1e-6);
}

TEST_CASE("I_nu depends only on |x|") {
  // Product rule on the sphere, away from the singular set.
  for (int n : {2, 3}) {
    const AngularQuadrature rule = make_angular_quadrature(n, n == 2 ? 512 : 48);
    for (const Vec3& x : {Vec3{2.5, 0, 0}, Vec3{0, 2.5, 0}, Vec3{1.5, -2.0, 0},
                          Vec3{0.3, 0.2, 0.0}}) {
      if (n == 2 && x[2] != 0.0) continue;
      const double direct = rule.integrate([&](const Vec3& y) {
        const Vec3 d{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
        return std::pow(norm(d), -1.2);
      });
      CHECK(rel_err(direct, i_nu_quadrature(n, 1.2, norm(x))) < 1e-8);
    }
  }
}

TEST_CASE("inversion: |x| and 1/|x| share the near-one exponent") {
  for (int n : {2, 3}) {
    const double nu = n - 0.5;
    std::vector<double> ld, inner, outer;
    for (double d = 1e-6; d <= 1e-4; d *= 1.5) {
      ld.push_back(std::log(d));
      inner.push_back(std::log(i_nu_quadrature(n, nu, 1.0 / (1.0 + d))));
      outer.push_back(std::log(i_nu_quadrature(n, nu, 1.0 + d)));
    }
    CHECK(fit_slope(ld, inner) == doctest::Approx(fit_slope(ld, outer)).epsilon(0.05));
    CHECK(fit_slope(ld, outer) == doctest::Approx(n - 1 - nu).epsilon(0.05));
  }
}

TEST_CASE("J_nu envelope and quadrature") {
  CHECK(j_nu_regime(3, 1, 5.0, 0.5) == KernelRegime::x_dominant);
  CHECK(j_nu_envelope(3, 1, 5.0, 0.5) == doctest::Approx(1 / std::sqrt(26.0)));
  CHECK(j_nu_envelope(3, 4, 10, 10) == doctest::Approx(1.0 / 101.0));
  CHECK(j_nu_envelope(3, 2, 10, 10) ==
        doctest::Approx(std::log(2 * std::sqrt(101.0)) / 101.0));
  CHECK(j_nu_quadrature(3, 1.5, 0, 3) == doctest::Approx(4 * pi * std::pow(10.0, -0.75)));
  CHECK(j_nu_quadrature(2, 1.5, 3, 0) == doctest::Approx(2 * pi * std::pow(10.0, -0.75)));
  const double ratio = j_nu_quadrature(3, 4, 10, 10) / j_nu_envelope(3, 4, 10, 10);
  CHECK(ratio > 1e-2);
  CHECK(ratio < 1e2);
}

TEST_CASE("weak norm on samples") {
  WeakNormSample ind;
  for (int i = 0; i <= 4000; ++i) {
    const double rho = std::exp(-0.5 + 2.0 * i / 4000.0);
    ind.nodes.push_back(rho);
    ind.values.push_back(rho >= 1.0 && rho <= std::exp(1.0) ? 1.0 : 0.0);
  }
  const RecipExponent two(Rational(1, 2));
  CHECK(weak_norm_haar(ind, two) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(strong_norm_haar(ind, two) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(weak_norm_haar(ind, RecipExponent::infinity()) == 1.0);

  WeakNormSample zero = ind;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK(weak_norm_haar(zero, two) == 0.0);

  WeakNormSample bad = ind;
  bad.values[3] = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  std::swap(bad.nodes[0], bad.nodes[1]);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("|rho - 1|^{-1/2}: weak L^2 stays bounded, strong L^2 grows without bound") {
  const RecipExponent two(Rational(1, 2));
  std::vector<double> weak, strong;
  for (int level = 0; level < 5; ++level) {
    const double delta = std::pow(10.0, -3.0 - level);
    WeakNormSample s;
    auto add_side = [&](double sign) {
      std::vector<double> side;
      for (double d = 0.5; d >= delta; d /= 1.02) side.push_back(1.0 + sign * d);
      return side;
    };
    std::vector<double> rho = add_side(-1.0);
    for (double v : add_side(1.0)) rho.push_back(v);
    std::sort(rho.begin(), rho.end());
    for (double r : rho) {
      s.nodes.push_back(r);
      s.values.push_back(std::pow(std::abs(r - 1.0), -0.5));
    }
    weak.push_back(weak_norm_haar(s, two));
    strong.push_back(strong_norm_haar(s, two));
  }
  CHECK(weak.back() / weak.front() < 1.05);
  for (std::size_t k = 1; k < strong.size(); ++k) {
    // The squared norm grows by 2 log(10) per decade of refinement.
    CHECK(strong[k] * strong[k] - strong[k - 1] * strong[k - 1] > 4.0);
  }
  CHECK(strong.back() / weak.back() > 3.0);
}

namespace {

MixedIndices mixed(int n, Rational p, Rational q, Rational pt, Rational qt, Rational a,
                   Rational b) {
  MixedIndices idx{n, RecipExponent(p), RecipExponent(q), RecipExponent(pt), RecipExponent(qt),
                   a, b, 0};
  idx.gamma = Rational(n) + n * q - n * p - a - b;
  return idx;
}

}  // namespace

TEST_CASE("proof kernel weak norm") {
  const auto ok = proof_kernel_weak_norm(
      mixed(2, Rational(3, 4), Rational(1, 4), Rational(1, 2), Rational(1, 2), 0, 0));
  CHECK(ok.finite);
  CHECK(ok.divergence_region == "none");
  CHECK(ok.recip_r == Rational(1, 2));

  // alpha = n/p' + 1/5: far-field growth.
  const auto far = proof_kernel_weak_norm(
      mixed(2, Rational(3, 4), Rational(1, 4), Rational(1, 2), Rational(1, 2), Rational(7, 10), 0));
  CHECK_FALSE(far.finite);
  CHECK(far.divergence_region == "far_field");

  // beta = n/q + 1/5: growth at the origin.
  const auto origin = proof_kernel_weak_norm(
      mixed(2, Rational(3, 4), Rational(1, 4), Rational(1, 2), Rational(1, 2), -1, Rational(7, 10)));
  CHECK_FALSE(origin.finite);
  CHECK(origin.divergence_region == "near_origin");

  // Third condition violated by 1/2.
  const auto ring = proof_kernel_weak_norm(
      mixed(2, Rational(3, 4), Rational(1, 4), Rational(1), Rational(0), 0, 0));
  CHECK_FALSE(ring.finite);
  CHECK(ring.divergence_region == "near_one");

  CHECK_THROWS_AS(proof_kernel_weak_norm(mixed(2, Rational(1, 4), Rational(3, 4), Rational(1, 2),
                                               Rational(1, 2), 0, 0)),
                  std::domain_error);
}
