#pragma once

// One-dimensional quadrature: Gauss-Legendre rules and a globally adaptive
// panel integrator (bisection of the panel with the largest error estimate).

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mnlab {

/// The integral does not exist (non-integrable singularity).
class DivergentIntegral : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested tolerance was not reached within the evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-form model evaluated exactly at its singular point.
class SingularLocation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule with `order` points (Newton iteration on P_order).
GaussRule gauss_legendre(int order);

/// Shared immutable copy for orders up to 128; thread-safe.
const GaussRule& gauss_legendre_cached(int order);

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 100000;
  int order = 10;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Integrates f over consecutive panels [b0,b1], [b1,b2], ... given by the
/// ascending breakpoints. Error per panel is |G(panel) - G(left) - G(right)|.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options = {});

/// Breakpoints on [a, b] accumulating geometrically (ratio 2) towards `a`
/// down to `a + finest`, then coarsening up to b.
std::vector<double> graded_breakpoints(double a, double b, double finest);

/// Breakpoints on [a, b] accumulating towards an interior point c from both
/// sides down to distance `finest`.
std::vector<double> graded_breakpoints_around(double a, double b, double c, double finest);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

/// |S^{k}|, the surface measure of the unit sphere in R^{k+1}.
double sphere_area(int k);

}  // namespace mnlab
