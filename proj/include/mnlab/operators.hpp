#pragma once

// Potentials of sampled functions,
//   T_gamma phi(x) = int phi(y) |x - y|^{-gamma} dy      (0 < gamma < n)
//   S_gamma phi(x) = int phi(y) <x - y>^{-gamma} dy      (gamma > 0)
// and the test-function families used by the probes.
//
// Quadrature: the grid rule is applied to phi(y) K(|x-y|) (1 - chi(|x-y|/delta))
// where chi is a C^3 polynomial cutoff equal to 1 on [0, 1/4] and 0 beyond 1; the
// remainder phi K chi is integrated along rays from x (polar coordinates
// centred at the target) with phi interpolated from the grid, panels split
// where a ray crosses a radial panel edge, and geometric grading towards
// s = 0. delta is a fixed number of local mesh widths. Both kernels share all
// nodes and weights, so 0 <= S_gamma phi <= T_gamma phi holds node by node
// for phi >= 0.

#include "mnlab/discretization.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace mnlab {

enum class KernelKind { riesz, bessel_like };

struct PotentialOptions {
  double near_cells = 8.0;   // cutoff radius delta in local mesh widths (capped at |x|/2)
  int ray_resolution = 0;    // 0: 128 directions (n = 2), 16 x 32 (n = 3)
  int segment_order = 8;     // Gauss points per ray segment
  int grading_levels = 24;   // dyadic panels towards the target
  int grading_order = 5;     // Gauss points per dyadic panel
};

struct PotentialResult {
  std::vector<double> values;
  // 0 where the target lies outside the radial grid range (other than the
  // origin), so the near field around it is not resolved.
  std::vector<char> accurate;
};

/// Throws std::invalid_argument unless 0 < gamma < n.
PotentialResult riesz_potential_direct(const GridFunction& phi, double gamma,
                                       std::span<const Vec3> targets,
                                       const PotentialOptions& options = {});
PotentialResult riesz_potential_direct_serial(const GridFunction& phi, double gamma,
                                              std::span<const Vec3> targets,
                                              const PotentialOptions& options = {});

/// Throws std::invalid_argument unless gamma > 0.
PotentialResult bessel_like_potential(const GridFunction& phi, double gamma,
                                      std::span<const Vec3> targets,
                                      const PotentialOptions& options = {});
PotentialResult bessel_like_potential_serial(const GridFunction& phi, double gamma,
                                             std::span<const Vec3> targets,
                                             const PotentialOptions& options = {});

/// Potential sampled on a target grid. Radial phi is evaluated once per
/// radius. For n = 2 with matching angular rules the rule is rotated with the
/// target, so each target radius costs one weight table and an FFT
/// correlation per source row; otherwise every target is evaluated directly.
GridFunction potential_on_grid(KernelKind kind, const GridFunction& phi, double gamma,
                               const RadialGrid& grid, const AngularQuadrature& angular,
                               const PotentialOptions& options = {});

/// Radial samples on a panel grid, Lagrange-interpolated in log(rho).
struct RadialProfile {
  RadialGrid grid;
  std::vector<double> values;  // one per radial node

  static RadialProfile from_radial(const GridFunction& f);  // first angular column
  double operator()(double rho) const;
};

/// T_gamma phi at |x| = r for radial phi through
///   int_0^inf phi(rho) rho^{n-1-gamma} I_gamma(r / rho) d rho,
/// with adaptive quadrature, grading towards rho = r and a geometric
/// extrapolation of the remaining piece around rho = r.
double riesz_potential_radial_reduced(const RadialProfile& profile, double gamma, double r);

enum class TestFamilyKind { power_spike, ckn_log_spike, angular_bump, tensor_spike_bump };

std::string_view to_string(TestFamilyKind kind);
TestFamilyKind parse_test_family(std::string_view text);

struct TestFamily {
  TestFamilyKind kind = TestFamilyKind::power_spike;
  // power_spike / tensor: |x|^{-exponent}; ckn_log_spike: |x|^{exponent} log(1/|x|).
  double exponent = 0.0;
  double eps = 1e-3;    // inner cutoff
  double R = 1.0;       // outer cutoff (at most 1/2 for the log spike)
  double kappa = 1.0;   // angular concentration
  double m = 1.0;       // angular bump power
  Vec3 direction{1.0, 0.0, 0.0};

  /// Throws std::invalid_argument if eps >= R, eps <= 0, kappa < 1 or m < 0.
  void validate() const;
  /// Radial cutoffs, to be passed as grid breaks.
  std::vector<double> cutoffs() const { return {eps, R}; }
};

/// power_spike: |x|^{-s} 1[eps, R]; ckn_log_spike: |x|^c log(1/|x|) 1[eps, R];
/// angular_bump: 1[eps, R](|x|) b(theta); tensor_spike_bump: |x|^{-s} 1[eps, R] b(theta),
/// with b = (1 + kappa (1 - theta . e))^{-m} scaled to mean 1 over the rule.
GridFunction make_test_function(const TestFamily& family, const RadialGrid& grid,
                                const AngularQuadrature& angular);

}  // namespace mnlab
