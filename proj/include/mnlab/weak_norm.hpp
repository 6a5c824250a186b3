#pragma once

// Lorentz-type norms on the multiplicative group (0, inf) with Haar measure
// d rho / rho, and the radial controlling quantity of the mixed fractional
// integral bound.

#include "mnlab/exponents.hpp"

#include <string>
#include <vector>

namespace mnlab {

struct WeakNormSample {
  std::vector<double> nodes;   // strictly increasing, positive
  std::vector<double> values;  // finite, non-negative

  /// Throws std::invalid_argument if the invariants fail.
  void validate() const;

  /// Haar weight of each node: half the log-distance to each neighbour
  /// (one-sided at the ends), so the weights sum to log(last / first).
  std::vector<double> haar_weights() const;
};

/// sup_t t * mu{g > t}^{1/r}, computed exactly on the sample by sorting the
/// values in decreasing order. r = inf gives the maximum value.
double weak_norm_haar(const WeakNormSample& sample, const RecipExponent& r);

/// (sum_i w_i g_i^r)^{1/r}; the maximum for r = inf.
double strong_norm_haar(const WeakNormSample& sample, const RecipExponent& r);

struct ProofKernelResult {
  bool finite = false;
  double value = 0.0;               // weak norm at the finest level
  std::vector<double> level_values; // one per nested grid level
  std::string divergence_region;    // "none", "near_origin", "near_one", "far_field"
  Rational recip_r;                 // 1/r  = 1 + 1/q  - 1/p
  Rational recip_rtilde;            // 1/r~ = 1 + 1/q~ - 1/p~
};

struct ProofKernelOptions {
  int levels = 4;             // level k spans [10^-(3+k), 10^(3+k)], window 10^-(3+k) around 1
  int nodes_per_decade = 32;
  double stabilization = 1.05;  // finite iff last/previous level ratio is below this
  double tol = 1e-8;            // kernel quadrature tolerance
};

/// Evaluates || rho^{n/q - beta} || |rho e - theta|^{-gamma} ||_{L^{r~}_theta} ||_{L^{r,inf}(d rho/rho)}
/// on nested log grids. The angular factor is I_{gamma r~}(rho)^{1/r~}, or
/// |rho - 1|^{-gamma} when r~ = inf. Throws std::domain_error if r or r~
/// falls outside [1, inf].
ProofKernelResult proof_kernel_weak_norm(const MixedIndices& idx,
                                         const ProofKernelOptions& options = {});

}  // namespace mnlab
