#pragma once

// Spherical kernel integrals
//   I_nu(x)      = int_{S^{n-1}} |x - y|^{-nu} dS(y)
//   J_nu(x, rho) = int_{S^{n-1}} <x - rho theta>^{-nu} dS(theta),   <z> = (1 + |z|^2)^{1/2}
// as closed-form envelopes (equal up to two-sided constants) and as adaptive
// quadratures of the one-dimensional polar reduction. Both depend on x only
// through |x|.

#include "mnlab/quadrature.hpp"

#include <string_view>

namespace mnlab {

enum class KernelRegime {
  // I_nu
  far,            // |x| >= 2
  near_origin,    // |x| <= 1/2
  annulus_sub,    // 1/2 < |x| < 2, nu < n-1
  annulus_log,    // 1/2 < |x| < 2, nu = n-1
  annulus_super,  // 1/2 < |x| < 2, nu > n-1
  // J_nu
  x_dominant,      // rho <= 1 or |x| >= 2 rho
  rho_dominant,    // |x| <= 1 or rho >= 2|x|
  diagonal_sub,    // rho/2 < |x| < 2 rho, nu < n-1
  diagonal_log,    // nu = n-1
  diagonal_super,  // nu > n-1
};

std::string_view to_string(KernelRegime regime);

/// Classifies nu against the critical value n-1 with a 1e-12 tolerance:
/// negative, zero or positive.
int critical_sign(int n, double nu);

KernelRegime i_nu_regime(int n, double nu, double x_norm);
KernelRegime j_nu_regime(int n, double nu, double x_norm, double rho);

/// <x>^{-nu} for |x| >= 2; otherwise 1, |log||x|-1|| + 1 or ||x|-1|^{n-1-nu}
/// according to nu <, =, > n-1. Throws SingularLocation at |x| = 1 when
/// nu >= n-1.
double i_nu_envelope(int n, double nu, double x_norm);

/// Region tests in order: (rho <= 1 or |x| >= 2 rho) -> <x>^{-nu};
/// (|x| <= 1 or rho >= 2|x|) -> <rho>^{-nu}; otherwise the diagonal model.
double j_nu_envelope(int n, double nu, double x_norm, double rho);

/// Envelope of I_nu for fixed (n, nu), as a callable object.
struct KernelEnvelope {
  int n = 3;
  double nu = 1.0;

  KernelRegime regime(double x_norm) const { return i_nu_regime(n, nu, x_norm); }
  double evaluate(double x_norm) const { return i_nu_envelope(n, nu, x_norm); }
};

/// Adaptive quadrature of I_nu to relative tolerance `tol` within a budget of
/// 10^5 integrand evaluations. At |x| = 1 the integrable endpoint singularity
/// is split off analytically. Throws DivergentIntegral (|x| = 1, nu >= n-1)
/// or BudgetExceeded.
double i_nu_quadrature(int n, double nu, double x_norm, double tol = 1e-10);

/// Exact n = 3 value (2 pi / (r (2 - nu))) ((r + 1)^{2-nu} - |r - 1|^{2-nu}),
/// with the logarithmic form at nu = 2. Throws DivergentIntegral at r = 1 when
/// nu >= 2.
double i_nu_closed_form_n3(double nu, double r);

/// Adaptive quadrature of J_nu; the integrand is bounded.
double j_nu_quadrature(int n, double nu, double x_norm, double rho, double tol = 1e-10);

/// Integrand evaluations allowed per kernel quadrature.
inline constexpr std::size_t kKernelNodeBudget = 100000;

}  // namespace mnlab
