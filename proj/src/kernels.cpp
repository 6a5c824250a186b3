#include "mnlab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mnlab {

namespace {

constexpr double kPi = std::numbers::pi;

double japanese(double t) { return std::sqrt(1.0 + t * t); }

void validate(int n, double nu) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be positive");
}

// Measure factor of the polar reduction: |S^{n-2}|, with |S^0| = 2.
double polar_factor(int n) { return n == 2 ? 2.0 : sphere_area(n - 2); }

double integrate_or_throw(const std::function<double(double)>& f,
                          const std::vector<double>& breaks, double tol, const char* what) {
  AdaptiveOptions options;
  options.rel_tol = tol;
  options.max_evaluations = kKernelNodeBudget;
  const AdaptiveResult res = integrate_adaptive(f, breaks, options);
  if (!res.converged) {
    throw BudgetExceeded(std::string(what) + ": tolerance not met within node budget");
  }
  return res.value;
}

// Breakpoints on [0, pi] graded towards theta = 0 where the integrand peaks
// with angular width `width`.
std::vector<double> peak_breaks(double width) {
  if (width / 4.0 < kPi / 2.0) return graded_breakpoints(0.0, kPi, width / 4.0);
  return {0.0, kPi / 2.0, kPi};
}

}  // namespace

std::string_view to_string(KernelRegime regime) {
  switch (regime) {
    case KernelRegime::far: return "far";
    case KernelRegime::near_origin: return "near_origin";
    case KernelRegime::annulus_sub: return "annulus_sub";
    case KernelRegime::annulus_log: return "annulus_log";
    case KernelRegime::annulus_super: return "annulus_super";
    case KernelRegime::x_dominant: return "x_dominant";
    case KernelRegime::rho_dominant: return "rho_dominant";
    case KernelRegime::diagonal_sub: return "diagonal_sub";
    case KernelRegime::diagonal_log: return "diagonal_log";
    case KernelRegime::diagonal_super: return "diagonal_super";
  }
  return "unknown";
}

int critical_sign(int n, double nu) {
  const double d = nu - static_cast<double>(n - 1);
  if (std::abs(d) <= 1e-12) return 0;
  return d < 0.0 ? -1 : 1;
}

KernelRegime i_nu_regime(int n, double nu, double x_norm) {
  validate(n, nu);
  if (x_norm >= 2.0) return KernelRegime::far;
  if (x_norm <= 0.5) return KernelRegime::near_origin;
  switch (critical_sign(n, nu)) {
    case -1: return KernelRegime::annulus_sub;
    case 0: return KernelRegime::annulus_log;
    default: return KernelRegime::annulus_super;
  }
}

KernelRegime j_nu_regime(int n, double nu, double x_norm, double rho) {
  validate(n, nu);
  if (rho <= 1.0 || x_norm >= 2.0 * rho) return KernelRegime::x_dominant;
  if (x_norm <= 1.0 || rho >= 2.0 * x_norm) return KernelRegime::rho_dominant;
  switch (critical_sign(n, nu)) {
    case -1: return KernelRegime::diagonal_sub;
    case 0: return KernelRegime::diagonal_log;
    default: return KernelRegime::diagonal_super;
  }
}

double i_nu_envelope(int n, double nu, double x_norm) {
  validate(n, nu);
  if (x_norm < 0.0) throw std::invalid_argument("|x| must be non-negative");
  if (x_norm >= 2.0) return std::pow(japanese(x_norm), -nu);
  const int sign = critical_sign(n, nu);
  if (sign < 0) return 1.0;
  const double d = std::abs(x_norm - 1.0);
  if (d == 0.0) throw SingularLocation("I_nu envelope is singular at |x| = 1 for nu >= n-1");
  if (sign == 0) return std::abs(std::log(d)) + 1.0;
  return std::pow(d, static_cast<double>(n - 1) - nu);
}

double j_nu_envelope(int n, double nu, double x_norm, double rho) {
  validate(n, nu);
  if (x_norm < 0.0 || rho < 0.0) throw std::invalid_argument("|x| and rho must be non-negative");
  switch (j_nu_regime(n, nu, x_norm, rho)) {
    case KernelRegime::x_dominant: return std::pow(japanese(x_norm), -nu);
    case KernelRegime::rho_dominant:
    case KernelRegime::diagonal_sub: return std::pow(japanese(rho), -nu);
    case KernelRegime::diagonal_log: {
      const double jr = japanese(rho);
      return std::pow(jr, -nu) * std::log(2.0 * jr / japanese(x_norm - rho));
    }
    default:
      return std::pow(japanese(rho), 1.0 - n) *
             std::pow(japanese(x_norm - rho), static_cast<double>(n - 1) - nu);
  }
}

double i_nu_quadrature(int n, double nu, double x_norm, double tol) {
  validate(n, nu);
  if (x_norm < 0.0) throw std::invalid_argument("|x| must be non-negative");
  if (x_norm == 0.0) return sphere_area(n - 1);
  const double sin_power = static_cast<double>(n - 2);
  const double factor = polar_factor(n);

  if (x_norm == 1.0) {
    if (critical_sign(n, nu) >= 0) {
      throw DivergentIntegral("I_nu diverges at |x| = 1 for nu >= n-1");
    }
    // Near theta = 0 the integrand is theta^{n-2-nu} (1 + O(theta^2)); the
    // piece [0, eps] is taken in closed form.
    const double eps = 1e-6;
    const double excess = static_cast<double>(n - 1) - nu;
    auto f = [&](double t) {
      return std::pow(2.0 * std::sin(0.5 * t), -nu) * std::pow(std::sin(t), sin_power);
    };
    const double body = integrate_or_throw(f, graded_breakpoints(eps, kPi, eps), tol, "I_nu");
    return factor * (body + std::pow(eps, excess) / excess);
  }

  // |x - y|^2 = (r - 1)^2 + 4 r sin^2(theta/2), free of cancellation near r = 1.
  const double r = x_norm;
  const double d2 = (r - 1.0) * (r - 1.0);
  auto f = [&](double t) {
    const double s = std::sin(0.5 * t);
    return std::pow(d2 + 4.0 * r * s * s, -0.5 * nu) * std::pow(std::sin(t), sin_power);
  };
  const double width = std::abs(r - 1.0) / std::sqrt(r);
  return factor * integrate_or_throw(f, peak_breaks(width), tol, "I_nu");
}

double i_nu_closed_form_n3(double nu, double r) {
  validate(3, nu);
  if (r < 0.0) throw std::invalid_argument("r must be non-negative");
  if (r == 0.0) return 4.0 * kPi;
  const bool log_form = std::abs(nu - 2.0) <= 1e-14;
  if (r == 1.0) {
    if (nu >= 2.0 || log_form) throw DivergentIntegral("closed form diverges at r = 1 for nu >= 2");
    const double c = 2.0 - nu;
    return 2.0 * kPi * std::pow(2.0, c) / c;
  }
  // Write (r + 1)^c - |r - 1|^c = m^c ((1 + s)^c - (1 - s)^c) with
  // m = max(r, 1), s = min(r, 1/r) < 1, and evaluate via expm1/log1p.
  const double s = r < 1.0 ? r : 1.0 / r;
  const double m = r < 1.0 ? 1.0 : r;
  if (log_form) return 2.0 * kPi * (std::log1p(s) - std::log1p(-s)) / r;
  const double c = 2.0 - nu;
  const double diff = std::expm1(c * std::log1p(s)) - std::expm1(c * std::log1p(-s));
  return 2.0 * kPi * std::pow(m, c) * diff / (r * c);
}

double j_nu_quadrature(int n, double nu, double x_norm, double rho, double tol) {
  validate(n, nu);
  if (x_norm < 0.0 || rho < 0.0) throw std::invalid_argument("|x| and rho must be non-negative");
  if (x_norm == 0.0) return sphere_area(n - 1) * std::pow(japanese(rho), -nu);
  if (rho == 0.0) return sphere_area(n - 1) * std::pow(japanese(x_norm), -nu);
  const double sin_power = static_cast<double>(n - 2);
  const double base = 1.0 + (x_norm - rho) * (x_norm - rho);
  const double xr = x_norm * rho;
  auto f = [&](double t) {
    const double s = std::sin(0.5 * t);
    return std::pow(base + 4.0 * xr * s * s, -0.5 * nu) * std::pow(std::sin(t), sin_power);
  };
  const double width = std::sqrt(base / xr);
  return polar_factor(n) * integrate_or_throw(f, peak_breaks(width), tol, "J_nu");
}

}  // namespace mnlab
