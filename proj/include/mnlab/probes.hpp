#pragma once

// Empirical checks of the inequalities: LHS/RHS ratios of sampled test
// functions, sweeps of those ratios along a family parameter, and envelope
// verification for the kernel integrals.
//
// A probe never differentiates. For the Sobolev and CKN kinds it takes a
// density phi >= 0 and sets u = T_{n-sigma} phi, so that |D|^sigma u is phi
// up to a constant; the constant cancels in every growth test.

#include "mnlab/exponents.hpp"
#include "mnlab/operators.hpp"
#include "mnlab/region.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mnlab {

enum class InequalityKind { mixed_stein_weiss, nonhomogeneous, weighted_sobolev, ckn };

std::string_view to_string(InequalityKind kind);
InequalityKind parse_inequality_kind(std::string_view text);

/// || |x|^{weight_power} f ||_{L^p_{|x|} L^{ptilde}_theta}
struct NormDescriptor {
  RecipExponent p;
  RecipExponent ptilde;
  double weight_power = 0.0;
};

/// An inequality family together with its index tuple.
///   mixed_stein_weiss: || |x|^{-beta} T_gamma phi ||_{q, qt} <= C || |x|^alpha phi ||_{p, pt}
///   nonhomogeneous:    same with S_mu in place of T_gamma (mu defaults to gamma)
///   weighted_sobolev:  same with gamma = n - sigma
///   ckn:               || |x|^{-gamma} u ||_{r, rt}
///                        <= C || |x|^{-alpha} phi ||_{p, pt}^a || |x|^{-beta} u ||_{q, qt}^{1-a}
/// The checker decides which verdict the probe is compared with.
struct InequalitySpec {
  InequalityKind kind = InequalityKind::mixed_stein_weiss;
  CheckerId checker = CheckerId::mixed_general;
  ParameterSet params;

  /// Default checker for each kind.
  static CheckerId default_checker(InequalityKind kind);

  /// Throws std::invalid_argument if the checker does not belong to the kind
  /// or the kernel exponent is out of range.
  void validate() const;

  int dimension() const { return params.dimension(); }
  KernelKind kernel() const;
  double kernel_exponent() const;
  NormDescriptor lhs() const;
  NormDescriptor rhs() const;                        // norm of phi
  std::optional<NormDescriptor> rhs_second() const;  // ckn: norm of u
  double interpolation_power() const;                // a for ckn, 1 otherwise
  Verdict check() const;
};

/// RHS of the inequality is zero.
class UndefinedRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct RatioOptions {
  PotentialOptions potential;
};

/// LHS / RHS for the density f, with the potential sampled on f's grid.
double estimate_ratio(const InequalitySpec& spec, const GridFunction& f,
                      const RatioOptions& options = {});

enum class SweepParameter {
  eps,            // inner cutoff
  kappa,          // angular concentration
  concentration,  // kappa, with the radial support [1 - w/2, 1 + w/2], w = kappa^{-1/2}
  dilation,       // f(lambda x): eps and R divided by lambda
};

std::string_view to_string(SweepParameter parameter);
SweepParameter parse_sweep_parameter(std::string_view text);

/// The family member at one schedule value.
TestFamily apply_parameter(const TestFamily& base, SweepParameter parameter, double value);

struct SweepOptions {
  RadialGridSpec grid;         // family cutoffs are added as breaks per point
  int angular_resolution = 0;  // 0: default_angular_resolution(n)
  RatioOptions ratio;
  double bounded_variation = 2.0;  // bounded: max / min below this
  double divergence_growth = 10.0; // divergent: last / first at least this
  double divergence_slope = 0.05;  // ... and |slope| at least this
};

struct RegimeFit {
  std::string regime;
  std::string variable;
  double slope = 0.0;     // log-log slope of the quadrature
  double expected = 0.0;  // exponent of the model; NaN where it is not a power
  double ratio_slope = 0.0;  // worst log-log slope of quadrature / envelope
  std::size_t points = 0;
  bool within = false;
};

struct ProbeReport {
  std::string probe;  // "sharpness_sweep" or "envelope"

  // sharpness_sweep
  std::optional<InequalitySpec> spec;
  std::optional<TestFamily> family;
  std::string parameter;
  std::vector<double> parameters;
  std::vector<double> ratios;  // NaN where a point failed
  double slope = 0.0;          // d log(ratio) / d log(parameter)
  double growth = 1.0;         // ratio at the last point / ratio at the first
  double variation = 1.0;      // max / min
  std::string observed;        // "bounded", "divergent" or "inconclusive"
  bool expected_bounded = false;
  bool boundary = false;       // checker verdict sits on a margin-0 boundary

  // envelope
  std::string lemma;  // "I" or "J"
  int n = 0;
  double nu = 0.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::vector<RegimeFit> regimes;
  std::size_t skipped = 0;

  bool verdict_consistency = false;
  bool partial = false;
  std::vector<std::string> notes;
};

/// Ratio along the schedule (at least 5 points, ordered towards the limit).
/// Points run in parallel; a point that exceeds its quadrature budget is
/// recorded as NaN and the report is flagged partial.
ProbeReport sharpness_sweep(const InequalitySpec& spec, const TestFamily& base,
                            SweepParameter parameter, std::span<const double> schedule,
                            const SweepOptions& options = {});

enum class EnvelopeLemma { I, J };

std::string_view to_string(EnvelopeLemma lemma);
EnvelopeLemma parse_envelope_lemma(std::string_view text);

struct EnvelopeOptions {
  int points = 200;       // I: log grid on |x| in [1e-2, 1e2]
  int side = 20;          // J: side of each regime grid
  double tol = 1e-10;     // quadrature tolerance
  double slope_tol = 0.05;
  double spread_limit = 1e3;
};

/// Bounded-ratio and regime slope fits of the quadrature against the
/// envelope. I: far field |x| in [10, 100], near origin [1e-2, 1/2], and the
/// annulus at ||x| - 1| in [1e-6, 1e-4] on both sides. J: per-regime 20 x 20
/// log grids (x-dominant, rho-dominant, diagonal).
ProbeReport verify_envelope(EnvelopeLemma lemma, int n, double nu,
                            const EnvelopeOptions& options = {});

}  // namespace mnlab
