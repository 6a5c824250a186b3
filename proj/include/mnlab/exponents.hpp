#pragma once

// Exact admissibility checkers for the exponent systems of the weighted
// fractional-integral inequalities (Stein-Weiss, radial and mixed
// radial-angular variants, weighted Sobolev, Caffarelli-Kohn-Nirenberg,
// Strichartz). Every quantity is an exact rational; there is no floating
// point anywhere in this module.
//
// Condition identifiers are stable strings, listed in docs/conditions.md.

#include "mnlab/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mnlab {

/// Lebesgue exponent p in [1, inf], stored as the reciprocal 1/p in [0, 1].
/// The value 0 encodes p = inf and 1 encodes p = 1.
class RecipExponent {
 public:
  RecipExponent() = default;
  explicit RecipExponent(Rational reciprocal);

  static RecipExponent from_exponent(const Rational& p);
  static RecipExponent infinity() { return RecipExponent(Rational(0)); }

  const Rational& value() const { return value_; }
  /// Hoelder conjugate: value() + dual().value() == 1.
  RecipExponent dual() const { return RecipExponent(Rational(1) - value_); }
  bool is_infinite() const { return value_ == 0; }
  /// p as a double; +inf when the reciprocal is zero.
  double exponent() const;

  friend bool operator==(const RecipExponent&, const RecipExponent&) = default;

 private:
  Rational value_{0};
};

struct SteinWeissIndices {
  int n = 2;
  RecipExponent p, q;
  Rational alpha, beta, gamma;
};

struct MixedIndices {
  int n = 2;
  RecipExponent p, q, ptilde, qtilde;
  Rational alpha, beta, gamma;
};

struct CknIndices {
  int n = 3;
  Rational a{1};
  Rational sigma{1};
  RecipExponent p, ptilde, q, qtilde, r, rtilde;
  Rational alpha, beta, gamma;
};

struct StrichartzIndices {
  int n = 3;
  RecipExponent q, qtilde;
  Rational delta, epsilon;
  RecipExponent p, r;
};

enum class ConditionKind { strict, non_strict, equality, compound, conditional };

std::string_view to_string(ConditionKind kind);
ConditionKind parse_condition_kind(std::string_view text);

struct Condition {
  std::string id;
  ConditionKind kind = ConditionKind::strict;
  bool satisfied = false;
  // Normalized so that positive means strictly inside. For equalities it is
  // the signed deviation LHS - RHS. For compound conditions it is the
  // smallest component margin.
  Rational margin;
  // A conditional constraint whose trigger does not hold. Always satisfied.
  bool vacuous = false;

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Verdict {
  bool admissible = true;
  std::vector<Condition> conditions;
  // Non-strict inequalities (or non-strict parts of compound ones) met with
  // margin exactly zero.
  std::vector<std::string> boundary;
  std::map<std::string, bool> flags;

  const Condition* find(std::string_view id) const;
  std::optional<std::string> first_failed() const;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// One component of a compound condition.
struct Atom {
  Rational value;
  bool strict;
};

class VerdictBuilder {
 public:
  VerdictBuilder& positive(std::string id, Rational margin);
  VerdictBuilder& nonnegative(std::string id, Rational margin);
  VerdictBuilder& inequality(std::string id, Rational margin, bool strict);
  VerdictBuilder& equal(std::string id, Rational deviation);
  VerdictBuilder& all_of(std::string id, std::vector<Atom> atoms);
  VerdictBuilder& vacuous(std::string id, Rational margin);
  VerdictBuilder& flag(std::string name, bool value);

  Verdict finish() &&;

 private:
  Verdict verdict_;
};

enum class MixedMode { general, strict, bandlimited };
enum class StrichartzVariant { classical, radial, precised };

std::string_view to_string(MixedMode mode);
std::string_view to_string(StrichartzVariant variant);

Verdict check_stein_weiss(const SteinWeissIndices& idx);
Verdict check_radial_stein_weiss(const SteinWeissIndices& idx);
Verdict check_mixed_stein_weiss(const MixedIndices& idx, MixedMode mode);

/// Kernel <x>^{-mu}: conditions of the non-homogeneous estimate on the full
/// range 1 <= p <= q <= inf. Pass mu = gamma for the S_gamma corollary.
Verdict check_nonhomogeneous(const MixedIndices& idx, const Rational& mu);

/// Throws std::domain_error unless 0 < sigma < n.
Verdict check_weighted_sobolev(const MixedIndices& idx, const Rational& sigma);

/// (Delta, Delta~) balance parameters of the interpolation inequality.
std::pair<Rational, Rational> ckn_deltas(const CknIndices& idx);

/// Fractional CKN with mixed norms. With integer_sigma the lower bound on
/// alpha is dropped; throws std::domain_error if sigma is not in 1..n-1.
Verdict check_ckn(const CknIndices& idx, bool integer_sigma);
/// First-order CKN in plain L^p norms. Requires p = p~, q = q~, r = r~.
Verdict check_ckn_classical(const CknIndices& idx);
/// Radial improvement of the first-order CKN inequality.
Verdict check_ckn_radial(const CknIndices& idx);

Verdict check_strichartz(const StrichartzIndices& idx, StrichartzVariant variant);

/// Third condition of the mixed system as a signed margin:
/// alpha + beta - (n-1)(1/q - 1/p + 1/p~ - 1/q~).
Rational mixed_third_margin(const MixedIndices& idx);

}  // namespace mnlab
