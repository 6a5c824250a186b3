#include "mnlab/exponents.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mnlab {

RecipExponent::RecipExponent(Rational reciprocal) : value_(std::move(reciprocal)) {
  if (value_ < 0 || value_ > 1) {
    throw std::domain_error("reciprocal exponent outside [0,1]: " + to_string(value_));
  }
}

RecipExponent RecipExponent::from_exponent(const Rational& p) {
  if (p < 1) throw std::domain_error("Lebesgue exponent below 1: " + to_string(p));
  return RecipExponent(Rational(1) / p);
}

double RecipExponent::exponent() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return 1.0 / to_double(value_);
}

std::string_view to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::strict: return "strict";
    case ConditionKind::non_strict: return "non_strict";
    case ConditionKind::equality: return "equality";
    case ConditionKind::compound: return "compound";
    case ConditionKind::conditional: return "conditional";
  }
  return "strict";
}

ConditionKind parse_condition_kind(std::string_view text) {
  if (text == "strict") return ConditionKind::strict;
  if (text == "non_strict") return ConditionKind::non_strict;
  if (text == "equality") return ConditionKind::equality;
  if (text == "compound") return ConditionKind::compound;
  if (text == "conditional") return ConditionKind::conditional;
  throw std::invalid_argument("unknown condition kind: " + std::string(text));
}

std::string_view to_string(MixedMode mode) {
  switch (mode) {
    case MixedMode::general: return "general";
    case MixedMode::strict: return "strict";
    case MixedMode::bandlimited: return "bandlimited";
  }
  return "general";
}

std::string_view to_string(StrichartzVariant variant) {
  switch (variant) {
    case StrichartzVariant::classical: return "classical";
    case StrichartzVariant::radial: return "radial";
    case StrichartzVariant::precised: return "precised";
  }
  return "classical";
}

const Condition* Verdict::find(std::string_view id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::optional<std::string> Verdict::first_failed() const {
  for (const auto& c : conditions) {
    if (!c.satisfied) return c.id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

VerdictBuilder& VerdictBuilder::inequality(std::string id, Rational margin, bool strict) {
  Condition c;
  c.id = std::move(id);
  c.kind = strict ? ConditionKind::strict : ConditionKind::non_strict;
  c.satisfied = strict ? margin > 0 : margin >= 0;
  if (!strict && margin == 0) verdict_.boundary.push_back(c.id);
  c.margin = std::move(margin);
  verdict_.admissible = verdict_.admissible && c.satisfied;
  verdict_.conditions.push_back(std::move(c));
  return *this;
}

VerdictBuilder& VerdictBuilder::positive(std::string id, Rational margin) {
  return inequality(std::move(id), std::move(margin), true);
}

VerdictBuilder& VerdictBuilder::nonnegative(std::string id, Rational margin) {
  return inequality(std::move(id), std::move(margin), false);
}

VerdictBuilder& VerdictBuilder::equal(std::string id, Rational deviation) {
  Condition c;
  c.id = std::move(id);
  c.kind = ConditionKind::equality;
  c.satisfied = deviation == 0;
  c.margin = std::move(deviation);
  verdict_.admissible = verdict_.admissible && c.satisfied;
  verdict_.conditions.push_back(std::move(c));
  return *this;
}

VerdictBuilder& VerdictBuilder::all_of(std::string id, std::vector<Atom> atoms) {
  Condition c;
  c.id = std::move(id);
  c.kind = ConditionKind::compound;
  c.satisfied = true;
  bool touches_boundary = false;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& atom = atoms[i];
    const bool ok = atom.strict ? atom.value > 0 : atom.value >= 0;
    c.satisfied = c.satisfied && ok;
    if (!atom.strict && atom.value == 0) touches_boundary = true;
    if (i == 0 || atom.value < c.margin) c.margin = atom.value;
  }
  if (c.satisfied && touches_boundary) verdict_.boundary.push_back(c.id);
  verdict_.admissible = verdict_.admissible && c.satisfied;
  verdict_.conditions.push_back(std::move(c));
  return *this;
}

VerdictBuilder& VerdictBuilder::vacuous(std::string id, Rational margin) {
  Condition c;
  c.id = std::move(id);
  c.kind = ConditionKind::conditional;
  c.satisfied = true;
  c.vacuous = true;
  c.margin = std::move(margin);
  verdict_.conditions.push_back(std::move(c));
  return *this;
}

VerdictBuilder& VerdictBuilder::flag(std::string name, bool value) {
  verdict_.flags[std::move(name)] = value;
  return *this;
}

Verdict VerdictBuilder::finish() && { return std::move(verdict_); }

// ---------------------------------------------------------------------------

namespace {

const Rational one{1};

void require_dimension(int n, int minimum) {
  if (n < minimum) {
    throw std::domain_error("dimension n=" + std::to_string(n) + " below " +
                            std::to_string(minimum));
  }
}

// 1 < p <= q < inf.
std::vector<Atom> open_range(const RecipExponent& p, const RecipExponent& q) {
  return {{one - p.value(), true}, {p.value() - q.value(), false}, {q.value(), true}};
}

// 1 <= p <= q <= inf; only the ordering is not implied by the type.
std::vector<Atom> closed_range(const RecipExponent& p, const RecipExponent& q) {
  return {{p.value() - q.value(), false}};
}

// Conditions shared by the homogeneous-kernel systems: integrability of the
// weights, kernel range, scaling.
void common_homogeneous(VerdictBuilder& b, int n, const RecipExponent& p,
                        const RecipExponent& q, const Rational& alpha, const Rational& beta,
                        const Rational& gamma) {
  const Rational nn(n);
  b.positive("beta_lt", nn * q.value() - beta);
  b.positive("alpha_lt", nn * p.dual().value() - alpha);
  b.all_of("gamma_range", {{gamma, true}, {nn - gamma, true}});
  b.equal("scaling", alpha + beta + gamma - (nn + nn * q.value() - nn * p.value()));
}

}  // namespace

Rational mixed_third_margin(const MixedIndices& idx) {
  return idx.alpha + idx.beta -
         Rational(idx.n - 1) * (idx.q.value() - idx.p.value() + idx.ptilde.value() -
                                idx.qtilde.value());
}

Verdict check_stein_weiss(const SteinWeissIndices& idx) {
  require_dimension(idx.n, 1);
  VerdictBuilder b;
  b.all_of("range_pq", open_range(idx.p, idx.q));
  common_homogeneous(b, idx.n, idx.p, idx.q, idx.alpha, idx.beta, idx.gamma);
  b.nonnegative("nonneg", idx.alpha + idx.beta);
  return std::move(b).finish();
}

Verdict check_radial_stein_weiss(const SteinWeissIndices& idx) {
  require_dimension(idx.n, 1);
  VerdictBuilder b;
  b.all_of("range_pq", open_range(idx.p, idx.q));
  common_homogeneous(b, idx.n, idx.p, idx.q, idx.alpha, idx.beta, idx.gamma);
  b.nonnegative("radial_lower", idx.alpha + idx.beta -
                                    Rational(idx.n - 1) * (idx.q.value() - idx.p.value()));
  return std::move(b).finish();
}

Verdict check_mixed_stein_weiss(const MixedIndices& idx, MixedMode mode) {
  require_dimension(idx.n, 2);
  VerdictBuilder b;
  b.all_of("range_pq", mode == MixedMode::general ? open_range(idx.p, idx.q)
                                                  : closed_range(idx.p, idx.q));
  b.nonnegative("angular_order", idx.ptilde.value() - idx.qtilde.value());
  common_homogeneous(b, idx.n, idx.p, idx.q, idx.alpha, idx.beta, idx.gamma);
  b.inequality("third_mixed", mixed_third_margin(idx), mode == MixedMode::strict);
  return std::move(b).finish();
}

Verdict check_nonhomogeneous(const MixedIndices& idx, const Rational& mu) {
  require_dimension(idx.n, 2);
  const Rational nn(idx.n);
  VerdictBuilder b;
  b.all_of("range_pq", closed_range(idx.p, idx.q));
  b.nonnegative("angular_order", idx.ptilde.value() - idx.qtilde.value());
  b.positive("beta_lt", nn * idx.q.value() - idx.beta);
  b.positive("alpha_lt", nn * idx.p.dual().value() - idx.alpha);
  b.nonnegative("third_mixed", mixed_third_margin(idx));
  b.positive("mu_decay",
             mu + idx.alpha + idx.beta - nn * (one + idx.q.value() - idx.p.value()));
  return std::move(b).finish();
}

Verdict check_weighted_sobolev(const MixedIndices& idx, const Rational& sigma) {
  require_dimension(idx.n, 2);
  const Rational nn(idx.n);
  if (sigma <= 0 || sigma >= nn) {
    throw std::domain_error("sigma outside (0,n): " + to_string(sigma));
  }
  const Rational third = mixed_third_margin(idx);
  // A strict third condition opens the full range 1 <= p <= q <= inf.
  const bool relaxed = third > 0;

  VerdictBuilder b;
  b.all_of("range_pq", relaxed ? closed_range(idx.p, idx.q) : open_range(idx.p, idx.q));
  b.nonnegative("angular_order", idx.ptilde.value() - idx.qtilde.value());
  b.positive("beta_lt", nn * idx.q.value() - idx.beta);
  b.positive("alpha_lt", nn * idx.p.dual().value() - idx.alpha);
  b.equal("scaling",
          idx.alpha + idx.beta - (sigma + nn * idx.q.value() - nn * idx.p.value()));
  b.nonnegative("third_mixed", third);

  // Pointwise form |x|^{n/p - sigma}|u(x)| <~ || |D|^sigma u ||.
  const bool pointwise = idx.q.is_infinite() && idx.qtilde.is_infinite() && idx.alpha == 0 &&
                         idx.beta == sigma - nn * idx.p.value() && idx.beta < 0;
  const Rational lower = Rational(idx.n - 1) * idx.ptilde.value() + idx.p.value();
  const bool in_range = lower < sigma && sigma < nn * idx.p.value();
  b.flag("pointwise_form", pointwise);
  b.flag("pointwise_range", in_range);
  return std::move(b).finish();
}

std::pair<Rational, Rational> ckn_deltas(const CknIndices& idx) {
  const Rational nn(idx.n);
  const Rational one_minus_a = one - idx.a;
  Rational delta = idx.a * idx.sigma +
                   nn * (idx.r.value() - one_minus_a * idx.q.value() - idx.a * idx.p.value());
  Rational delta_tilde =
      idx.a * idx.sigma + nn * (idx.rtilde.value() - one_minus_a * idx.qtilde.value() -
                                idx.a * idx.ptilde.value());
  return {std::move(delta), std::move(delta_tilde)};
}

namespace {

void validate_ckn(const CknIndices& idx) {
  require_dimension(idx.n, 2);
  if (idx.a <= 0 || idx.a > 1) throw std::domain_error("a outside (0,1]: " + to_string(idx.a));
  if (idx.sigma <= 0 || idx.sigma >= idx.n) {
    throw std::domain_error("sigma outside (0,n): " + to_string(idx.sigma));
  }
}

bool is_integer(const Rational& x) { return boost::multiprecision::denominator(x) == 1; }

}  // namespace

Verdict check_ckn(const CknIndices& idx, bool integer_sigma) {
  validate_ckn(idx);
  if (integer_sigma && !(is_integer(idx.sigma) && idx.sigma >= 1 && idx.sigma <= idx.n - 1)) {
    throw std::domain_error("integer sigma must be one of 1..n-1, got " + to_string(idx.sigma));
  }
  const Rational nn(idx.n);
  const auto [delta, delta_tilde] = ckn_deltas(idx);

  VerdictBuilder b;
  b.all_of("finite_exponents", {{idx.p.value(), true},
                                {idx.ptilde.value(), true},
                                {idx.q.value(), true},
                                {idx.qtilde.value(), true},
                                {idx.r.value(), true},
                                {idx.rtilde.value(), true}});
  b.positive("gamma_lt", nn * idx.r.value() - idx.gamma);
  b.positive("beta_lt", nn * idx.q.value() - idx.beta);
  const Rational alpha_lower = idx.alpha - (nn * idx.p.value() - nn);
  if (integer_sigma) {
    b.vacuous("alpha_lower", alpha_lower);
  } else {
    b.positive("alpha_lower", alpha_lower);
  }
  b.positive("alpha_upper", nn * idx.p.value() - idx.sigma - idx.alpha);
  b.equal("scaling", delta - (idx.gamma - idx.a * idx.alpha - (one - idx.a) * idx.beta));

  const Rational balance = delta + Rational(idx.n - 1) * delta_tilde;
  b.nonnegative("delta_balance", balance);

  // A strict balance relaxes the strict inequalities below.
  const bool relaxed = balance > 0;
  b.inequality("p_gt_one", one - idx.p.value(), !relaxed);
  b.all_of("delta_band",
           {{delta - idx.a * (idx.sigma - nn * idx.p.value()), !relaxed},
            {idx.a * idx.sigma - delta, false}});
  b.all_of("delta_tilde_band", {{delta_tilde - idx.a * (idx.sigma - nn * idx.ptilde.value()), false},
                                {idx.a * idx.sigma - delta_tilde, false}});
  b.flag("strict_balance", relaxed);
  return std::move(b).finish();
}

namespace {

// First-order Delta = a + n(1/r - (1-a)/q - a/p).
Rational first_order_delta(const CknIndices& idx) {
  const Rational nn(idx.n);
  return idx.a +
         nn * (idx.r.value() - (one - idx.a) * idx.q.value() - idx.a * idx.p.value());
}

void first_order_common(VerdictBuilder& b, const CknIndices& idx) {
  const Rational nn(idx.n);
  b.all_of("finite_exponents",
           {{idx.p.value(), true}, {idx.q.value(), true}, {idx.r.value(), true}});
  b.positive("gamma_lt", nn * idx.r.value() - idx.gamma);
  b.positive("alpha_lt", nn * idx.p.value() - idx.alpha);
  b.positive("beta_lt", nn * idx.q.value() - idx.beta);
  b.equal("scaling", (idx.gamma - nn * idx.r.value()) -
                         (idx.a * (idx.alpha + one - nn * idx.p.value()) +
                          (one - idx.a) * (idx.beta - nn * idx.q.value())));
}

}  // namespace

Verdict check_ckn_classical(const CknIndices& idx) {
  require_dimension(idx.n, 1);
  if (idx.a <= 0 || idx.a > 1) throw std::domain_error("a outside (0,1]: " + to_string(idx.a));
  if (idx.p != idx.ptilde || idx.q != idx.qtilde || idx.r != idx.rtilde) {
    throw std::domain_error("classical CKN needs p=p~, q=q~, r=r~");
  }
  const Rational nn(idx.n);
  const Rational delta = first_order_delta(idx);

  VerdictBuilder b;
  first_order_common(b, idx);
  b.nonnegative("delta_nonneg", delta);
  const bool on_line = idx.gamma - nn * idx.r.value() == idx.alpha + one - nn * idx.p.value();
  if (on_line) {
    b.nonnegative("delta_le_a", idx.a - delta);
  } else {
    b.vacuous("delta_le_a", idx.a - delta);
  }
  return std::move(b).finish();
}

Verdict check_ckn_radial(const CknIndices& idx) {
  require_dimension(idx.n, 2);
  if (idx.a <= 0 || idx.a > 1) throw std::domain_error("a outside (0,1]: " + to_string(idx.a));
  const Rational nn(idx.n);
  const Rational delta = first_order_delta(idx);
  const bool p_is_one = idx.p.value() == 1;

  VerdictBuilder b;
  first_order_common(b, idx);
  b.all_of("delta_band", {{delta - idx.a * (one - nn * idx.p.value()), p_is_one},
                          {idx.a - delta, false}});
  b.positive("alpha_radial", nn * idx.p.value() - one - idx.alpha);
  return std::move(b).finish();
}

Verdict check_strichartz(const StrichartzIndices& idx, StrichartzVariant variant) {
  require_dimension(idx.n, 2);
  const Rational half(1, 2);
  const Rational n_minus_1(idx.n - 1);
  VerdictBuilder b;
  switch (variant) {
    case StrichartzVariant::classical:
      b.nonnegative("p_range", half - idx.p.value());
      b.positive("r_positive", idx.r.value());
      b.nonnegative("r_upper", half - Rational(2) * idx.p.value() / n_minus_1 - idx.r.value());
      break;
    case StrichartzVariant::radial:
      b.nonnegative("p_range", half - idx.p.value());
      b.positive("r_positive", idx.r.value());
      b.positive("r_upper", half - idx.p.value() / n_minus_1 - idx.r.value());
      break;
    case StrichartzVariant::precised: {
      const Rational window = idx.qtilde.value() - one / (Rational(2) * n_minus_1) - idx.q.value();
      b.all_of("q_range", {{idx.q.value(), true}, {half - idx.q.value(), false}});
      b.all_of("qtilde_range", {{idx.qtilde.value(), true}, {half - idx.qtilde.value(), false}});
      b.positive("delta_lt", Rational(idx.n) * idx.q.value() - idx.delta);
      b.all_of("epsilon_range", {{idx.epsilon, true}, {n_minus_1 / 2 - idx.epsilon, true}});
      b.positive("q_window", window);
      b.nonnegative("epsilon_bound", idx.delta + n_minus_1 * window - idx.epsilon);
      break;
    }
  }
  return std::move(b).finish();
}

}  // namespace mnlab
