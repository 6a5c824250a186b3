#include "mnlab/region.hpp"

#include <array>
#include <optional>
#include <stdexcept>

namespace mnlab {

namespace {

struct CheckerName {
  CheckerId id;
  std::string_view name;
};

constexpr std::array<CheckerName, 14> kCheckerNames{{
    {CheckerId::stein_weiss, "stein-weiss"},
    {CheckerId::radial_stein_weiss, "radial-stein-weiss"},
    {CheckerId::mixed_general, "mixed"},
    {CheckerId::mixed_strict, "mixed-strict"},
    {CheckerId::mixed_bandlimited, "mixed-bandlimited"},
    {CheckerId::nonhomogeneous, "nonhomogeneous"},
    {CheckerId::weighted_sobolev, "sobolev"},
    {CheckerId::ckn, "ckn"},
    {CheckerId::ckn_integer, "ckn-integer"},
    {CheckerId::ckn_classical, "ckn-classical"},
    {CheckerId::ckn_radial, "ckn-radial"},
    {CheckerId::strichartz_classical, "strichartz-classical"},
    {CheckerId::strichartz_radial, "strichartz-radial"},
    {CheckerId::strichartz_precised, "strichartz-precised"},
}};

constexpr std::array<std::string_view, 6> kReciprocalFields{"p", "q", "ptilde",
                                                            "qtilde", "r", "rtilde"};
constexpr std::array<std::string_view, 8> kValueFields{"alpha", "beta", "gamma", "mu",
                                                       "sigma", "a",    "delta", "epsilon"};

}  // namespace

std::string_view to_string(CheckerId id) {
  for (const auto& entry : kCheckerNames) {
    if (entry.id == id) return entry.name;
  }
  return "unknown";
}

CheckerId parse_checker_id(std::string_view text) {
  for (const auto& entry : kCheckerNames) {
    if (entry.name == text) return entry.id;
  }
  throw std::invalid_argument("unknown checker: " + std::string(text));
}

const std::vector<CheckerId>& all_checkers() {
  static const std::vector<CheckerId> ids = [] {
    std::vector<CheckerId> out;
    for (const auto& entry : kCheckerNames) out.push_back(entry.id);
    return out;
  }();
  return ids;
}

bool ParameterSet::is_reciprocal(std::string_view name) {
  for (auto f : kReciprocalFields) {
    if (f == name) return true;
  }
  return false;
}

bool ParameterSet::is_known(std::string_view name) {
  if (name == "n" || is_reciprocal(name)) return true;
  for (auto f : kValueFields) {
    if (f == name) return true;
  }
  return false;
}

ParameterSet& ParameterSet::set(std::string_view name, Rational value) {
  if (!is_known(name)) throw std::invalid_argument("unknown parameter: " + std::string(name));
  values_.insert_or_assign(std::string(name), std::move(value));
  return *this;
}

bool ParameterSet::has(std::string_view name) const { return values_.find(name) != values_.end(); }

Rational ParameterSet::get(std::string_view name) const {
  if (auto it = values_.find(name); it != values_.end()) return it->second;
  if (name == "a" || name == "sigma") return Rational(1);
  return Rational(0);
}

int ParameterSet::dimension() const {
  const Rational n = get("n");
  if (boost::multiprecision::denominator(n) != 1) {
    throw std::domain_error("dimension must be an integer");
  }
  return boost::multiprecision::numerator(n).convert_to<int>();
}

RecipExponent ParameterSet::exponent(std::string_view name) const {
  return RecipExponent(get(name));
}

SteinWeissIndices ParameterSet::stein_weiss() const {
  return {dimension(), exponent("p"), exponent("q"), get("alpha"), get("beta"), get("gamma")};
}

MixedIndices ParameterSet::mixed() const {
  return {dimension(),  exponent("p"), exponent("q"), exponent("ptilde"), exponent("qtilde"),
          get("alpha"), get("beta"),   get("gamma")};
}

CknIndices ParameterSet::ckn() const {
  CknIndices idx;
  idx.n = dimension();
  idx.a = get("a");
  idx.sigma = get("sigma");
  idx.p = exponent("p");
  idx.ptilde = exponent("ptilde");
  idx.q = exponent("q");
  idx.qtilde = exponent("qtilde");
  idx.r = exponent("r");
  idx.rtilde = exponent("rtilde");
  idx.alpha = get("alpha");
  idx.beta = get("beta");
  idx.gamma = get("gamma");
  return idx;
}

StrichartzIndices ParameterSet::strichartz() const {
  StrichartzIndices idx;
  idx.n = dimension();
  idx.q = exponent("q");
  idx.qtilde = exponent("qtilde");
  idx.delta = get("delta");
  idx.epsilon = get("epsilon");
  idx.p = exponent("p");
  idx.r = exponent("r");
  return idx;
}

Verdict run_checker(CheckerId id, const ParameterSet& params) {
  switch (id) {
    case CheckerId::stein_weiss: return check_stein_weiss(params.stein_weiss());
    case CheckerId::radial_stein_weiss: return check_radial_stein_weiss(params.stein_weiss());
    case CheckerId::mixed_general:
      return check_mixed_stein_weiss(params.mixed(), MixedMode::general);
    case CheckerId::mixed_strict:
      return check_mixed_stein_weiss(params.mixed(), MixedMode::strict);
    case CheckerId::mixed_bandlimited:
      return check_mixed_stein_weiss(params.mixed(), MixedMode::bandlimited);
    case CheckerId::nonhomogeneous: return check_nonhomogeneous(params.mixed(), params.get("mu"));
    case CheckerId::weighted_sobolev:
      return check_weighted_sobolev(params.mixed(), params.get("sigma"));
    case CheckerId::ckn: return check_ckn(params.ckn(), false);
    case CheckerId::ckn_integer: return check_ckn(params.ckn(), true);
    case CheckerId::ckn_classical: return check_ckn_classical(params.ckn());
    case CheckerId::ckn_radial: return check_ckn_radial(params.ckn());
    case CheckerId::strichartz_classical:
      return check_strichartz(params.strichartz(), StrichartzVariant::classical);
    case CheckerId::strichartz_radial:
      return check_strichartz(params.strichartz(), StrichartzVariant::radial);
    case CheckerId::strichartz_precised:
      return check_strichartz(params.strichartz(), StrichartzVariant::precised);
  }
  throw std::invalid_argument("unknown checker");
}

std::vector<Rational> GridAxis::values() const {
  if (step <= 0 || start > stop) {
    throw std::domain_error("empty range for parameter '" + name + "'");
  }
  std::vector<Rational> out;
  for (Rational v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

ParameterSet project_to_scaling(CheckerId checker, ParameterSet params, std::string_view name) {
  if (!ParameterSet::is_known(name) || name == "n") {
    throw std::domain_error("cannot project onto '" + std::string(name) + "'");
  }
  auto deviation_at = [&](const Rational& v) -> std::optional<Rational> {
    ParameterSet probe = params;
    probe.set(name, v);
    Verdict verdict;
    try {
      verdict = run_checker(checker, probe);
    } catch (const std::domain_error&) {
      return std::nullopt;  // v outside the field's domain (e.g. sigma = 0)
    }
    const Condition* scaling = verdict.find("scaling");
    if (scaling == nullptr) {
      throw std::domain_error("checker '" + std::string(to_string(checker)) +
                              "' has no scaling equality");
    }
    return scaling->margin;
  };

  // The deviation is affine in the field, so any two admissible sample
  // points determine the root.
  const Rational current = params.get(name);
  const std::array<Rational, 7> candidates{current,          Rational(1, 2), Rational(1, 4),
                                           Rational(0),      Rational(1),    current + Rational(1, 4),
                                           current - Rational(1, 4)};
  std::optional<std::pair<Rational, Rational>> first;
  for (const auto& v : candidates) {
    auto d = deviation_at(v);
    if (!d) continue;
    if (!first) {
      first.emplace(v, *d);
      continue;
    }
    if (v == first->first) continue;
    const Rational slope = (*d - first->second) / (v - first->first);
    if (slope == 0) {
      throw std::domain_error("scaling does not depend on '" + std::string(name) + "'");
    }
    params.set(name, first->first - first->second / slope);
    return params;
  }
  throw std::domain_error("could not sample '" + std::string(name) + "' for projection");
}

namespace {

void validate_axis(const GridAxis& axis) {
  if (!ParameterSet::is_known(axis.name) || axis.name == "n") {
    throw std::domain_error("'" + axis.name + "' is not a free rational parameter");
  }
}

RegionPoint evaluate_point(CheckerId checker, const ParameterSet& base, const GridAxis& x,
                           const Rational& xv, const GridAxis& y, const Rational& yv,
                           std::string_view project_onto) {
  ParameterSet params = base;
  params.set(x.name, xv);
  params.set(y.name, yv);
  if (!project_onto.empty()) params = project_to_scaling(checker, std::move(params), project_onto);
  return {xv, yv, run_checker(checker, params)};
}

}  // namespace

RegionMap scan_region_serial(CheckerId checker, const ParameterSet& base, const GridAxis& x,
                             const GridAxis& y, std::string_view project_onto) {
  validate_axis(x);
  validate_axis(y);
  const auto xs = x.values();
  const auto ys = y.values();
  RegionMap out;
  out.reserve(xs.size() * ys.size());
  for (const auto& xv : xs) {
    for (const auto& yv : ys) out.push_back(evaluate_point(checker, base, x, xv, y, yv, project_onto));
  }
  return out;
}

RegionMap scan_region(CheckerId checker, const ParameterSet& base, const GridAxis& x,
                      const GridAxis& y, std::string_view project_onto) {
  validate_axis(x);
  validate_axis(y);
  const auto xs = x.values();
  const auto ys = y.values();
  const auto total = static_cast<long long>(xs.size() * ys.size());
  RegionMap out(static_cast<std::size_t>(total));

  // Exceptions must not escape an OpenMP region; keep the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (long long k = 0; k < total; ++k) {
    const auto i = static_cast<std::size_t>(k) / ys.size();
    const auto j = static_cast<std::size_t>(k) % ys.size();
    try {
      out[static_cast<std::size_t>(k)] =
          evaluate_point(checker, base, x, xs[i], y, ys[j], project_onto);
    } catch (...) {
#pragma omp critical(mnlab_region_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace mnlab
