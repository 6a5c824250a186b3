#include "mnlab/probes.hpp"

#include "mnlab/kernels.hpp"
#include "mnlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

namespace mnlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> log_space(double lo, double hi, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(k) / (count - 1)));
  }
  return out;
}

bool belongs_to(InequalityKind kind, CheckerId id) {
  switch (kind) {
    case InequalityKind::mixed_stein_weiss:
      return id == CheckerId::mixed_general || id == CheckerId::mixed_strict ||
             id == CheckerId::mixed_bandlimited || id == CheckerId::stein_weiss ||
             id == CheckerId::radial_stein_weiss;
    case InequalityKind::nonhomogeneous: return id == CheckerId::nonhomogeneous;
    case InequalityKind::weighted_sobolev: return id == CheckerId::weighted_sobolev;
    case InequalityKind::ckn:
      return id == CheckerId::ckn || id == CheckerId::ckn_integer ||
             id == CheckerId::ckn_classical || id == CheckerId::ckn_radial;
  }
  return false;
}

// Runs f(k) for k in [0, count) in parallel, rethrowing the first failure.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  std::exception_ptr failure;
  const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long k = 0; k < total; ++k) {
    try {
      f(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(mnlab_probe_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::mixed_stein_weiss: return "mixed_stein_weiss";
    case InequalityKind::nonhomogeneous: return "nonhomogeneous";
    case InequalityKind::weighted_sobolev: return "weighted_sobolev";
    case InequalityKind::ckn: return "ckn";
  }
  return "unknown";
}

InequalityKind parse_inequality_kind(std::string_view text) {
  for (auto k : {InequalityKind::mixed_stein_weiss, InequalityKind::nonhomogeneous,
                 InequalityKind::weighted_sobolev, InequalityKind::ckn}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown inequality kind: " + std::string(text));
}

CheckerId InequalitySpec::default_checker(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::mixed_stein_weiss: return CheckerId::mixed_general;
    case InequalityKind::nonhomogeneous: return CheckerId::nonhomogeneous;
    case InequalityKind::weighted_sobolev: return CheckerId::weighted_sobolev;
    case InequalityKind::ckn: return CheckerId::ckn;
  }
  return CheckerId::mixed_general;
}

void InequalitySpec::validate() const {
  if (!belongs_to(kind, checker)) {
    throw std::invalid_argument("checker " + std::string(to_string(checker)) +
                                " does not apply to " + std::string(to_string(kind)));
  }
  const int n = dimension();
  if (n != 2 && n != 3) throw std::invalid_argument("probes support n = 2, 3 only");
  const double g = kernel_exponent();
  if (kernel() == KernelKind::riesz && !(g > 0.0 && g < n)) {
    throw std::invalid_argument("kernel exponent must lie in (0, n)");
  }
  if (kernel() == KernelKind::bessel_like && !(g > 0.0)) {
    throw std::invalid_argument("kernel exponent must be positive");
  }
  if (kind == InequalityKind::ckn) {
    const Rational a = params.get("a");
    if (a <= 0 || a > 1) throw std::invalid_argument("CKN interpolation power must lie in (0, 1]");
  }
}

KernelKind InequalitySpec::kernel() const {
  return kind == InequalityKind::nonhomogeneous ? KernelKind::bessel_like : KernelKind::riesz;
}

double InequalitySpec::kernel_exponent() const {
  switch (kind) {
    case InequalityKind::mixed_stein_weiss: return to_double(params.get("gamma"));
    case InequalityKind::nonhomogeneous:
      return to_double(params.has("mu") ? params.get("mu") : params.get("gamma"));
    case InequalityKind::weighted_sobolev:
    case InequalityKind::ckn: return dimension() - to_double(params.get("sigma"));
  }
  return 0.0;
}

NormDescriptor InequalitySpec::lhs() const {
  if (kind == InequalityKind::ckn) {
    return {params.exponent("r"), params.exponent("rtilde"), -to_double(params.get("gamma"))};
  }
  return {params.exponent("q"), params.exponent("qtilde"), -to_double(params.get("beta"))};
}

NormDescriptor InequalitySpec::rhs() const {
  const double alpha = to_double(params.get("alpha"));
  return {params.exponent("p"), params.exponent("ptilde"),
          kind == InequalityKind::ckn ? -alpha : alpha};
}

std::optional<NormDescriptor> InequalitySpec::rhs_second() const {
  if (kind != InequalityKind::ckn) return std::nullopt;
  return NormDescriptor{params.exponent("q"), params.exponent("qtilde"),
                        -to_double(params.get("beta"))};
}

double InequalitySpec::interpolation_power() const {
  return kind == InequalityKind::ckn ? to_double(params.get("a")) : 1.0;
}

Verdict InequalitySpec::check() const {
  ParameterSet p = params;
  if (kind == InequalityKind::nonhomogeneous && !p.has("mu")) p.set("mu", p.get("gamma"));
  return run_checker(checker, p);
}

double estimate_ratio(const InequalitySpec& spec, const GridFunction& f,
                      const RatioOptions& options) {
  spec.validate();
  if (f.dimension() != spec.dimension()) {
    throw std::invalid_argument("test function dimension differs from the inequality's");
  }
  auto norm_of = [](const GridFunction& g, const NormDescriptor& d) {
    return mixed_norm(g, d.p, d.ptilde, d.weight_power);
  };
  const double rhs_first = norm_of(f, spec.rhs());
  if (!(rhs_first > 0.0)) throw UndefinedRatio("right-hand side is zero");
  const GridFunction u = potential_on_grid(spec.kernel(), f, spec.kernel_exponent(), f.grid(),
                                           f.angular(), options.potential);
  const double lhs = norm_of(u, spec.lhs());
  double rhs = rhs_first;
  if (const auto second = spec.rhs_second()) {
    const double a = spec.interpolation_power();
    if (a < 1.0) {
      const double s = norm_of(u, *second);
      if (!(s > 0.0)) throw UndefinedRatio("right-hand side is zero");
      rhs = std::pow(rhs_first, a) * std::pow(s, 1.0 - a);
    }
  }
  return lhs / rhs;
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::eps: return "eps";
    case SweepParameter::kappa: return "kappa";
    case SweepParameter::concentration: return "concentration";
    case SweepParameter::dilation: return "dilation";
  }
  return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
  for (auto p : {SweepParameter::eps, SweepParameter::kappa, SweepParameter::concentration,
                 SweepParameter::dilation}) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown sweep parameter: " + std::string(text));
}

TestFamily apply_parameter(const TestFamily& base, SweepParameter parameter, double value) {
  if (!(value > 0.0)) throw std::invalid_argument("schedule values must be positive");
  TestFamily f = base;
  switch (parameter) {
    case SweepParameter::eps: f.eps = value; break;
    case SweepParameter::kappa: f.kappa = value; break;
    case SweepParameter::concentration: {
      const double w = 1.0 / std::sqrt(value);
      f.kappa = value;
      f.eps = 1.0 - 0.5 * w;
      f.R = 1.0 + 0.5 * w;
      break;
    }
    case SweepParameter::dilation:
      f.eps = base.eps / value;
      f.R = base.R / value;
      break;
  }
  f.validate();
  return f;
}

ProbeReport sharpness_sweep(const InequalitySpec& spec, const TestFamily& base,
                            SweepParameter parameter, std::span<const double> schedule,
                            const SweepOptions& options) {
  spec.validate();
  if (schedule.size() < 5) throw std::invalid_argument("a sweep needs at least 5 schedule points");
  const int n = spec.dimension();

  ProbeReport report;
  report.probe = "sharpness_sweep";
  report.spec = spec;
  report.family = base;
  report.parameter = std::string(to_string(parameter));
  report.parameters.assign(schedule.begin(), schedule.end());
  report.ratios.assign(schedule.size(), kNaN);

  const Verdict verdict = spec.check();
  report.expected_bounded = verdict.admissible;
  report.boundary = !verdict.boundary.empty();

  const AngularQuadrature angular = make_angular_quadrature(
      n, options.angular_resolution > 0 ? options.angular_resolution : default_angular_resolution(n));
  std::vector<char> failed(schedule.size(), 0);
  parallel_for(schedule.size(), [&](std::size_t k) {
    const TestFamily fam = apply_parameter(base, parameter, schedule[k]);
    RadialGridSpec gs = options.grid;
    for (double c : fam.cutoffs()) {
      if (!(c > gs.rho_min && c < gs.rho_max)) {
        throw std::invalid_argument("family cutoff " + std::to_string(c) + " lies outside the grid");
      }
      gs.breaks.push_back(c);
    }
    const GridFunction f = make_test_function(fam, make_radial_grid(n, gs), angular);
    try {
      report.ratios[k] = estimate_ratio(spec, f, options.ratio);
    } catch (const BudgetExceeded&) {
      failed[k] = 1;
    }
  });

  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (failed[k]) {
      report.partial = true;
      report.notes.push_back("point " + std::to_string(k) + ": quadrature budget exceeded");
      continue;
    }
    lx.push_back(std::log(schedule[k]));
    ly.push_back(std::log(report.ratios[k]));
  }
  if (lx.size() >= 2) {
    report.slope = fit_slope(lx, ly);
    report.growth = std::exp(ly.back() - ly.front());
    const auto [lo, hi] = std::minmax_element(ly.begin(), ly.end());
    report.variation = std::exp(*hi - *lo);
  }
  if (lx.size() < 2) {
    report.observed = "inconclusive";
  } else if (report.variation < options.bounded_variation) {
    report.observed = "bounded";
  } else if (report.growth >= options.divergence_growth &&
             std::abs(report.slope) >= options.divergence_slope) {
    report.observed = "divergent";
  } else {
    report.observed = "inconclusive";
  }
  report.verdict_consistency =
      report.observed == (report.expected_bounded ? "bounded" : "divergent");
  if (report.boundary) report.notes.push_back("checker verdict is on a margin-0 boundary");
  return report;
}

std::string_view to_string(EnvelopeLemma lemma) { return lemma == EnvelopeLemma::I ? "I" : "J"; }

EnvelopeLemma parse_envelope_lemma(std::string_view text) {
  if (text == "I") return EnvelopeLemma::I;
  if (text == "J") return EnvelopeLemma::J;
  throw std::invalid_argument("lemma must be I or J, got '" + std::string(text) + "'");
}

namespace {

struct Sample {
  double x = 0.0;
  double rho = 0.0;
  double quad = kNaN;
  double env = kNaN;
};

class EnvelopeRun {
 public:
  EnvelopeRun(EnvelopeLemma lemma, int n, double nu, const EnvelopeOptions& o)
      : lemma_(lemma), n_(n), nu_(nu), options_(o) {}

  // Fills quad/env; points whose quadrature fails are left NaN and counted.
  void evaluate(std::vector<Sample>& pts) {
    std::vector<char> bad(pts.size(), 0);
    parallel_for(pts.size(), [&](std::size_t k) {
      auto& s = pts[k];
      try {
        if (lemma_ == EnvelopeLemma::I) {
          s.quad = i_nu_quadrature(n_, nu_, s.x, options_.tol);
          s.env = i_nu_envelope(n_, nu_, s.x);
        } else {
          s.quad = j_nu_quadrature(n_, nu_, s.x, s.rho, options_.tol);
          s.env = j_nu_envelope(n_, nu_, s.x, s.rho);
        }
      } catch (const BudgetExceeded&) {
        bad[k] = 1;
      } catch (const DivergentIntegral&) {
        bad[k] = 1;
      } catch (const SingularLocation&) {
        bad[k] = 1;
      }
    });
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (bad[k]) {
        ++skipped_;
        continue;
      }
      const double r = pts[k].quad / pts[k].env;
      ratio_min_ = std::min(ratio_min_, r);
      ratio_max_ = std::max(ratio_max_, r);
    }
  }

  // Slope of log quad against log variable along each line; `expected` NaN
  // means the model is not a pure power and only the ratio slope is judged.
  RegimeFit fit(std::string regime, std::string variable,
                const std::vector<std::vector<Sample>>& lines,
                double (*var)(const Sample&), double expected) const {
    RegimeFit out{std::move(regime), std::move(variable), 0.0, expected, 0.0, 0, true};
    double worst_dev = 0.0;
    std::size_t used = 0;
    for (const auto& line : lines) {
      std::vector<double> lv, lq, lr;
      for (const auto& s : line) {
        if (std::isnan(s.quad)) continue;
        lv.push_back(std::log(var(s)));
        lq.push_back(std::log(s.quad));
        lr.push_back(std::log(s.quad / s.env));
      }
      if (lv.size() < 5) continue;
      const double slope = fit_slope(lv, lq);
      const double rs = fit_slope(lv, lr);
      out.slope += slope;
      out.points += lv.size();
      ++used;
      if (std::abs(rs) > std::abs(out.ratio_slope)) out.ratio_slope = rs;
      if (!std::isnan(expected)) worst_dev = std::max(worst_dev, std::abs(slope - expected));
    }
    if (used == 0) {
      out.within = false;
      return out;
    }
    out.slope /= static_cast<double>(used);
    out.within = std::isnan(expected) ? std::abs(out.ratio_slope) <= options_.slope_tol
                                      : worst_dev <= options_.slope_tol;
    return out;
  }

  double ratio_min() const { return ratio_min_; }
  double ratio_max() const { return ratio_max_; }
  std::size_t skipped() const { return skipped_; }

 private:
  EnvelopeLemma lemma_;
  int n_;
  double nu_;
  EnvelopeOptions options_;
  double ratio_min_ = std::numeric_limits<double>::infinity();
  double ratio_max_ = 0.0;
  std::size_t skipped_ = 0;
};

double var_x(const Sample& s) { return s.x; }
double var_rho(const Sample& s) { return s.rho; }
double var_gap(const Sample& s) { return std::abs(s.x - (s.rho == 0.0 ? 1.0 : s.rho)); }

std::vector<Sample> flatten(const std::vector<std::vector<Sample>>& lines) {
  std::vector<Sample> out;
  for (const auto& l : lines) out.insert(out.end(), l.begin(), l.end());
  return out;
}

void unflatten(const std::vector<Sample>& flat, std::vector<std::vector<Sample>>& lines) {
  std::size_t k = 0;
  for (auto& l : lines) {
    for (auto& s : l) s = flat[k++];
  }
}

// Transposes a rectangular set of lines.
std::vector<std::vector<Sample>> transpose(const std::vector<std::vector<Sample>>& lines) {
  std::vector<std::vector<Sample>> out(lines.front().size());
  for (const auto& l : lines) {
    for (std::size_t j = 0; j < l.size(); ++j) out[j].push_back(l[j]);
  }
  return out;
}

}  // namespace

ProbeReport verify_envelope(EnvelopeLemma lemma, int n, double nu, const EnvelopeOptions& options) {
  if (n < 2) throw std::invalid_argument("envelopes need n >= 2");
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  ProbeReport report;
  report.probe = "envelope";
  report.lemma = std::string(to_string(lemma));
  report.n = n;
  report.nu = nu;
  EnvelopeRun run(lemma, n, nu, options);
  const int crit = critical_sign(n, nu);
  const int side = options.side;

  auto evaluate_lines = [&](std::vector<std::vector<Sample>>& lines) {
    auto flat = flatten(lines);
    run.evaluate(flat);
    unflatten(flat, lines);
  };

  if (lemma == EnvelopeLemma::I) {
    std::vector<std::vector<Sample>> global(1);
    for (double x : log_space(1e-2, 1e2, options.points)) {
      if (crit >= 0 && x > 0.95 && x < 1.05) continue;
      global[0].push_back({x, 0.0});
    }
    evaluate_lines(global);

    std::vector<std::vector<Sample>> far(1), origin(1), inner(1), outer(1);
    for (double x : log_space(10.0, 100.0, side)) far[0].push_back({x, 0.0});
    for (double x : log_space(1e-2, 0.5, side)) origin[0].push_back({x, 0.0});
    for (double d : log_space(1e-6, 1e-4, side)) {
      inner[0].push_back({1.0 - d, 0.0});
      outer[0].push_back({1.0 + d, 0.0});
    }
    for (auto* l : {&far, &origin, &inner, &outer}) evaluate_lines(*l);

    const std::string annulus(to_string(i_nu_regime(n, nu, 1.0 + 1e-3)));
    const double annulus_exp = crit > 0 ? (n - 1) - nu : kNaN;
    report.regimes.push_back(run.fit("far", "|x|", far, var_x, -nu));
    report.regimes.push_back(run.fit("near_origin", "|x|", origin, var_x, 0.0));
    report.regimes.push_back(run.fit(annulus + "_inner", "||x|-1|", inner, var_gap, annulus_exp));
    report.regimes.push_back(run.fit(annulus + "_outer", "||x|-1|", outer, var_gap, annulus_exp));
  } else {
    const auto big = log_space(1e2, 1e4, side);
    const auto t = log_space(1e-3, 0.5, side);
    // x-dominant: rho = t |x|; one line per t along |x|.
    std::vector<std::vector<Sample>> xdom, rdom;
    for (double tt : t) {
      std::vector<Sample> lx, lr;
      for (double b : big) {
        lx.push_back({b, tt * b});
        lr.push_back({tt * b, b});
      }
      xdom.push_back(lx);
      rdom.push_back(lr);
    }
    // Diagonal: |x| = rho + d with d << rho; lines along rho (fixed d).
    std::vector<std::vector<Sample>> diag;
    for (double d : log_space(10.0, 100.0, side)) {
      std::vector<Sample> l;
      for (double rho : log_space(1e5, 1e7, side)) l.push_back({rho + d, rho});
      diag.push_back(l);
    }
    for (auto* l : {&xdom, &rdom, &diag}) evaluate_lines(*l);

    const std::string dname(to_string(j_nu_regime(n, nu, 1e5 + 10.0, 1e5)));
    report.regimes.push_back(run.fit("x_dominant", "|x|", xdom, var_x, -nu));
    report.regimes.push_back(run.fit("rho_dominant", "rho", rdom, var_rho, -nu));
    const double along_rho = crit > 0 ? 1.0 - n : (crit < 0 ? -nu : kNaN);
    const double along_d = crit > 0 ? (n - 1) - nu : (crit < 0 ? 0.0 : kNaN);
    report.regimes.push_back(run.fit(dname + "_rho", "rho", diag, var_rho, along_rho));
    report.regimes.push_back(run.fit(dname + "_gap", "||x|-rho|", transpose(diag), var_gap, along_d));
  }

  report.ratio_min = run.ratio_min();
  report.ratio_max = run.ratio_max();
  report.skipped = run.skipped();
  if (report.skipped > 0) {
    report.partial = true;
    report.notes.push_back(std::to_string(report.skipped) + " points skipped (quadrature failed)");
  }
  const bool spread_ok = report.ratio_max > 0.0 &&
                         report.ratio_max / report.ratio_min <= options.spread_limit;
  const bool fits_ok = std::all_of(report.regimes.begin(), report.regimes.end(),
                                   [](const RegimeFit& f) { return f.within; });
  report.verdict_consistency = spread_ok && fits_ok;
  return report;
}

}  // namespace mnlab
