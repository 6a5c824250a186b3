#include "mnlab/cli.hpp"

#include "mnlab/discretization.hpp"
#include "mnlab/grid_io.hpp"
#include "mnlab/json_io.hpp"
#include "mnlab/probes.hpp"
#include "mnlab/quadrature.hpp"
#include "mnlab/region.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace mnlab {

namespace {

constexpr const char* kFields[] = {"n",     "p",     "q",     "ptilde", "qtilde", "r",
                                   "rtilde", "alpha", "beta",  "gamma",  "mu",     "sigma",
                                   "a",     "delta", "epsilon"};

struct FieldOptions {
  std::map<std::string, std::string> text;

  void attach(CLI::App* cmd) {
    for (const char* name : kFields) {
      cmd->add_option(std::string("--") + name, text[name],
                      ParameterSet::is_reciprocal(name)
                          ? "exponent: a/bR (reciprocal), a/b or inf"
                          : "exact rational");
    }
  }

  ParameterSet parse() const {
    ParameterSet p;
    for (const auto& [name, value] : text) {
      if (!value.empty()) p.set(name, parse_field(name, value));
    }
    return p;
  }
};

// Writes `text` to `path`, or to `out` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
}

GridAxis parse_axis(const std::string& text, const char* flag) {
  // name:start:stop:step
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4) {
    throw InputError(std::string(flag) + " must be name:start:stop:step, got '" + text + "'");
  }
  GridAxis axis{parts[0], parse_field(parts[0], parts[1]), parse_field(parts[0], parts[2]),
                Rational(0)};
  // The step of an exponent axis is a reciprocal difference.
  axis.step = ParameterSet::is_reciprocal(parts[0])
                  ? parse_rational(parts[3].back() == 'R' ? parts[3].substr(0, parts[3].size() - 1)
                                                          : parts[3])
                  : parse_field(parts[0], parts[3]);
  if (axis.step <= 0) throw InputError(std::string(flag) + ": step must be positive");
  return axis;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InputError("--schedule: not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

double parse_real(const std::string& text, const char* field) {
  try {
    return to_double(parse_rational(text));
  } catch (const std::exception& e) {
    throw InputError(std::string(field) + ": " + e.what());
  }
}

struct FamilyOptions {
  std::string kind = "power_spike";
  std::optional<double> exponent;
  std::optional<double> eps, R, kappa, m;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", kind, "power_spike, ckn_log_spike, angular_bump, tensor_spike_bump");
    cmd->add_option("--exponent", exponent, "spike exponent (default chosen from the indices)");
    cmd->add_option("--eps", eps, "inner cutoff");
    cmd->add_option("--R", R, "outer cutoff");
    cmd->add_option("--kappa", kappa, "angular concentration");
    cmd->add_option("--m", m, "angular bump power");
  }

  TestFamily build(double default_exponent) const {
    TestFamily f;
    f.kind = parse_test_family(kind);
    f.exponent = exponent.value_or(default_exponent);
    if (f.kind == TestFamilyKind::ckn_log_spike) f.R = 0.5;
    if (eps) f.eps = *eps;
    if (R) f.R = *R;
    if (kappa) f.kappa = *kappa;
    if (m) f.m = *m;
    f.validate();
    return f;
  }
};

struct GridOptions {
  std::optional<double> rho_min, rho_max;
  int panels_per_decade = 16;
  int order = 4;
  int angular = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rho-min", rho_min, "radial grid start");
    cmd->add_option("--rho-max", rho_max, "radial grid end");
    cmd->add_option("--ppd", panels_per_decade, "radial panels per decade")->check(CLI::PositiveNumber);
    cmd->add_option("--order", order, "Gauss nodes per radial panel")->check(CLI::PositiveNumber);
    cmd->add_option("--angular", angular,
                    "angular resolution (default: MNLAB_GRID_RESOLUTION, else 256 / 32)");
  }

  // Covers every cutoff with a decade of margin unless bounds are given.
  RadialGridSpec spec(const std::vector<double>& cutoffs) const {
    RadialGridSpec gs;
    gs.panels_per_decade = panels_per_decade;
    gs.order = order;
    const auto [lo, hi] = std::minmax_element(cutoffs.begin(), cutoffs.end());
    gs.rho_min = rho_min.value_or(std::min(1e-4, *lo / 10));
    gs.rho_max = rho_max.value_or(std::max(1e4, *hi * 10));
    return gs;
  }
};

// Spike exponent for which the RHS norm is finite and the profile is
// non-trivial: midway to the integrability threshold, or the CKN balance.
double default_exponent(const InequalitySpec& spec, TestFamilyKind kind) {
  const int n = spec.dimension();
  if (kind == TestFamilyKind::ckn_log_spike) {
    return to_double(spec.params.get("gamma")) - n * to_double(spec.params.get("r")) -
           to_double(spec.params.get("sigma"));
  }
  const NormDescriptor rhs = spec.rhs();
  return 0.5 * (rhs.weight_power + n * to_double(rhs.p.value()));
}

std::vector<double> default_schedule(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::eps: return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    case SweepParameter::kappa:
    case SweepParameter::concentration: return {1, 5.62, 31.6, 178, 1000};
    case SweepParameter::dilation: return {1, 3.16, 10, 31.6, 100};
  }
  return {};
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponent checkers, kernel envelopes, mixed norms and sharpness probes", "mnlab"};
  app.require_subcommand(1);
  std::string output;

  // check
  auto* check = app.add_subcommand("check", "Evaluate a checker on an index tuple (JSON verdict)");
  std::string checker_name;
  FieldOptions check_fields;
  check->add_option("checker", checker_name, "checker id, e.g. stein-weiss, mixed, ckn")->required();
  check_fields.attach(check);
  check->add_option("-o,--output", output, "write to a file instead of stdout");

  // region
  auto* region = app.add_subcommand("region", "Scan a two-parameter slice (CSV)");
  std::string region_checker, x_axis, y_axis, project;
  FieldOptions region_fields;
  region->add_option("checker", region_checker, "checker id")->required();
  region->add_option("--x", x_axis, "name:start:stop:step")->required();
  region->add_option("--y", y_axis, "name:start:stop:step")->required();
  region->add_option("--project", project, "re-solve this field onto the scaling equality");
  region_fields.attach(region);
  region->add_option("-o,--output", output, "write to a file instead of stdout");

  // verify-kernel
  auto* verify = app.add_subcommand("verify-kernel", "Compare kernel quadrature with its envelope");
  std::string lemma = "I", nu_text;
  int kernel_n = 2;
  EnvelopeOptions envelope;
  verify->add_option("--lemma", lemma, "I or J");
  verify->add_option("--n", kernel_n, "dimension (2 or 3)");
  verify->add_option("--nu", nu_text, "kernel exponent (exact rational)")->required();
  verify->add_option("--points", envelope.points, "I: global grid size");
  verify->add_option("--side", envelope.side, "J: regime grid side");
  verify->add_option("-o,--output", output, "write to a file instead of stdout");

  // norm
  auto* norm = app.add_subcommand("norm", "Mixed norm of a grid function file");
  std::string norm_file, norm_p, norm_pt, norm_weight = "0", measure = "surface";
  norm->add_option("--file", norm_file, "grid function CSV")->required();
  norm->add_option("--p", norm_p, "radial exponent")->required();
  norm->add_option("--ptilde", norm_pt, "angular exponent")->required();
  norm->add_option("--weight", norm_weight, "power of |x| (exact rational)");
  norm->add_option("--measure", measure, "surface or normalized");
  norm->add_option("-o,--output", output, "write to a file instead of stdout");

  // probe
  auto* probe = app.add_subcommand("probe", "Sharpness sweep of an inequality spec (JSON report)");
  std::string spec_file, parameter_name, schedule_text, format = "json";
  FamilyOptions probe_family;
  GridOptions probe_grid;
  int ray_resolution = 0;
  probe->add_option("--spec", spec_file, "inequality spec JSON")->required();
  probe_family.attach(probe);
  probe->add_option("--parameter", parameter_name, "eps, kappa, concentration or dilation");
  probe->add_option("--schedule", schedule_text, "comma-separated values, ordered towards the limit");
  probe_grid.attach(probe);
  probe->add_option("--ray-resolution", ray_resolution, "near-field ray directions");
  probe->add_option("--format", format, "json or csv");
  probe->add_option("-o,--output", output, "write to a file instead of stdout");

  // export-function
  auto* export_fn = app.add_subcommand("export-function", "Sample a test family to a grid CSV");
  FamilyOptions export_family;
  GridOptions export_grid;
  int export_n = 2;
  export_family.attach(export_fn);
  export_grid.attach(export_fn);
  export_fn->add_option("--n", export_n, "dimension (2 or 3)");
  export_fn->add_option("-o,--output", output, "write to a file instead of stdout");

  std::vector<const char*> argv{"mnlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) {
      const CheckerId id = parse_checker_id(checker_name);
      const Verdict v = run_checker(id, check_fields.parse());
      emit(output, to_json(v).dump(2) + "\n", out);
      return v.admissible ? kExitOk : kExitNegative;
    }

    if (*region) {
      const CheckerId id = parse_checker_id(region_checker);
      const GridAxis x = parse_axis(x_axis, "--x");
      const GridAxis y = parse_axis(y_axis, "--y");
      const RegionMap map = scan_region(id, region_fields.parse(), x, y, project);
      std::ostringstream csv;
      auto cell = [](const std::string& name, const Rational& v) {
        return ParameterSet::is_reciprocal(name) ? to_string(v) + "R" : to_string(v);
      };
      csv << x.name << ',' << y.name << ",admissible,first_failed_condition\n";
      for (const auto& pt : map) {
        csv << cell(x.name, pt.x) << ',' << cell(y.name, pt.y) << ','
            << (pt.verdict.admissible ? 1 : 0) << ',' << pt.verdict.first_failed().value_or("")
            << '\n';
      }
      emit(output, csv.str(), out);
      return kExitOk;
    }

    if (*verify) {
      const ProbeReport r =
          verify_envelope(parse_envelope_lemma(lemma), kernel_n, parse_real(nu_text, "--nu"), envelope);
      emit(output, to_json(r).dump(2) + "\n", out);
      return r.verdict_consistency ? kExitOk : kExitNegative;
    }

    if (*norm) {
      GridFunction f;
      try {
        f = load_grid_function(norm_file);
      } catch (const std::exception& e) {
        throw InputError(e.what());
      }
      const RecipExponent p = parse_exponent(norm_p, "p");
      const RecipExponent pt = parse_exponent(norm_pt, "ptilde");
      const double w = parse_real(norm_weight, "--weight");
      if (measure != "surface" && measure != "normalized") {
        throw InputError("--measure must be surface or normalized");
      }
      const double value = mixed_norm(
          f, p, pt, w, measure == "surface" ? AngularMeasure::surface : AngularMeasure::normalized);
      const nlohmann::json j{{"schema", std::string(kSchema)},
                             {"p", format_exponent(p)},
                             {"ptilde", format_exponent(pt)},
                             {"weight", norm_weight},
                             {"measure", measure},
                             {"value", value}};
      emit(output, j.dump(2) + "\n", out);
      return kExitOk;
    }

    if (*probe) {
      const InequalitySpec spec = inequality_spec_from_json(read_json_file(spec_file));
      spec.validate();
      const TestFamily family =
          probe_family.build(default_exponent(spec, parse_test_family(probe_family.kind)));
      const bool angular_family = family.kind == TestFamilyKind::angular_bump;
      const SweepParameter parameter = parameter_name.empty()
                                           ? (angular_family ? SweepParameter::concentration
                                                             : SweepParameter::eps)
                                           : parse_sweep_parameter(parameter_name);
      const std::vector<double> schedule =
          schedule_text.empty() ? default_schedule(parameter) : parse_list(schedule_text);
      std::vector<double> cutoffs;
      for (double v : schedule) {
        for (double c : apply_parameter(family, parameter, v).cutoffs()) cutoffs.push_back(c);
      }
      SweepOptions options;
      options.grid = probe_grid.spec(cutoffs);
      options.angular_resolution = probe_grid.angular;
      options.ratio.potential.ray_resolution = ray_resolution;
      const ProbeReport r = sharpness_sweep(spec, family, parameter, schedule, options);
      if (format == "csv") {
        std::ostringstream csv;
        csv << r.parameter << ",ratio\n";
        for (std::size_t k = 0; k < r.ratios.size(); ++k) {
          csv << format_double(r.parameters[k]) << ',' << format_double(r.ratios[k]) << '\n';
        }
        emit(output, csv.str(), out);
      } else if (format == "json") {
        emit(output, to_json(r).dump(2) + "\n", out);
      } else {
        throw InputError("--format must be json or csv");
      }
      return r.verdict_consistency ? kExitOk : kExitNegative;
    }

    if (*export_fn) {
      const TestFamily family = export_family.build(0.0);
      const RadialGrid grid = make_radial_grid(export_n, [&] {
        RadialGridSpec gs = export_grid.spec(family.cutoffs());
        gs.breaks = family.cutoffs();
        return gs;
      }());
      const int res =
          export_grid.angular > 0 ? export_grid.angular : default_angular_resolution(export_n);
      std::ostringstream csv;
      write_grid_function(csv, make_test_function(family, grid, make_angular_quadrature(export_n, res)));
      emit(output, csv.str(), out);
      return kExitOk;
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitNegative;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mnlab
