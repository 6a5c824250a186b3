#include "mnlab/json_io.hpp"

#include <cmath>

namespace mnlab {

using nlohmann::json;

namespace {

void require_schema(const json& j) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  if (auto it = j.find("schema"); it != j.end() && *it != kSchema) {
    throw InputError("unsupported schema: " + it->dump());
  }
}

const json& member(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_string()) throw InputError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Rational rational_field(const json& j, const char* key) {
  const json& v = member(j, key);
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string()) {
    throw InputError(std::string("field '") + key + "' must be a rational string");
  }
  return parse_field(key, v.get<std::string>());
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

RecipExponent parse_exponent(std::string_view text, std::string_view field) {
  const std::string name(field);
  if (text == "inf") return RecipExponent(Rational(0));
  try {
    if (!text.empty() && text.back() == 'R') {
      return RecipExponent(parse_rational(text.substr(0, text.size() - 1)));
    }
    return RecipExponent::from_exponent(parse_rational(text));
  } catch (const std::exception& e) {
    throw InputError("field '" + name + "': " + e.what());
  }
}

std::string format_exponent(const RecipExponent& e) { return to_string(e.value()) + "R"; }

Rational parse_field(std::string_view name, std::string_view text) {
  if (!ParameterSet::is_known(name)) {
    throw InputError("unknown field '" + std::string(name) + "'");
  }
  if (ParameterSet::is_reciprocal(name)) return parse_exponent(text, name).value();
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw InputError("field '" + std::string(name) + "': " + e.what());
  }
}

json to_json(const Verdict& v) {
  json conditions = json::array();
  for (const auto& c : v.conditions) {
    conditions.push_back({{"id", c.id},
                          {"kind", std::string(to_string(c.kind))},
                          {"satisfied", c.satisfied},
                          {"margin", to_string(c.margin)},
                          {"vacuous", c.vacuous}});
  }
  json out{{"schema", std::string(kSchema)},
           {"admissible", v.admissible},
           {"conditions", conditions},
           {"boundary", v.boundary},
           {"flags", v.flags}};
  if (auto failed = v.first_failed()) {
    out["first_failed"] = *failed;
  } else {
    out["first_failed"] = nullptr;
  }
  return out;
}

Verdict verdict_from_json(const json& j) {
  require_schema(j);
  try {
    Verdict v;
    v.admissible = member(j, "admissible").get<bool>();
    for (const auto& c : member(j, "conditions")) {
      Condition cond;
      cond.id = string_field(c, "id");
      cond.kind = parse_condition_kind(string_field(c, "kind"));
      cond.satisfied = member(c, "satisfied").get<bool>();
      cond.margin = parse_rational(string_field(c, "margin"));
      cond.vacuous = c.value("vacuous", false);
      v.conditions.push_back(std::move(cond));
    }
    if (auto it = j.find("boundary"); it != j.end()) {
      v.boundary = it->get<std::vector<std::string>>();
    }
    if (auto it = j.find("flags"); it != j.end()) {
      v.flags = it->get<std::map<std::string, bool>>();
    }
    return v;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed verdict: ") + e.what());
  }
}

json to_json(const ParameterSet& p) {
  json out = json::object();
  for (const auto& [name, value] : p.values()) {
    if (name == "n") {
      out[name] = p.dimension();
    } else if (ParameterSet::is_reciprocal(name)) {
      out[name] = format_exponent(RecipExponent(value));
    } else {
      out[name] = to_string(value);
    }
  }
  return out;
}

ParameterSet parameters_from_json(const json& j) {
  if (!j.is_object()) throw InputError("indices must be a JSON object");
  ParameterSet p;
  for (const auto& [name, value] : j.items()) {
    p.set(name, rational_field(j, name.c_str()));
  }
  return p;
}

json to_json(const InequalitySpec& s) {
  return {{"schema", std::string(kSchema)},
          {"kind", std::string(to_string(s.kind))},
          {"checker", std::string(to_string(s.checker))},
          {"indices", to_json(s.params)}};
}

InequalitySpec inequality_spec_from_json(const json& j) {
  require_schema(j);
  InequalitySpec s;
  try {
    s.kind = parse_inequality_kind(string_field(j, "kind"));
    s.checker = j.contains("checker") ? parse_checker_id(string_field(j, "checker"))
                                      : InequalitySpec::default_checker(s.kind);
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  s.params = parameters_from_json(member(j, "indices"));
  return s;
}

json to_json(const TestFamily& f) {
  return {{"kind", std::string(to_string(f.kind))},
          {"exponent", f.exponent},
          {"eps", f.eps},
          {"R", f.R},
          {"kappa", f.kappa},
          {"m", f.m},
          {"direction", {f.direction[0], f.direction[1], f.direction[2]}}};
}

TestFamily test_family_from_json(const json& j) {
  if (!j.is_object()) throw InputError("family must be a JSON object");
  TestFamily f;
  try {
    f.kind = parse_test_family(string_field(j, "kind"));
    f.exponent = j.value("exponent", f.exponent);
    f.eps = j.value("eps", f.eps);
    f.R = j.value("R", f.R);
    f.kappa = j.value("kappa", f.kappa);
    f.m = j.value("m", f.m);
    if (auto it = j.find("direction"); it != j.end()) {
      const auto d = it->get<std::vector<double>>();
      if (d.size() != 3) throw InputError("direction must have 3 components");
      f.direction = {d[0], d[1], d[2]};
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed family: ") + e.what());
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return f;
}

json to_json(const ProbeReport& r) {
  json out{{"schema", std::string(kSchema)}, {"probe", r.probe}};
  if (r.probe == "envelope") {
    json regimes = json::array();
    for (const auto& fit : r.regimes) {
      regimes.push_back({{"regime", fit.regime},
                         {"variable", fit.variable},
                         {"slope", number_or_null(fit.slope)},
                         {"expected", number_or_null(fit.expected)},
                         {"ratio_slope", number_or_null(fit.ratio_slope)},
                         {"points", fit.points},
                         {"within", fit.within}});
    }
    out["lemma"] = r.lemma;
    out["n"] = r.n;
    out["nu"] = r.nu;
    out["ratio_min"] = number_or_null(r.ratio_min);
    out["ratio_max"] = number_or_null(r.ratio_max);
    out["regimes"] = regimes;
    out["skipped"] = r.skipped;
  } else {
    if (r.spec) out["spec"] = to_json(*r.spec);
    if (r.family) out["family"] = to_json(*r.family);
    json ratios = json::array();
    for (double v : r.ratios) ratios.push_back(number_or_null(v));
    out["parameter"] = r.parameter;
    out["schedule"] = r.parameters;
    out["ratios"] = ratios;
    out["slope"] = number_or_null(r.slope);
    out["growth"] = number_or_null(r.growth);
    out["variation"] = number_or_null(r.variation);
    out["observed"] = r.observed;
    out["expected_bounded"] = r.expected_bounded;
    out["boundary"] = r.boundary;
  }
  out["verdict_consistency"] = r.verdict_consistency;
  out["partial"] = r.partial;
  out["notes"] = r.notes;
  return out;
}

}  // namespace mnlab
