#pragma once

// JSON forms of verdicts, inequality specs, test families and probe reports.
// Every document carries "schema": "mixed-norm-lab/1"; rationals are strings
// ("3/4"), exponents are strings in reciprocal notation ("3/4R", "0R" = inf).
// Layouts are listed in docs/formats.md.

#include "mnlab/exponents.hpp"
#include "mnlab/operators.hpp"
#include "mnlab/probes.hpp"
#include "mnlab/region.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace mnlab {

inline constexpr std::string_view kSchema = "mixed-norm-lab/1";

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "a/bR" (reciprocal), "a/b" or "a" (the exponent itself, >= 1), "inf".
/// Throws InputError naming `field` on decimals or malformed text.
RecipExponent parse_exponent(std::string_view text, std::string_view field);
std::string format_exponent(const RecipExponent& e);  // always "a/bR"

/// Rational field; exponent fields of ParameterSet go through parse_exponent.
Rational parse_field(std::string_view name, std::string_view text);

nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ParameterSet& p);
ParameterSet parameters_from_json(const nlohmann::json& j);

nlohmann::json to_json(const InequalitySpec& s);
InequalitySpec inequality_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TestFamily& f);
TestFamily test_family_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ProbeReport& r);

}  // namespace mnlab
