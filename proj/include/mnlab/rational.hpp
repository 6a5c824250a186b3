#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace mnlab {

using Rational = boost::multiprecision::cpp_rational;

// Parses "a", "-a", "a/b". Decimal points, exponents and whitespace are
// rejected so that boundary values cannot be blurred by rounding.
Rational parse_rational(std::string_view text);

// Canonical text form: "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace mnlab
