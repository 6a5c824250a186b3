#pragma once

#include "mnlab/rational.hpp"
#include "mnlab/region.hpp"

#include <cmath>
#include <initializer_list>
#include <random>
#include <utility>

namespace testing {

inline mnlab::Rational Q(const char* text) { return mnlab::parse_rational(text); }

// Exponent fields take reciprocals: {"p", "3/4"} means p = 4/3.
inline mnlab::ParameterSet params(
    std::initializer_list<std::pair<const char*, const char*>> fields) {
  mnlab::ParameterSet p;
  for (const auto& [name, value] : fields) p.set(name, Q(value));
  return p;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Random rational num/den with |num| <= span * den.
inline mnlab::Rational random_rational(std::mt19937_64& rng, int den_max, int lo_num, int hi_num) {
  const int den = std::uniform_int_distribution<int>(1, den_max)(rng);
  const int num = std::uniform_int_distribution<int>(lo_num * den, hi_num * den)(rng);
  return mnlab::Rational(num, den);
}

inline mnlab::Rational random_unit(std::mt19937_64& rng, int den_max = 12) {
  return random_rational(rng, den_max, 0, 1);
}

}  // namespace testing
