#pragma once

// Dense verdict grids over two-parameter slices of an index tuple.

#include "mnlab/exponents.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mnlab {

enum class CheckerId {
  stein_weiss,
  radial_stein_weiss,
  mixed_general,
  mixed_strict,
  mixed_bandlimited,
  nonhomogeneous,
  weighted_sobolev,
  ckn,
  ckn_integer,
  ckn_classical,
  ckn_radial,
  strichartz_classical,
  strichartz_radial,
  strichartz_precised,
};

std::string_view to_string(CheckerId id);
CheckerId parse_checker_id(std::string_view text);
const std::vector<CheckerId>& all_checkers();

/// Flat view of an index tuple. Exponent fields (p, q, ptilde, qtilde, r,
/// rtilde) hold reciprocals; "n" holds the dimension; the remaining fields
/// (alpha, beta, gamma, mu, sigma, a, delta, epsilon) hold their values.
/// Missing fields default to 0 (or 1 for a and sigma).
class ParameterSet {
 public:
  ParameterSet() = default;

  ParameterSet& set(std::string_view name, Rational value);
  Rational get(std::string_view name) const;
  bool has(std::string_view name) const;
  const std::map<std::string, Rational, std::less<>>& values() const { return values_; }

  static bool is_known(std::string_view name);
  static bool is_reciprocal(std::string_view name);

  int dimension() const;
  RecipExponent exponent(std::string_view name) const;

  SteinWeissIndices stein_weiss() const;
  MixedIndices mixed() const;
  CknIndices ckn() const;
  StrichartzIndices strichartz() const;

 private:
  std::map<std::string, Rational, std::less<>> values_;
};

Verdict run_checker(CheckerId id, const ParameterSet& params);

struct GridAxis {
  std::string name;
  Rational start;
  Rational stop;
  Rational step;

  /// start, start+step, ... up to and including stop.
  std::vector<Rational> values() const;
};

struct RegionPoint {
  Rational x;
  Rational y;
  Verdict verdict;
};

using RegionMap = std::vector<RegionPoint>;

/// Row-major (x outer, y inner), ascending. Evaluated in parallel; the output
/// order does not depend on the thread count. Throws std::domain_error on an
/// empty axis or a non-free parameter name.
///
/// If project_onto is non-empty, that parameter is re-solved at every grid
/// point so the scaling equality holds exactly (see project_to_scaling).
RegionMap scan_region(CheckerId checker, const ParameterSet& base, const GridAxis& x,
                      const GridAxis& y, std::string_view project_onto = {});

/// Single-threaded reference for scan_region.
RegionMap scan_region_serial(CheckerId checker, const ParameterSet& base, const GridAxis& x,
                             const GridAxis& y, std::string_view project_onto = {});

/// Solves the checker's "scaling" equality for one parameter, using that the
/// deviation is affine in each single field. Throws std::domain_error if the
/// checker has no scaling condition or the deviation does not depend on the
/// parameter.
ParameterSet project_to_scaling(CheckerId checker, ParameterSet params, std::string_view name);

}  // namespace mnlab
