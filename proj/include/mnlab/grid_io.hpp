#pragma once

// Plain-text CSV form of a GridFunction (layout in docs/formats.md):
//
//   # mixed-norm-lab gridfunction v1
//   n,<2|3>
//   radial,<rho_min>,<rho_max>,<panels_per_decade>,<order>[,<break>...]
//   angular,<resolution>
//   rho_index,theta_index,value
//   <i>,<j>,<value>
//   ...
//
// Only non-zero values are written; omitted entries read back as zero.

#include "mnlab/discretization.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace mnlab {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_grid_function(std::ostream& out, const GridFunction& f);
/// Throws FormatError with the offending line number.
GridFunction read_grid_function(std::istream& in);

void save_grid_function(const std::string& path, const GridFunction& f);
GridFunction load_grid_function(const std::string& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace mnlab
