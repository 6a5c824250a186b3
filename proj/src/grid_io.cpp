#include "mnlab/grid_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace mnlab {

namespace {

constexpr const char* kMagic = "# mixed-norm-lab gridfunction v1";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

template <class T>
T parse_number(const std::string& text, std::size_t line) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_grid_function(std::ostream& out, const GridFunction& f) {
  const auto& spec = f.grid().spec;
  out << kMagic << '\n';
  out << "n," << f.dimension() << '\n';
  out << "radial," << format_double(spec.rho_min) << ',' << format_double(spec.rho_max) << ','
      << spec.panels_per_decade << ',' << spec.order;
  for (double b : spec.breaks) out << ',' << format_double(b);
  out << '\n';
  out << "angular," << f.angular().resolution << '\n';
  out << "rho_index,theta_index,value\n";
  for (std::size_t i = 0; i < f.radial_size(); ++i) {
    for (std::size_t j = 0; j < f.angular_size(); ++j) {
      const double v = f.at(i, j);
      if (v != 0.0) out << i << ',' << j << ',' << format_double(v) << '\n';
    }
  }
}

GridFunction read_grid_function(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw FormatError(std::string("missing ") + what);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  next("header");
  if (line != kMagic) throw FormatError("line 1: not a gridfunction v1 file");

  next("dimension line");
  auto fields = split(line);
  if (fields.size() != 2 || fields[0] != "n") throw FormatError("line 2: expected 'n,<dim>'");
  const int n = parse_number<int>(fields[1], lineno);
  if (n != 2 && n != 3) throw FormatError("line 2: dimension must be 2 or 3");

  next("radial line");
  fields = split(line);
  if (fields.size() < 5 || fields[0] != "radial") {
    throw FormatError("line 3: expected 'radial,rho_min,rho_max,panels_per_decade,order[,breaks]'");
  }
  RadialGridSpec spec;
  spec.rho_min = parse_number<double>(fields[1], lineno);
  spec.rho_max = parse_number<double>(fields[2], lineno);
  spec.panels_per_decade = parse_number<int>(fields[3], lineno);
  spec.order = parse_number<int>(fields[4], lineno);
  for (std::size_t k = 5; k < fields.size(); ++k) {
    spec.breaks.push_back(parse_number<double>(fields[k], lineno));
  }

  next("angular line");
  fields = split(line);
  if (fields.size() != 2 || fields[0] != "angular") {
    throw FormatError("line 4: expected 'angular,<resolution>'");
  }
  const int resolution = parse_number<int>(fields[1], lineno);

  RadialGrid grid;
  AngularQuadrature angular;
  try {
    grid = make_radial_grid(n, spec);
    angular = make_angular_quadrature(n, resolution);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid grid description: ") + e.what());
  }

  next("column header");
  if (line != "rho_index,theta_index,value") throw FormatError("line 5: bad column header");

  std::vector<double> values(grid.size() * angular.size(), 0.0);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fields = split(line);
    if (fields.size() != 3) {
      throw FormatError("line " + std::to_string(lineno) + ": expected 3 fields");
    }
    const auto i = parse_number<std::size_t>(fields[0], lineno);
    const auto j = parse_number<std::size_t>(fields[1], lineno);
    if (i >= grid.size() || j >= angular.size()) {
      throw FormatError("line " + std::to_string(lineno) + ": index out of range");
    }
    values[i * angular.size() + j] = parse_number<double>(fields[2], lineno);
  }
  try {
    return {std::move(grid), std::move(angular), std::move(values)};
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void save_grid_function(const std::string& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_grid_function(out, f);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_grid_function(in);
}

}  // namespace mnlab
