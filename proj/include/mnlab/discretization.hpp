#pragma once

// Sampled functions on R^n (n = 2, 3) in polar form: a radial panel grid
// times an angular rule on S^{n-1}, and the mixed norms
//   || |x|^w f ||_{L^p_{|x|} L^{pt}_theta}
//     = ( int_0^inf || rho^w f(rho .) ||_{L^{pt}(S^{n-1})}^p rho^{n-1} d rho )^{1/p}.

#include "mnlab/exponents.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mnlab {

using Vec3 = std::array<double, 3>;

double norm(const Vec3& v);

struct AngularQuadrature {
  int n = 2;
  int resolution = 0;
  int degree = 0;  // exact for spherical polynomials up to this degree
  // n = 2: one ring of `resolution` equispaced angles 2 pi j / N.
  // n = 3: `resolution` Gauss-Legendre nodes in cos(theta) (ascending) times
  // 2 * resolution equispaced azimuths; node index = polar * azimuths + azimuth.
  int polar_count = 1;
  int azimuth_count = 0;
  std::vector<double> polar_cos;
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
  double integrate(const std::function<double(const Vec3&)>& f) const;

  friend bool operator==(const AngularQuadrature& a, const AngularQuadrature& b) {
    return a.n == b.n && a.resolution == b.resolution;
  }
};

/// Throws std::invalid_argument unless n is 2 or 3 and resolution >= 4.
AngularQuadrature make_angular_quadrature(int n, int resolution);

/// Default angular resolution: MNLAB_GRID_RESOLUTION if set to an integer
/// >= 4, else 256 for n = 2 and 32 for n = 3.
int default_angular_resolution(int n);

struct RadialGridSpec {
  double rho_min = 1e-4;
  double rho_max = 1e4;
  int panels_per_decade = 64;
  int order = 4;  // Gauss-Legendre nodes per panel
  // Extra panel edges (support cutoffs, refinement points). Edges closer than
  // 1e-9 (relative) to a break are moved onto it.
  std::vector<double> breaks;
};

struct RadialGrid {
  int n = 2;
  RadialGridSpec spec;
  std::vector<double> edges;    // panel boundaries, strictly increasing
  std::vector<double> nodes;    // `order` per panel
  std::vector<double> weights;  // for int f(rho) rho^{n-1} d rho

  std::size_t size() const { return nodes.size(); }
  std::size_t panel_count() const { return edges.size() - 1; }
  int order() const { return spec.order; }
  /// Panel containing rho (the upper one at an interior edge); -1 outside.
  long panel_of(double rho) const;

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
    return a.n == b.n && a.edges == b.edges && a.spec.order == b.spec.order;
  }
};

RadialGrid make_radial_grid(int n, const RadialGridSpec& spec = {});

/// Geometric refinement points around each cutoff c: c (1 +- 2^-k h), with
/// h the relative half-width and k = 0..levels-1. Useful as RadialGridSpec
/// breaks for functions with sharp features of relative width h.
std::vector<double> refinement_breaks(std::span<const double> cutoffs, double h, int levels);

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(RadialGrid grid, AngularQuadrature angular);  // zero function
  GridFunction(RadialGrid grid, AngularQuadrature angular, std::vector<double> values);

  static GridFunction sample(const RadialGrid& grid, const AngularQuadrature& angular,
                             const std::function<double(double, const Vec3&)>& f);
  static GridFunction sample_radial(const RadialGrid& grid, const AngularQuadrature& angular,
                                    const std::function<double(double)>& g);

  const RadialGrid& grid() const { return grid_; }
  const AngularQuadrature& angular() const { return angular_; }
  int dimension() const { return grid_.n; }
  std::size_t radial_size() const { return grid_.size(); }
  std::size_t angular_size() const { return angular_.size(); }
  double at(std::size_t i, std::size_t j) const { return values_[i * angular_.size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * angular_.size(), angular_.size()};
  }
  const std::vector<double>& values() const { return values_; }
  Vec3 position(std::size_t i, std::size_t j) const;

  /// Every row constant in the angular index.
  bool is_radial() const;
  /// Rows holding a non-zero value.
  std::vector<std::size_t> support_rows() const;

  GridFunction scaled(double c) const;

 private:
  RadialGrid grid_;
  AngularQuadrature angular_;
  std::vector<double> values_;
};

/// a f + b g on a shared grid.
GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g);

enum class AngularMeasure { surface, normalized };

/// Mixed norm with the inner norm over angular nodes (maximum when pt = inf)
/// and the outer radial quadrature (maximum when p = inf). With the
/// normalized measure the inner norm is divided by |S^{n-1}|^{1/pt}.
/// Radial rows are evaluated in parallel and reduced in node order.
double mixed_norm(const GridFunction& f, const RecipExponent& p, const RecipExponent& ptilde,
                  double weight_power, AngularMeasure measure = AngularMeasure::surface);

/// Single-threaded reference for mixed_norm.
double mixed_norm_serial(const GridFunction& f, const RecipExponent& p,
                         const RecipExponent& ptilde, double weight_power,
                         AngularMeasure measure = AngularMeasure::surface);

/// Whether the normalized mixed norm is non-decreasing from pt1 to pt2.
/// Requires pt1 <= pt2 as exponents (1/pt1 >= 1/pt2).
bool monotonicity_check(const GridFunction& f, const RecipExponent& p,
                        const RecipExponent& ptilde1, const RecipExponent& ptilde2);

/// Continuous extension of a GridFunction: Lagrange interpolation in
/// log(rho) within each radial panel and local 4-point interpolation over the
/// angular nodes (periodic in azimuth). Zero outside [rho_min, rho_max].
class GridInterpolator {
 public:
  struct Entry {
    std::size_t index;  // flat index i * angular_size + j
    double weight;
  };

  explicit GridInterpolator(const GridFunction& f);

  double operator()(const Vec3& y) const;
  /// Interpolation weights at y, independent of the sampled values.
  /// Returns the number of entries written (at most order * 16).
  std::size_t stencil(const Vec3& y, std::vector<Entry>& out) const;

 private:
  std::size_t radial_weights(double rho, std::size_t& first, double* w) const;
  std::size_t angular_weights(const Vec3& unit, std::size_t* idx, double* w) const;

  const GridFunction* f_;
  std::vector<double> log_nodes_;
  std::vector<char> row_constant_;
};

}  // namespace mnlab
