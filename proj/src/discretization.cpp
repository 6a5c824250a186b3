#include "mnlab/discretization.hpp"

#include "mnlab/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace mnlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lagrange weights at u for the equispaced stencil -1, 0, 1, 2.
void cubic_weights(double u, double* w) {
  w[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
  w[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  w[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
  w[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

void lagrange_weights(std::span<const double> x, double at, double* w) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    double v = 1.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
      if (l != k) v *= (at - x[l]) / (x[k] - x[l]);
    }
    w[k] = v;
  }
}

// Stencil of 4 periodic equispaced nodes around angle `phi` (period M nodes).
void periodic_stencil(double phi, int m, std::size_t* idx, double* w) {
  double t = phi / (kTwoPi / m);
  double base = std::floor(t);
  const double u = t - base;
  const long j0 = static_cast<long>(base);
  for (int s = 0; s < 4; ++s) {
    long j = (j0 - 1 + s) % m;
    if (j < 0) j += m;
    idx[s] = static_cast<std::size_t>(j);
  }
  cubic_weights(u, w);
}

}  // namespace

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double AngularQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double AngularQuadrature::integrate(const std::function<double(const Vec3&)>& f) const {
  double s = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * f(nodes[j]);
  return s;
}

AngularQuadrature make_angular_quadrature(int n, int resolution) {
  if (n != 2 && n != 3) throw std::invalid_argument("angular quadrature supports n = 2, 3 only");
  if (resolution < 4) throw std::invalid_argument("angular resolution must be at least 4");
  AngularQuadrature q;
  q.n = n;
  q.resolution = resolution;
  if (n == 2) {
    q.degree = resolution - 1;
    q.azimuth_count = resolution;
    for (int j = 0; j < resolution; ++j) {
      const double t = kTwoPi * j / resolution;
      q.nodes.push_back({std::cos(t), std::sin(t), 0.0});
      q.weights.push_back(kTwoPi / resolution);
    }
    return q;
  }
  const GaussRule gl = gauss_legendre(resolution);
  q.degree = 2 * resolution - 1;
  q.polar_count = resolution;
  q.azimuth_count = 2 * resolution;
  q.polar_cos = gl.nodes;
  const double dphi = kTwoPi / q.azimuth_count;
  for (int i = 0; i < resolution; ++i) {
    const double z = gl.nodes[static_cast<std::size_t>(i)];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < q.azimuth_count; ++j) {
      const double ph = dphi * j;
      q.nodes.push_back({s * std::cos(ph), s * std::sin(ph), z});
      q.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * dphi);
    }
  }
  return q;
}

int default_angular_resolution(int n) {
  if (const char* env = std::getenv("MNLAB_GRID_RESOLUTION")) {
    std::string_view text(env);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value >= 4) return value;
  }
  return n == 2 ? 256 : 32;
}

long RadialGrid::panel_of(double rho) const {
  if (edges.empty() || rho < edges.front() || rho > edges.back()) return -1;
  auto it = std::upper_bound(edges.begin(), edges.end(), rho);
  long k = static_cast<long>(it - edges.begin()) - 1;
  const long last = static_cast<long>(panel_count()) - 1;
  return std::min(k, last);
}

RadialGrid make_radial_grid(int n, const RadialGridSpec& spec) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(spec.rho_min > 0.0) || !(spec.rho_max > spec.rho_min)) {
    throw std::invalid_argument("radial grid needs 0 < rho_min < rho_max");
  }
  if (spec.panels_per_decade < 1) throw std::invalid_argument("panels_per_decade must be positive");
  if (spec.order < 1 || spec.order > 64) throw std::invalid_argument("panel order must be in 1..64");

  RadialGrid grid;
  grid.n = n;
  grid.spec = spec;
  const double lo = std::log(spec.rho_min);
  const double hi = std::log(spec.rho_max);
  const double decades = (hi - lo) / std::log(10.0);
  const int count = std::max(1, static_cast<int>(std::ceil(decades * spec.panels_per_decade - 1e-9)));
  for (int k = 0; k <= count; ++k) grid.edges.push_back(std::exp(lo + (hi - lo) * k / count));
  grid.edges.front() = spec.rho_min;
  grid.edges.back() = spec.rho_max;

  for (double b : spec.breaks) {
    if (!(b > spec.rho_min && b < spec.rho_max)) continue;
    auto it = std::lower_bound(grid.edges.begin(), grid.edges.end(), b);
    bool snapped = false;
    for (auto cand : {it, it == grid.edges.begin() ? it : std::prev(it)}) {
      if (cand == grid.edges.end()) continue;
      const bool interior = cand != grid.edges.begin() && std::next(cand) != grid.edges.end();
      if (interior && std::abs(*cand - b) <= 1e-9 * b) {
        *cand = b;
        snapped = true;
        break;
      }
    }
    if (!snapped) grid.edges.insert(it, b);
  }
  grid.edges.erase(std::unique(grid.edges.begin(), grid.edges.end()), grid.edges.end());

  const GaussRule& gl = gauss_legendre_cached(spec.order);
  for (std::size_t k = 0; k + 1 < grid.edges.size(); ++k) {
    const double a = grid.edges[k];
    const double b = grid.edges[k + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t l = 0; l < gl.nodes.size(); ++l) {
      const double rho = mid + half * gl.nodes[l];
      grid.nodes.push_back(rho);
      grid.weights.push_back(half * gl.weights[l] * std::pow(rho, n - 1));
    }
  }
  return grid;
}

std::vector<double> refinement_breaks(std::span<const double> cutoffs, double h, int levels) {
  std::vector<double> out;
  for (double c : cutoffs) {
    out.push_back(c);
    double step = h;
    for (int k = 0; k < levels; ++k, step *= 0.5) {
      out.push_back(c * (1.0 - step));
      out.push_back(c * (1.0 + step));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GridFunction::GridFunction(RadialGrid grid, AngularQuadrature angular)
    : grid_(std::move(grid)), angular_(std::move(angular)) {
  if (grid_.n != angular_.n) throw std::invalid_argument("radial and angular dimensions differ");
  values_.assign(grid_.size() * angular_.size(), 0.0);
}

GridFunction::GridFunction(RadialGrid grid, AngularQuadrature angular, std::vector<double> values)
    : grid_(std::move(grid)), angular_(std::move(angular)), values_(std::move(values)) {
  if (grid_.n != angular_.n) throw std::invalid_argument("radial and angular dimensions differ");
  if (values_.size() != grid_.size() * angular_.size()) {
    throw std::invalid_argument("value count does not match grid dimensions");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
  }
}

GridFunction GridFunction::sample(const RadialGrid& grid, const AngularQuadrature& angular,
                                  const std::function<double(double, const Vec3&)>& f) {
  std::vector<double> values(grid.size() * angular.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < angular.size(); ++j) {
      values[i * angular.size() + j] = f(grid.nodes[i], angular.nodes[j]);
    }
  }
  return {grid, angular, std::move(values)};
}

GridFunction GridFunction::sample_radial(const RadialGrid& grid, const AngularQuadrature& angular,
                                         const std::function<double(double)>& g) {
  std::vector<double> values(grid.size() * angular.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = g(grid.nodes[i]);
    std::fill_n(values.begin() + static_cast<long>(i * angular.size()), angular.size(), v);
  }
  return {grid, angular, std::move(values)};
}

Vec3 GridFunction::position(std::size_t i, std::size_t j) const {
  const double r = grid_.nodes[i];
  const Vec3& w = angular_.nodes[j];
  return {r * w[0], r * w[1], r * w[2]};
}

bool GridFunction::is_radial() const {
  for (std::size_t i = 0; i < radial_size(); ++i) {
    auto r = row(i);
    if (std::any_of(r.begin(), r.end(), [&](double v) { return v != r[0]; })) return false;
  }
  return true;
}

std::vector<std::size_t> GridFunction::support_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < radial_size(); ++i) {
    auto r = row(i);
    if (std::any_of(r.begin(), r.end(), [](double v) { return v != 0.0; })) out.push_back(i);
  }
  return out;
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return {grid_, angular_, std::move(v)};
}

GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g) {
  if (!(f.grid() == g.grid()) || !(f.angular() == g.angular())) {
    throw std::invalid_argument("combine: grids differ");
  }
  std::vector<double> v(f.values().size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a * f.values()[k] + b * g.values()[k];
  return {f.grid(), f.angular(), std::move(v)};
}

namespace {

// (sum_k w_k |v_k|^e)^{1/e}, scaled by the largest entry to avoid overflow.
double power_sum(std::span<const double> v, std::span<const double> w, double e) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += w[k] * std::pow(std::abs(v[k]) / m, e);
  return m * std::pow(s, 1.0 / e);
}

double inner_norm(const GridFunction& f, std::size_t i, const RecipExponent& pt,
                  AngularMeasure measure) {
  auto r = f.row(i);
  if (pt.is_infinite()) {
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x));
    return m;
  }
  const double e = pt.exponent();
  double v = power_sum(r, f.angular().weights, e);
  if (measure == AngularMeasure::normalized) v /= std::pow(f.angular().total_weight(), 1.0 / e);
  return v;
}

double outer_norm(const GridFunction& f, const std::vector<double>& inner, const RecipExponent& p,
                  double weight_power) {
  const auto& grid = f.grid();
  std::vector<double> weighted(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    weighted[i] = weight_power == 0.0 ? inner[i] : std::pow(grid.nodes[i], weight_power) * inner[i];
  }
  if (p.is_infinite()) {
    double m = 0.0;
    for (double x : weighted) m = std::max(m, x);
    return m;
  }
  return power_sum(weighted, grid.weights, p.exponent());
}

}  // namespace

double mixed_norm(const GridFunction& f, const RecipExponent& p, const RecipExponent& ptilde,
                  double weight_power, AngularMeasure measure) {
  const auto rows = static_cast<long long>(f.radial_size());
  std::vector<double> inner(f.radial_size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < rows; ++i) {
    inner[static_cast<std::size_t>(i)] = inner_norm(f, static_cast<std::size_t>(i), ptilde, measure);
  }
  return outer_norm(f, inner, p, weight_power);
}

double mixed_norm_serial(const GridFunction& f, const RecipExponent& p,
                         const RecipExponent& ptilde, double weight_power,
                         AngularMeasure measure) {
  std::vector<double> inner(f.radial_size());
  for (std::size_t i = 0; i < inner.size(); ++i) inner[i] = inner_norm(f, i, ptilde, measure);
  return outer_norm(f, inner, p, weight_power);
}

bool monotonicity_check(const GridFunction& f, const RecipExponent& p,
                        const RecipExponent& ptilde1, const RecipExponent& ptilde2) {
  if (ptilde1.value() < ptilde2.value()) {
    throw std::invalid_argument("monotonicity_check needs ptilde1 <= ptilde2");
  }
  const double a = mixed_norm(f, p, ptilde1, 0.0, AngularMeasure::normalized);
  const double b = mixed_norm(f, p, ptilde2, 0.0, AngularMeasure::normalized);
  return a <= b * (1.0 + 1e-12);
}

GridInterpolator::GridInterpolator(const GridFunction& f) : f_(&f) {
  for (double r : f.grid().nodes) log_nodes_.push_back(std::log(r));
  row_constant_.resize(f.radial_size());
  for (std::size_t i = 0; i < f.radial_size(); ++i) {
    auto r = f.row(i);
    row_constant_[i] = std::all_of(r.begin(), r.end(), [&](double v) { return v == r[0]; });
  }
}

std::size_t GridInterpolator::radial_weights(double rho, std::size_t& first, double* w) const {
  const auto& grid = f_->grid();
  const long k = grid.panel_of(rho);
  if (k < 0) return 0;
  const auto m = static_cast<std::size_t>(grid.order());
  first = static_cast<std::size_t>(k) * m;
  lagrange_weights(std::span<const double>(log_nodes_.data() + first, m), std::log(rho), w);
  return m;
}

std::size_t GridInterpolator::angular_weights(const Vec3& u, std::size_t* idx, double* w) const {
  const auto& ang = f_->angular();
  double phi = std::atan2(u[1], u[0]);
  if (phi < 0.0) phi += kTwoPi;
  if (ang.n == 2) {
    periodic_stencil(phi, ang.azimuth_count, idx, w);
    return 4;
  }
  // Polar direction: 4 nearest Gauss nodes in cos(theta), clamped at the poles.
  const auto& zc = ang.polar_cos;
  const long pc = ang.polar_count;
  const double z = std::clamp(u[2], -1.0, 1.0);
  long k = static_cast<long>(std::upper_bound(zc.begin(), zc.end(), z) - zc.begin()) - 1;
  const long start = std::clamp(k - 1, 0L, pc - 4);
  double wz[4];
  lagrange_weights(std::span<const double>(zc.data() + start, 4), z, wz);
  std::size_t ia[4];
  double wa[4];
  periodic_stencil(phi, ang.azimuth_count, ia, wa);
  std::size_t c = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      idx[c] = static_cast<std::size_t>(start + a) * static_cast<std::size_t>(ang.azimuth_count) + ia[b];
      w[c] = wz[a] * wa[b];
      ++c;
    }
  }
  return c;
}

double GridInterpolator::operator()(const Vec3& y) const {
  const double rho = norm(y);
  std::size_t first = 0;
  double wr[64];
  const std::size_t m = radial_weights(rho, first, wr);
  if (m == 0) return 0.0;
  const std::size_t na = f_->angular_size();
  bool constant = true;
  for (std::size_t k = 0; k < m; ++k) constant = constant && row_constant_[first + k];
  if (constant) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += wr[k] * f_->at(first + k, 0);
    return s;
  }
  const Vec3 u{y[0] / rho, y[1] / rho, y[2] / rho};
  std::size_t idx[16];
  double wa[16];
  const std::size_t c = angular_weights(u, idx, wa);
  const auto& vals = f_->values();
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double row = 0.0;
    const std::size_t base = (first + k) * na;
    for (std::size_t l = 0; l < c; ++l) row += wa[l] * vals[base + idx[l]];
    s += wr[k] * row;
  }
  return s;
}

std::size_t GridInterpolator::stencil(const Vec3& y, std::vector<Entry>& out) const {
  out.clear();
  const double rho = norm(y);
  std::size_t first = 0;
  double wr[64];
  const std::size_t m = radial_weights(rho, first, wr);
  if (m == 0) return 0;
  const Vec3 u{y[0] / rho, y[1] / rho, y[2] / rho};
  std::size_t idx[16];
  double wa[16];
  const std::size_t c = angular_weights(u, idx, wa);
  const std::size_t na = f_->angular_size();
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < c; ++l) out.push_back({(first + k) * na + idx[l], wr[k] * wa[l]});
  }
  return out.size();
}

}  // namespace mnlab
