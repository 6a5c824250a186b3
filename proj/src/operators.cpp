#include "mnlab/operators.hpp"

#include "mnlab/kernels.hpp"
#include "mnlab/quadrature.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mnlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1 on [0, 1/4], 0 on [1, inf); C^3 septic step in between.
double cutoff(double t) {
  if (t <= 0.25) return 1.0;
  if (t >= 1.0) return 0.0;
  const double u = (t - 0.25) / 0.75;
  const double u4 = u * u * u * u;
  return 1.0 - u4 * (35.0 - 84.0 * u + 70.0 * u * u - 20.0 * u * u * u);
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

struct Direction {
  Vec3 w;
  double weight;
};

std::vector<Direction> ray_rule(int n, int resolution) {
  std::vector<Direction> out;
  if (n == 2) {
    const int m = resolution > 0 ? resolution : 128;
    for (int k = 0; k < m; ++k) {
      const double t = kTwoPi * (k + 0.5) / m;
      out.push_back({{std::cos(t), std::sin(t), 0.0}, kTwoPi / m});
    }
    return out;
  }
  const auto rule = make_angular_quadrature(3, resolution > 0 ? resolution : 16);
  for (std::size_t j = 0; j < rule.size(); ++j) out.push_back({rule.nodes[j], rule.weights[j]});
  return out;
}

class Evaluator {
 public:
  Evaluator(const GridFunction& phi, KernelKind kind, double gamma, const PotentialOptions& options)
      : phi_(phi),
        kind_(kind),
        gamma_(gamma),
        options_(options),
        interp_(phi),
        rows_(phi.support_rows()),
        rays_(ray_rule(phi.dimension(), options.ray_resolution)),
        segment_rule_(gauss_legendre_cached(options.segment_order)),
        graded_rule_(gauss_legendre_cached(options.grading_order)) {
    const int n = phi.dimension();
    if (kind == KernelKind::riesz && !(gamma > 0.0 && gamma < n)) {
      throw std::invalid_argument("Riesz potential needs 0 < gamma < n");
    }
    if (kind == KernelKind::bessel_like && !(gamma > 0.0)) {
      throw std::invalid_argument("S_gamma needs gamma > 0");
    }
    const auto& grid = phi.grid();
    const auto& ang = phi.angular();
    angular_cell_ = n == 2 ? kTwoPi / ang.resolution : std::numbers::pi / ang.resolution;
    if (!rows_.empty()) {
      const auto order = static_cast<std::size_t>(grid.order());
      first_edge_ = rows_.front() / order;
      last_edge_ = rows_.back() / order + 1;
    }
    for (const auto& d : rays_) sphere_weight_ += d.weight;
  }

  double kernel(double d) const {
    if (kind_ == KernelKind::riesz) return std::pow(d, -gamma_);
    return std::pow(1.0 + d * d, -0.5 * gamma_);
  }

  // int_0^eps s^{n-1} K(s) ds to leading order.
  double tail_integral(double eps) const {
    const double n = phi_.dimension();
    if (kind_ == KernelKind::riesz) return std::pow(eps, n - gamma_) / (n - gamma_);
    return std::pow(eps, n) / n;
  }

  double support_lo() const { return phi_.grid().edges[first_edge_]; }
  double support_hi() const { return phi_.grid().edges[last_edge_]; }

  // Cutoff radius at the target; 0 when no near-field treatment is needed.
  double near_radius(double rho_x) const {
    if (rho_x == 0.0 || rows_.empty()) return 0.0;
    const auto& grid = phi_.grid();
    const long k = grid.panel_of(rho_x);
    double h_rad;
    if (k >= 0) {
      h_rad = grid.edges[static_cast<std::size_t>(k) + 1] - grid.edges[static_cast<std::size_t>(k)];
    } else {
      h_rad = rho_x * (std::pow(10.0, 1.0 / grid.spec.panels_per_decade) - 1.0);
    }
    const double h = std::max(h_rad, rho_x * angular_cell_);
    const double delta = std::min(options_.near_cells * h, 0.5 * rho_x);
    if (rho_x - delta > support_hi() || rho_x + delta < support_lo()) return 0.0;
    return delta;
  }

  // Grid rule for phi K (1 - chi). Calls visit(i, j, weight) for every support node.
  template <class Visit>
  void far_nodes(const Vec3& x, double delta, Visit&& visit) const {
    const auto& grid = phi_.grid();
    const auto& ang = phi_.angular();
    const double rx2 = dot(x, x);
    for (std::size_t i : rows_) {
      const double rho = grid.nodes[i];
      const double wr = grid.weights[i];
      for (std::size_t j = 0; j < ang.size(); ++j) {
        const double d2 = std::max(0.0, rx2 + rho * rho - 2.0 * rho * dot(x, ang.nodes[j]));
        const double d = std::sqrt(d2);
        double factor = 1.0;
        if (delta > 0.0) {
          factor = 1.0 - cutoff(d / delta);
          if (factor == 0.0) continue;
        } else if (d == 0.0) {
          continue;
        }
        visit(i, j, wr * ang.weights[j] * kernel(d) * factor);
      }
    }
  }

  // Ray rule for phi K chi around x. Calls visit(y, weight) per node; the
  // final call carries the analytic piece at y = x.
  template <class Visit>
  void near_nodes(const Vec3& x, double delta, Visit&& visit) const {
    const auto& edges = phi_.grid().edges;
    const double rx = norm(x);
    const double n1 = phi_.dimension() - 1;
    auto lo_it = std::lower_bound(edges.begin() + static_cast<long>(first_edge_),
                                  edges.begin() + static_cast<long>(last_edge_) + 1, rx - delta);
    auto hi_it = std::upper_bound(lo_it, edges.begin() + static_cast<long>(last_edge_) + 1, rx + delta);

    std::vector<double> breaks;
    double tail_weight = 0.0;
    for (const auto& ray : rays_) {
      const double b = dot(x, ray.w);
      breaks.assign({0.0, 0.25 * delta, 0.625 * delta, delta});
      for (auto it = lo_it; it != hi_it; ++it) {
        const double disc = b * b - rx * rx + (*it) * (*it);
        if (disc < 0.0) continue;
        const double root = std::sqrt(disc);
        for (double s : {-b - root, -b + root}) {
          if (s > 0.0 && s < delta) breaks.push_back(s);
        }
      }
      if (-b > 0.0 && -b < delta) breaks.push_back(-b);
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

      auto emit_panel = [&](double a, double c, const GaussRule& rule) {
        const double half = 0.5 * (c - a);
        const double mid = 0.5 * (a + c);
        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
          const double s = mid + half * rule.nodes[g];
          const double w = ray.weight * half * rule.weights[g] * std::pow(s, n1) *
                           kernel(s) * cutoff(s / delta);
          visit(Vec3{x[0] + s * ray.w[0], x[1] + s * ray.w[1], x[2] + s * ray.w[2]}, w);
        }
      };
      // First segment: dyadic panels towards s = 0.
      double top = breaks[1];
      for (int k = 0; k < options_.grading_levels; ++k, top *= 0.5) emit_panel(0.5 * top, top, graded_rule_);
      tail_weight += ray.weight * tail_integral(top);
      // Later segments are also graded, since a crossing can sit next to s = 0.
      for (std::size_t k = 1; k + 1 < breaks.size(); ++k) {
        double c = breaks[k + 1];
        for (; c > 2.0 * breaks[k]; c *= 0.5) emit_panel(0.5 * c, c, graded_rule_);
        emit_panel(breaks[k], c, segment_rule_);
      }
    }
    visit(x, tail_weight);
  }

  double evaluate(const Vec3& x, char& accurate) const {
    if (phi_.dimension() == 2 && x[2] != 0.0) {
      throw std::invalid_argument("targets for n = 2 must have zero third coordinate");
    }
    const double rx = norm(x);
    const auto& edges = phi_.grid().edges;
    accurate = (rx == 0.0 || (rx >= edges.front() && rx <= edges.back())) ? 1 : 0;
    if (rows_.empty()) return 0.0;
    const double delta = near_radius(rx);
    double sum = 0.0;
    far_nodes(x, delta, [&](std::size_t i, std::size_t j, double w) { sum += w * phi_.at(i, j); });
    if (delta > 0.0) {
      near_nodes(x, delta, [&](const Vec3& y, double w) { sum += w * interp_(y); });
    }
    return sum;
  }

  const GridFunction& phi() const { return phi_; }
  const GridInterpolator& interpolator() const { return interp_; }
  const std::vector<std::size_t>& rows() const { return rows_; }

 private:
  const GridFunction& phi_;
  KernelKind kind_;
  double gamma_;
  PotentialOptions options_;
  GridInterpolator interp_;
  std::vector<std::size_t> rows_;
  std::vector<Direction> rays_;
  const GaussRule& segment_rule_;
  const GaussRule& graded_rule_;
  double angular_cell_ = 0.0;
  double sphere_weight_ = 0.0;
  std::size_t first_edge_ = 0;
  std::size_t last_edge_ = 0;
};

// fftw_malloc'd array, so every buffer has the alignment the plans assume.
template <class T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* data;
};

PotentialResult evaluate_all(const Evaluator& ev, std::span<const Vec3> targets, bool parallel) {
  PotentialResult out;
  out.values.assign(targets.size(), 0.0);
  out.accurate.assign(targets.size(), 1);
  const auto count = static_cast<long long>(targets.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (long long t = 0; t < count; ++t) {
    const auto k = static_cast<std::size_t>(t);
    try {
      out.values[k] = ev.evaluate(targets[k], out.accurate[k]);
    } catch (...) {
#pragma omp critical(mnlab_potential_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

PotentialResult riesz_potential_direct(const GridFunction& phi, double gamma,
                                       std::span<const Vec3> targets,
                                       const PotentialOptions& options) {
  return evaluate_all(Evaluator(phi, KernelKind::riesz, gamma, options), targets, true);
}

PotentialResult riesz_potential_direct_serial(const GridFunction& phi, double gamma,
                                              std::span<const Vec3> targets,
                                              const PotentialOptions& options) {
  return evaluate_all(Evaluator(phi, KernelKind::riesz, gamma, options), targets, false);
}

PotentialResult bessel_like_potential(const GridFunction& phi, double gamma,
                                      std::span<const Vec3> targets,
                                      const PotentialOptions& options) {
  return evaluate_all(Evaluator(phi, KernelKind::bessel_like, gamma, options), targets, true);
}

PotentialResult bessel_like_potential_serial(const GridFunction& phi, double gamma,
                                             std::span<const Vec3> targets,
                                             const PotentialOptions& options) {
  return evaluate_all(Evaluator(phi, KernelKind::bessel_like, gamma, options), targets, false);
}

GridFunction potential_on_grid(KernelKind kind, const GridFunction& phi, double gamma,
                               const RadialGrid& grid, const AngularQuadrature& angular,
                               const PotentialOptions& options) {
  if (grid.n != phi.dimension() || angular.n != phi.dimension()) {
    throw std::invalid_argument("target grid dimension differs from phi");
  }
  const Evaluator ev(phi, kind, gamma, options);
  const std::size_t nr = grid.size();
  const std::size_t na = angular.size();
  std::vector<double> values(nr * na, 0.0);

  if (phi.is_radial()) {
    std::vector<Vec3> targets;
    for (double r : grid.nodes) targets.push_back({r, 0.0, 0.0});
    const auto res = evaluate_all(ev, targets, true);
    for (std::size_t i = 0; i < nr; ++i) {
      std::fill_n(values.begin() + static_cast<long>(i * na), na, res.values[i]);
    }
    return {grid, angular, std::move(values)};
  }

  if (phi.dimension() != 2 || !(angular == phi.angular())) {
    std::vector<Vec3> targets;
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = 0; j < na; ++j) {
        const auto& w = angular.nodes[j];
        targets.push_back({grid.nodes[i] * w[0], grid.nodes[i] * w[1], grid.nodes[i] * w[2]});
      }
    }
    auto res = evaluate_all(ev, targets, true);
    return {grid, angular, std::move(res.values)};
  }

  // n = 2, shared angular rule: the rule at angle 2 pi j / N is the rule at
  // angle 0 rotated by j nodes, so T(rho, j) = sum_{i, d} A_i[d] phi_i[d + j],
  // a circular correlation per source row, done with real FFTs.
  const auto& rows = ev.rows();
  const int nfft = static_cast<int>(na);
  const std::size_t nspec = na / 2 + 1;
  std::vector<long> compact(phi.radial_size(), -1);
  for (std::size_t k = 0; k < rows.size(); ++k) compact[rows[k]] = static_cast<long>(k);

  FftwBuffer<double> real_buf(na);
  FftwBuffer<fftw_complex> spec_buf(nspec);
  fftw_plan forward = fftw_plan_dft_r2c_1d(nfft, real_buf.data, spec_buf.data, FFTW_ESTIMATE);
  fftw_plan backward = fftw_plan_dft_c2r_1d(nfft, spec_buf.data, real_buf.data, FFTW_ESTIMATE);
  std::vector<std::complex<double>> phi_hat(rows.size() * nspec);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto r = phi.row(rows[k]);
    std::copy(r.begin(), r.end(), real_buf.data);
    fftw_execute_dft_r2c(forward, real_buf.data, spec_buf.data);
    for (std::size_t f = 0; f < nspec; ++f) {
      phi_hat[k * nspec + f] = {spec_buf.data[f][0], spec_buf.data[f][1]};
    }
  }

  const auto count = static_cast<long long>(nr);
  std::exception_ptr failure;
#pragma omp parallel
  {
    FftwBuffer<double> row_in(na);
    FftwBuffer<fftw_complex> row_out(nspec);
    std::vector<double> table(rows.size() * na);
    std::vector<std::complex<double>> acc(nspec);
    std::vector<GridInterpolator::Entry> entries;
#pragma omp for schedule(dynamic, 1)
    for (long long t = 0; t < count; ++t) {
      try {
        const auto i_t = static_cast<std::size_t>(t);
        const Vec3 x{grid.nodes[i_t], 0.0, 0.0};
        std::fill(table.begin(), table.end(), 0.0);
        const double delta = ev.near_radius(grid.nodes[i_t]);
        ev.far_nodes(x, delta, [&](std::size_t i, std::size_t j, double w) {
          table[static_cast<std::size_t>(compact[i]) * na + j] += w;
        });
        if (delta > 0.0) {
          ev.near_nodes(x, delta, [&](const Vec3& y, double w) {
            ev.interpolator().stencil(y, entries);
            for (const auto& e : entries) {
              const long k = compact[e.index / na];
              if (k >= 0) table[static_cast<std::size_t>(k) * na + e.index % na] += w * e.weight;
            }
          });
        }
        std::fill(acc.begin(), acc.end(), std::complex<double>{});
        for (std::size_t k = 0; k < rows.size(); ++k) {
          std::copy_n(table.begin() + static_cast<long>(k * na), na, row_in.data);
          fftw_execute_dft_r2c(forward, row_in.data, row_out.data);
          const std::complex<double>* ph = phi_hat.data() + k * nspec;
          for (std::size_t f = 0; f < nspec; ++f) {
            acc[f] += std::complex<double>(row_out.data[f][0], -row_out.data[f][1]) * ph[f];
          }
        }
        for (std::size_t f = 0; f < nspec; ++f) {
          row_out.data[f][0] = acc[f].real();
          row_out.data[f][1] = acc[f].imag();
        }
        fftw_execute_dft_c2r(backward, row_out.data, row_in.data);
        for (std::size_t j = 0; j < na; ++j) values[i_t * na + j] = row_in.data[j] / nfft;
      } catch (...) {
#pragma omp critical(mnlab_potential_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  fftw_destroy_plan(forward);
  fftw_destroy_plan(backward);
  if (failure) std::rethrow_exception(failure);
  return {grid, angular, std::move(values)};
}

RadialProfile RadialProfile::from_radial(const GridFunction& f) {
  RadialProfile p;
  p.grid = f.grid();
  for (std::size_t i = 0; i < f.radial_size(); ++i) p.values.push_back(f.at(i, 0));
  return p;
}

double RadialProfile::operator()(double rho) const {
  const long k = grid.panel_of(rho);
  if (k < 0) return 0.0;
  const auto m = static_cast<std::size_t>(grid.order());
  const std::size_t first = static_cast<std::size_t>(k) * m;
  const double t = std::log(rho);
  double s = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    double l = 1.0;
    const double xa = std::log(grid.nodes[first + a]);
    for (std::size_t b = 0; b < m; ++b) {
      if (b != a) l *= (t - std::log(grid.nodes[first + b])) / (xa - std::log(grid.nodes[first + b]));
    }
    s += l * values[first + a];
  }
  return s;
}

double riesz_potential_radial_reduced(const RadialProfile& profile, double gamma, double r) {
  const int n = profile.grid.n;
  if (!(gamma > 0.0 && gamma < n)) throw std::invalid_argument("Riesz potential needs 0 < gamma < n");
  if (r < 0.0) throw std::invalid_argument("target radius must be non-negative");
  if (profile.values.size() != profile.grid.size()) throw std::invalid_argument("profile size mismatch");

  const auto& grid = profile.grid;
  const auto m = static_cast<std::size_t>(grid.order());
  std::size_t first = grid.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (profile.values[i] != 0.0) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == grid.size()) return 0.0;
  const double lo = grid.edges[first / m];
  const double hi = grid.edges[last / m + 1];
  std::vector<double> edges(grid.edges.begin() + static_cast<long>(first / m),
                            grid.edges.begin() + static_cast<long>(last / m + 2));

  AdaptiveOptions opt;
  opt.rel_tol = 1e-9;
  opt.max_evaluations = 400000;
  auto integrate = [&](const std::function<double(double)>& f, std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.size() < 2) return 0.0;
    const auto res = integrate_adaptive(f, breaks, opt);
    if (!res.converged) throw BudgetExceeded("radial reduction: tolerance not met");
    return res.value;
  };

  if (r == 0.0) {
    const double area = sphere_area(n - 1);
    return integrate([&](double rho) { return profile(rho) * std::pow(rho, n - 1 - gamma) * area; },
                     edges);
  }

  auto f = [&](double rho) {
    const double v = profile(rho);
    if (v == 0.0) return 0.0;
    return v * std::pow(rho, n - 1 - gamma) * i_nu_quadrature(n, gamma, r / rho, 1e-11);
  };

  constexpr int kLevels = 26;
  const double eps = 0.25 * std::ldexp(1.0, -kLevels);
  auto clip = [&](std::vector<double> pts, double a, double b) {
    std::vector<double> out{a, b};
    for (double p : pts) {
      if (p > a && p < b) out.push_back(p);
    }
    return out;
  };
  std::vector<double> pts = edges;
  for (int k = 0; k < kLevels; ++k) {
    const double h = 0.25 * std::ldexp(1.0, -k);
    pts.push_back(r * (1.0 - h));
    pts.push_back(r * (1.0 + h));
  }
  double total = 0.0;
  const double left_end = std::min(hi, r * (1.0 - eps));
  if (lo < left_end) total += integrate(f, clip(pts, lo, left_end));
  const double right_start = std::max(lo, r * (1.0 + eps));
  if (right_start < hi) total += integrate(f, clip(pts, right_start, hi));

  // The pieces within r * eps of r shrink geometrically; sum the remainder
  // from the ratio of the last two dyadic pieces.
  const GaussRule& gl = gauss_legendre_cached(10);
  auto gauss = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
      s += gl.weights[g] * f(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[g]);
    }
    return 0.5 * (b - a) * s;
  };
  for (double side : {-1.0, 1.0}) {
    const double a1 = r * (1.0 + side * eps);
    const double a2 = r * (1.0 + side * 2.0 * eps);
    const double a4 = r * (1.0 + side * 4.0 * eps);
    if (std::min({a1, a2, a4}) < lo || std::max({a1, a2, a4}) > hi) continue;
    const double near = gauss(std::min(a1, a2), std::max(a1, a2));
    const double far = gauss(std::min(a2, a4), std::max(a2, a4));
    if (far == 0.0) continue;
    const double q = near / far;
    if (q > 0.0 && q < 1.0) total += near * q / (1.0 - q);
  }
  return total;
}

std::string_view to_string(TestFamilyKind kind) {
  switch (kind) {
    case TestFamilyKind::power_spike: return "power_spike";
    case TestFamilyKind::ckn_log_spike: return "ckn_log_spike";
    case TestFamilyKind::angular_bump: return "angular_bump";
    case TestFamilyKind::tensor_spike_bump: return "tensor_spike_bump";
  }
  return "unknown";
}

TestFamilyKind parse_test_family(std::string_view text) {
  for (auto k : {TestFamilyKind::power_spike, TestFamilyKind::ckn_log_spike,
                 TestFamilyKind::angular_bump, TestFamilyKind::tensor_spike_bump}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown test family: " + std::string(text));
}

void TestFamily::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("inner cutoff eps must be positive");
  if (!(eps < R)) throw std::invalid_argument("need eps < R");
  if (!(kappa >= 1.0)) throw std::invalid_argument("angular concentration kappa must be >= 1");
  if (!(m >= 0.0)) throw std::invalid_argument("angular power m must be non-negative");
  if (kind == TestFamilyKind::ckn_log_spike && R > 0.5) {
    throw std::invalid_argument("log spike outer cutoff must be at most 1/2");
  }
  if (std::abs(norm(direction) - 1.0) > 1e-12) throw std::invalid_argument("direction must be a unit vector");
}

GridFunction make_test_function(const TestFamily& family, const RadialGrid& grid,
                                const AngularQuadrature& angular) {
  family.validate();
  auto radial = [&](double rho) -> double {
    if (rho < family.eps || rho > family.R) return 0.0;
    switch (family.kind) {
      case TestFamilyKind::power_spike:
      case TestFamilyKind::tensor_spike_bump: return std::pow(rho, -family.exponent);
      case TestFamilyKind::ckn_log_spike: return std::pow(rho, family.exponent) * std::log(1.0 / rho);
      case TestFamilyKind::angular_bump: return 1.0;
    }
    return 0.0;
  };
  const bool has_bump = family.kind == TestFamilyKind::angular_bump ||
                        family.kind == TestFamilyKind::tensor_spike_bump;
  if (!has_bump) return GridFunction::sample_radial(grid, angular, radial);

  std::vector<double> bump(angular.size());
  double mean = 0.0;
  for (std::size_t j = 0; j < angular.size(); ++j) {
    const double c = dot(angular.nodes[j], family.direction);
    bump[j] = std::pow(1.0 + family.kappa * (1.0 - c), -family.m);
    mean += angular.weights[j] * bump[j];
  }
  mean /= angular.total_weight();
  std::vector<double> values(grid.size() * angular.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = radial(grid.nodes[i]);
    for (std::size_t j = 0; j < angular.size(); ++j) values[i * angular.size() + j] = g * bump[j] / mean;
  }
  return {grid, angular, std::move(values)};
}

}  // namespace mnlab
