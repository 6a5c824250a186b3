#include "mnlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <queue>

namespace mnlab {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  const auto m = static_cast<std::size_t>(order);
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_m.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(m) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0, p1 = x;
      dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= m; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  if (m == 1) rule.weights[0] = 2.0;
  return rule;
}

const GaussRule& gauss_legendre_cached(int order) {
  constexpr int kMaxCached = 128;
  if (order < 1 || order > kMaxCached) {
    throw std::invalid_argument("cached Gauss-Legendre order out of range");
  }
  static std::array<GaussRule, kMaxCached + 1> cache;
  static std::array<std::once_flag, kMaxCached + 1> flags;
  const auto k = static_cast<std::size_t>(order);
  std::call_once(flags[k], [&] { cache[k] = gauss_legendre(order); });
  return cache[k];
}

namespace {

struct Panel {
  double a;
  double b;
  double whole;
  double left;
  double right;
  double error() const { return std::abs(whole - left - right); }
  double refined() const { return left + right; }
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const { return x.error() < y.error(); }
};

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options) {
  if (breakpoints.size() < 2) throw std::invalid_argument("need at least two breakpoints");
  const GaussRule& rule = gauss_legendre_cached(options.order);
  AdaptiveResult result;

  auto gauss = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    result.evaluations += rule.nodes.size();
    return sum * half;
  };
  auto make_panel = [&](double a, double b, double whole) {
    const double m = 0.5 * (a + b);
    return Panel{a, b, whole, gauss(a, m), gauss(m, b)};
  };

  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a)) continue;
    Panel p = make_panel(a, b, gauss(a, b));
    total += p.refined();
    total_error += p.error();
    queue.push(p);
  }

  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  while (total_error > target() && !queue.empty()) {
    if (result.evaluations >= options.max_evaluations) break;
    Panel p = queue.top();
    queue.pop();
    total -= p.refined();
    total_error -= p.error();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && p.b > m)) {
      // Panel width at machine resolution; accept it as is.
      total += p.refined();
      continue;
    }
    Panel left = make_panel(p.a, m, p.left);
    Panel right = make_panel(m, p.b, p.right);
    total += left.refined() + right.refined();
    total_error += left.error() + right.error();
    queue.push(left);
    queue.push(right);
  }

  // Re-sum to shed accumulated cancellation in the running totals.
  double sum = 0.0;
  double err = 0.0;
  while (!queue.empty()) {
    sum += queue.top().refined();
    err += queue.top().error();
    queue.pop();
  }
  result.value = sum;
  result.error = err;
  result.converged = err <= std::max(options.abs_tol, options.rel_tol * std::abs(sum));
  return result;
}

std::vector<double> graded_breakpoints(double a, double b, double finest) {
  std::vector<double> out{a};
  if (finest > 0.0 && finest < b - a) {
    for (double h = finest; a + h < b; h *= 2.0) out.push_back(a + h);
  }
  out.push_back(b);
  return out;
}

std::vector<double> graded_breakpoints_around(double a, double b, double c, double finest) {
  if (c <= a) return graded_breakpoints(a, b, finest);
  std::vector<double> out{a};
  std::vector<double> left;
  for (double h = finest; c - h > a; h *= 2.0) left.push_back(c - h);
  std::reverse(left.begin(), left.end());
  out.insert(out.end(), left.begin(), left.end());
  if (c < b) {
    out.push_back(c);
    for (double h = finest; c + h < b; h *= 2.0) out.push_back(c + h);
  }
  out.push_back(b);
  return out;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: bad sizes");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

double sphere_area(int k) {
  const double d = static_cast<double>(k + 1);
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

}  // namespace mnlab
