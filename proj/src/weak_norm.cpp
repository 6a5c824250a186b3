#include "mnlab/weak_norm.hpp"

#include "mnlab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace mnlab {

void WeakNormSample::validate() const {
  if (nodes.size() != values.size()) throw std::invalid_argument("nodes/values size mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > 0.0)) throw std::invalid_argument("nodes must be positive");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("nodes must be strictly increasing");
    }
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw std::invalid_argument("values must be finite and non-negative");
    }
  }
}

std::vector<double> WeakNormSample::haar_weights() const {
  const std::size_t m = nodes.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double half = 0.5 * std::log(nodes[i + 1] / nodes[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

double weak_norm_haar(const WeakNormSample& sample, const RecipExponent& r) {
  sample.validate();
  if (sample.nodes.empty()) return 0.0;
  if (r.is_infinite()) return *std::max_element(sample.values.begin(), sample.values.end());
  const double inv_r = to_double(r.value());
  const auto w = sample.haar_weights();
  std::vector<std::size_t> order(sample.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sample.values[a] > sample.values[b];
  });
  double measure = 0.0;
  double best = 0.0;
  for (std::size_t k : order) {
    measure += w[k];
    best = std::max(best, sample.values[k] * std::pow(measure, inv_r));
  }
  return best;
}

double strong_norm_haar(const WeakNormSample& sample, const RecipExponent& r) {
  sample.validate();
  if (sample.nodes.empty()) return 0.0;
  if (r.is_infinite()) return *std::max_element(sample.values.begin(), sample.values.end());
  const double rr = r.exponent();
  const auto w = sample.haar_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * std::pow(sample.values[i], rr);
  return std::pow(sum, 1.0 / rr);
}

namespace {

struct Node {
  double rho;
  int range_level;   // smallest level whose radial range contains rho
  int window_level;  // smallest level whose near-1 window admits rho
};

// Nodes of the finest level; every coarser level is a subset.
std::vector<Node> build_nodes(const ProofKernelOptions& opt) {
  const int last = opt.levels - 1;
  const int d = opt.nodes_per_decade;
  std::vector<Node> out;
  const int span = 3 + last;
  for (int j = -span * d; j <= span * d; ++j) {
    if (j == 0) continue;  // rho = 1 itself
    const int decade = (std::abs(j) + d - 1) / d;  // ceil(|j| / d)
    out.push_back({std::pow(10.0, static_cast<double>(j) / d), std::max(0, decade - 3), 0});
  }
  // Near-1 window: rho = 1 -/+ 10^t, t from -(3+last) up to log10(1/4).
  const double top = std::log10(0.25);
  for (int j = -span * d; static_cast<double>(j) / d <= top; ++j) {
    const double h = std::pow(10.0, static_cast<double>(j) / d);
    const int decade = (-j + d - 1) / d;
    const int level = std::max(0, decade - 3);
    out.push_back({1.0 - h, 0, level});
    out.push_back({1.0 + h, 0, level});
  }
  std::sort(out.begin(), out.end(), [](const Node& a, const Node& b) { return a.rho < b.rho; });
  // Drop near-duplicates; keep the entry available at the coarser level.
  std::vector<Node> unique;
  for (const auto& node : out) {
    if (!unique.empty() && node.rho <= unique.back().rho * (1.0 + 1e-12)) {
      auto& prev = unique.back();
      if (std::max(node.range_level, node.window_level) <
          std::max(prev.range_level, prev.window_level)) {
        prev = node;
      }
      continue;
    }
    unique.push_back(node);
  }
  return unique;
}

WeakNormSample restrict_sample(const std::vector<Node>& nodes, const std::vector<double>& g,
                               int level, const std::function<bool(double)>& keep) {
  WeakNormSample s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].range_level > level || nodes[i].window_level > level) continue;
    if (!keep(nodes[i].rho)) continue;
    s.nodes.push_back(nodes[i].rho);
    s.values.push_back(g[i]);
  }
  return s;
}

}  // namespace

ProofKernelResult proof_kernel_weak_norm(const MixedIndices& idx, const ProofKernelOptions& options) {
  if (idx.n < 2) throw std::domain_error("dimension must be at least 2");
  if (options.levels < 2) throw std::invalid_argument("need at least two grid levels");
  ProofKernelResult result;
  result.recip_r = 1 + idx.q.value() - idx.p.value();
  result.recip_rtilde = 1 + idx.qtilde.value() - idx.ptilde.value();
  if (result.recip_r < 0 || result.recip_r > 1) {
    throw std::domain_error("1/r = 1 + 1/q - 1/p must lie in [0, 1]");
  }
  if (result.recip_rtilde < 0 || result.recip_rtilde > 1) {
    throw std::domain_error("1/r~ = 1 + 1/q~ - 1/p~ must lie in [0, 1]");
  }
  const RecipExponent r(result.recip_r);
  const double n = idx.n;
  const double radial_power = n * to_double(idx.q.value()) - to_double(idx.beta);
  const double gamma = to_double(idx.gamma);
  const double inv_rt = to_double(result.recip_rtilde);

  auto angular = [&](double rho) {
    if (inv_rt == 0.0) return std::pow(std::abs(rho - 1.0), -gamma);
    return std::pow(i_nu_quadrature(idx.n, gamma / inv_rt, rho, options.tol), inv_rt);
  };

  const auto nodes = build_nodes(options);
  std::vector<double> g(nodes.size());
  std::exception_ptr failure;
  const auto count = static_cast<long long>(nodes.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < count; ++i) {
    try {
      const double rho = nodes[static_cast<std::size_t>(i)].rho;
      g[static_cast<std::size_t>(i)] = std::pow(rho, radial_power) * angular(rho);
    } catch (...) {
#pragma omp critical(mnlab_proof_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  auto everywhere = [](double) { return true; };
  for (int level = 0; level < options.levels; ++level) {
    result.level_values.push_back(weak_norm_haar(restrict_sample(nodes, g, level, everywhere), r));
  }
  const int last = options.levels - 1;
  result.value = result.level_values[static_cast<std::size_t>(last)];
  const double prev = result.level_values[static_cast<std::size_t>(last - 1)];
  result.finite = std::isfinite(result.value) && result.value < options.stabilization * prev;
  result.divergence_region = "none";
  if (!result.finite) {
    const std::array<std::pair<const char*, std::function<bool(double)>>, 3> regions{{
        {"near_origin", [](double rho) { return rho < 0.5; }},
        {"near_one", [](double rho) { return rho >= 0.5 && rho <= 2.0; }},
        {"far_field", [](double rho) { return rho > 2.0; }},
    }};
    double worst = 0.0;
    for (const auto& [name, keep] : regions) {
      const double a = weak_norm_haar(restrict_sample(nodes, g, last - 1, keep), r);
      const double b = weak_norm_haar(restrict_sample(nodes, g, last, keep), r);
      const double growth = a > 0.0 ? b / a : 0.0;
      if (growth > worst) {
        worst = growth;
        result.divergence_region = name;
      }
    }
  }
  return result;
}

}  // namespace mnlab
