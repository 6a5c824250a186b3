// Serial reference vs OpenMP for the data-parallel loops.
// Thread count follows OMP_NUM_THREADS.

#include "mnlab/discretization.hpp"
#include "mnlab/operators.hpp"
#include "mnlab/region.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace mnlab;

namespace {

GridFunction sample(int n, int angular) {
  RadialGridSpec spec;
  spec.breaks = {0.1, 1.0};
  return GridFunction::sample(make_radial_grid(n, spec), make_angular_quadrature(n, angular),
                              [](double r, const Vec3& t) {
                                return r >= 0.1 && r <= 1.0 ? std::exp(t[0]) / std::sqrt(r) : 0.0;
                              });
}

std::vector<Vec3> targets(int count) {
  std::vector<Vec3> out;
  for (int k = 0; k < count; ++k) {
    const double r = 0.05 + 2.0 * k / count;
    out.push_back({r * std::cos(0.7 * k), r * std::sin(0.7 * k), 0.0});
  }
  return out;
}

ParameterSet mixed_base() {
  ParameterSet p;
  p.set("n", Rational(3));
  p.set("p", Rational(2, 3));
  p.set("q", Rational(1, 3));
  p.set("ptilde", Rational(1, 2));
  p.set("qtilde", Rational(1, 4));
  p.set("gamma", Rational(2));
  return p;
}

const GridAxis kAlpha{"alpha", Rational(-1), Rational(1), Rational(1, 40)};
const GridAxis kBeta{"beta", Rational(-1), Rational(1), Rational(1, 40)};

void BM_MixedNorm(benchmark::State& state) {
  const GridFunction f = sample(3, 32);
  const RecipExponent p(Rational(1, 3)), pt(Rational(1, 5));
  for (auto _ : state) benchmark::DoNotOptimize(mixed_norm(f, p, pt, 0.5));
}

void BM_MixedNormSerial(benchmark::State& state) {
  const GridFunction f = sample(3, 32);
  const RecipExponent p(Rational(1, 3)), pt(Rational(1, 5));
  for (auto _ : state) benchmark::DoNotOptimize(mixed_norm_serial(f, p, pt, 0.5));
}

void BM_ScanRegion(benchmark::State& state) {
  const ParameterSet base = mixed_base();
  for (auto _ : state) benchmark::DoNotOptimize(scan_region(CheckerId::mixed_general, base, kAlpha, kBeta));
}

void BM_ScanRegionSerial(benchmark::State& state) {
  const ParameterSet base = mixed_base();
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_region_serial(CheckerId::mixed_general, base, kAlpha, kBeta));
  }
}

void BM_RieszDirect(benchmark::State& state) {
  const GridFunction f = sample(2, 64);
  const auto x = targets(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(riesz_potential_direct(f, 1.3, x));
}

void BM_RieszDirectSerial(benchmark::State& state) {
  const GridFunction f = sample(2, 64);
  const auto x = targets(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(riesz_potential_direct_serial(f, 1.3, x));
}

}  // namespace

BENCHMARK(BM_MixedNorm)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MixedNormSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanRegion)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanRegionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RieszDirect)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RieszDirectSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
