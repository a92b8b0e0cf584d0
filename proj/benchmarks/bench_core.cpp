#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fracelast/compare.hpp"
#include "fracelast/dispersion.hpp"
#include "fracelast/fraclap.hpp"
#include "fracelast/green.hpp"
#include "fracelast/lattice.hpp"

using namespace fracelast;

static void BM_SynthesizeKernel(benchmark::State& state) {
  DispersionLaw law;
  law.terms = {{1.5, -1.0}};
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_kernel(law, 1.0, n_max));
  }
}
BENCHMARK(BM_SynthesizeKernel)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_GreenRadial(benchmark::State& state) {
  ContinuumParams p;
  p.terms = {{1.5, 1.0}, {2.0, 0.1}};
  const double r = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_radial(p, r));
  }
}
BENCHMARK(BM_GreenRadial)->Arg(0)->Arg(1)->Arg(2)->Arg(3);

static void BM_SpectralFracLaplacian(benchmark::State& state) {
  GridField field;
  const auto np = static_cast<std::size_t>(state.range(0));
  field.spacing = 40.0 / static_cast<double>(np);
  field.origin = -20.0;
  field.samples.resize(np);
  for (std::size_t i = 0; i < np; ++i) {
    const double x = field.x(i);
    field.samples[i] = std::exp(-x * x);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_frac_laplacian(field, 1.5));
  }
}
BENCHMARK(BM_SpectralFracLaplacian)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_LatticeStep(benchmark::State& state) {
  DispersionLaw law;
  law.terms = {{1.5, -1.0}};
  LatticeSpec spec;
  SynthesisOptions opt;
  opt.enforce_roundtrip = false;  // short kernels are the point here
  spec.kernel =
      synthesize_kernel(law, 1.0, static_cast<int>(state.range(0)), opt).kernel;
  spec.coupling = -1.0;
  spec.particle_count = 4096;
  LatticeState s;
  s.displacements.resize(4096);
  s.velocities.assign(4096, 0.0);
  for (int i = 0; i < 4096; ++i)
    s.displacements[static_cast<std::size_t>(i)] = 0.01 * std::cos(0.05 * i);
  const double wmax = max_frequency(spec);
  const double dt = 0.1 / wmax;
  for (auto _ : state) {
    s = step_dynamics(spec, s, {}, dt, BoundaryMode::periodic, wmax);
    benchmark::DoNotOptimize(s.displacements.data());
  }
}
BENCHMARK(BM_LatticeStep)->Arg(64)->Arg(512);

static void BM_SolveStatic(benchmark::State& state) {
  DispersionLaw law;
  law.terms = {{1.5, -1.0}};
  const int n = static_cast<int>(state.range(0));
  LatticeSpec spec;
  spec.kernel = synthesize_kernel(law, 1.0, n / 4).kernel;
  spec.coupling = -1.0;
  spec.particle_count = n;
  ExternalForce f;
  f.values.assign(static_cast<std::size_t>(n), 0.0);
  f.values[static_cast<std::size_t>(n / 4)] = 1.0;
  f.values[static_cast<std::size_t>(3 * n / 4)] = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_static(spec, f));
  }
}
BENCHMARK(BM_SolveStatic)->Arg(512)->Arg(1024);

BENCHMARK_MAIN();
