#include <benchmark/benchmark.h>

#include "glwire/bifurcation.hpp"
#include "glwire/spectral.hpp"
#include "glwire/tdgl.hpp"

using namespace glwire;

namespace {

void BM_GridBuild(benchmark::State& state) {
  for (auto _ : state) {
    Grid g = Grid::chebyshev(int(state.range(0)), Bc::Dirichlet);
    benchmark::DoNotOptimize(g.d2().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GridBuild)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_Eigenpairs(benchmark::State& state) {
  Grid g = Grid::chebyshev(int(state.range(0)), Bc::Dirichlet);
  for (auto _ : state) {
    auto ps = eigenpairs(g, 20.0, 6);
    benchmark::DoNotOptimize(ps.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigenpairs)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_ChiCoefficients(benchmark::State& state) {
  Grid g = Grid::chebyshev(128, Bc::Dirichlet);
  for (auto _ : state) {
    BifCoeffs c = chi_coefficients(g, 20.0);
    benchmark::DoNotOptimize(&c);
  }
}
BENCHMARK(BM_ChiCoefficients);

void BM_TdglStep(benchmark::State& state) {
  const int n = int(state.range(0));
  Grid g = Grid::chebyshev(n, Bc::Dirichlet);
  SimConfig cfg;
  cfg.n = n;
  cfg.current = 20.0;
  TdglStepper stepper(g, 20.0, 8.7, 1e-3);
  WireState s{initial_field(g, cfg), 0.0, 20.0, 8.7};
  for (auto _ : state) {
    s = stepper.step(s);
    benchmark::DoNotOptimize(s.psi.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_TdglStep)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_AntiderivativeApply(benchmark::State& state) {
  Grid g = Grid::chebyshev(int(state.range(0)), Bc::Dirichlet);
  Vec f(g.n());
  for (int k = 0; k < g.n(); ++k)
    f(k) = Complex(std::sin(2.0 * g.nodes()(k)), std::cos(g.nodes()(k)));
  for (auto _ : state) {
    Vec out = g.antiderivative_from_zero(f);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AntiderivativeApply)->Arg(64)->Arg(128)->Arg(256)->Complexity();

}  // namespace

BENCHMARK_MAIN();
