#include <random>

#include <benchmark/benchmark.h>

#include "idslab/operator.hpp"
#include "idslab/potential.hpp"
#include "idslab/spectral.hpp"

using namespace idslab;

namespace {

HermitianOperator alloy_operator(int side, double b) {
  const BoxSpec box = BoxSpec::cube(2, side, 1.0, BoundaryCondition::Dirichlet);
  const auto spec = EnsembleSpec::alloy(Profile::unit_cube(), CouplingDist::two_point(-1, 1));
  const auto field = b == 0.0 ? MagneticField::zero(2) : MagneticField::planar(2, b);
  return build_hamiltonian(box, field, sample_alloy(spec, box, 1).values);
}

void BM_EigenvaluesComplex(benchmark::State& state) {
  const auto op = alloy_operator(static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(op));
  state.SetComplexityN(static_cast<long>(op.dim()));
}
BENCHMARK(BM_EigenvaluesComplex)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_EigenvaluesReal(benchmark::State& state) {
  const auto op = alloy_operator(static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(op));
}
BENCHMARK(BM_EigenvaluesReal)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Inertia(benchmark::State& state) {
  const auto op = alloy_operator(static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(count_below_inertia(op, 0.3));
}
BENCHMARK(BM_Inertia)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_BuildHamiltonian(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const BoxSpec box = BoxSpec::cube(2, side, 1.0, BoundaryCondition::Neumann);
  const std::vector<double> v(box.site_count(), 0.1);
  const auto field = MagneticField::planar(2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(box, field, v));
}
BENCHMARK(BM_BuildHamiltonian)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_GaussianSampler(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const BoxSpec box = BoxSpec::cube(2, side, 1.0, BoundaryCondition::Dirichlet);
  const auto spec = EnsembleSpec::gaussian({CovarianceKind::GaussianBump, 1.0, 1.0});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_gaussian(spec, box, seed++));
}
BENCHMARK(BM_GaussianSampler)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
