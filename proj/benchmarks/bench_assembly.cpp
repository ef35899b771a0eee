#include <benchmark/benchmark.h>

#include "degeneig/assembly.hpp"
#include "degeneig/mesh.hpp"
#include "degeneig/weight.hpp"

namespace {

void StiffnessConstantWeight(benchmark::State& state) {
  degeneig::Mesh mesh = degeneig::build_unit_square_mesh(static_cast<int>(state.range(0)));
  degeneig::WeightSpec spec = degeneig::WeightSpec::constant(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(degeneig::assemble_stiffness(mesh, spec));
  }
  state.SetComplexityN(mesh.nt());
}
BENCHMARK(StiffnessConstantWeight)->Arg(16)->Arg(32)->Arg(64)->Complexity();

void StiffnessDegenerateWeight(benchmark::State& state) {
  degeneig::Mesh mesh = degeneig::build_unit_square_mesh(static_cast<int>(state.range(0)));
  degeneig::WeightSpec spec = degeneig::WeightSpec::point_degenerate(1.0, {0.0, 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(degeneig::assemble_stiffness(mesh, spec));
  }
  state.SetComplexityN(mesh.nt());
}
BENCHMARK(StiffnessDegenerateWeight)->Arg(16)->Arg(32)->Arg(64)->Complexity();

void MassMatrix(benchmark::State& state) {
  degeneig::Mesh mesh = degeneig::build_unit_square_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(degeneig::assemble_mass(mesh));
  }
  state.SetComplexityN(mesh.nt());
}
BENCHMARK(MassMatrix)->Arg(16)->Arg(32)->Arg(64)->Complexity();

}  // namespace

BENCHMARK_MAIN();
