#include <benchmark/benchmark.h>

#include "degeneig/eigensolver.hpp"
#include "degeneig/mesh.hpp"
#include "degeneig/perturbation.hpp"
#include "degeneig/weight.hpp"

namespace {

void LeadingEigenpairs(benchmark::State& state) {
  degeneig::Mesh mesh = degeneig::build_unit_square_mesh(static_cast<int>(state.range(0)));
  degeneig::WeightSpec spec = degeneig::WeightSpec::point_degenerate(1.0, {0.0, 0.0});
  degeneig::PencilFactory factory(mesh, spec);
  degeneig::PotentialField rho = degeneig::PotentialField::zero(mesh.nv());
  degeneig::SolveOptions opts;
  opts.k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(factory.solve(rho, opts));
  }
}
BENCHMARK(LeadingEigenpairs)
    ->Args({16, 5})
    ->Args({32, 5})
    ->Args({64, 5})
    ->Args({32, 10})
    ->Unit(benchmark::kMillisecond);

void ClusterSplitting(benchmark::State& state) {
  degeneig::Mesh mesh =
      degeneig::build_unit_square_crisscross_mesh(static_cast<int>(state.range(0)));
  degeneig::WeightSpec spec = degeneig::WeightSpec::constant(1.0);
  degeneig::PencilFactory factory(mesh, spec);
  degeneig::PotentialField rho = degeneig::PotentialField::zero(mesh.nv());
  degeneig::SolveOptions opts;
  opts.k = 5;
  degeneig::EigenDecomposition d = factory.solve(rho, opts);
  auto clusters = degeneig::cluster_eigenvalues(d, 1e-6);
  const degeneig::SpectralCluster* target = nullptr;
  for (const auto& c : clusters) {
    if (c.h >= 2) {
      target = &c;
      break;
    }
  }
  if (target == nullptr) {
    state.SkipWithError("no degenerate cluster on this mesh");
    return;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        degeneig::split_cluster(factory, rho, *target, 0.1, 1e-6, opts));
  }
}
BENCHMARK(ClusterSplitting)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
