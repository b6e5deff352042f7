#include <benchmark/benchmark.h>

#include <fraclap/error_metrics.hpp>
#include <fraclap/solvers.hpp>

namespace {

using namespace fraclap;

void BM_AssembleStiffness2d(benchmark::State& state) {
  const TriMesh mesh = uniform_square_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(mesh));
  state.SetItemsProcessed(state.iterations() * mesh.num_triangles());
}
BENCHMARK(BM_AssembleStiffness2d)->Arg(16)->Arg(32)->Arg(64);

void BM_AssembleWeightedStiffness(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const double s = 0.5;
  const CylinderMesh cyl =
      tensor_cylinder(uniform_square_mesh(M), graded_interval(M, s, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_weighted_stiffness(cyl, s));
  state.SetItemsProcessed(state.iterations() * cyl.num_prisms());
}
BENCHMARK(BM_AssembleWeightedStiffness)->Arg(8)->Arg(16)->Arg(24);

void BM_ExtensionSolve(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const double s = 0.5;
  const CylinderMesh cyl =
      tensor_cylinder(uniform_square_mesh(M), graded_interval(M, s, 1.0));
  const Fn2d f = named_function("sin_product");
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_truncated_extension(cyl, f, s));
}
BENCHMARK(BM_ExtensionSolve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_FemEigenbasis(benchmark::State& state) {
  const TriMesh mesh = uniform_square_mesh(static_cast<int>(state.range(0)));
  const int m = std::min(mesh.num_interior_nodes(), 100);
  for (auto _ : state)
    benchmark::DoNotOptimize(fem_eigenbasis(mesh, LaplaceKind::Dirichlet, m));
}
BENCHMARK(BM_FemEigenbasis)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_HsError(benchmark::State& state) {
  const TriMesh mesh = uniform_square_mesh(24);
  const EigenBasis basis =
      fem_eigenbasis(mesh, LaplaceKind::Dirichlet, std::min(mesh.num_interior_nodes(), 100));
  Eigen::VectorXd e = Eigen::VectorXd::LinSpaced(mesh.num_nodes(), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hs_error_via_eigen(e, basis, 0.6));
}
BENCHMARK(BM_HsError);

}  // namespace

BENCHMARK_MAIN();
