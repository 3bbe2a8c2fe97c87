#include <benchmark/benchmark.h>

#include "wgdc/assembly.hpp"
#include "wgdc/discretization.hpp"
#include "wgdc/mesh.hpp"
#include "wgdc/solver.hpp"
#include "wgdc/verification.hpp"

namespace {

using namespace wgdc;

PolyMesh family_mesh(int family, int n) {
  return family == 0 ? build_cube_tet_mesh(n) : build_cube_hex_mesh(n);
}

void BM_LocalOperators(benchmark::State& state) {
  const PolyMesh mesh = family_mesh(static_cast<int>(state.range(0)), 4);
  const int k = static_cast<int>(state.range(1));
  const Materials mat = Materials::uniform(mesh.num_cells(), Mat3::Identity(), Mat3::Identity());
  for (auto _ : state) {
    const Discretization disc(mesh, k, mat);
    benchmark::DoNotOptimize(disc.local(0).a_form.data());
  }
  state.counters["cells"] = mesh.num_cells();
}
BENCHMARK(BM_LocalOperators)->ArgsProduct({{0, 1}, {1, 2}})->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const PolyMesh mesh = build_cube_tet_mesh(static_cast<int>(state.range(0)));
  const ExactCase c = catalog("trig-cube", 1);
  const ProblemInstance inst = instance_model(c, mesh, 5);
  const Discretization disc(mesh, 1, inst.materials);
  for (auto _ : state) {
    const SaddleSystem sys = assemble(disc, inst.data);
    benchmark::DoNotOptimize(sys.rhs.data());
  }
}
BENCHMARK(BM_Assemble)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const PolyMesh mesh = build_cube_tet_mesh(4);
  const ExactCase c = catalog("trig-cube", 1);
  const ProblemInstance inst = instance_model(c, mesh, 5);
  const Discretization disc(mesh, 1, inst.materials);
  const SaddleSystem sys = assemble(disc, inst.data);
  const SolverOptions opt{.method = state.range(0) == 0 ? SolverMethod::Direct : SolverMethod::Krylov};
  for (auto _ : state) {
    const Solution s = solve(sys, opt);
    benchmark::DoNotOptimize(s.u.coeffs().data());
  }
  state.counters["unknowns"] = static_cast<double>(sys.dofs.size());
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
