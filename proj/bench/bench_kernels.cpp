// Serial versus OpenMP kernels. Run with --benchmark_counters_tabular=true.

#include <benchmark/benchmark.h>

#include "cppm/config.hpp"
#include "cppm/dynamics.hpp"
#include "cppm/geometry.hpp"
#include "cppm/simulation.hpp"
#include "oracles.hpp"

using namespace cppm;

namespace {

struct Bonds {
  PointField f;
  NeighborTable t;
  std::vector<Vec2> T;
  std::vector<double> M;

  explicit Bonds(long n) {
    f = build_grid({n, n, 1e-3, 0.1, {}}, {DensityKind::partial, 2000.0, 1.0, 0.0, 1e-3});
    t = find_neighbors(f, 3.05e-3);
    oracle::Rng rng(1);
    for (Index i = 0; i < f.size(); ++i) f.u[i] = rng.vec(-1e-6, 1e-6);
    T.resize(t.bonds());
    M.resize(t.bonds());
    for (Index k = 0; k < t.bonds(); ++k) {
      T[k] = rng.vec(-1.0, 1.0);
      M[k] = rng.uniform(-1.0, 1.0);
    }
  }
};

void BM_Assemble(benchmark::State& s) {
  Bonds b(s.range(0));
  StepForces out;
  out.resize(b.f.size());
  const int threads = static_cast<int>(s.range(1));
  for (auto _ : s) {
    assemble(b.t, b.f, b.T, b.M, out, threads);
    benchmark::DoNotOptimize(out.F_int.data());
  }
  s.counters["bonds"] = static_cast<double>(b.t.bonds());
  s.SetItemsProcessed(s.iterations() * static_cast<long>(b.t.bonds()));
}
BENCHMARK(BM_Assemble)->ArgsProduct({{100, 200}, {1, 2, 4, 8}})->UseRealTime();

void BM_AssembleReference(benchmark::State& s) {
  Bonds b(s.range(0));
  StepForces out;
  out.resize(b.f.size());
  for (auto _ : s) {
    assemble_reference(b.t, b.f, b.T, b.M, out);
    benchmark::DoNotOptimize(out.F_int.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(b.t.bonds()));
}
BENCHMARK(BM_AssembleReference)->Arg(100)->Arg(200)->UseRealTime();

void BM_NeighborsCellList(benchmark::State& s) {
  const long n = s.range(0);
  const auto f = build_grid({n, n, 1e-3, 0.1, {}}, {DensityKind::partial, 2000.0, 1.0, 0.0, 1e-3});
  for (auto _ : s) benchmark::DoNotOptimize(find_neighbors(f, 3.05e-3).bonds());
}
BENCHMARK(BM_NeighborsCellList)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_NeighborsBruteForce(benchmark::State& s) {
  const auto X = oracle::grid_points(s.range(0), s.range(0), 1e-3);
  for (auto _ : s) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < X.size(); ++i) total += oracle::brute_family(X, i, 3.05e-3).size();
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_NeighborsBruteForce)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

// One full explicit step of the shear-band preset.
void BM_Step(benchmark::State& s) {
  Simulation sim(preset("example1"), static_cast<int>(s.range(0)));
  for (auto _ : s) sim.step();
}
BENCHMARK(BM_Step)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
