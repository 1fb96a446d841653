// Serial reference kernels against their OpenMP counterparts on 2D grids.
//
//   ./bench_kernels --benchmark_filter=PowerSums
//   OMP_NUM_THREADS=8 ./bench_kernels

#include <pxlap/kernels.hpp>
#include <pxlap/luxemburg.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace
{

using namespace pxlap;

struct Fixture
{
  GridPtr grid;
  std::vector<double> nodal;
  std::vector<double> p;
  std::vector<double> logs;
  std::vector<double> grads;
  std::vector<double> out_cells;
  std::vector<double> out_nodes;

  explicit Fixture(std::size_t n)
  {
    grid = Grid::make(Domain::box(0, 1, 0, 1), n);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    nodal.resize(grid->node_count());
    for (auto &v : nodal)
      v = uni(rng);
    p.resize(grid->cell_count());
    logs.resize(grid->cell_count());
    for (std::size_t c = 0; c < p.size(); ++c)
    {
      p[c] = 2.0 + 0.5 * std::sin(0.001 * static_cast<double>(c));
      logs[c] = std::log(std::abs(uni(rng)) + 1e-3);
    }
    grads.resize(2 * grid->cell_count());
    kernels::serial::cell_gradients(*grid, nodal, grads);
    out_cells.resize(grid->cell_count());
    out_nodes.resize(grid->node_count());
  }
};

void BM_PowerSums_Serial(benchmark::State &state)
{
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::serial::power_sums(f.p, f.logs, 0.1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.p.size()));
}

void BM_PowerSums_Parallel(benchmark::State &state)
{
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::parallel::power_sums(f.p, f.logs, 0.1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.p.size()));
}

void BM_Gradients_Serial(benchmark::State &state)
{
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
  {
    kernels::serial::cell_gradients(*f.grid, f.nodal, f.grads);
    benchmark::ClobberMemory();
  }
}

void BM_Gradients_Parallel(benchmark::State &state)
{
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
  {
    kernels::parallel::cell_gradients(*f.grid, f.nodal, f.grads);
    benchmark::ClobberMemory();
  }
}

void BM_Gather_Serial(benchmark::State &state)
{
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
  {
    kernels::serial::gather(*f.grid, f.logs, f.grads, f.out_nodes);
    benchmark::ClobberMemory();
  }
}

void BM_Gather_Parallel(benchmark::State &state)
{
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
  {
    kernels::parallel::gather(*f.grid, f.logs, f.grads, f.out_nodes);
    benchmark::ClobberMemory();
  }
}

void BM_LuxemburgNorm(benchmark::State &state)
{
  Fixture f(static_cast<std::size_t>(state.range(0)));
  auto field = build_exponent_field(f.grid, Expression::parse("2 + sin(pi*x)*sin(pi*y)/2"));
  GridFunction u(f.grid, f.nodal, Boundary::free);
  auto const grad = gradient(u);
  for (auto _ : state)
    benchmark::DoNotOptimize(luxemburg_norm(grad, field));
}

} // namespace

BENCHMARK(BM_PowerSums_Serial)->Arg(129)->Arg(513)->Arg(1025);
BENCHMARK(BM_PowerSums_Parallel)->Arg(129)->Arg(513)->Arg(1025);
BENCHMARK(BM_Gradients_Serial)->Arg(129)->Arg(1025);
BENCHMARK(BM_Gradients_Parallel)->Arg(129)->Arg(1025);
BENCHMARK(BM_Gather_Serial)->Arg(129)->Arg(1025);
BENCHMARK(BM_Gather_Parallel)->Arg(129)->Arg(1025);
BENCHMARK(BM_LuxemburgNorm)->Arg(129)->Arg(513);

BENCHMARK_MAIN();
