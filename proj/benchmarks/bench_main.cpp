#include <benchmark/benchmark.h>

#include <cmath>

#include "kppfront/eigen.hpp"
#include "kppfront/evolve.hpp"
#include "kppfront/front.hpp"
#include "kppfront/periodic_eigen.hpp"
#include "kppfront/reaction.hpp"

using namespace kppfront;

namespace {

Reaction compact() { return make_compact_favorable(1.0, 2.0, 4.0, 1.0); }

// nx grows with the argument, ny fixed at 10.
Grid strip(int nx) { return Grid::build(30.0, 1.0, nx, 10, BoundaryKind::Neumann); }

}  // namespace

static void BM_DriftEigen(benchmark::State& state) {
  const Grid g = strip(static_cast<int>(state.range(0)));
  const Reaction f = make_illustration(0.3, 5.0, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(drift_eigen(g, f.linearization(), 1.0).lambda);
  state.SetComplexityN(static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_DriftEigen)->Arg(149)->Arg(299)->Arg(599)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_NewtonFront(benchmark::State& state) {
  const Grid g = strip(static_cast<int>(state.range(0)));
  const Reaction f = compact();
  const double c = 0.5 * *critical_speed(drift_eigen(g, f.linearization(), 0.0).lambda);
  for (auto _ : state) benchmark::DoNotOptimize(solve_front(f, c, g).mass);
}
BENCHMARK(BM_NewtonFront)->Arg(149)->Arg(299)->Unit(benchmark::kMillisecond);

static void BM_ImexStep(benchmark::State& state) {
  const Grid g = strip(static_cast<int>(state.range(0)));
  const Reaction f = compact();
  const ImexStepper stepper(f, g, 1.0, default_dt(f, g, f.saturation()));
  SimState s{0.0, Field::sample(g, [](double x, double) { return std::exp(-x * x); }), stepper.dt()};
  for (auto _ : state) {
    s = stepper.step(s);
    benchmark::DoNotOptimize(s.u.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_ImexStep)->Arg(299)->Arg(599);

static void BM_PeriodMap(benchmark::State& state) {
  const Grid g = Grid::build(15.0, 1.0, 151, 5, BoundaryKind::Neumann);
  PeriodicSpec spec;
  spec.time_steps_per_period = static_cast<int>(state.range(0));
  const Reaction f = make_time_periodic(compact().linearization(), 0.5, 1.0);
  const PeriodMap map(f.linearization(), g, 0.5, spec);
  Field v(g, 1.0);
  for (auto _ : state) {
    v = map.apply(v);
    v = (1.0 / v.max()) * v;
  }
}
BENCHMARK(BM_PeriodMap)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
