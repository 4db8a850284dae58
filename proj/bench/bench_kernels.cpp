// Serial reference against the OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include <cmath>

#include "shiftthermo/conformal.hpp"
#include "shiftthermo/exp_family.hpp"
#include "shiftthermo/pressure.hpp"
#include "shiftthermo/transfer.hpp"

using namespace shiftthermo;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_CylinderSeries(benchmark::State& state) {
  const auto g = GraphModel::ladder();
  const auto psi = Potential::constant(std::log(2.0)).scaled(-2.0);
  const auto x = BasePoint::periodic(g, FinitePath::vertex(0), FinitePath::from_edges(g, {1}));
  const auto cyl = region_cylinders(g, 6, 3);
  for (auto _ : state) {
    auto r = cylinder_series(psi, g, cyl, x, SeriesOptions{}, exec_of(state));
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(std::string(to_string(exec_of(state))) + ", " + std::to_string(cyl.size()) + " cylinders");
}

void BM_PressureCurve(benchmark::State& state) {
  const auto g = GraphModel::ladder();
  const auto phi = Potential::ladder_up_down(std::log(2.0), std::log(4.0));
  std::vector<double> betas;
  for (int i = 0; i <= 40; ++i) betas.push_back(0.05 * i);
  for (auto _ : state) {
    auto c = pressure_of_beta(phi, g, betas, 60, exec_of(state));
    benchmark::DoNotOptimize(c);
  }
  state.SetLabel(std::string(to_string(exec_of(state))));
}

void BM_ExpPressure(benchmark::State& state) {
  ExpOptions opt;
  opt.n_max = 4;
  opt.K = 30;
  opt.exec = exec_of(state);
  for (auto _ : state) {
    auto r = exp_pressure(0.2, 1.6, opt);
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(std::string(to_string(opt.exec)));
}

}  // namespace

BENCHMARK(BM_CylinderSeries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PressureCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpPressure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
